mod common;

use betweenness_core::action::HalfPlaneSide;
use betweenness_core::classify::realize_by_closing;
use betweenness_core::geometry::{rat, RCircle, RPoint};
use betweenness_core::{SignatureVector, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{rand_rat, TestCircle};

fn random_word(rng: &mut ChaCha8Rng, l: usize, max_raw: usize) -> Word {
    let n = rng.gen_range(0..=max_raw);
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=l)).collect();
    Word::reduce(&raw, l).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn right_action_law(seed in any::<u64>(), l in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let points: Vec<RPoint> = (0..l).map(|_| tc.interior(&mut rng)).collect();
        prop_assume!((0..l).all(|i| !points[..i].contains(&points[i])));
        let config = tc.config(points);
        let c = tc.circle_point(&mut rng);
        let (g, h) = (random_word(&mut rng, l, 8), random_word(&mut rng, l, 8));
        let lhs = config.act(&config.act(&c, &g).unwrap(), &h).unwrap();
        prop_assert_eq!(lhs, config.act(&c, &g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(config.act(&c, &Word::empty(l)).unwrap(), c.clone());
        let back = config.act(&config.act(&c, &g).unwrap(), &g.inverse()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn odd_words_switch_half_planes(seed in any::<u64>(), l in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let config = tc.config(tc.collinear_interior(&mut rng, l));
        let c = config.test_point().unwrap();
        let g = random_word(&mut rng, l, 10);
        let side = config.halfplane_side(&c).unwrap();
        prop_assert_ne!(side, HalfPlaneSide::OnLine);
        let image = config.halfplane_side(&config.act(&c, &g).unwrap()).unwrap();
        let expected = if g.len() % 2 == 1 { side.flipped() } else { side };
        prop_assert_eq!(image, expected);
    }

    #[test]
    fn two_points_act_freely_off_the_line(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let (p, q) = (tc.interior(&mut rng), tc.interior(&mut rng));
        prop_assume!(p != q);
        let config = tc.config(vec![p, q]);
        let c = config.test_point().unwrap();
        for start in ["1,2", "2,1"] {
            let g = Word::parse(start, 2).unwrap().pow(10);
            let visited = config.trajectory(&c, &g).unwrap();
            prop_assert!(visited[1..].iter().all(|x| *x != c));
        }
    }

    #[test]
    fn three_on_odd_positions_never_fix(seed in any::<u64>(), len in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let config = tc.config(tc.collinear_interior(&mut rng, 3));
        prop_assert!(config.validation().ordered);
        let letters: Vec<usize> = (0..len).map(|m| if m % 2 == 0 { 3 } else { rng.gen_range(1..=2) }).collect();
        let g = Word::new(letters, 3).unwrap();
        for c in config.test_points(3).unwrap() {
            prop_assert_ne!(config.act(&c, &g).unwrap(), c);
        }
    }

    #[test]
    fn normal_form_acts_like_the_word(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let config = tc.config(tc.collinear_interior(&mut rng, 3));
        let c = tc.circle_point(&mut rng);
        let g = random_word(&mut rng, 3, 10);
        prop_assert_eq!(config.act(&c, &g).unwrap(), config.act(&c, &g.normal_form()).unwrap());
    }

    #[test]
    fn porism_on_closed_configurations(seed in any::<u64>(), k in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = SignatureVector::new(vec![-k, k + 1, -1]);
        let c1x = rat(-rng.gen_range(1..8), 8);
        let c2x = &c1x + rat(rng.gen_range(1..8), 16);
        let unit = RCircle::unit();
        let p0 = unit.rational_point(&RPoint::from_ints(-1, 0), &rat(rng.gen_range(1..20), rng.gen_range(1..20))).unwrap();
        let Some(config) = realize_by_closing(&v, &c1x, &c2x, &p0).unwrap() else {
            return Ok(());
        };
        prop_assert!(config.is_cycle(&v).unwrap());
        let g = v.realize().unwrap();
        let mut checked = 0;
        while checked < 10 {
            let c = unit.rational_point(&p0, &rand_rat(&mut rng, 50, 17)).unwrap_or_else(|_| p0.clone());
            if !config.is_off_line(&c) {
                continue;
            }
            prop_assert_eq!(config.act(&c, &g).unwrap(), c);
            checked += 1;
        }
    }

    #[test]
    fn orbit_contains_every_short_image(seed in any::<u64>(), depth in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let config = tc.config(tc.collinear_interior(&mut rng, 3));
        let c = tc.circle_point(&mut rng);
        let orbit = config.orbit(&c, depth).unwrap();
        for (i, p) in orbit.iter().enumerate() {
            prop_assert!(!orbit[..i].contains(p));
        }
        for g in Word::all_up_to(depth, 3) {
            prop_assert!(orbit.contains(&config.act(&c, &g).unwrap()));
        }
    }
}
