mod common;

use betweenness_core::classify::realize_by_closing;
use betweenness_core::geometry::{is_between, rat, RPoint};
use betweenness_core::hull::{
    brute_force_iso, collinear_hull, hull_isomorphisms, map_preserves_betweenness, FinitePointSet,
    HullToken, OrdinalHull, SamplePoint,
};
use betweenness_core::iso::{
    build_partial_iso, decide_iso, IsoError, IsoKind, IsoVerdict, PartialIsoTable,
};
use betweenness_core::{ConfigK, Permutation, SignatureVector, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{symmetric, TestCircle};

fn sv(e: &[i64]) -> SignatureVector {
    SignatureVector::new(e.to_vec())
}

fn closed(k: i64) -> ConfigK {
    let v = sv(&[-k, k + 1, -1]);
    realize_by_closing(&v, &rat(-1, 2), &rat(0, 1), &RPoint::from_ints(0, 1))
        .unwrap()
        .unwrap()
}

fn reversed(config: &ConfigK) -> ConfigK {
    let mut pts = config.points().to_vec();
    pts.reverse();
    ConfigK::with_base(config.circle().clone(), pts, config.base_point().clone()).unwrap()
}

fn moved(config: &ConfigK, k: i64) -> ConfigK {
    // Rotation with cosine 3/5, scaling by k, translation by (k, -1/k).
    let shift = RPoint::new(rat(k, 1), rat(-1, k));
    config
        .map_similarity(
            |p| {
                let r = RPoint::new(
                    rat(3, 5) * &p.x - rat(4, 5) * &p.y,
                    rat(4, 5) * &p.x + rat(3, 5) * &p.y,
                );
                &shift + &r.scaled(&rat(k, 1))
            },
            &rat(k * k, 1),
        )
        .unwrap()
}

#[test]
fn verdicts_behave_like_an_equivalence() {
    let configs = [
        symmetric(),
        moved(&symmetric(), 2),
        closed(2),
        reversed(&closed(2)),
        moved(&closed(2), 3),
    ];
    for a in &configs {
        assert!(decide_iso(a, a, 6).unwrap().is_isomorphic());
        for b in &configs {
            let (ab, ba) = (decide_iso(a, b, 6).unwrap(), decide_iso(b, a, 6).unwrap());
            assert_eq!(ab.is_isomorphic(), ba.is_isomorphic());
            for c in &configs {
                if ab.is_isomorphic() && decide_iso(b, c, 6).unwrap().is_isomorphic() {
                    assert_eq!(decide_iso(a, c, 6).unwrap(), ab);
                }
            }
        }
    }
    assert!(!decide_iso(&configs[0], &configs[2], 6)
        .unwrap()
        .is_isomorphic());
}

#[test]
fn mixed_sizes_are_rejected() {
    let two = ConfigK::new(
        betweenness_core::RCircle::unit(),
        vec![common::h(0, 1), common::h(1, 2)],
    )
    .unwrap();
    assert_eq!(
        decide_iso(&two, &symmetric(), 4),
        Err(IsoError::MixedSizes(2, 3))
    );
}

#[test]
fn tables_for_matching_classes() {
    let pairs = [
        (symmetric(), moved(&symmetric(), 2)),
        (closed(2), moved(&closed(2), 3)),
        (closed(2), reversed(&closed(2))),
        (reversed(&closed(3)), moved(&closed(3), 2)),
    ];
    let words = Word::all_up_to(3, 3);
    for (s, r) in &pairs {
        let verdict = decide_iso(s, r, 6).unwrap();
        let table = build_partial_iso(s, r, &verdict, &words, 2).unwrap();
        assert_eq!(table.first_bad_triple(), None);
        assert!(table.check_chunks().is_ok());
        // Interior points follow sigma.
        for i in 1..=3 {
            let image = table
                .image(&SamplePoint::Exact(s.point(i).clone()))
                .unwrap();
            assert_eq!(
                image,
                &SamplePoint::Exact(r.point(table.sigma.apply(i)).clone())
            );
        }
    }
    // Reversed indexing needs the reversed letter renaming.
    let verdict = decide_iso(&pairs[2].0, &pairs[2].1, 6).unwrap();
    let table = build_partial_iso(&pairs[2].0, &pairs[2].1, &verdict, &words, 1).unwrap();
    assert_eq!(table.sigma, Permutation::reversal(3));
}

#[test]
fn stabilizers_match_under_renaming() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (s, r) in [
        (closed(2), reversed(&closed(2))),
        (closed(3), moved(&closed(3), 2)),
        (symmetric(), moved(&symmetric(), 3)),
    ] {
        let verdict = decide_iso(&s, &r, 6).unwrap();
        let table = build_partial_iso(&s, &r, &verdict, &[Word::empty(3)], 2).unwrap();
        let v = s.cycle_witness(&classify_raw(&s)).unwrap().unwrap().0;
        for (x, y) in &table.seeds {
            let mut words: Vec<Word> = (0..20)
                .map(|_| {
                    let n = rng.gen_range(0..14);
                    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
                    Word::reduce(&raw, 3).unwrap()
                })
                .collect();
            words.push(v.clone());
            words.push(v.pow(2).mul(&Word::parse("1,2", 3).unwrap()).unwrap());
            for g in &words {
                let renamed = g.permute_letters(&table.sigma).unwrap();
                assert_eq!(
                    s.stab_contains(x, g).unwrap(),
                    r.stab_contains(y, &renamed).unwrap(),
                    "{g}"
                );
            }
            assert!(s.stab_contains(x, &v).unwrap());
        }
    }
}

fn classify_raw(config: &ConfigK) -> SignatureVector {
    betweenness_core::classify(config, 6)
        .unwrap()
        .cycle()
        .unwrap()
        .raw
        .clone()
}

#[test]
fn non_isomorphic_verdicts_build_no_table() {
    let verdict = decide_iso(&symmetric(), &closed(2), 6).unwrap();
    assert!(matches!(verdict, IsoVerdict::NotIsomorphic { .. }));
    let err =
        build_partial_iso(&symmetric(), &closed(2), &verdict, &[Word::empty(3)], 1).unwrap_err();
    assert!(matches!(err, IsoError::NotIsomorphic(_)));
    // A made-up verdict that contradicts the configurations is caught.
    let wrong = IsoVerdict::Isomorphic(IsoKind::Cycle(sv(&[-2, 3, -1])));
    assert_eq!(
        build_partial_iso(&symmetric(), &symmetric(), &wrong, &[Word::empty(3)], 1).unwrap_err(),
        IsoError::VerdictMismatch
    );
}

/// Rational stand-ins for the hull: interior points as they are, endpoints
/// one span beyond the extreme interior points.
fn surrogate(hull: &OrdinalHull) -> Vec<RPoint> {
    let interior: Vec<&RPoint> = hull
        .tokens()
        .iter()
        .filter_map(|t| match t {
            HullToken::Interior { point, .. } => Some(point),
            HullToken::Endpoint { .. } => None,
        })
        .collect();
    let (first, last) = (interior[0], interior[interior.len() - 1]);
    let span = last - first;
    let mut out = vec![first - &span];
    out.extend(interior.iter().map(|p| (*p).clone()));
    out.push(last + &span);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_maps_agree_with_brute_force(seed in any::<u64>(), l in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ta, tb) = (TestCircle::random(&mut rng), TestCircle::random(&mut rng));
        let a = ta.config(ta.collinear_interior(&mut rng, l));
        let b = tb.config(tb.collinear_interior(&mut rng, l));
        let (ha, hb) = (collinear_hull(&a).unwrap(), collinear_hull(&b).unwrap());
        let (sa, sb) = (surrogate(&ha), surrogate(&hb));
        let (fa, fb) = (FinitePointSet::new(sa.clone()).unwrap(), FinitePointSet::new(sb.clone()).unwrap());
        let found = brute_force_iso(&fa, &fb).unwrap().expect("collinear sets of equal size");
        let maps: Vec<Vec<usize>> = hull_isomorphisms(&ha, &hb).into_iter().map(|m| m.token_map).collect();
        prop_assert!(maps.contains(&found));
        for m in &maps {
            let n = sa.len();
            let ok = map_preserves_betweenness(
                n,
                m,
                |i, x, j| is_between(&sa[i], &sa[x], &sa[j]),
                |i, x, j| is_between(&sb[i], &sb[x], &sb[j]),
            );
            prop_assert!(ok);
        }
    }

    #[test]
    fn endpoint_swap_is_rejected(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tc = TestCircle::random(&mut rng);
        let config = tc.config(tc.collinear_interior(&mut rng, 2));
        let hull = collinear_hull(&config).unwrap();
        let extra: Vec<RPoint> = config.test_points(2).unwrap();
        let mut rows: Vec<(SamplePoint, SamplePoint)> = hull
            .sample_points()
            .into_iter()
            .map(|p| match p {
                SamplePoint::Endpoint(side) => (SamplePoint::Endpoint(side), SamplePoint::Endpoint(side.other())),
                exact => (exact.clone(), exact),
            })
            .collect();
        rows.extend(extra.iter().map(|p| (SamplePoint::Exact(p.clone()), SamplePoint::Exact(p.clone()))));
        let table = PartialIsoTable::from_parts(Permutation::identity(2), rows, vec![], hull.clone(), hull).unwrap();
        prop_assert!(table.first_bad_triple().is_some());
        prop_assert!(!table.check_subsample(&(0..table.len()).collect::<Vec<_>>()));
    }
}
