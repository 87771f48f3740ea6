//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use betweenness_core::geometry::{rat, RCircle, RPoint, Rational};
use betweenness_core::ConfigK;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn h(n: i64, d: i64) -> RPoint {
    RPoint::new(rat(n, d), rat(0, 1))
}

pub fn symmetric() -> ConfigK {
    ConfigK::new_ordered(RCircle::unit(), vec![h(-1, 2), h(0, 1), h(1, 2)]).unwrap()
}

pub fn rand_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// A circle with a known rational point: `center + (a, b)`.
pub struct TestCircle {
    pub circle: RCircle,
    pub spoke: RPoint,
}

impl TestCircle {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let center = RPoint::new(rand_rat(rng, 20, 7), rand_rat(rng, 20, 7));
        let spoke = loop {
            let s = RPoint::new(rand_rat(rng, 30, 9), rand_rat(rng, 30, 9));
            if s != RPoint::origin() {
                break s;
            }
        };
        let circle = RCircle::new(center, spoke.norm_sq()).unwrap();
        TestCircle { circle, spoke }
    }

    pub fn base(&self) -> RPoint {
        self.circle.center() + &self.spoke
    }

    /// `center + |spoke| * R(u, v)` with `u^2 + v^2 < 1`, which lands inside.
    pub fn interior(&self, rng: &mut ChaCha8Rng) -> RPoint {
        loop {
            let (u, v) = (rand_rat(rng, 12, 13), rand_rat(rng, 12, 13));
            if &u * &u + &v * &v < rat(1, 1) {
                let (a, b) = (&self.spoke.x, &self.spoke.y);
                let off = RPoint::new(&u * a - &v * b, &u * b + &v * a);
                return self.circle.center() + &off;
            }
        }
    }

    pub fn circle_point(&self, rng: &mut ChaCha8Rng) -> RPoint {
        loop {
            let t = rand_rat(rng, 40, 11);
            if let Ok(p) = self.circle.rational_point(&self.base(), &t) {
                return p;
            }
        }
    }

    /// `n` distinct interior points on one line, in order along it.
    pub fn collinear_interior(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<RPoint> {
        'retry: loop {
            let p = self.interior(rng);
            let q = self.interior(rng);
            if p == q {
                continue;
            }
            let d = &q - &p;
            let mut ts: Vec<Rational> = (0..n).map(|_| rand_rat(rng, 10, 10)).collect();
            ts.sort();
            ts.dedup();
            if ts.len() < n {
                continue;
            }
            let pts: Vec<RPoint> = ts.iter().map(|t| &p + &(t * &d)).collect();
            if pts.iter().any(|x| !self.circle.in_open_disk(x)) {
                continue 'retry;
            }
            return pts;
        }
    }

    pub fn config(&self, points: Vec<RPoint>) -> ConfigK {
        ConfigK::with_base(self.circle.clone(), points, self.base()).unwrap()
    }
}

/// Reduction by cancelling a randomly chosen adjacent equal pair until none
/// is left.
pub fn reduce_random_order(raw: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut w = raw.to_vec();
    loop {
        let pairs: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&k| w[k] == w[k + 1])
            .collect();
        if pairs.is_empty() {
            return w;
        }
        let k = pairs[rng.gen_range(0..pairs.len())];
        w.drain(k..k + 2);
    }
}

/// Reduction scanning from the right.
pub fn reduce_from_right(raw: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::new();
    for &a in raw.iter().rev() {
        if stack.last() == Some(&a) {
            stack.pop();
        } else {
            stack.push(a);
        }
    }
    stack.reverse();
    stack
}

/// Alternating-sign letter counts, computed directly from the definition.
pub fn signature_oracle(letters: &[usize], l: usize) -> Vec<i64> {
    let mut n = vec![0i64; l];
    for (m, &i) in letters.iter().enumerate() {
        n[i - 1] += if m % 2 == 0 { 1 } else { -1 };
    }
    n
}

/// Second intersection of the line through `c` and `x` with the circle, via
/// the quadratic formula in floating point: the root farther from `c`.
pub fn reversion_f64(center: (f64, f64), r2: f64, x: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let d = (x.0 - c.0, x.1 - c.1);
    let w = (c.0 - center.0, c.1 - center.1);
    let a = d.0 * d.0 + d.1 * d.1;
    let b = 2.0 * (w.0 * d.0 + w.1 * d.1);
    let cc = w.0 * w.0 + w.1 * w.1 - r2;
    let disc = (b * b - 4.0 * a * cc).max(0.0).sqrt();
    let roots = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    let t = if roots[0].abs() > roots[1].abs() {
        roots[0]
    } else {
        roots[1]
    };
    (c.0 + t * d.0, c.1 + t * d.1)
}

/// First coordinate of `(0, 1)` moved along `word` on the unit circle with
/// interior points `(x_i, 0)`, in floating point.
pub fn closing_coordinate_f64(xs: [f64; 3], word: &[usize]) -> f64 {
    let mut p = (0.0, 1.0);
    for &i in word {
        p = reversion_f64((0.0, 0.0), 1.0, (xs[i - 1], 0.0), p);
    }
    p.0
}
