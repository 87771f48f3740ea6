//! Exact rational plane geometry: points, circles given by squared radius,
//! chord reversions and betweenness predicates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point {0} is not on the circle")]
    NotOnCircle(RPoint),
    #[error("point {0} is not in the open disk")]
    NotInterior(RPoint),
    #[error("reversion center coincides with the circle point {0}")]
    CenterOnPoint(RPoint),
    #[error("direction is tangent to the circle at {0}")]
    Tangent(RPoint),
    #[error("degenerate line: both defining points equal {0}")]
    DegenerateLine(RPoint),
    #[error("squared radius must be positive")]
    NonPositiveRadius,
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or an integer. Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, GeometryError> {
    let bad = || GeometryError::MalformedRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    if den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, with `/q` omitted for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: divide after shifting both.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RPoint::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        RPoint::new(Rational::zero(), Rational::zero())
    }

    pub fn dot(&self, other: &RPoint) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &RPoint) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scaled(&self, k: &Rational) -> RPoint {
        RPoint::new(&self.x * k, &self.y * k)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    /// `x y` in `p/q` notation.
    pub fn to_plain(&self) -> String {
        format!("{} {}", format_rational(&self.x), format_rational(&self.y))
    }
}

impl fmt::Display for RPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.x),
            format_rational(&self.y)
        )
    }
}

impl Add for &RPoint {
    type Output = RPoint;
    fn add(self, rhs: &RPoint) -> RPoint {
        RPoint::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &RPoint {
    type Output = RPoint;
    fn sub(self, rhs: &RPoint) -> RPoint {
        RPoint::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Mul<&RPoint> for &Rational {
    type Output = RPoint;
    fn mul(self, rhs: &RPoint) -> RPoint {
        rhs.scaled(self)
    }
}

/// Twice the signed area of `(a, b, c)`.
pub fn orient(a: &RPoint, b: &RPoint, c: &RPoint) -> Rational {
    (b - a).cross(&(c - a))
}

pub fn collinear(a: &RPoint, b: &RPoint, c: &RPoint) -> bool {
    orient(a, b, c).is_zero()
}

/// Strict betweenness: `x` lies on the open segment `(a, b)`.
pub fn is_between(a: &RPoint, x: &RPoint, b: &RPoint) -> bool {
    if x == a || x == b || !collinear(a, x, b) {
        return false;
    }
    // Collinear and distinct from both ends: inside iff the two legs point
    // in the same direction.
    (x - a).dot(&(b - x)).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineIntersection {
    Point(RPoint),
    Parallel,
    Coincident,
}

impl LineIntersection {
    pub fn point(self) -> Option<RPoint> {
        match self {
            LineIntersection::Point(p) => Some(p),
            _ => None,
        }
    }
}

/// Intersection of the line through `p1, p2` with the line through `q1, q2`.
pub fn line_line_intersection(
    p1: &RPoint,
    p2: &RPoint,
    q1: &RPoint,
    q2: &RPoint,
) -> Result<LineIntersection, GeometryError> {
    if p1 == p2 {
        return Err(GeometryError::DegenerateLine(p1.clone()));
    }
    if q1 == q2 {
        return Err(GeometryError::DegenerateLine(q1.clone()));
    }
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.cross(&s);
    if denom.is_zero() {
        return Ok(if collinear(p1, p2, q1) {
            LineIntersection::Coincident
        } else {
            LineIntersection::Parallel
        });
    }
    let t = (q1 - p1).cross(&s) / denom;
    Ok(LineIntersection::Point(p1 + &(&t * &r)))
}

/// A circle with rational center and rational squared radius.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RCircle {
    center: RPoint,
    radius_sq: Rational,
}

impl RCircle {
    pub fn new(center: RPoint, radius_sq: Rational) -> Result<Self, GeometryError> {
        if !radius_sq.is_positive() {
            return Err(GeometryError::NonPositiveRadius);
        }
        Ok(RCircle { center, radius_sq })
    }

    pub fn unit() -> Self {
        RCircle {
            center: RPoint::origin(),
            radius_sq: Rational::one(),
        }
    }

    pub fn center(&self) -> &RPoint {
        &self.center
    }

    pub fn radius_sq(&self) -> &Rational {
        &self.radius_sq
    }

    fn power(&self, p: &RPoint) -> Rational {
        (p - &self.center).norm_sq() - &self.radius_sq
    }

    pub fn on_circle(&self, p: &RPoint) -> bool {
        self.power(p).is_zero()
    }

    pub fn in_open_disk(&self, p: &RPoint) -> bool {
        self.power(p).is_negative()
    }

    /// Second intersection of the line `c + t d` with the circle, given that
    /// `c` is on it: the roots of the quadratic in `t` are `0` and
    /// `-2 <c - center, d> / <d, d>`.
    fn second_intersection(&self, c: &RPoint, d: &RPoint) -> RPoint {
        let w = c - &self.center;
        let t = -(int(2) * w.dot(d)) / d.norm_sq();
        c + &(&t * d)
    }

    /// The reversion through the interior point `x`: the unique circle point
    /// `p` with `x` strictly between `c` and `p`.
    pub fn reversion(&self, x: &RPoint, c: &RPoint) -> Result<RPoint, GeometryError> {
        if !self.on_circle(c) {
            return Err(GeometryError::NotOnCircle(c.clone()));
        }
        if !self.in_open_disk(x) {
            return Err(GeometryError::NotInterior(x.clone()));
        }
        if x == c {
            return Err(GeometryError::CenterOnPoint(c.clone()));
        }
        Ok(self.second_intersection(c, &(x - c)))
    }

    /// Reversion without precondition checks, for inner loops whose inputs are
    /// known to be valid.
    pub(crate) fn reversion_unchecked(&self, x: &RPoint, c: &RPoint) -> RPoint {
        self.second_intersection(c, &(x - c))
    }

    /// Second intersection of the circle with the line through `base` of
    /// direction `(1, t)`.
    pub fn rational_point(&self, base: &RPoint, t: &Rational) -> Result<RPoint, GeometryError> {
        if !self.on_circle(base) {
            return Err(GeometryError::NotOnCircle(base.clone()));
        }
        let d = RPoint::new(Rational::one(), t.clone());
        let p = self.second_intersection(base, &d);
        if &p == base {
            return Err(GeometryError::Tangent(base.clone()));
        }
        Ok(p)
    }

    /// Some rational point of the circle, if one is found.
    ///
    /// `r^2 = p/q` in lowest terms is a sum of two rational squares iff `p q`
    /// is a sum of two integer squares `s^2 + t^2`, giving `(s/q, t/q)`. The
    /// search over `s` stops after `max_steps` candidates.
    pub fn find_rational_point(&self, max_steps: u64) -> Option<RPoint> {
        if let Some(r) = rational_sqrt(&self.radius_sq) {
            return Some(&self.center + &RPoint::new(r, Rational::zero()));
        }
        let q = self.radius_sq.denom().clone();
        let pq = self.radius_sq.numer() * &q;
        let top = pq.sqrt();
        let mut s = BigInt::zero();
        let mut steps = 0u64;
        while s <= top && steps < max_steps {
            let rest = &pq - &s * &s;
            let t = rest.sqrt();
            if &t * &t == rest {
                let offset = RPoint::new(Rational::new(s, q.clone()), Rational::new(t, q));
                return Some(&self.center + &offset);
            }
            s += 1;
            steps += 1;
        }
        None
    }

    /// Parameters of the two intersections of the line `p + t d` with the
    /// circle, in floating point (they are irrational in general).
    pub fn line_params_f64(&self, p: &RPoint, d: &RPoint) -> Option<(f64, f64)> {
        let w = p - &self.center;
        let a = to_f64(&d.norm_sq());
        let b = 2.0 * to_f64(&w.dot(d));
        let c = to_f64(&(w.norm_sq() - &self.radius_sq));
        let disc = b * b - 4.0 * a * c;
        if a == 0.0 || disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        Some(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    }
}

/// Orders points along a line with direction `dir` by their projection.
pub fn cmp_along(dir: &RPoint, a: &RPoint, b: &RPoint) -> Ordering {
    dir.dot(a).cmp(&dir.dot(b))
}
