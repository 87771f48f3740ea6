//! Right action of `G_l` on a circle through the reversions at the interior
//! points, with orbit enumeration, stabilizer membership and the cycle test.

use std::collections::HashSet;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::geometry::{cmp_along, collinear, orient, GeometryError, RCircle, RPoint, Rational};
use crate::word::{SignatureVector, Word, WordError};

/// Candidates tried when searching a rational point on a circle.
pub const RATIONAL_POINT_SEARCH: u64 = 1 << 20;
/// Slope parameters `1, 1/2, ..` tried for an off-line test point.
pub const TEST_POINT_RETRIES: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("a configuration needs at least one interior point")]
    NoPoints,
    #[error("interior points {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("point {0} is not strictly inside the circle")]
    NotInterior(usize),
    #[error("interior points are not collinear")]
    NotCollinear,
    #[error("interior points are not monotone along their line (point {0} out of order)")]
    NotMonotone(usize),
    #[error("no rational point found on the circle")]
    NoRationalPoint,
    #[error("base point {0} is not on the circle")]
    BaseNotOnCircle(RPoint),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("word over alphabet {word} used with {points} interior points")]
    AlphabetMismatch { word: usize, points: usize },
    #[error("interior points are not collinear")]
    NotCollinear,
    #[error("configuration is not monotone along its line")]
    NotOrdered,
    #[error("no rational test point off the interior line after {0} tries")]
    NoTestPoint(i64),
}

/// Validation flags computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validation {
    pub distinct: bool,
    pub interior: bool,
    pub collinear: bool,
    /// Collinear and `c_1 < c_2 < .. < c_l` along the line (or reversed).
    pub ordered: bool,
}

/// Position of a circle point relative to the interior line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPlaneSide {
    Plus,
    Minus,
    OnLine,
}

impl HalfPlaneSide {
    pub fn flipped(self) -> Self {
        match self {
            HalfPlaneSide::Plus => HalfPlaneSide::Minus,
            HalfPlaneSide::Minus => HalfPlaneSide::Plus,
            HalfPlaneSide::OnLine => HalfPlaneSide::OnLine,
        }
    }
}

/// A circle with `l` distinct interior points, plus a rational point on the
/// circle used to seed test points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigK {
    circle: RCircle,
    points: Vec<RPoint>,
    base_point: RPoint,
    validation: Validation,
}

impl ConfigK {
    /// Checks distinctness and interiority; collinearity and ordering are
    /// recorded as flags. A rational base point is searched on the circle.
    pub fn new(circle: RCircle, points: Vec<RPoint>) -> Result<Self, ConfigError> {
        let base = circle
            .find_rational_point(RATIONAL_POINT_SEARCH)
            .ok_or(ConfigError::NoRationalPoint)?;
        ConfigK::with_base(circle, points, base)
    }

    pub fn with_base(
        circle: RCircle,
        points: Vec<RPoint>,
        base_point: RPoint,
    ) -> Result<Self, ConfigError> {
        if points.is_empty() {
            return Err(ConfigError::NoPoints);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(ConfigError::Duplicate(i + 1, j + 1));
                }
            }
        }
        if let Some(i) = points.iter().position(|p| !circle.in_open_disk(p)) {
            return Err(ConfigError::NotInterior(i + 1));
        }
        if !circle.on_circle(&base_point) {
            return Err(ConfigError::BaseNotOnCircle(base_point));
        }
        let is_collinear = points.len() < 3
            || points[2..]
                .iter()
                .all(|p| collinear(&points[0], &points[1], p));
        let ordered = is_collinear && first_out_of_order(&points).is_none();
        Ok(ConfigK {
            circle,
            points,
            base_point,
            validation: Validation {
                distinct: true,
                interior: true,
                collinear: is_collinear,
                ordered,
            },
        })
    }

    /// Like [`ConfigK::new`] but requires the collinear, monotone shape.
    pub fn new_ordered(circle: RCircle, points: Vec<RPoint>) -> Result<Self, ConfigError> {
        ConfigK::new(circle, points)?.require_ordered()
    }

    pub fn require_ordered(self) -> Result<Self, ConfigError> {
        if !self.validation.collinear {
            return Err(ConfigError::NotCollinear);
        }
        if let Some(i) = first_out_of_order(&self.points) {
            return Err(ConfigError::NotMonotone(i));
        }
        Ok(self)
    }

    pub fn circle(&self) -> &RCircle {
        &self.circle
    }

    pub fn points(&self) -> &[RPoint] {
        &self.points
    }

    /// Interior point `c_i`, 1-based.
    pub fn point(&self, i: usize) -> &RPoint {
        &self.points[i - 1]
    }

    pub fn l(&self) -> usize {
        self.points.len()
    }

    pub fn base_point(&self) -> &RPoint {
        &self.base_point
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    /// Applies the same affine similarity to the circle, the interior points
    /// and the base point.
    pub fn map_similarity(
        &self,
        f: impl Fn(&RPoint) -> RPoint,
        radius_sq_factor: &Rational,
    ) -> Result<ConfigK, ConfigError> {
        let circle = RCircle::new(
            f(self.circle.center()),
            self.circle.radius_sq() * radius_sq_factor,
        )?;
        let points = self.points.iter().map(&f).collect();
        ConfigK::with_base(circle, points, f(&self.base_point))
    }

    /// Two points spanning the interior line; `None` for `l = 1`.
    pub fn interior_line(&self) -> Option<(&RPoint, &RPoint)> {
        (self.l() >= 2 && self.validation.collinear).then(|| (&self.points[0], &self.points[1]))
    }

    /// `R_i`, the reversion through `c_i`.
    pub fn reversion(&self, i: usize, c: &RPoint) -> Result<RPoint, ActionError> {
        Ok(self.circle.reversion(self.point(i), c)?)
    }

    fn check_word(&self, g: &Word) -> Result<(), ActionError> {
        if g.alphabet() != self.l() {
            return Err(ActionError::AlphabetMismatch {
                word: g.alphabet(),
                points: self.l(),
            });
        }
        Ok(())
    }

    fn check_on_circle(&self, c: &RPoint) -> Result<(), ActionError> {
        if !self.circle.on_circle(c) {
            return Err(GeometryError::NotOnCircle(c.clone()).into());
        }
        Ok(())
    }

    /// `c . g`: reversions applied in the order of the letters, the first
    /// letter first.
    pub fn act(&self, c: &RPoint, g: &Word) -> Result<RPoint, ActionError> {
        self.check_word(g)?;
        self.check_on_circle(c)?;
        Ok(g.letters().iter().fold(c.clone(), |p, &i| {
            self.circle.reversion_unchecked(self.point(i), &p)
        }))
    }

    /// The points `c, c.(i_1), c.(i_1,i_2), ..` visited along `g`.
    pub fn trajectory(&self, c: &RPoint, g: &Word) -> Result<Vec<RPoint>, ActionError> {
        self.check_word(g)?;
        self.check_on_circle(c)?;
        let mut out = vec![c.clone()];
        for &i in g.letters() {
            let next = self
                .circle
                .reversion_unchecked(self.point(i), out.last().unwrap());
            out.push(next);
        }
        Ok(out)
    }

    pub fn stab_contains(&self, c: &RPoint, g: &Word) -> Result<bool, ActionError> {
        Ok(&self.act(c, g)? == c)
    }

    /// All points `c . g` with `|g| <= max_word_length`, breadth first and
    /// without repetitions.
    ///
    /// Since `c . g . (i)` only depends on `c . g`, expanding each new point
    /// once by every letter reaches every word of the given length.
    pub fn orbit(&self, c: &RPoint, max_word_length: usize) -> Result<Vec<RPoint>, ActionError> {
        Ok(self
            .orbit_layers(c, max_word_length)?
            .into_iter()
            .flatten()
            .collect())
    }

    /// Orbit points grouped by the length of the shortest word reaching them.
    pub fn orbit_layers(
        &self,
        c: &RPoint,
        max_word_length: usize,
    ) -> Result<Vec<Vec<RPoint>>, ActionError> {
        self.check_on_circle(c)?;
        let mut seen: HashSet<RPoint> = HashSet::from([c.clone()]);
        let mut layers = vec![vec![c.clone()]];
        for _ in 0..max_word_length {
            let mut next = Vec::new();
            for p in layers.last().unwrap() {
                for q in &self.points {
                    let image = self.circle.reversion_unchecked(q, p);
                    if seen.insert(image.clone()) {
                        next.push(image);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ok(layers)
    }

    pub fn halfplane_side(&self, p: &RPoint) -> Result<HalfPlaneSide, ActionError> {
        let (a, b) = self.interior_line().ok_or(ActionError::NotCollinear)?;
        let s = orient(a, b, p);
        Ok(if s.is_positive() {
            HalfPlaneSide::Plus
        } else if s.is_negative() {
            HalfPlaneSide::Minus
        } else {
            HalfPlaneSide::OnLine
        })
    }

    /// True when `p` is outside the collinear hull of the interior points.
    /// For a circle point this means off the interior line; with one interior
    /// point every circle point qualifies.
    pub fn is_off_line(&self, p: &RPoint) -> bool {
        match self.interior_line() {
            Some((a, b)) => !collinear(a, b, p),
            None => self.l() == 1,
        }
    }

    /// The `k`-th rational circle point from the deterministic slope sequence
    /// `1, 1/2, 1/3, ..` through the base point (`k >= 1`).
    pub fn slope_point(&self, k: i64) -> Result<RPoint, GeometryError> {
        let t = Rational::new(One::one(), k.into());
        self.circle.rational_point(&self.base_point, &t)
    }

    /// First point of the slope sequence that is off the interior line.
    pub fn test_point(&self) -> Result<RPoint, ActionError> {
        self.test_points(1).map(|mut v| v.remove(0))
    }

    /// The first `n` distinct off-line points of the slope sequence.
    pub fn test_points(&self, n: usize) -> Result<Vec<RPoint>, ActionError> {
        if !self.validation.collinear {
            return Err(ActionError::NotCollinear);
        }
        let mut out: Vec<RPoint> = Vec::with_capacity(n);
        let mut k = 1;
        while out.len() < n {
            if k > TEST_POINT_RETRIES * n as i64 {
                return Err(ActionError::NoTestPoint(k - 1));
            }
            if let Ok(p) = self.slope_point(k) {
                if self.is_off_line(&p) && !out.contains(&p) {
                    out.push(p);
                }
            }
            k += 1;
        }
        Ok(out)
    }

    /// Whether `v` is a cycle: some (equivalently, by the porism, every)
    /// off-line circle point is fixed by some (equivalently every) word of
    /// signature `v`. Unbalanced vectors are never cycles.
    pub fn is_cycle(&self, v: &SignatureVector) -> Result<bool, ActionError> {
        Ok(self.cycle_witness(v)?.is_some())
    }

    /// On success, the word and off-line point that close up.
    pub fn cycle_witness(
        &self,
        v: &SignatureVector,
    ) -> Result<Option<(Word, RPoint)>, ActionError> {
        if v.dim() != self.l() {
            return Err(WordError::Dimension {
                expected: self.l(),
                actual: v.dim(),
            }
            .into());
        }
        if !self.validation.collinear {
            return Err(ActionError::NotCollinear);
        }
        if !v.is_balanced() {
            return Ok(None);
        }
        let g = v.realize()?;
        let c = self.test_point()?;
        Ok(self.stab_contains(&c, &g)?.then_some((g, c)))
    }
}

/// Index (1-based) of the first point breaking the monotone order along the
/// line from `c_1` to `c_l`, for collinear input.
fn first_out_of_order(points: &[RPoint]) -> Option<usize> {
    if points.len() < 3 {
        return None;
    }
    let dir = &points[points.len() - 1] - &points[0];
    points
        .windows(2)
        .position(|w| !cmp_along(&dir, &w[0], &w[1]).is_lt())
        .map(|k| k + 2)
}
