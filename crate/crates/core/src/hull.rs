//! Collinear hulls of collinear interior points and a brute-force betweenness
//! isomorphism oracle for small point sets.
//!
//! The hull of collinear `c_1..c_l` (with `l >= 2`) is the points plus the two
//! places where their line meets the circle. Those two endpoints are usually
//! irrational, so they are kept as ordinal tokens: everything downstream only
//! needs their position along the line.

use thiserror::Error;

use crate::action::ConfigK;
use crate::geometry::{collinear, is_between, RPoint, Rational};
use crate::word::Permutation;

/// Largest point set accepted by [`brute_force_iso`].
pub const BRUTE_FORCE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("interior points are not collinear; only the collinear hull is supported")]
    NotCollinear,
    #[error("point sets of size {0} and {1} cannot be compared")]
    SizeMismatch(usize, usize),
    #[error("point set of size {size} exceeds the brute-force cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("point {0} appears twice")]
    Duplicate(RPoint),
    #[error("point {0} is not in the sample")]
    NotInSample(RPoint),
}

/// Which end of the interior line, in the hull's canonical direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointSide {
    Low,
    High,
}

impl EndpointSide {
    pub fn other(self) -> Self {
        match self {
            EndpointSide::Low => EndpointSide::High,
            EndpointSide::High => EndpointSide::Low,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HullToken {
    /// Line-circle intersection; `approx` is only for drawing.
    Endpoint {
        side: EndpointSide,
        approx: (f64, f64),
    },
    /// Interior point `c_index` (1-based).
    Interior { index: usize, point: RPoint },
}

/// A point of a finite sample of `circle + interior points`, where the hull
/// endpoints are symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplePoint {
    Exact(RPoint),
    Endpoint(EndpointSide),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum LineKey {
    NegInf,
    At(Rational),
    PosInf,
}

/// The collinear hull, ordered along a canonical direction of the line
/// (first nonzero coordinate positive).
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalHull {
    tokens: Vec<HullToken>,
    /// `None` when there is a single interior point and no line.
    line: Option<(RPoint, RPoint)>,
}

impl OrdinalHull {
    pub fn tokens(&self) -> &[HullToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Interior indices in line order.
    pub fn interior_order(&self) -> Vec<usize> {
        self.tokens
            .iter()
            .filter_map(|t| match t {
                HullToken::Interior { index, .. } => Some(*index),
                HullToken::Endpoint { .. } => None,
            })
            .collect()
    }

    /// Hull members as sample points, in line order.
    pub fn sample_points(&self) -> Vec<SamplePoint> {
        self.tokens
            .iter()
            .map(|t| match t {
                HullToken::Endpoint { side, .. } => SamplePoint::Endpoint(*side),
                HullToken::Interior { point, .. } => SamplePoint::Exact(point.clone()),
            })
            .collect()
    }

    pub fn endpoint_approx(&self, side: EndpointSide) -> Option<(f64, f64)> {
        self.tokens.iter().find_map(|t| match t {
            HullToken::Endpoint { side: s, approx } if *s == side => Some(*approx),
            _ => None,
        })
    }

    fn key(&self, p: &SamplePoint) -> Option<LineKey> {
        match p {
            SamplePoint::Endpoint(EndpointSide::Low) => Some(LineKey::NegInf),
            SamplePoint::Endpoint(EndpointSide::High) => Some(LineKey::PosInf),
            SamplePoint::Exact(q) => {
                let (origin, dir) = self.line.as_ref()?;
                let on_line = collinear(origin, &(origin + dir), q);
                on_line.then(|| LineKey::At(dir.dot(q)))
            }
        }
    }

    /// Strict betweenness on a sample of the set this hull belongs to.
    ///
    /// Exact points use the Euclidean test. A triple with an endpoint token
    /// can only be in betweenness when all three lie on the interior line (no
    /// other sample point is collinear with an endpoint and a second hull
    /// point), and then it is decided by the order along the line.
    pub fn sample_between(&self, a: &SamplePoint, x: &SamplePoint, b: &SamplePoint) -> bool {
        if let (SamplePoint::Exact(a), SamplePoint::Exact(x), SamplePoint::Exact(b)) = (a, x, b) {
            return is_between(a, x, b);
        }
        match (self.key(a), self.key(x), self.key(b)) {
            (Some(ka), Some(kx), Some(kb)) => (ka < kx && kx < kb) || (kb < kx && kx < ka),
            _ => false,
        }
    }
}

/// A betweenness isomorphism of two hulls, as a map of token positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullIso {
    /// `token_map[k]` is the position in the target of source position `k`.
    pub token_map: Vec<usize>,
    /// Interior points map as `c_i -> d_sigma(i)`.
    pub sigma: Permutation,
    /// Whether `sigma` keeps the index order.
    pub orientation_preserved: bool,
}

impl HullIso {
    /// Image of a hull sample point under this map.
    pub fn map_point(
        &self,
        source: &OrdinalHull,
        target: &OrdinalHull,
        p: &SamplePoint,
    ) -> Option<SamplePoint> {
        let src = source.sample_points();
        let k = src.iter().position(|q| q == p)?;
        Some(target.sample_points()[self.token_map[k]].clone())
    }
}

/// The collinear hull of the interior points. For `l = 1` it is `{c_1}`.
pub fn collinear_hull(config: &ConfigK) -> Result<OrdinalHull, HullError> {
    if !config.validation().collinear {
        return Err(HullError::NotCollinear);
    }
    if config.l() == 1 {
        return Ok(OrdinalHull {
            tokens: vec![HullToken::Interior {
                index: 1,
                point: config.point(1).clone(),
            }],
            line: None,
        });
    }
    let origin = config.point(1).clone();
    let mut dir = config.point(2) - &origin;
    let zero = Rational::default();
    if dir.x < zero || (dir.x == zero && dir.y < zero) {
        dir = &RPoint::origin() - &dir;
    }
    let mut interior: Vec<(usize, RPoint)> = config
        .points()
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, p)| (k + 1, p))
        .collect();
    interior.sort_by_key(|a| dir.dot(&a.1));

    let (t_lo, t_hi) = config
        .circle()
        .line_params_f64(&origin, &dir)
        .expect("line through an interior point meets the circle");
    let (ox, oy) = origin.to_f64();
    let (dx, dy) = dir.to_f64();
    let at = |t: f64| (ox + t * dx, oy + t * dy);

    let mut tokens = vec![HullToken::Endpoint {
        side: EndpointSide::Low,
        approx: at(t_lo),
    }];
    tokens.extend(
        interior
            .into_iter()
            .map(|(index, point)| HullToken::Interior { index, point }),
    );
    tokens.push(HullToken::Endpoint {
        side: EndpointSide::High,
        approx: at(t_hi),
    });
    Ok(OrdinalHull {
        tokens,
        line: Some((origin, dir)),
    })
}

fn iso_from_map(a: &OrdinalHull, b: &OrdinalHull, token_map: Vec<usize>) -> HullIso {
    let l = a.interior_order().len();
    let mut images = vec![0; l];
    for (k, t) in a.tokens.iter().enumerate() {
        if let HullToken::Interior { index, .. } = t {
            if let HullToken::Interior { index: j, .. } = &b.tokens[token_map[k]] {
                images[index - 1] = *j;
            }
        }
    }
    let sigma = Permutation::new(images).expect("token map is a bijection");
    let orientation_preserved = sigma.images().windows(2).all(|w| w[0] < w[1]);
    HullIso {
        token_map,
        sigma,
        orientation_preserved,
    }
}

/// Both betweenness isomorphisms of two hulls of the same size: the one that
/// keeps the line order and the one that reverses it (a single map for
/// one-point hulls).
pub fn hull_isomorphisms(a: &OrdinalHull, b: &OrdinalHull) -> Vec<HullIso> {
    let n = a.len();
    if n != b.len() {
        return Vec::new();
    }
    let mut out = vec![iso_from_map(a, b, (0..n).collect())];
    if n > 1 {
        out.push(iso_from_map(a, b, (0..n).rev().collect()));
    }
    out
}

/// The order-preserving hull isomorphism, or `None` for different sizes.
pub fn hull_isomorphism(a: &OrdinalHull, b: &OrdinalHull) -> Option<HullIso> {
    hull_isomorphisms(a, b).into_iter().next()
}

/// A set of pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePointSet(Vec<RPoint>);

impl FinitePointSet {
    pub fn new(points: Vec<RPoint>) -> Result<Self, HullError> {
        for (k, p) in points.iter().enumerate() {
            if points[..k].contains(p) {
                return Err(HullError::Duplicate(p.clone()));
            }
        }
        Ok(FinitePointSet(points))
    }

    pub fn points(&self) -> &[RPoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Betweenness table `t[a][x][b]` of an abstract ternary relation on `0..n`.
fn relation_table(n: usize, between: impl Fn(usize, usize, usize) -> bool) -> Vec<bool> {
    let mut t = vec![false; n * n * n];
    for a in 0..n {
        for x in 0..n {
            for b in 0..n {
                if a != x && x != b && a != b {
                    t[(a * n + x) * n + b] = between(a, x, b);
                }
            }
        }
    }
    t
}

/// Lexicographically first bijection `0..n -> 0..n` carrying one betweenness
/// relation onto the other, by backtracking over partial assignments.
pub fn brute_force_iso_by(
    n: usize,
    between_a: impl Fn(usize, usize, usize) -> bool,
    between_b: impl Fn(usize, usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let ta = relation_table(n, between_a);
    let tb = relation_table(n, between_b);
    let idx = |a: usize, x: usize, b: usize| (a * n + x) * n + b;
    let mut assign: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn search(
        n: usize,
        assign: &mut Vec<usize>,
        used: &mut [bool],
        ok: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if assign.len() == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            assign.push(cand);
            used[cand] = true;
            if ok(assign) && search(n, assign, used, ok) {
                return true;
            }
            used[cand] = false;
            assign.pop();
        }
        false
    }

    // The newest assignment must agree on every triple it takes part in.
    let ok = |assign: &[usize]| -> bool {
        let k = assign.len() - 1;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for (a, x, b) in [(i, j, k), (i, k, j), (k, i, j)] {
                    if ta[idx(a, x, b)] != tb[idx(assign[a], assign[x], assign[b])] {
                        return false;
                    }
                }
            }
        }
        true
    };
    search(n, &mut assign, &mut used, &ok).then_some(assign)
}

/// Exhaustive search for a betweenness isomorphism between two finite point
/// sets of at most [`BRUTE_FORCE_CAP`] points. Returns `f` as indices:
/// `a[i] -> b[f[i]]`.
pub fn brute_force_iso(
    a: &FinitePointSet,
    b: &FinitePointSet,
) -> Result<Option<Vec<usize>>, HullError> {
    if a.len() != b.len() {
        return Err(HullError::SizeMismatch(a.len(), b.len()));
    }
    if a.len() > BRUTE_FORCE_CAP {
        return Err(HullError::CapExceeded {
            size: a.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let (pa, pb) = (a.points(), b.points());
    Ok(brute_force_iso_by(
        a.len(),
        |i, x, j| is_between(&pa[i], &pa[x], &pa[j]),
        |i, x, j| is_between(&pb[i], &pb[x], &pb[j]),
    ))
}

/// Whether a fixed map (as indices) preserves and reflects betweenness on
/// every triple.
pub fn map_preserves_betweenness(
    n: usize,
    map: &[usize],
    between_a: impl Fn(usize, usize, usize) -> bool,
    between_b: impl Fn(usize, usize, usize) -> bool,
) -> bool {
    (0..n).all(|a| {
        (0..n).all(|x| {
            (0..n).all(|b| {
                a == x
                    || x == b
                    || a == b
                    || between_a(a, x, b) == between_b(map[a], map[x], map[b])
            })
        })
    })
}

/// `c` is extreme in the sample when no two sample points have it strictly
/// between them.
pub fn is_extreme_in_sample(s: &FinitePointSet, c: &RPoint) -> Result<bool, HullError> {
    if !s.points().contains(c) {
        return Err(HullError::NotInSample(c.clone()));
    }
    let pts = s.points();
    Ok(!pts.iter().any(|a| pts.iter().any(|b| is_between(a, c, b))))
}
