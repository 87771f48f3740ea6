//! Classification of circles with three collinear interior points by their
//! primitive cycle vector, and two constructors realizing a given cycle.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::action::{ActionError, ConfigError, ConfigK};
use crate::geometry::{
    format_rational, int, line_line_intersection, rat, GeometryError, RCircle, RPoint, Rational,
};
use crate::word::{SignatureVector, Word, WordError};

/// Default sampling budget of [`avoid_all_cycles`].
pub const AVOID_BUDGET: usize = 100;
/// Initial inset of the bisection bracket from the degenerate ends.
pub const BISECTION_INSET: i64 = 1024;
/// How often the inset may be halved before the bracket is declared broken.
const INSET_HALVINGS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("classification needs exactly 3 interior points, got {0}")]
    NotThreePoints(usize),
    #[error("search bound must be at least 1")]
    ZeroBound,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no sign change of the closing coordinate on ({lo}, {hi})")]
    NoSignChange { lo: String, hi: String },
    #[error("stored witness failed to re-verify")]
    WitnessMismatch,
    #[error("no cycle-free configuration found in {0} samples")]
    BudgetExhausted(usize),
}

/// A verified nonzero cycle of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleLabel {
    /// Canonical form: balanced, `v2 >= 1`, `v1 <= v3 <= -1`, gcd 1.
    pub v: SignatureVector,
    /// The cycle in the configuration's own indexing (`v2 >= 1`); equal to
    /// `v` or to its 1-3 swap.
    pub raw: SignatureVector,
    pub witness_word: Word,
    pub witness_point: RPoint,
}

impl CycleLabel {
    /// Re-checks the witness and the shape constraints on `config`.
    pub fn verify(&self, config: &ConfigK) -> Result<bool, ClassifyError> {
        let fixed = config.stab_contains(&self.witness_point, &self.witness_word)?;
        let sig_ok = self.witness_word.signature() == self.raw;
        Ok(fixed
            && sig_ok
            && config.is_off_line(&self.witness_point)
            && is_canonical(&self.v)
            && (self.raw == self.v || self.raw == self.v.pi13()?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassLabel {
    Cycle(CycleLabel),
    /// No nonzero cycle with `v2` up to the bound.
    NoCycleUpTo(u64),
}

impl ClassLabel {
    pub fn cycle(&self) -> Option<&CycleLabel> {
        match self {
            ClassLabel::Cycle(c) => Some(c),
            ClassLabel::NoCycleUpTo(_) => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Cycle(c) => write!(f, "cycle {}", c.v.to_plain()),
            ClassLabel::NoCycleUpTo(b) => write!(f, "no-cycle-upto {b}"),
        }
    }
}

/// Whether `v` satisfies the class-label inequalities.
pub fn is_canonical(v: &SignatureVector) -> bool {
    match v.entries() {
        &[v1, v2, v3] => v.is_balanced() && v2 >= 1 && v1 <= v3 && v3 <= -1 && v.gcd() == 1,
        _ => false,
    }
}

/// Checks the collinear, monotone shape and returns the configuration.
pub fn validate_config(circle: RCircle, points: Vec<RPoint>) -> Result<ConfigK, ConfigError> {
    ConfigK::new_ordered(circle, points)
}

fn require_k3(config: &ConfigK) -> Result<(), ClassifyError> {
    if config.l() != 3 {
        return Err(ClassifyError::NotThreePoints(config.l()));
    }
    if !config.validation().ordered {
        return Err(ConfigError::NotMonotone(0).into());
    }
    Ok(())
}

/// Candidate vectors in search order: ascending `v2`, then ascending `v1`,
/// with `v1, v3 <= -1`, `v1 + v3 = -v2` and gcd 1.
pub fn candidate_vectors(v2_max: u64) -> impl Iterator<Item = SignatureVector> {
    (2..=v2_max as i64).flat_map(|v2| {
        (-(v2 - 1)..=-1).filter_map(move |v1| {
            let v = SignatureVector::new(vec![v1, v2, -v2 - v1]);
            (v.gcd() == 1).then_some(v)
        })
    })
}

/// The first cycle in [`candidate_vectors`] order, with its witness.
///
/// The cycles of a configuration are the integer multiples of one primitive
/// vector, so the hit with the smallest `v2` is that vector (up to sign).
pub fn find_primitive_cycle(
    config: &ConfigK,
    v2_max: u64,
) -> Result<Option<CycleLabel>, ClassifyError> {
    require_k3(config)?;
    if v2_max == 0 {
        return Err(ClassifyError::ZeroBound);
    }
    for raw in candidate_vectors(v2_max) {
        if let Some((witness_word, witness_point)) = config.cycle_witness(&raw)? {
            let v = if raw.get(1) <= raw.get(3) {
                raw.clone()
            } else {
                raw.pi13()?
            };
            return Ok(Some(CycleLabel {
                v,
                raw,
                witness_word,
                witness_point,
            }));
        }
    }
    Ok(None)
}

pub fn classify(config: &ConfigK, v2_max: u64) -> Result<ClassLabel, ClassifyError> {
    match find_primitive_cycle(config, v2_max)? {
        Some(label) => {
            if !label.verify(config)? {
                return Err(ClassifyError::WitnessMismatch);
            }
            Ok(ClassLabel::Cycle(label))
        }
        None => Ok(ClassLabel::NoCycleUpTo(v2_max)),
    }
}

fn on_axis(x: &Rational) -> RPoint {
    RPoint::new(x.clone(), Rational::zero())
}

/// Closes a cycle of signature `v = (v1, |v1| + 1, -1)` on the unit circle.
///
/// With `c_1 = (c1x, 0)` and `c_2 = (c2x, 0)`, all reversions of the
/// canonical word except the final `R_3` carry `p0` to some `q`; `c_3` is put
/// where the chord from `q` back to `p0` crosses the x-axis. Returns `None`
/// when that point does not land to the right of `c_2` inside the disk.
pub fn realize_by_closing(
    v: &SignatureVector,
    c1x: &Rational,
    c2x: &Rational,
    p0: &RPoint,
) -> Result<Option<ConfigK>, ClassifyError> {
    let word = v.canonical_word()?;
    if v.get(3) != -1 {
        return Err(ClassifyError::Precondition(format!(
            "closing needs v3 = -1, got {v}"
        )));
    }
    let one = Rational::one();
    if !(-&one < *c1x && c1x < c2x && *c2x < one) {
        return Err(ClassifyError::Precondition(
            "need -1 < c1x < c2x < 1".into(),
        ));
    }
    let unit = RCircle::unit();
    if !unit.on_circle(p0) {
        return Err(GeometryError::NotOnCircle(p0.clone()).into());
    }
    if p0.y.is_zero() {
        return Err(ClassifyError::Precondition(format!(
            "p0 = {p0} lies on the x-axis"
        )));
    }
    let (c1, c2) = (on_axis(c1x), on_axis(c2x));
    let prefix = &word.letters()[..word.len() - 1];
    let mut q = p0.clone();
    for &i in prefix {
        q = unit.reversion(if i == 1 { &c1 } else { &c2 }, &q)?;
    }
    if q == *p0 {
        return Ok(None);
    }
    let axis = (RPoint::from_ints(-1, 0), RPoint::from_ints(1, 0));
    let Some(c3) = line_line_intersection(&q, p0, &axis.0, &axis.1)?.point() else {
        return Ok(None);
    };
    if !(unit.in_open_disk(&c3) && c3.x > *c2x) {
        return Ok(None);
    }
    let config = ConfigK::with_base(unit, vec![c1, c2, c3], p0.clone())?;
    let closes = config.stab_contains(p0, &word)?;
    Ok(closes.then_some(config))
}

/// Parameters of a successful closing construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosingParams {
    pub c1x: Rational,
    pub c2x: Rational,
    pub p0: RPoint,
}

/// Tries [`realize_by_closing`] over a fixed grid of `c1x`, `c2x` and start
/// points `p0` (slopes through `(-1, 0)`), returning the first success.
pub fn realize_by_closing_search(
    v: &SignatureVector,
) -> Result<Option<(ConfigK, ClosingParams)>, ClassifyError> {
    let c1s = [rat(-1, 2), rat(-2, 3), rat(-1, 3), rat(-3, 4), rat(-1, 4)];
    let c2s = [rat(0, 1), rat(-1, 5), rat(1, 5), rat(-2, 5), rat(2, 5)];
    let slopes = [
        rat(1, 1),
        rat(1, 2),
        rat(2, 1),
        rat(1, 3),
        rat(3, 1),
        rat(-1, 2),
        rat(-2, 1),
    ];
    let unit = RCircle::unit();
    let west = RPoint::from_ints(-1, 0);
    for t in &slopes {
        let p0 = unit.rational_point(&west, t)?;
        for c1x in &c1s {
            for c2x in c2s.iter().filter(|c2x| *c2x > c1x) {
                if let Some(config) = realize_by_closing(v, c1x, c2x, &p0)? {
                    let params = ClosingParams {
                        c1x: c1x.clone(),
                        c2x: c2x.clone(),
                        p0: p0.clone(),
                    };
                    return Ok(Some((config, params)));
                }
            }
        }
    }
    Ok(None)
}

/// First coordinate of `(0, 1) . canonical_word(v)` on the unit circle with
/// interior points `(x_1, 0), (x_2, 0), (x_3, 0)`. The configuration closes
/// at `(0, 1)` exactly when this is zero (the word has even length, so the
/// image stays on the upper half circle).
pub fn closing_coordinate(
    xs: [&Rational; 3],
    v: &SignatureVector,
) -> Result<Rational, ClassifyError> {
    let word = v.canonical_word()?;
    let unit = RCircle::unit();
    let pts: Vec<RPoint> = xs.iter().map(|x| on_axis(x)).collect();
    let mut p = RPoint::from_ints(0, 1);
    for &i in word.letters() {
        p = unit.reversion(&pts[i - 1], &p)?;
    }
    Ok(p.x)
}

/// A bracket on the position `a` of `c_2 = (a, 0)` (with `c_1 = (-1/2, 0)`,
/// `c_3 = (1/2, 0)`) where the configuration has cycle `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationInterval {
    pub v: SignatureVector,
    pub a_lo: Rational,
    pub a_hi: Rational,
    /// Exact closing coordinate at the ends: positive at `a_lo`, negative at
    /// `a_hi`.
    pub phi_lo: Rational,
    pub phi_hi: Rational,
    pub residual_sign_change: bool,
    /// Set when a bisection midpoint hit the root exactly.
    pub exact_root: Option<Rational>,
}

impl RealizationInterval {
    pub fn width(&self) -> Rational {
        &self.a_hi - &self.a_lo
    }

    /// `v1 v2 v3 a_lo a_hi`.
    pub fn to_plain(&self) -> String {
        format!(
            "{} {} {}",
            self.v.to_plain(),
            format_rational(&self.a_lo),
            format_rational(&self.a_hi)
        )
    }
}

/// The closing coordinate as a function of the middle point's position.
pub fn phi(v: &SignatureVector, a: &Rational) -> Result<Rational, ClassifyError> {
    closing_coordinate([&rat(-1, 2), a, &rat(1, 2)], v)
}

/// Brackets the unique `a` in `(-1/2, 1/2)` for which `c_2 = (a, 0)` makes
/// `v` a cycle, down to width at most `width_bound`.
///
/// The closing coordinate is positive near `a = -1/2` and negative near
/// `a = 1/2`. The ends themselves are degenerate (`c_2` meets `c_1` or
/// `c_3`), so the bracket starts at an inset that is halved until both signs
/// are confirmed.
pub fn realize_by_bisection(
    v: &SignatureVector,
    width_bound: &Rational,
) -> Result<RealizationInterval, ClassifyError> {
    if !width_bound.is_positive() {
        return Err(ClassifyError::Precondition(
            "width bound must be positive".into(),
        ));
    }
    let v = match v.entries() {
        &[_, v2, _] if v2 < 0 => -v,
        _ => v.clone(),
    };
    // Validates the shape.
    v.canonical_word()?;

    let half = rat(1, 2);
    let mut inset = rat(1, BISECTION_INSET);
    let mut bracket = None;
    for _ in 0..=INSET_HALVINGS {
        let lo = -&half + &inset;
        let hi = &half - &inset;
        let (flo, fhi) = (phi(&v, &lo)?, phi(&v, &hi)?);
        if flo.is_positive() && fhi.is_negative() {
            bracket = Some((lo, hi, flo, fhi));
            break;
        }
        inset /= int(2);
    }
    let Some((mut lo, mut hi, mut flo, mut fhi)) = bracket else {
        return Err(ClassifyError::NoSignChange {
            lo: format_rational(&(-&half + &inset)),
            hi: format_rational(&(&half - &inset)),
        });
    };

    let two = int(2);
    while &hi - &lo > *width_bound {
        let mid = (&lo + &hi) / &two;
        let fmid = phi(&v, &mid)?;
        if fmid.is_zero() {
            return exact_bracket(v, mid, width_bound, (lo, hi));
        }
        if fmid.is_positive() {
            (lo, flo) = (mid, fmid);
        } else {
            (hi, fhi) = (mid, fmid);
        }
    }
    Ok(RealizationInterval {
        v,
        a_lo: lo,
        a_hi: hi,
        phi_lo: flo,
        phi_hi: fhi,
        residual_sign_change: true,
        exact_root: None,
    })
}

/// A certified bracket of width at most `width_bound` around an exact root.
fn exact_bracket(
    v: SignatureVector,
    root: Rational,
    width_bound: &Rational,
    outer: (Rational, Rational),
) -> Result<RealizationInterval, ClassifyError> {
    let mut eps = width_bound / int(2);
    loop {
        let lo = (&root - &eps).max(outer.0.clone());
        let hi = (&root + &eps).min(outer.1.clone());
        let (flo, fhi) = (phi(&v, &lo)?, phi(&v, &hi)?);
        if flo.is_positive() && fhi.is_negative() {
            return Ok(RealizationInterval {
                v,
                a_lo: lo,
                a_hi: hi,
                phi_lo: flo,
                phi_hi: fhi,
                residual_sign_change: true,
                exact_root: Some(root),
            });
        }
        if eps < rat(1, 1 << 40) {
            return Err(ClassifyError::NoSignChange {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        eps /= int(2);
    }
}

/// A configuration `(-1/2, 0), (0, 0), (a, 0)` on the unit circle with no
/// nonzero cycle of `v2 <= v2_max`, for `a` sampled from `seed`.
///
/// Each nonzero `v` is a cycle for at most one `a`, so a random rational
/// `a` almost always works on the first try.
pub fn avoid_all_cycles(v2_max: u64, seed: u64) -> Result<ConfigK, ClassifyError> {
    avoid_all_cycles_with_budget(v2_max, seed, AVOID_BUDGET)
}

pub fn avoid_all_cycles_with_budget(
    v2_max: u64,
    seed: u64,
    budget: usize,
) -> Result<ConfigK, ClassifyError> {
    if v2_max == 0 {
        return Err(ClassifyError::ZeroBound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let den: i64 = rng.gen_range(2..1_000_000);
        let num: i64 = rng.gen_range(1..den);
        let a = rat(num, den);
        let config = ConfigK::with_base(
            RCircle::unit(),
            vec![on_axis(&rat(-1, 2)), RPoint::origin(), on_axis(&a)],
            RPoint::from_ints(0, 1),
        )?;
        if find_primitive_cycle(&config, v2_max)?.is_none() {
            return Ok(config);
        }
    }
    Err(ClassifyError::BudgetExhausted(budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(e: &[i64]) -> SignatureVector {
        SignatureVector::new(e.to_vec())
    }

    fn h(n: i64, d: i64) -> RPoint {
        on_axis(&rat(n, d))
    }

    fn sym() -> ConfigK {
        validate_config(RCircle::unit(), vec![h(-1, 2), h(0, 1), h(1, 2)]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_config(RCircle::unit(), vec![h(-1, 2), h(0, 1), h(1, 2)]).is_ok());
        assert_eq!(
            validate_config(RCircle::unit(), vec![h(-1, 2), h(1, 2), h(0, 1)]),
            Err(ConfigError::NotMonotone(3))
        );
        assert_eq!(
            validate_config(
                RCircle::unit(),
                vec![RPoint::from_ints(0, 1), h(0, 1), h(1, 2)]
            ),
            Err(ConfigError::NotInterior(1))
        );
        assert_eq!(
            validate_config(
                RCircle::unit(),
                vec![h(0, 1), h(1, 2), RPoint::new(rat(0, 1), rat(1, 2))]
            ),
            Err(ConfigError::NotCollinear)
        );
    }

    #[test]
    fn candidate_order() {
        let got: Vec<_> = candidate_vectors(4).collect();
        assert_eq!(
            got,
            vec![
                sv(&[-1, 2, -1]),
                sv(&[-2, 3, -1]),
                sv(&[-1, 3, -2]),
                sv(&[-3, 4, -1]),
                sv(&[-1, 4, -3])
            ]
        );
        assert_eq!(candidate_vectors(1).count(), 0);
    }

    #[test]
    fn symmetric_primitive_cycle() {
        let label = find_primitive_cycle(&sym(), 8).unwrap().unwrap();
        assert_eq!(label.v, sv(&[-1, 2, -1]));
        assert!(label.verify(&sym()).unwrap());
        let reversed = validate_config(RCircle::unit(), vec![h(1, 2), h(0, 1), h(-1, 2)]).unwrap();
        assert_eq!(
            classify(&reversed, 8).unwrap().cycle().unwrap().v,
            sv(&[-1, 2, -1])
        );
    }

    #[test]
    fn classify_requires_three_points() {
        let two = validate_config(RCircle::unit(), vec![h(0, 1), h(1, 2)]).unwrap();
        assert_eq!(classify(&two, 4), Err(ClassifyError::NotThreePoints(2)));
        assert_eq!(classify(&sym(), 0), Err(ClassifyError::ZeroBound));
    }

    #[test]
    fn closing_symmetric_example() {
        let cfg = realize_by_closing(
            &sv(&[-1, 2, -1]),
            &rat(-1, 2),
            &rat(0, 1),
            &RPoint::from_ints(0, 1),
        )
        .unwrap()
        .unwrap();
        assert_eq!(cfg.point(3), &h(1, 2));
    }

    #[test]
    fn closing_preconditions() {
        let top = RPoint::from_ints(0, 1);
        let e = realize_by_closing(
            &sv(&[-1, 2, -1]),
            &rat(-1, 2),
            &rat(0, 1),
            &RPoint::from_ints(1, 0),
        );
        assert!(matches!(e, Err(ClassifyError::Precondition(_))));
        let e = realize_by_closing(&sv(&[-1, 3, -2]), &rat(-1, 2), &rat(0, 1), &top);
        assert!(matches!(e, Err(ClassifyError::Precondition(_))));
        let e = realize_by_closing(&sv(&[-1, 2, -1]), &rat(0, 1), &rat(-1, 2), &top);
        assert!(matches!(e, Err(ClassifyError::Precondition(_))));
        let e = realize_by_closing(&sv(&[0, 1, -1]), &rat(-1, 2), &rat(0, 1), &top);
        assert!(matches!(e, Err(ClassifyError::Word(_))));
    }

    #[test]
    fn bisection_symmetric_hits_zero() {
        let iv = realize_by_bisection(&sv(&[-1, 2, -1]), &rat(1, 1 << 10)).unwrap();
        assert_eq!(iv.exact_root, Some(rat(0, 1)));
        assert!(iv.a_lo < rat(0, 1) && rat(0, 1) < iv.a_hi);
        assert!(iv.width() <= rat(1, 1 << 10));
        assert_eq!(phi(&sv(&[-1, 2, -1]), &rat(0, 1)).unwrap(), rat(0, 1));
    }

    #[test]
    fn bisection_rejects_bad_shape() {
        assert!(matches!(
            realize_by_bisection(&sv(&[0, 1, -1]), &rat(1, 8)),
            Err(ClassifyError::Word(WordError::NotCanonicalShape(_)))
        ));
        // Negated vectors are normalized.
        let iv = realize_by_bisection(&sv(&[1, -2, 1]), &rat(1, 8)).unwrap();
        assert_eq!(iv.v, sv(&[-1, 2, -1]));
    }

    #[test]
    fn avoid_small_bound() {
        let cfg = avoid_all_cycles(1, 7).unwrap();
        assert_eq!(classify(&cfg, 1).unwrap(), ClassLabel::NoCycleUpTo(1));
    }

    #[test]
    fn label_text() {
        assert_eq!(ClassLabel::NoCycleUpTo(8).to_string(), "no-cycle-upto 8");
        let label = classify(&sym(), 8).unwrap();
        assert_eq!(label.to_string(), "cycle -1 2 -1");
    }
}
