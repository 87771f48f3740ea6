//! Betweenness isomorphism of two configurations: the verdict from the
//! classification, and explicit finite tables of a witnessing map.

use std::cell::OnceCell;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::action::{ActionError, ConfigK};
use crate::classify::{classify, ClassLabel, ClassifyError};
use crate::geometry::RPoint;
use crate::hull::{
    brute_force_iso_by, collinear_hull, hull_isomorphisms, map_preserves_betweenness, HullError,
    HullIso, OrdinalHull, SamplePoint, BRUTE_FORCE_CAP,
};
use crate::word::{Permutation, SignatureVector, Word, WordError};

/// Off-line candidates inspected per requested seed.
const SEED_CANDIDATES_PER_SEED: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("configurations have {0} and {1} interior points")]
    MixedSizes(usize, usize),
    #[error("isomorphism is only decided for 1 to 3 interior points, got {0}")]
    Unsupported(usize),
    #[error("a table needs an isomorphic verdict, got: {0}")]
    NotIsomorphic(IsoVerdict),
    #[error("verdict does not match the configurations")]
    VerdictMismatch,
    #[error("source {0} is mapped to two different points")]
    Collision(String),
    #[error("target {0} is hit by two source points")]
    NotInjective(String),
    #[error("only {found} orbit-distinct seeds found, {wanted} requested")]
    NotEnoughSeeds { wanted: usize, found: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoKind {
    /// One or two interior points: every such pair is isomorphic.
    Trivial,
    /// Both configurations carry this canonical cycle.
    Cycle(SignatureVector),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(IsoKind),
    NotIsomorphic {
        source: ClassLabel,
        target: ClassLabel,
    },
    /// Neither side has a cycle up to the bound.
    ConditionallyIsomorphic(u64),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoVerdict::Isomorphic(IsoKind::Trivial) => write!(f, "isomorphic trivial"),
            IsoVerdict::Isomorphic(IsoKind::Cycle(v)) => write!(f, "isomorphic v={v}"),
            IsoVerdict::NotIsomorphic { source, target } => {
                write!(
                    f,
                    "not-isomorphic source={} target={}",
                    short(source),
                    short(target)
                )
            }
            IsoVerdict::ConditionallyIsomorphic(b) => {
                write!(f, "conditionally-isomorphic no-cycle-upto {b}")
            }
        }
    }
}

/// `(-1,2,-1)` for a cycle class, `no-cycle-upto B` otherwise.
fn short(label: &ClassLabel) -> String {
    match label.cycle() {
        Some(c) => c.v.to_string(),
        None => label.to_string(),
    }
}

fn check_sizes(s: &ConfigK, r: &ConfigK) -> Result<usize, IsoError> {
    if s.l() != r.l() {
        return Err(IsoError::MixedSizes(s.l(), r.l()));
    }
    if !(1..=3).contains(&s.l()) {
        return Err(IsoError::Unsupported(s.l()));
    }
    Ok(s.l())
}

pub fn decide_iso(s: &ConfigK, r: &ConfigK, v2_max: u64) -> Result<IsoVerdict, IsoError> {
    if check_sizes(s, r)? < 3 {
        return Ok(IsoVerdict::Isomorphic(IsoKind::Trivial));
    }
    let (ls, lr) = (classify(s, v2_max)?, classify(r, v2_max)?);
    Ok(match (&ls, &lr) {
        (ClassLabel::Cycle(a), ClassLabel::Cycle(b)) if a.v == b.v => {
            IsoVerdict::Isomorphic(IsoKind::Cycle(a.v.clone()))
        }
        (ClassLabel::NoCycleUpTo(_), ClassLabel::NoCycleUpTo(_)) => {
            IsoVerdict::ConditionallyIsomorphic(v2_max)
        }
        _ => IsoVerdict::NotIsomorphic {
            source: ls,
            target: lr,
        },
    })
}

/// A finite piece of a betweenness isomorphism `S -> R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialIsoTable {
    /// Interior points map as `c_i -> d_sigma(i)`; words map by renaming
    /// their letters with `sigma`.
    pub sigma: Permutation,
    /// Source and target point, in insertion order: hull first, then the
    /// sampled orbit points seed by seed.
    entries: Vec<(SamplePoint, SamplePoint)>,
    /// Orbit representatives `(x, y)` with `x . g -> y . sigma(g)`.
    pub seeds: Vec<(RPoint, RPoint)>,
    source_hull: OrdinalHull,
    target_hull: OrdinalHull,
    relations: OnceCell<Relations>,
}

/// Betweenness on the source and target side of every row triple, indexed
/// `(a * n + x) * n + b`.
#[derive(Debug, Clone, PartialEq)]
struct Relations {
    source: Vec<bool>,
    target: Vec<bool>,
}

fn sample_text(p: &SamplePoint) -> String {
    match p {
        SamplePoint::Exact(q) => q.to_plain(),
        SamplePoint::Endpoint(side) => format!("{side:?}").to_lowercase() + "-end",
    }
}

impl PartialIsoTable {
    /// A table from explicit rows, for maps not produced by
    /// [`build_partial_iso`]. Rows must be injective in both directions.
    pub fn from_parts(
        sigma: Permutation,
        rows: Vec<(SamplePoint, SamplePoint)>,
        seeds: Vec<(RPoint, RPoint)>,
        source_hull: OrdinalHull,
        target_hull: OrdinalHull,
    ) -> Result<Self, IsoError> {
        let mut builder = TableBuilder::default();
        for (a, b) in rows {
            builder.insert(a, b)?;
        }
        Ok(PartialIsoTable {
            sigma,
            entries: builder.entries,
            seeds,
            source_hull,
            target_hull,
            relations: OnceCell::new(),
        })
    }

    pub fn entries(&self) -> &[(SamplePoint, SamplePoint)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_hull(&self) -> &OrdinalHull {
        &self.source_hull
    }

    pub fn target_hull(&self) -> &OrdinalHull {
        &self.target_hull
    }

    pub fn image(&self, p: &SamplePoint) -> Option<&SamplePoint> {
        self.entries.iter().find(|(a, _)| a == p).map(|(_, b)| b)
    }

    fn relations(&self) -> &Relations {
        self.relations.get_or_init(|| {
            let n = self.len();
            let mut source = vec![false; n * n * n];
            let mut target = vec![false; n * n * n];
            let e = &self.entries;
            for a in 0..n {
                for b in a + 1..n {
                    for x in (0..n).filter(|&x| x != a && x != b) {
                        let s = self.source_hull.sample_between(&e[a].0, &e[x].0, &e[b].0);
                        let t = self.target_hull.sample_between(&e[a].1, &e[x].1, &e[b].1);
                        for (i, j) in [(a, b), (b, a)] {
                            source[(i * n + x) * n + j] = s;
                            target[(i * n + x) * n + j] = t;
                        }
                    }
                }
            }
            Relations { source, target }
        })
    }

    fn between_source(&self, a: usize, x: usize, b: usize) -> bool {
        let n = self.len();
        self.relations().source[(a * n + x) * n + b]
    }

    fn between_target(&self, a: usize, x: usize, b: usize) -> bool {
        let n = self.len();
        self.relations().target[(a * n + x) * n + b]
    }

    /// The first triple of table points (source indices `a, x, b`) on which
    /// betweenness is not preserved or not reflected.
    pub fn first_bad_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                for x in 0..n {
                    if x != a
                        && x != b
                        && self.between_source(a, x, b) != self.between_target(a, x, b)
                    {
                        return Some((a, x, b));
                    }
                }
            }
        }
        None
    }

    pub fn preserves_betweenness(&self) -> bool {
        self.first_bad_triple().is_none()
    }

    /// Runs the brute-force oracle on consecutive chunks of at most
    /// [`BRUTE_FORCE_CAP`] entries: each chunk must admit a betweenness
    /// isomorphism and the table itself must be one. Returns the number of
    /// chunks checked, or the index of the first failing chunk.
    pub fn check_chunks(&self) -> Result<usize, usize> {
        let idx: Vec<usize> = (0..self.len()).collect();
        let mut count = 0;
        for (k, chunk) in idx.chunks(BRUTE_FORCE_CAP).enumerate() {
            if !self.check_subsample(chunk) {
                return Err(k);
            }
            count += 1;
        }
        Ok(count)
    }

    /// Brute-force check of the table restricted to the given entries.
    pub fn check_subsample(&self, rows: &[usize]) -> bool {
        let n = rows.len();
        if n > BRUTE_FORCE_CAP {
            return false;
        }
        let bs = |a: usize, x: usize, b: usize| self.between_source(rows[a], rows[x], rows[b]);
        let bt = |a: usize, x: usize, b: usize| self.between_target(rows[a], rows[x], rows[b]);
        let identity: Vec<usize> = (0..n).collect();
        brute_force_iso_by(n, bs, bt).is_some() && map_preserves_betweenness(n, &identity, bs, bt)
    }

    /// Header line naming `sigma`, then one tab-separated row per entry.
    pub fn to_text(&self) -> String {
        let mut out = format!("# sigma {}\n", self.sigma);
        for (a, b) in &self.entries {
            out.push_str(&format!("{}\t->\t{}\n", sample_text(a), sample_text(b)));
        }
        out
    }
}

/// Chooses the hull map whose `sigma` carries the source's cycle onto the
/// target's (renaming letters by `sigma` permutes signature entries).
fn choose_hull_iso(
    hs: &OrdinalHull,
    hr: &OrdinalHull,
    cycles: Option<(&SignatureVector, &SignatureVector)>,
) -> Result<HullIso, IsoError> {
    let candidates = hull_isomorphisms(hs, hr);
    let fits = |iso: &HullIso| match cycles {
        None => true,
        Some((vs, vr)) => {
            let mut moved = vec![0; vs.dim()];
            for i in 1..=vs.dim() {
                moved[iso.sigma.apply(i) - 1] = vs.get(i);
            }
            let moved = SignatureVector::new(moved);
            moved == *vr || -&moved == *vr
        }
    };
    candidates
        .into_iter()
        .find(fits)
        .ok_or(IsoError::VerdictMismatch)
}

/// Up to `n` off-line points whose sampled orbits are pairwise disjoint.
fn orbit_distinct_seeds(
    config: &ConfigK,
    words: &[Word],
    n: usize,
) -> Result<Vec<RPoint>, IsoError> {
    let candidates = config.test_points(n * SEED_CANDIDATES_PER_SEED)?;
    let mut seeds: Vec<RPoint> = Vec::new();
    let mut covered: Vec<RPoint> = Vec::new();
    for c in candidates {
        if seeds.len() == n {
            break;
        }
        let orbit = words
            .iter()
            .map(|g| config.act(&c, g))
            .collect::<Result<Vec<_>, _>>()?;
        if orbit.iter().any(|p| covered.contains(p)) {
            continue;
        }
        covered.extend(orbit);
        seeds.push(c);
    }
    if seeds.len() < n {
        return Err(IsoError::NotEnoughSeeds {
            wanted: n,
            found: seeds.len(),
        });
    }
    Ok(seeds)
}

/// Builds a finite table of a betweenness isomorphism `S -> R`: the hull
/// map, then `x . g -> y . sigma(g)` for each seed pair `(x, y)` and each
/// sample word `g`. Fails on any collision, since a correct verdict makes the
/// stabilizers of matched seeds agree.
pub fn build_partial_iso(
    s: &ConfigK,
    r: &ConfigK,
    verdict: &IsoVerdict,
    sample_words: &[Word],
    seeds: usize,
) -> Result<PartialIsoTable, IsoError> {
    let l = check_sizes(s, r)?;
    let cycles = match verdict {
        IsoVerdict::Isomorphic(IsoKind::Trivial) if l < 3 => None,
        IsoVerdict::Isomorphic(IsoKind::Cycle(v)) if l == 3 => {
            let (cs, cr) = (raw_cycle(s, v)?, raw_cycle(r, v)?);
            Some((cs, cr))
        }
        IsoVerdict::Isomorphic(_) => return Err(IsoError::VerdictMismatch),
        other => return Err(IsoError::NotIsomorphic(other.clone())),
    };
    let (hs, hr) = (collinear_hull(s)?, collinear_hull(r)?);
    let hull_iso = choose_hull_iso(&hs, &hr, cycles.as_ref().map(|(a, b)| (a, b)))?;
    let sigma = hull_iso.sigma.clone();

    let xs = orbit_distinct_seeds(s, sample_words, seeds)?;
    let ys = orbit_distinct_seeds(r, sample_words, seeds)?;

    let mut builder = TableBuilder::default();
    for p in hs.sample_points() {
        let q = hull_iso.map_point(&hs, &hr, &p).expect("hull point");
        builder.insert(p, q)?;
    }
    for (x, y) in xs.iter().zip(&ys) {
        for g in sample_words {
            let gx = s.act(x, g)?;
            let gy = r.act(y, &g.permute_letters(&sigma)?)?;
            builder.insert(SamplePoint::Exact(gx), SamplePoint::Exact(gy))?;
        }
    }
    Ok(PartialIsoTable {
        sigma,
        entries: builder.entries,
        seeds: xs.into_iter().zip(ys).collect(),
        source_hull: hs,
        target_hull: hr,
        relations: OnceCell::new(),
    })
}

/// The canonical cycle `v` in this configuration's own indexing.
fn raw_cycle(config: &ConfigK, v: &SignatureVector) -> Result<SignatureVector, IsoError> {
    if config.is_cycle(v)? {
        return Ok(v.clone());
    }
    let swapped = v.pi13()?;
    if config.is_cycle(&swapped)? {
        return Ok(swapped);
    }
    Err(IsoError::VerdictMismatch)
}

#[derive(Default)]
struct TableBuilder {
    entries: Vec<(SamplePoint, SamplePoint)>,
    forward: HashMap<SamplePoint, SamplePoint>,
    backward: HashMap<SamplePoint, SamplePoint>,
}

impl TableBuilder {
    fn insert(&mut self, a: SamplePoint, b: SamplePoint) -> Result<(), IsoError> {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(old), _) if *old != b => Err(IsoError::Collision(sample_text(&a))),
            (_, Some(old)) if *old != a => Err(IsoError::NotInjective(sample_text(&b))),
            (Some(_), _) => Ok(()),
            _ => {
                self.forward.insert(a.clone(), b.clone());
                self.backward.insert(b.clone(), a.clone());
                self.entries.push((a, b));
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, RCircle};

    fn h(n: i64, d: i64) -> RPoint {
        RPoint::new(rat(n, d), rat(0, 1))
    }

    fn sym() -> ConfigK {
        ConfigK::new_ordered(RCircle::unit(), vec![h(-1, 2), h(0, 1), h(1, 2)]).unwrap()
    }

    fn short_words() -> Vec<Word> {
        Word::all_up_to(1, 3)
    }

    #[test]
    fn trivial_verdicts() {
        let a = ConfigK::new(RCircle::unit(), vec![h(1, 3)]).unwrap();
        let b = ConfigK::new(RCircle::unit(), vec![h(-1, 5)]).unwrap();
        assert_eq!(
            decide_iso(&a, &b, 4).unwrap(),
            IsoVerdict::Isomorphic(IsoKind::Trivial)
        );
        assert_eq!(decide_iso(&a, &sym(), 4), Err(IsoError::MixedSizes(1, 3)));
    }

    #[test]
    fn self_iso_identity_table() {
        let v = decide_iso(&sym(), &sym(), 8).unwrap();
        assert_eq!(
            v,
            IsoVerdict::Isomorphic(IsoKind::Cycle(SignatureVector::new(vec![-1, 2, -1])))
        );
        let t = build_partial_iso(&sym(), &sym(), &v, &short_words(), 1).unwrap();
        assert!(t.sigma.is_identity());
        assert!(t.entries().iter().all(|(a, b)| a == b));
        assert!(t.preserves_betweenness());
        assert_eq!(t.check_chunks().map(|n| n > 0), Ok(true));
    }

    #[test]
    fn rejects_non_isomorphic_verdict() {
        let v = IsoVerdict::ConditionallyIsomorphic(3);
        assert!(matches!(
            build_partial_iso(&sym(), &sym(), &v, &short_words(), 1),
            Err(IsoError::NotIsomorphic(_))
        ));
    }

    #[test]
    fn verdict_text() {
        let v = IsoVerdict::Isomorphic(IsoKind::Cycle(SignatureVector::new(vec![-1, 2, -1])));
        assert_eq!(v.to_string(), "isomorphic v=(-1,2,-1)");
        assert_eq!(
            IsoVerdict::ConditionallyIsomorphic(8).to_string(),
            "conditionally-isomorphic no-cycle-upto 8"
        );
    }

    #[test]
    fn table_text_header() {
        let v = decide_iso(&sym(), &sym(), 8).unwrap();
        let t = build_partial_iso(&sym(), &sym(), &v, &[Word::empty(3)], 1).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("# sigma [1,2,3]\n"));
        assert!(text.contains("low-end\t->\tlow-end"));
    }
}
