//! Circles with marked interior points, the reversion action of the free
//! product of involutions on them, and betweenness isomorphism of the
//! resulting point sets.

// Errors carry the offending exact points and vectors.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]
pub mod action;
pub mod classify;
pub mod geometry;
pub mod hull;
pub mod iso;
pub mod word;

pub use action::{ConfigK, HalfPlaneSide};
pub use classify::{classify, ClassLabel, CycleLabel, RealizationInterval};
pub use geometry::{RCircle, RPoint, Rational};
pub use iso::{build_partial_iso, decide_iso, IsoKind, IsoVerdict, PartialIsoTable};
pub use word::{Permutation, SignatureVector, Word};
