//! Torus localization on Gr_2(C^n) and on the Kempf resolution
//! Z = P(Sym^2 U*) of the rank <= 2 symmetric matrices, yielding their
//! Chern-Mather degrees and virtual ED degree.
//!
//! All computations specialize the equivariant parameters to integers and
//! sum exact rationals, so parallel evaluation is bit-identical to serial.

mod convention;
mod fixed;
mod localize;
mod ved;

pub use convention::{aluffi_sum, Convention, TangentModel, ANCHOR_DEGREE, ANCHOR_N, ANCHOR_VED};
pub use fixed::{
    euler_g, fixed_points, roots_at, z_fixed_points, FixedPointRoots, GFixedPoint, ProblemSize, WeightVector,
    ZFixedPoint,
};
pub use localize::{cm_degree_route_a, cm_degree_route_b, cm_degrees, pushforward_terms, PushTerm, Route};
pub use ved::{
    random_weights, ved, ved_verified, ved_with, weight_independence_check, weight_independence_check_with,
    ChernMatherDegrees,
};

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error("n too small: {0} (need n >= 3)")]
    NTooSmall(usize),
    #[error("torus weights must be pairwise distinct: {0:?}")]
    DuplicateWeights(Vec<i64>),
    #[error("expected {expected} weights, got {got}")]
    WrongWeightCount { expected: usize, got: usize },
    #[error("degree index j = {j} outside 0..={m}")]
    DegreeOutOfRange { j: usize, m: usize },
    #[error("convention/implementation inconsistency: degree j = {j} is {value}, not an integer")]
    NonInteger { j: usize, value: String },
    #[error("route A and route B disagree for n = {n} at j = {j}")]
    RouteMismatch { n: usize, j: usize },
    #[error("no sign convention reproduces the n = 3 anchors")]
    NoConsistentConvention,
    #[error("need at least 2 trials, got {0}")]
    TooFewTrials(usize),
    #[error("value does not fit in a 64-bit integer")]
    Overflow,
    #[error(transparent)]
    Exact(#[from] ExactError),
}
