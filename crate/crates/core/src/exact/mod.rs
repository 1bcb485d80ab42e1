//! Exact rational arithmetic and the small amount of symbolic machinery
//! built on it: elementary symmetric functions, truncated power series and
//! polynomial interpolation.

mod interp;
mod rat;
mod series;
mod symmetric;

pub use interp::{eval_poly, forward_diff_order, interpolate, DiffOrder};
pub use rat::Rat;
pub use series::{series_inverse, TruncSeries};
pub use symmetric::{elem_sym, elem_sym_all, power_sum};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("non-invertible series")]
    NonInvertibleSeries,
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(i64),
}
