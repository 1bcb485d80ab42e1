//! Exact intersection theory for the variety of symmetric n x n matrices of
//! rank at most 2: Chern-Mather degrees by equivariant localization, the
//! virtual Euclidean distance degree, and a polynomial-fit harness for the
//! resulting sequence.

pub mod exact;
pub mod grassloc;
pub mod stability;

pub use exact::Rat;
pub use grassloc::{ved, ChernMatherDegrees, Convention, LocalizationError};
