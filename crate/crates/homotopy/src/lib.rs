//! Numerical side of vedkit: the ED Lagrange system on the generic
//! symmetric 3x3 determinant and a homotopy path tracker for it.

pub mod edlagrange;
pub mod pathtrack;
pub mod poly;
