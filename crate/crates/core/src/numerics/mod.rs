//! Small dense complex linear algebra: Sylvester Hadamard trunks, a full
//! Jacobi SVD, and Gauss-Jordan inversion. Everything here is a pure function
//! of its inputs.

mod hadamard;
mod matrix;
mod solve;
mod svd;

pub use hadamard::hadamard_trunk;
pub use matrix::{dot, inner, norm, norm_sqr, Complex, ComplexMatrix};
pub use solve::{condition_estimate, invert, CONDITION_SENTINEL, PIVOT_FLOOR};
pub use svd::{svd, SvdResult, MAX_SWEEPS};
