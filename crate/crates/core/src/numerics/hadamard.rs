use super::matrix::{Complex, ComplexMatrix};
use crate::error::{Error, Result};

/// First `n_s` columns of the Sylvester Hadamard matrix of order `k`, scaled
/// by `1/√k` so the columns are orthonormal.
pub fn hadamard_trunk(k: usize, n_s: usize) -> Result<ComplexMatrix> {
    if k == 0 || !k.is_power_of_two() {
        return Err(Error::UnsupportedOrder(k));
    }
    if n_s == 0 || n_s > k {
        return Err(Error::InvalidDimension(format!(
            "trunk width {n_s} must lie in 1..={k}"
        )));
    }
    let scale = 1.0 / (k as f64).sqrt();
    // Sylvester: H[i][j] = (-1)^{popcount(i & j)}
    ComplexMatrix::from_fn(k, n_s, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex::new(sign * scale, 0.0)
    })
}
