use super::matrix::{Complex, ComplexMatrix};
use super::svd::svd;
use crate::error::{Error, Result};

/// Relative pivot floor for Gaussian elimination.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Stand-in for an infinite condition number.
pub const CONDITION_SENTINEL: f64 = 1e300;

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when a pivot falls below
/// `PIVOT_FLOOR·max|a_ij|`.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (n, cols) = a.shape();
    if n != cols {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{n}x{cols}"),
        });
    }
    let floor = PIVOT_FLOOR * a.max_abs();
    let mut lhs: Vec<Vec<Complex>> = (0..n).map(|i| a.row(i)).collect();
    let mut rhs: Vec<Vec<Complex>> = (0..n)
        .map(|i| {
            let mut e = vec![Complex::default(); n];
            e[i] = Complex::new(1.0, 0.0);
            e
        })
        .collect();

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lhs[r][col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag <= floor || pivot_mag == 0.0 {
            return Err(Error::SingularMatrix {
                pivot: pivot_mag,
                floor,
            });
        }
        lhs.swap(col, pivot_row);
        rhs.swap(col, pivot_row);

        let inv_p = lhs[col][col].inv();
        for z in lhs[col].iter_mut() {
            *z *= inv_p;
        }
        for z in rhs[col].iter_mut() {
            *z *= inv_p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = lhs[r][col];
            if f == Complex::default() {
                continue;
            }
            for k in 0..n {
                let (lp, rp) = (lhs[col][k], rhs[col][k]);
                lhs[r][k] -= f * lp;
                rhs[r][k] -= f * rp;
            }
        }
    }
    ComplexMatrix::from_rows(&rhs)
}

/// Ratio of the extreme singular values, `s_max / s_min`.
///
/// Returns [`CONDITION_SENTINEL`] when `s_min` is zero or negligible against
/// `s_max` (the ratio would exceed the sentinel). Rectangular inputs are
/// accepted; the ratio is taken over the `min(m, n)` singular values.
pub fn condition_estimate(a: &ComplexMatrix) -> Result<f64> {
    let r = svd(a)?;
    let s_max = r.s[0];
    let s_min = *r.s.last().expect("non-empty");
    if s_max == 0.0 || s_min <= s_max / CONDITION_SENTINEL {
        return Ok(CONDITION_SENTINEL);
    }
    Ok(s_max / s_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_inverse() {
        let i4 = ComplexMatrix::identity(4).unwrap();
        assert_eq!(invert(&i4).unwrap(), i4);
    }

    #[test]
    fn diagonal_inverse() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.25]]).unwrap();
        assert_eq!(invert(&a).unwrap(), expected);
    }

    #[test]
    fn random_inverse_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            let d = if i == j { 3.0 } else { 0.0 };
            Complex::new(d + rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap();
        let r = a.matmul(&invert(&a).unwrap()).unwrap().identity_residual();
        assert!(r <= 1e-10, "residual {r}");
    }

    #[test]
    fn singular_is_reported() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(invert(&a), Err(Error::SingularMatrix { .. })));
        assert!(matches!(
            invert(&ComplexMatrix::zeros(2, 2).unwrap()),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(invert(&ComplexMatrix::zeros(2, 3).unwrap()).is_err());
    }

    #[test]
    fn condition_examples() {
        let i3 = ComplexMatrix::identity(3).unwrap();
        assert!((condition_estimate(&i3).unwrap() - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::from_real_rows(&[&[10.0, 0.0], &[0.0, 0.1]]).unwrap();
        assert!((condition_estimate(&d).unwrap() - 100.0).abs() < 1e-10);
        let twin = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[2.0, 2.0, 1.0], &[3.0, 3.0, -1.0]]).unwrap();
        assert_eq!(condition_estimate(&twin).unwrap(), CONDITION_SENTINEL);
    }
}
