//! Full complex SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! The matrices handled here are tiny (the largest in practice is 16×16), so
//! the quadratic-per-sweep cost of Jacobi is irrelevant and its accuracy on
//! small singular values is what matters. Both unitary factors are returned
//! complete: columns of `u` beyond the numerical rank are an orthonormal
//! completion, which is exactly the null space callers read off.

use super::matrix::{inner, norm, Complex, ComplexMatrix};
use crate::error::{Error, Result};

/// Sweep cap before reporting non-convergence.
pub const MAX_SWEEPS: usize = 100;

/// A pair of columns is rotated while `|a_i^H a_j| > ROTATION_TOL·‖a_i‖‖a_j‖`.
const ROTATION_TOL: f64 = 4.0 * f64::EPSILON;

/// Phase-convention tie window: entries within this relative distance of the
/// largest magnitude count as tied, and the first one wins.
const PHASE_TIE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// m×m unitary.
    pub u: ComplexMatrix,
    /// min(m, n) singular values, non-increasing.
    pub s: Vec<f64>,
    /// n×n unitary.
    pub v: ComplexMatrix,
}

impl SvdResult {
    /// `u·diag(s)·v^H`, for residual checks.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let (m, n) = (self.u.rows(), self.v.rows());
        let us = ComplexMatrix::from_fn(m, n, |i, j| {
            if j < self.s.len() {
                self.u[(i, j)] * self.s[j]
            } else {
                Complex::default()
            }
        })?;
        us.matmul(&self.v.conj_transpose())
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let (mut u_cols, s, mut v_cols) = if m >= n {
        tall_svd(a)?
    } else {
        // A^H = U' S V'^H  =>  A = V' S U'^H
        let (u_t, s, v_t) = tall_svd(&a.conj_transpose())?;
        (v_t, s, u_t)
    };
    apply_phase_convention(&mut u_cols, &mut v_cols, s.len());
    Ok(SvdResult {
        u: ComplexMatrix::from_columns(&u_cols)?,
        s,
        v: ComplexMatrix::from_columns(&v_cols)?,
    })
}

type Columns = Vec<Vec<Complex>>;

/// SVD of an m×n matrix with m ≥ n, returned as column lists.
fn tall_svd(a: &ComplexMatrix) -> Result<(Columns, Vec<f64>, Columns)> {
    let (m, n) = a.shape();
    let mut work: Columns = (0..n).map(|j| a.column(j)).collect();
    let mut v: Columns = (0..n)
        .map(|j| {
            let mut e = vec![Complex::default(); n];
            e[j] = Complex::new(1.0, 0.0);
            e
        })
        .collect();

    // columns at or below this energy are roundoff; rotating them against a
    // parallel column only regenerates roundoff, so they are left alone
    let floor = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                rotated |= rotate_pair(&mut work, &mut v, i, j, floor);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = work.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the original column order among exact ties
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted: Columns = order.iter().map(|&j| v[j].clone()).collect();
    let mut u: Columns = Vec::with_capacity(m);
    for (&j, &sj) in order.iter().zip(&s) {
        if sj * sj > floor && sj > 0.0 {
            u.push(work[j].iter().map(|z| z / sj).collect());
        } else {
            break;
        }
    }
    complete_basis(&mut u, m);
    Ok((u, s, v_sorted))
}

/// Orthogonalizes columns `i` and `j` (and applies the same rotation to the
/// accumulated right factor). Returns whether a rotation was applied.
fn rotate_pair(work: &mut Columns, v: &mut Columns, i: usize, j: usize, floor: f64) -> bool {
    let alpha: f64 = work[i].iter().map(Complex::norm_sqr).sum();
    let beta: f64 = work[j].iter().map(Complex::norm_sqr).sum();
    if alpha <= floor || beta <= floor {
        return false;
    }
    let gamma = inner(&work[i], &work[j]);
    let g = gamma.norm();
    if g == 0.0 || g <= ROTATION_TOL * (alpha * beta).sqrt() {
        return false;
    }
    // Rotate a_j by e^{-iφ} first so the pair's Gram entry becomes real.
    let phase_conj = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for cols in [work, v] {
        let (left, right) = cols.split_at_mut(j);
        for (xi, xj) in left[i].iter_mut().zip(right[0].iter_mut()) {
            let a = *xi;
            let b = *xj * phase_conj;
            *xi = a * c - b * s;
            *xj = a * s + b * c;
        }
    }
    true
}

/// Extends an orthonormal set of `m`-vectors to a full basis, drawing
/// candidates from the standard basis and keeping the one with the largest
/// residual after two rounds of Gram-Schmidt.
fn complete_basis(basis: &mut Columns, m: usize) {
    while basis.len() < m {
        let mut best: Option<(f64, Vec<Complex>)> = None;
        for e in 0..m {
            let mut cand = vec![Complex::default(); m];
            cand[e] = Complex::new(1.0, 0.0);
            for _ in 0..2 {
                for q in basis.iter() {
                    let proj = inner(q, &cand);
                    for (c, qk) in cand.iter_mut().zip(q) {
                        *c -= proj * qk;
                    }
                }
            }
            let r = norm(&cand);
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, cand));
            }
        }
        let (r, cand) = best.expect("m > 0");
        basis.push(cand.into_iter().map(|z| z / r).collect());
    }
}

/// Makes the largest-magnitude entry of every left singular vector real and
/// positive, rotating the paired right vector by the same phase.
fn apply_phase_convention(u: &mut Columns, v: &mut Columns, paired: usize) {
    for (idx, col) in u.iter_mut().enumerate() {
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        let pivot = col
            .iter()
            .position(|z| z.norm() >= peak * (1.0 - PHASE_TIE))
            .expect("peak exists");
        let phase_conj = (col[pivot] / col[pivot].norm()).conj();
        for z in col.iter_mut() {
            *z *= phase_conj;
        }
        col[pivot] = Complex::new(col[pivot].re, 0.0);
        if idx < paired {
            for z in v[idx].iter_mut() {
                *z *= phase_conj;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(m, n, |_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    fn unitarity(q: &ComplexMatrix) -> f64 {
        q.conj_transpose().matmul(q).unwrap().identity_residual()
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let r = svd(&ComplexMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(r.s.len(), 3);
        for s in &r.s {
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_case() {
        let a = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 2.0]]).unwrap();
        let r = svd(&a).unwrap();
        assert!((r.s[0] - 3.0).abs() < 1e-15 && (r.s[1] - 2.0).abs() < 1e-15);
        for (q, p) in [(&r.u, 0usize), (&r.v, 0)] {
            assert!(q[(p, 1)].norm() < 1e-15 && q[(1, p)].norm() < 1e-15);
            assert!((q[(0, 0)].norm() - 1.0).abs() < 1e-15);
            assert!((q[(1, 1)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn random_tall_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 4, 3);
        let r = svd(&a).unwrap();
        assert_eq!(r.u.shape(), (4, 4));
        assert_eq!(r.v.shape(), (3, 3));
        let resid = r.reconstruct().unwrap().sub(&a).unwrap().frobenius_norm();
        assert!(resid <= 1e-10 * a.frobenius_norm());
        assert!(unitarity(&r.u) <= 1e-10);
        assert!(unitarity(&r.v) <= 1e-10);
    }

    #[test]
    fn wide_matrix_is_handled_through_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 2, 5);
        let r = svd(&a).unwrap();
        assert_eq!(r.u.shape(), (2, 2));
        assert_eq!(r.v.shape(), (5, 5));
        assert!(r.reconstruct().unwrap().sub(&a).unwrap().frobenius_norm() <= 1e-10 * a.frobenius_norm());
        assert!(unitarity(&r.v) <= 1e-10);
    }

    #[test]
    fn rank_deficient_gets_exact_zero_and_completion() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[2.0, 2.0], &[0.5, 0.5]]).unwrap();
        let r = svd(&a).unwrap();
        assert!(r.s[1] < 1e-15);
        assert!(unitarity(&r.u) <= 1e-12);
        assert!(r.reconstruct().unwrap().sub(&a).unwrap().frobenius_norm() <= 1e-12);
    }

    #[test]
    fn parallel_complex_columns_converge() {
        // one nonzero row: every column pair is parallel, and rotations
        // leave roundoff that is parallel too
        let row = vec![
            Complex::new(4.163336342344337e-17, 5.551115123125783e-17),
            Complex::new(1.3877787807814457e-17, 5.551115123125783e-17),
            Complex::new(1.3877787807814457e-17, -5.551115123125783e-17),
        ];
        let zero = vec![Complex::default(); 3];
        let a = ComplexMatrix::from_rows(&[row, zero.clone(), zero]).unwrap();
        let r = svd(&a).unwrap();
        assert!(unitarity(&r.u) <= 1e-12 && unitarity(&r.v) <= 1e-12);
        assert!(r.reconstruct().unwrap().sub(&a).unwrap().frobenius_norm() <= 1e-10 * a.frobenius_norm());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x: Vec<Complex> = (0..4).map(|_| Complex::new(rng.random(), rng.random())).collect();
            let coeffs: Vec<Complex> = (0..3).map(|_| Complex::new(rng.random(), rng.random())).collect();
            let a = ComplexMatrix::from_fn(4, 3, |i, j| x[i] * coeffs[j]).unwrap();
            let r = svd(&a).unwrap();
            assert!(r.s[1] <= 1e-14 * r.s[0]);
            assert!(r.reconstruct().unwrap().sub(&a).unwrap().frobenius_norm() <= 1e-10 * a.frobenius_norm());
        }
    }

    #[test]
    fn zero_matrix() {
        let r = svd(&ComplexMatrix::zeros(3, 2).unwrap()).unwrap();
        assert_eq!(r.s, vec![0.0, 0.0]);
        assert!(unitarity(&r.u) <= 1e-15);
    }

    #[test]
    fn left_vectors_follow_phase_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 4, 4);
        let r = svd(&a).unwrap();
        for j in 0..4 {
            let col = r.u.column(j);
            let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let p = col.iter().position(|z| z.norm() >= peak * (1.0 - PHASE_TIE)).unwrap();
            assert_eq!(col[p].im, 0.0);
            assert!(col[p].re > 0.0);
        }
    }
}
