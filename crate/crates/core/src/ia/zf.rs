use super::{Candidate, PowerConstraint};
use crate::error::{Error, Result};
use crate::numerics::{condition_estimate, invert, norm_sqr, ComplexMatrix};

use super::schedule::INFEASIBLE_CONDITION;

/// Zero-forcing transmit filter for a chosen candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroForcing {
    /// N_s×L right-inverse of the stacked equivalent-channel rows.
    pub zf: ComplexMatrix,
    /// Per-stream ZF penalty `1 / (‖g_l‖²·‖f_l‖²)`, in `(0, 1]`.
    pub alpha: Vec<f64>,
}

/// Right-inverse of `G_eff` (rows = chosen `g_row`s) and the per-stream
/// penalties.
///
/// With `L = N_s` the filter is the exact inverse; with fewer streams it is
/// the minimum-norm right-inverse `G^H (G G^H)^{-1}`. Since `g_l·f_l = 1`,
/// Cauchy-Schwarz gives `α_l ≤ 1`, with equality for orthogonal rows.
pub fn zf_and_alpha(chosen: &[&Candidate]) -> Result<ZeroForcing> {
    let l = chosen.len();
    if l == 0 {
        return Err(Error::EmptyCandidates);
    }
    let n_s = chosen[0].g_row.len();
    if chosen.iter().any(|c| c.g_row.len() != n_s) || l > n_s {
        return Err(Error::InvalidDimension(format!(
            "{l} rows of width {n_s} cannot be zero-forced"
        )));
    }
    let rows: Vec<_> = chosen.iter().map(|c| c.g_row.clone()).collect();
    let g_eff = ComplexMatrix::from_rows(&rows)?;

    let condition = condition_estimate(&g_eff)?;
    if condition >= INFEASIBLE_CONDITION {
        return Err(Error::InfeasibleSubset {
            condition,
            limit: INFEASIBLE_CONDITION,
        });
    }
    let infeasible = |_| Error::InfeasibleSubset {
        condition,
        limit: INFEASIBLE_CONDITION,
    };
    let zf = if l == n_s {
        invert(&g_eff).map_err(infeasible)?
    } else {
        let g_h = g_eff.conj_transpose();
        let gram = g_eff.matmul(&g_h)?;
        g_h.matmul(&invert(&gram).map_err(infeasible)?)?
    };
    let alpha = chosen
        .iter()
        .enumerate()
        .map(|(j, c)| 1.0 / (c.gain() * norm_sqr(&zf.column(j))))
        .collect();
    Ok(ZeroForcing { zf, alpha })
}

/// Energy of each stream in units of `es`.
///
/// Per-stream normalization gives every stream `es`. Under a total
/// constraint the raw filter is scaled by `β = sqrt(L / ‖F‖_F²)`, so stream
/// `l` ends up with `β²‖f_l‖²` and the weights sum to `L`.
pub fn stream_powers(zf: &ComplexMatrix, constraint: PowerConstraint) -> Vec<f64> {
    let l = zf.cols();
    match constraint {
        PowerConstraint::PerStream => vec![1.0; l],
        PowerConstraint::Total => {
            let col_norms: Vec<f64> = (0..l).map(|j| norm_sqr(&zf.column(j))).collect();
            let total: f64 = col_norms.iter().sum();
            col_norms.iter().map(|n| l as f64 * n / total).collect()
        }
    }
}

/// `Σ log2(1 + α_l·sinr_l)`.
pub fn ia_rate(alpha: &[f64], sinr: &[f64]) -> f64 {
    alpha.iter().zip(sinr).map(|(a, s)| (1.0 + a * s).log2()).sum()
}
