use itertools::Itertools;

use super::zf::{ia_rate, stream_powers, zf_and_alpha};
use super::{Candidate, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Subsets whose stacked rows have at least this condition number score 0.
pub const INFEASIBLE_CONDITION: f64 = 1e10;

/// The scheduler's chosen streams and everything derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Indices into the candidate list, ascending.
    pub chosen: Vec<usize>,
    /// `(user, stream)` of each chosen candidate.
    pub streams: Vec<(usize, usize)>,
    /// N_s×L, columns are the chosen precoding vectors `c`.
    pub p: ComplexMatrix,
    /// N_s×L zero-forcing filter (raw right-inverse columns).
    pub zf: ComplexMatrix,
    pub alpha: Vec<f64>,
    /// Matched-filter SNR `es·‖g_l‖²/σ²` of each stream.
    pub sinr: Vec<f64>,
    /// Stream energies in units of `es` under the configured constraint.
    pub power: Vec<f64>,
    /// Sum rate in bits per channel use.
    pub rate: f64,
}

impl Selection {
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Post-ZF SNR of each stream, `power_l·α_l·sinr_l`.
    pub fn stream_snr(&self) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.sinr)
            .zip(&self.power)
            .map(|((a, s), p)| p * a * s)
            .collect()
    }

    /// Unit-norm version of ZF column `l`.
    pub fn unit_column(&self, l: usize) -> Vec<crate::numerics::Complex> {
        let col = self.zf.column(l);
        let n = crate::numerics::norm(&col);
        col.into_iter().map(|z| z / n).collect()
    }
}

fn evaluate(candidates: &[Candidate], indices: &[usize], cfg: &SystemConfig) -> Result<Selection> {
    let chosen: Vec<&Candidate> = indices.iter().map(|&i| &candidates[i]).collect();
    let z = zf_and_alpha(&chosen)?;
    let sinr: Vec<f64> = chosen.iter().map(|c| cfg.es * c.gain() / cfg.sigma2).collect();
    let power = stream_powers(&z.zf, cfg.power);
    let weighted: Vec<f64> = sinr.iter().zip(&power).map(|(s, p)| s * p).collect();
    let rate = ia_rate(&z.alpha, &weighted);
    let p = ComplexMatrix::from_columns(&chosen.iter().map(|c| c.c.clone()).collect::<Vec<_>>())?;
    Ok(Selection {
        chosen: indices.to_vec(),
        streams: chosen.iter().map(|c| (c.user, c.stream)).collect(),
        p,
        zf: z.zf,
        alpha: z.alpha,
        sinr,
        power,
        rate,
    })
}

/// Rate of one candidate subset, 0 when it cannot be zero-forced.
pub fn subset_rate(candidates: &[Candidate], indices: &[usize], cfg: &SystemConfig) -> f64 {
    evaluate(candidates, indices, cfg).map_or(0.0, |s| s.rate)
}

/// Exhaustive-search scheduler.
///
/// With `t` candidates, every subset of size `L = min(N_s, t)` is scored and
/// the best kept; ties go to the lexicographically smallest index tuple
/// because combinations are visited in lexicographic order and only a strict
/// improvement replaces the incumbent. If every size-`L` subset is singular,
/// the search repeats at `L - 1`, and so on down to single streams.
pub fn schedule(candidates: &[Candidate], cfg: &SystemConfig) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let t = candidates.len();
    let max_len = cfg.n_s().min(t);
    for len in (1..=max_len).rev() {
        let mut best: Option<Selection> = None;
        for combo in (0..t).combinations(len) {
            match evaluate(candidates, &combo, cfg) {
                Ok(sel) => {
                    if best.as_ref().is_none_or(|b| sel.rate > b.rate) {
                        best = Some(sel);
                    }
                }
                Err(Error::InfeasibleSubset { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if let Some(sel) = best {
            return Ok(sel);
        }
    }
    Err(Error::NoFeasibleSelection)
}
