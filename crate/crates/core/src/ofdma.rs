//! Classical OFDMA under full frequency reuse, the reference for the gain.

use serde::{Deserialize, Serialize};

use crate::channel::FrequencyResponse;
use crate::error::{Error, Result};
use crate::numerics::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OfdmaPolicy {
    /// Each subcarrier goes to the user with the highest SINR on it.
    #[default]
    MaxSinr,
    /// Subcarrier `q` goes to user `q mod N_u`.
    RoundRobin,
}

/// `es·|h_u|² / (es_i·|h_i|² + σ²)`.
pub fn ofdma_sinr(h_u: Complex, h_i: Complex, sigma2: f64, es: f64, es_interferer: f64) -> f64 {
    es * h_u.norm_sqr() / (es_interferer * h_i.norm_sqr() + sigma2)
}

/// K×N_u SINR table, `rho[q][u]`. `interferer[u]` is the interfering
/// station's channel to user `u`.
pub fn sinr_table(
    desired: &[FrequencyResponse],
    interferer: &[FrequencyResponse],
    sigma2: f64,
    es: f64,
    es_interferer: f64,
) -> Result<Vec<Vec<f64>>> {
    if desired.is_empty() || desired.len() != interferer.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} interferer responses", desired.len()),
            got: format!("{}", interferer.len()),
        });
    }
    let k = desired[0].len();
    if desired.iter().chain(interferer).any(|h| h.len() != k) {
        return Err(Error::InvalidDimension("responses differ in length".into()));
    }
    Ok((0..k)
        .map(|q| {
            desired
                .iter()
                .zip(interferer)
                .map(|(d, i)| ofdma_sinr(d.h[q], i.h[q], sigma2, es, es_interferer))
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfdmaAssignment {
    /// Owning user of each subcarrier.
    pub owner: Vec<usize>,
    /// Subcarriers per user, `L_u`.
    pub per_user_counts: Vec<usize>,
    /// K×N_u SINR table the rate is evaluated on.
    pub rho: Vec<Vec<f64>>,
}

impl OfdmaAssignment {
    /// Same ownership, rate evaluated on another SINR table (e.g. the true
    /// channels when the assignment was made on estimates).
    pub fn with_rho(&self, rho: Vec<Vec<f64>>) -> Result<Self> {
        if rho.len() != self.owner.len() || rho.iter().any(|r| r.len() != self.per_user_counts.len()) {
            return Err(Error::InvalidDimension(
                "SINR table shape differs from the assignment".into(),
            ));
        }
        Ok(Self {
            owner: self.owner.clone(),
            per_user_counts: self.per_user_counts.clone(),
            rho,
        })
    }

    /// SINR of the owner on each subcarrier.
    pub fn owned_sinr(&self) -> Vec<f64> {
        self.owner.iter().enumerate().map(|(q, &u)| self.rho[q][u]).collect()
    }
}

pub fn ofdma_schedule(rho: &[Vec<f64>], policy: OfdmaPolicy) -> Result<OfdmaAssignment> {
    let n_u = rho.first().map_or(0, Vec::len);
    if rho.is_empty() || n_u == 0 || rho.iter().any(|r| r.len() != n_u) {
        return Err(Error::InvalidDimension(
            "SINR table must be a non-empty K×N_u matrix".into(),
        ));
    }
    let owner: Vec<usize> = match policy {
        OfdmaPolicy::MaxSinr => rho
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(
                        (0, f64::NEG_INFINITY),
                        |best, (u, &r)| if r > best.1 { (u, r) } else { best },
                    )
                    .0
            })
            .collect(),
        OfdmaPolicy::RoundRobin => (0..rho.len()).map(|q| q % n_u).collect(),
    };
    let mut per_user_counts = vec![0; n_u];
    for &u in &owner {
        per_user_counts[u] += 1;
    }
    Ok(OfdmaAssignment {
        owner,
        per_user_counts,
        rho: rho.to_vec(),
    })
}

/// `Σ log2(1 + ρ)` over owned (subcarrier, user) pairs.
pub fn ofdma_rate(assignment: &OfdmaAssignment) -> f64 {
    assignment.owned_sinr().iter().map(|r| (1.0 + r).log2()).sum()
}
