//! Non-classic interference alignment.
//!
//! Per user: reduce both channels through the Hadamard trunk, take the left
//! null space of the interfering reduced channel, and project the desired
//! reduced channel onto it. Each row of that projection yields one fed-back
//! precoding direction. The base station then picks the subset with the best
//! zero-forced sum rate.

mod oracle;
mod schedule;
mod zf;

use serde::{Deserialize, Serialize};

use crate::channel::FrequencyResponse;
use crate::error::{Error, Result};
use crate::numerics::{norm, svd, Complex, ComplexMatrix};

pub use oracle::{analytic_stream_sinr, symbol_oracle, OracleSettings, StreamMeasurement, UeLink};
pub use schedule::{schedule, subset_rate, Selection, INFEASIBLE_CONDITION};
pub use zf::{ia_rate, stream_powers, zf_and_alpha, ZeroForcing};

/// Below this ratio to the largest singular value, the trailing interference
/// singular value is treated as zero and the null space flagged ambiguous.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PowerConstraint {
    /// Every stream gets energy `es` through a unit-norm precoder column.
    #[default]
    PerStream,
    /// The ZF filter is scaled as a whole to total energy `es·L`.
    Total,
}

/// Dimensions and energies of one IA link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Subcarriers.
    pub k: usize,
    /// Dimensions each station leaves free.
    pub n_f: usize,
    /// Users in the main cell.
    pub n_u: usize,
    /// Per-stream transmit symbol energy.
    pub es: f64,
    /// Noise variance.
    pub sigma2: f64,
    pub power: PowerConstraint,
}

impl SystemConfig {
    pub fn new(k: usize, n_f: usize, n_u: usize, es: f64, sigma2: f64) -> Result<Self> {
        let cfg = Self {
            k,
            n_f,
            n_u,
            es,
            sigma2,
            power: PowerConstraint::PerStream,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Four subcarriers, one free dimension, three users, 10 dB SNR.
    pub fn demo() -> Self {
        Self {
            k: 4,
            n_f: 1,
            n_u: 3,
            es: 1.0,
            sigma2: 0.1,
            power: PowerConstraint::PerStream,
        }
    }

    pub fn n_s(&self) -> usize {
        self.k - self.n_f
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || !self.k.is_power_of_two() {
            return Err(Error::Config(format!(
                "system.subcarriers = {} is not a power of two",
                self.k
            )));
        }
        if self.n_f == 0 || self.n_f >= self.k {
            return Err(Error::Config(format!(
                "system.free_dims = {} must lie in 1..{}",
                self.n_f, self.k
            )));
        }
        if self.n_u == 0 {
            return Err(Error::Config("system.users must be >= 1".into()));
        }
        if self.es <= 0.0 || !self.es.is_finite() {
            return Err(Error::Config("symbol energy must be positive".into()));
        }
        if self.sigma2 <= 0.0 || !self.sigma2.is_finite() {
            return Err(Error::Config("noise variance must be positive".into()));
        }
        Ok(())
    }
}

/// `diag(h)·M_H`, the K×N_s channel seen through a trunk.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedChannel {
    pub g: ComplexMatrix,
}

pub fn reduced_channel(h: &FrequencyResponse, m_h: &ComplexMatrix) -> Result<ReducedChannel> {
    if h.len() != m_h.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("response of length {}", m_h.rows()),
            got: format!("length {}", h.len()),
        });
    }
    let g = ComplexMatrix::from_fn(m_h.rows(), m_h.cols(), |q, j| h.h[q] * m_h[(q, j)])?;
    Ok(ReducedChannel { g })
}

/// Rows span the left null space of an interfering reduced channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NullProjection {
    /// N_f×K, orthonormal rows.
    pub v_perp: ComplexMatrix,
    /// The interfering channel was rank deficient, so the true null space is
    /// larger than N_f and these rows are one arbitrary choice within it.
    pub ambiguous: bool,
}

impl NullProjection {
    pub fn n_f(&self) -> usize {
        self.v_perp.rows()
    }

    pub fn row(&self, r: usize) -> Vec<Complex> {
        self.v_perp.row(r)
    }
}

/// Conjugate-transposed trailing `K - N_s` left singular vectors of `g_mi`.
pub fn interference_null_space(g_mi: &ReducedChannel) -> Result<NullProjection> {
    let (k, n_s) = g_mi.g.shape();
    if n_s >= k {
        return Err(Error::InvalidDimension(format!(
            "interfering reduced channel is {k}x{n_s}; it leaves no free dimension"
        )));
    }
    let dec = svd(&g_mi.g)?;
    let s_max = dec.s[0];
    let s_last = dec.s[n_s - 1];
    let ambiguous = s_max == 0.0 || s_last < RANK_TOLERANCE * s_max;
    let v_perp = ComplexMatrix::from_fn(k - n_s, k, |r, q| dec.u[(q, n_s + r)].conj())?;
    Ok(NullProjection { v_perp, ambiguous })
}

/// `V^⊥·G_md`, the N_f×N_s channel left after projecting out the interferer.
pub fn equivalent_channel(null: &NullProjection, g_md: &ReducedChannel) -> Result<ComplexMatrix> {
    null.v_perp.matmul(&g_md.g)
}

/// One fed-back precoding direction and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub user: usize,
    pub stream: usize,
    /// Precoding vector, the conjugate of `g_row`.
    pub c: Vec<Complex>,
    /// Row of the user's equivalent channel.
    pub g_row: Vec<Complex>,
    /// The row is exactly zero; the candidate stays in the set but can never
    /// be part of a feasible subset.
    pub zero_gain: bool,
}

impl Candidate {
    pub fn from_row(user: usize, stream: usize, g_row: Vec<Complex>) -> Self {
        let c = g_row.iter().map(Complex::conj).collect();
        let zero_gain = norm(&g_row) == 0.0;
        Self {
            user,
            stream,
            c,
            g_row,
            zero_gain,
        }
    }

    pub fn gain(&self) -> f64 {
        crate::numerics::norm_sqr(&self.g_row)
    }
}

/// The `N_f` candidates of one user, one per equivalent-channel row.
pub fn ue_candidates(user: usize, g_perp: &ComplexMatrix) -> Vec<Candidate> {
    (0..g_perp.rows())
        .map(|r| Candidate::from_row(user, r, g_perp.row(r)))
        .collect()
}
