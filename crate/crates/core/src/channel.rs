//! Multipath fading, OFDM frequency responses, AWGN and pilot-based
//! least-squares estimation.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{inner, norm, Complex};

/// One propagation path: complex gain and delay in sample periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub gain: Complex,
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipathChannel {
    taps: Vec<Tap>,
}

impl MultipathChannel {
    pub fn new(taps: Vec<Tap>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidDimension("a channel needs at least one tap".into()));
        }
        if taps
            .iter()
            .any(|t| t.delay < 0.0 || !t.delay.is_finite() || !t.gain.is_finite())
        {
            return Err(Error::InvalidDimension(
                "tap delays must be finite and non-negative".into(),
            ));
        }
        Ok(Self { taps })
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.gain.norm_sqr()).sum()
    }
}

/// Tapped-delay-line profile for [`draw_channel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelProfile {
    pub num_taps: usize,
    /// Largest tap delay, in sample periods.
    pub max_delay: f64,
    /// Exponential power decay per tap index (0 = uniform profile).
    pub power_decay: f64,
    /// Pin the first tap to zero delay (timing is synchronized on the first
    /// arrival). A single-tap profile is then flat fading.
    #[serde(default = "default_true")]
    pub anchor_first_tap: bool,
}

fn default_true() -> bool {
    true
}

impl Default for ChannelProfile {
    fn default() -> Self {
        Self {
            num_taps: 4,
            max_delay: 4.0,
            power_decay: 0.0,
            anchor_first_tap: true,
        }
    }
}

impl ChannelProfile {
    pub fn validate(&self) -> Result<()> {
        if self.num_taps == 0 {
            return Err(Error::Config("channel.num_taps must be >= 1".into()));
        }
        if self.max_delay < 0.0 || !self.max_delay.is_finite() {
            return Err(Error::Config("channel.max_delay must be finite and >= 0".into()));
        }
        if self.power_decay < 0.0 || !self.power_decay.is_finite() {
            return Err(Error::Config("channel.power_decay must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Normalized mean power of each tap.
    pub fn tap_powers(&self) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.num_taps)
            .map(|p| (-self.power_decay * p as f64).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    }
}

/// Draws one tapped-delay-line realization.
///
/// Tap `p` gets a uniform phase, a delay uniform in `[0, max_delay]` (tap 0
/// sits at delay 0 when the profile is anchored), and an exponentially
/// distributed power with mean from the decay profile. Powers are then
/// renormalized so the realization carries unit total power.
pub fn draw_channel<R: Rng + ?Sized>(rng: &mut R, profile: &ChannelProfile) -> MultipathChannel {
    let mean_powers = profile.tap_powers();
    let mut taps = Vec::with_capacity(profile.num_taps);
    let mut raw_powers = Vec::with_capacity(profile.num_taps);
    for (p, mean) in mean_powers.iter().enumerate() {
        let delay = if p == 0 && profile.anchor_first_tap {
            0.0
        } else {
            rng.random_range(0.0..=profile.max_delay)
        };
        let phase = rng.random_range(0.0..2.0 * PI);
        let fade: f64 = Exp1.sample(rng);
        raw_powers.push(mean * fade);
        taps.push(Tap {
            gain: Complex::from_polar(1.0, phase),
            delay,
        });
    }
    let total: f64 = raw_powers.iter().sum();
    for (tap, pw) in taps.iter_mut().zip(&raw_powers) {
        let amp = if total > 0.0 {
            (pw / total).sqrt()
        } else {
            (1.0 / profile.num_taps as f64).sqrt()
        };
        tap.gain *= amp;
    }
    MultipathChannel { taps }
}

/// Per-subcarrier complex gains of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub h: Vec<Complex>,
}

impl FrequencyResponse {
    pub fn new(h: Vec<Complex>) -> Result<Self> {
        if h.is_empty() || h.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidDimension(
                "frequency response must be non-empty and finite".into(),
            ));
        }
        Ok(Self { h })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.h.iter().map(|z| z.norm()).collect()
    }

    pub fn scaled(&self, s: Complex) -> FrequencyResponse {
        FrequencyResponse {
            h: self.h.iter().map(|z| z * s).collect(),
        }
    }
}

/// `h_q = Σ_p gain_p · exp(-j2π·q·delay_p / K)` for `q` in `0..K`.
pub fn frequency_response(ch: &MultipathChannel, k: usize) -> FrequencyResponse {
    let h = (0..k)
        .map(|q| {
            ch.taps
                .iter()
                .map(|t| t.gain * Complex::from_polar(1.0, -2.0 * PI * q as f64 * t.delay / k as f64))
                .sum()
        })
        .collect();
    FrequencyResponse { h }
}

/// Normalized correlation `|h1^H h2| / (‖h1‖‖h2‖)`, in `[0, 1]`.
pub fn correlation(h1: &FrequencyResponse, h2: &FrequencyResponse) -> Result<f64> {
    if h1.len() != h2.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("length {}", h1.len()),
            got: format!("length {}", h2.len()),
        });
    }
    let (n1, n2) = (norm(&h1.h), norm(&h2.h));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((inner(&h1.h, &h2.h).norm() / (n1 * n2)).min(1.0))
}

/// Complex AWGN variance, total over both quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma2: f64,
}

impl NoiseModel {
    pub fn new(sigma2: f64) -> Result<Self> {
        if sigma2 <= 0.0 || !sigma2.is_finite() {
            return Err(Error::Config(format!("noise variance must be positive, got {sigma2}")));
        }
        Ok(Self { sigma2 })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// One circularly-symmetric complex Gaussian sample of variance `sigma2`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma2: f64) -> Complex {
    let s = (sigma2 / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(s * re, s * im)
}

pub fn awgn<R: Rng + ?Sized>(rng: &mut R, x: &[Complex], noise: NoiseModel) -> Vec<Complex> {
    x.iter().map(|z| z + complex_gaussian(rng, noise.sigma2)).collect()
}

/// Unit-magnitude QPSK pilot symbols.
pub fn qpsk_symbols<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    (0..n)
        .map(|_| {
            let re = if rng.random::<bool>() { a } else { -a };
            let im = if rng.random::<bool>() { a } else { -a };
            Complex::new(re, im)
        })
        .collect()
}

/// Least-squares estimate `rx_q / pilot_q`.
pub fn ls_estimate(rx: &[Complex], pilots: &[Complex]) -> Result<FrequencyResponse> {
    if rx.len() != pilots.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} pilots", rx.len()),
            got: format!("{} pilots", pilots.len()),
        });
    }
    if let Some(i) = pilots.iter().position(|p| p.norm() == 0.0) {
        return Err(Error::InvalidPilot(i));
    }
    FrequencyResponse::new(rx.iter().zip(pilots).map(|(r, p)| r / p).collect())
}
