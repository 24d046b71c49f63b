//! One channel realization, end to end.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{CorrelationMode, SimConfig, TrunkPolicy};
use crate::channel::{
    complex_gaussian, correlation, draw_channel, frequency_response, ls_estimate, qpsk_symbols, FrequencyResponse,
};
use crate::error::{Error, Result};
use crate::ia::{
    analytic_stream_sinr, equivalent_channel, interference_null_space, reduced_channel, schedule, ue_candidates,
    Selection, SystemConfig, UeLink,
};
use crate::numerics::{hadamard_trunk, svd, Complex, ComplexMatrix};
use crate::ofdma::{ofdma_rate, ofdma_schedule, sinr_table, OfdmaAssignment, OfdmaPolicy};
use crate::protocol::{collect_feedback, run_sync, FeedbackBundle};
use crate::rng::{stream_rng, Stream};

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round12).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectra {
    /// `|h_q|` of each user's channel from its own station.
    pub desired: Vec<Vec<f64>>,
    /// `|h_q|` of each user's channel from the interfering station.
    pub interferer: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamId {
    pub user: usize,
    pub stream: usize,
}

/// Outcome of one trial. Floats carry 12 significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    /// IA sum rate on the true channels, bits per channel use.
    pub r_d: f64,
    pub r_ref_max_sinr: f64,
    pub r_ref_round_robin: f64,
    /// `r_d` over the configured baseline's rate.
    pub gain: f64,
    pub alpha: Vec<f64>,
    /// Realized per-stream SINR; `r_d = Σ log2(1 + stream_snr)`.
    pub stream_snr: Vec<f64>,
    /// True SINR of the owner of each subcarrier under the baseline.
    pub ofdma_sinr_summary: Vec<f64>,
    /// `|ρ(h_u, h_v)|` for user pairs `u < v` in lexicographic order.
    pub correlations: Vec<f64>,
    pub spectra: Spectra,
    pub streams: Vec<StreamId>,
    /// Slot at which the main station decoded the interferer's beacon.
    pub sync_slots: u64,
    /// Some user's interfering channel was rank deficient.
    pub null_ambiguous: bool,
}

impl TrialRecord {
    /// Baseline rate the gain was computed against.
    pub fn r_ref(&self, policy: OfdmaPolicy) -> f64 {
        match policy {
            OfdmaPolicy::MaxSinr => self.r_ref_max_sinr,
            OfdmaPolicy::RoundRobin => self.r_ref_round_robin,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Everything a trial computes, before rounding into a record.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub selection: Option<Selection>,
    pub realized_sinr: Vec<f64>,
    pub ofdma: Vec<(OfdmaPolicy, OfdmaAssignment, f64)>,
    pub record: TrialRecord,
}

fn random_unitary_trunk<R: Rng + ?Sized>(rng: &mut R, k: usize, n_s: usize) -> Result<ComplexMatrix> {
    let a = ComplexMatrix::from_fn(k, k, |_, _| complex_gaussian(rng, 1.0))?;
    let u = svd(&a)?.u;
    ComplexMatrix::from_fn(k, n_s, |i, j| u[(i, j)])
}

fn trunks(cfg: &SimConfig, sys: &SystemConfig, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    match cfg.policies.trunk {
        TrunkPolicy::Sylvester => {
            let m = hadamard_trunk(sys.k, sys.n_s())?;
            Ok((m.clone(), m))
        }
        TrunkPolicy::RandomUnitary => {
            let mut rng = stream_rng(seed, Stream::Trunk);
            let main = random_unitary_trunk(&mut rng, sys.k, sys.n_s())?;
            let interferer = random_unitary_trunk(&mut rng, sys.k, sys.n_s())?;
            Ok((main, interferer))
        }
    }
}

/// True channels: `(desired, interferer)` per user.
fn draw_responses(cfg: &SimConfig, sys: &SystemConfig, seed: u64) -> (Vec<FrequencyResponse>, Vec<FrequencyResponse>) {
    let mut rng = stream_rng(seed, Stream::Channel);
    let profile = cfg.profile();
    let mut draw = || frequency_response(&draw_channel(&mut rng, &profile), sys.k);
    match cfg.channel.correlation_mode {
        CorrelationMode::Iid => (0..sys.n_u).map(|_| (draw(), draw())).unzip(),
        CorrelationMode::Identical => {
            let (d, i) = (draw(), draw());
            (vec![d; sys.n_u], vec![i; sys.n_u])
        }
    }
}

/// LS estimate averaged over the training symbols of one phase.
fn estimate<R: Rng + ?Sized>(
    rng: &mut R,
    h: &FrequencyResponse,
    pilot_energy: f64,
    sigma2: f64,
    symbols: usize,
) -> Result<FrequencyResponse> {
    let amp = pilot_energy.sqrt();
    let mut acc = vec![Complex::default(); h.len()];
    for _ in 0..symbols {
        let pilots: Vec<Complex> = qpsk_symbols(rng, h.len()).into_iter().map(|p| p * amp).collect();
        let rx: Vec<Complex> =
            h.h.iter()
                .zip(&pilots)
                .map(|(hq, p)| hq * p + complex_gaussian(rng, sigma2))
                .collect();
        for (a, e) in acc.iter_mut().zip(ls_estimate(&rx, &pilots)?.h) {
            *a += e;
        }
    }
    FrequencyResponse::new(acc.into_iter().map(|a| a / symbols as f64).collect())
}

fn links(
    desired: &[FrequencyResponse],
    interferer: &[FrequencyResponse],
    main_trunk: &ComplexMatrix,
    interferer_trunk: &ComplexMatrix,
) -> Result<Vec<UeLink>> {
    desired
        .iter()
        .zip(interferer)
        .map(|(hd, hi)| {
            let g_md = reduced_channel(hd, main_trunk)?;
            let g_mi = reduced_channel(hi, interferer_trunk)?;
            let null = interference_null_space(&g_mi)?;
            Ok(UeLink { g_md, g_mi, null })
        })
        .collect()
}

/// Runs trial `trial` on `seed` and keeps the intermediate results.
pub fn run_trial_detailed(cfg: &SimConfig, trial: u64, seed: u64) -> Result<TrialOutcome> {
    trial_inner(cfg, trial, seed).map_err(|e| e.in_trial(trial, seed))
}

/// Runs trial `trial` on `seed`.
pub fn run_trial(cfg: &SimConfig, trial: u64, seed: u64) -> Result<TrialRecord> {
    run_trial_detailed(cfg, trial, seed).map(|o| o.record)
}

fn trial_inner(cfg: &SimConfig, trial: u64, seed: u64) -> Result<TrialOutcome> {
    let sys = cfg.system()?;
    let sigma2 = sys.sigma2;
    let es_i = cfg.es_interferer();
    let (main_trunk, interferer_trunk) = trunks(cfg, &sys, seed)?;
    let (true_d, true_i) = draw_responses(cfg, &sys, seed);

    let (est_d, est_i) = if cfg.policies.perfect_csi {
        (true_d.clone(), true_i.clone())
    } else {
        let mut rng = stream_rng(seed, Stream::Estimation);
        let n = cfg.protocol.training_symbols;
        let mut est_d = Vec::with_capacity(sys.n_u);
        let mut est_i = Vec::with_capacity(sys.n_u);
        for (hd, hi) in true_d.iter().zip(&true_i) {
            est_i.push(estimate(&mut rng, hi, es_i, sigma2, n)?);
            est_d.push(estimate(&mut rng, hd, sys.es, sigma2, n)?);
        }
        (est_d, est_i)
    };

    let sync = run_sync(&cfg.protocol, sys.n_u, &mut stream_rng(seed, Stream::Protocol))?;

    let designed = links(&est_d, &est_i, &main_trunk, &interferer_trunk)?;
    let truth = links(&true_d, &true_i, &main_trunk, &interferer_trunk)?;
    let mut bundle = FeedbackBundle::new();
    for (u, link) in designed.iter().enumerate() {
        bundle.insert(u, ue_candidates(u, &equivalent_channel(&link.null, &link.g_md)?));
    }
    let candidates = collect_feedback(&bundle, sys.n_u)?;

    let selection = match schedule(&candidates, &sys) {
        Ok(s) => Some(s),
        Err(Error::NoFeasibleSelection) => None,
        Err(e) => return Err(e),
    };
    let realized_sinr = match &selection {
        Some(sel) => analytic_stream_sinr(sel, &designed, &truth, &sys, es_i)?,
        None => Vec::new(),
    };
    let r_d: f64 = realized_sinr.iter().map(|s| (1.0 + s).log2()).sum();

    let rho_est = sinr_table(&est_d, &est_i, sigma2, sys.es, es_i)?;
    let rho_true = sinr_table(&true_d, &true_i, sigma2, sys.es, es_i)?;
    let mut ofdma = Vec::with_capacity(2);
    for policy in [OfdmaPolicy::MaxSinr, OfdmaPolicy::RoundRobin] {
        let assignment = ofdma_schedule(&rho_est, policy)?.with_rho(rho_true.clone())?;
        let rate = ofdma_rate(&assignment);
        ofdma.push((policy, assignment, rate));
    }
    let (_, baseline, r_ref) = ofdma
        .iter()
        .find(|(p, _, _)| *p == cfg.policies.baseline)
        .expect("both policies evaluated");

    let mut correlations = Vec::with_capacity(sys.n_u * (sys.n_u - 1) / 2);
    for u in 0..sys.n_u {
        for v in u + 1..sys.n_u {
            correlations.push(correlation(&true_d[u], &true_d[v])?);
        }
    }

    let record = TrialRecord {
        trial,
        seed,
        r_d: round12(r_d),
        r_ref_max_sinr: round12(ofdma[0].2),
        r_ref_round_robin: round12(ofdma[1].2),
        gain: round12(r_d / r_ref),
        alpha: selection.as_ref().map_or_else(Vec::new, |s| round_all(&s.alpha)),
        stream_snr: round_all(&realized_sinr),
        ofdma_sinr_summary: round_all(&baseline.owned_sinr()),
        correlations: round_all(&correlations),
        spectra: Spectra {
            desired: true_d.iter().map(|h| round_all(&h.magnitudes())).collect(),
            interferer: true_i.iter().map(|h| round_all(&h.magnitudes())).collect(),
        },
        streams: selection.as_ref().map_or_else(Vec::new, |s| {
            s.streams
                .iter()
                .map(|&(user, stream)| StreamId { user, stream })
                .collect()
        }),
        sync_slots: sync.slots_to_detect,
        null_ambiguous: designed.iter().any(|l| l.null.ambiguous),
    };
    Ok(TrialOutcome {
        selection,
        realized_sinr,
        ofdma,
        record,
    })
}
