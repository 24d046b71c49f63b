use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::trial::{round12, run_trial, TrialRecord};
use crate::error::{Error, Result};
use crate::rng::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n_trials: usize,
    pub mean_gain: f64,
    pub median_gain: f64,
    pub min_gain: f64,
    pub max_gain: f64,
    /// Half-width of the normal 95% interval on the mean.
    pub ci95: f64,
    /// Mean gain over trials `0..=i`.
    pub running_mean: Vec<f64>,
}

impl CampaignSummary {
    pub fn from_gains(gains: &[f64]) -> Result<Self> {
        let n = gains.len();
        if n == 0 {
            return Err(Error::Config("a campaign needs at least one trial".into()));
        }
        let mut running_mean = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (i, g) in gains.iter().enumerate() {
            acc += g;
            running_mean.push(acc / (i + 1) as f64);
        }
        let mean = acc / n as f64;
        let ci95 = if n > 1 {
            let var = gains.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            1.96 * (var / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            n_trials: n,
            mean_gain: mean,
            median_gain: median(gains),
            min_gain: gains.iter().copied().fold(f64::INFINITY, f64::min),
            max_gain: gains.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ci95,
            running_mean,
        })
    }

    /// `axis,mean_gain,median_gain,min_gain,max_gain,ci95` row body.
    pub fn csv_row(&self, axis: &str) -> String {
        format!(
            "{axis},{},{},{},{},{}",
            round12(self.mean_gain),
            round12(self.median_gain),
            round12(self.min_gain),
            round12(self.max_gain),
            round12(self.ci95)
        )
    }
}

pub const SUMMARY_HEADER: &str = "axis,mean_gain,median_gain,min_gain,max_gain,ci95";

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    /// Sorted by trial index.
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

impl Campaign {
    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out
    }
}

/// Trial `i` runs on `mix_seed(base_seed, i)`. On failure the error of the
/// lowest failing trial index is returned, whatever the execution order.
pub fn run_campaign(cfg: &SimConfig, n_trials: usize, base_seed: u64, exec: Execution) -> Result<Campaign> {
    if n_trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    cfg.validate()?;
    let one = |i: usize| run_trial(cfg, i as u64, mix_seed(base_seed, i as u64));
    let results: Vec<Result<TrialRecord>> = match exec {
        Execution::Parallel => (0..n_trials).into_par_iter().map(one).collect(),
        Execution::Sequential => (0..n_trials).map(one).collect(),
    };
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let gains: Vec<f64> = records.iter().map(|r| r.gain).collect();
    let summary = CampaignSummary::from_gains(&gains)?;
    Ok(Campaign { records, summary })
}
