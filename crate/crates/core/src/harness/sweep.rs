use std::fmt;
use std::str::FromStr;

use super::campaign::{run_campaign, Campaign, Execution};
use super::config::{CorrelationMode, SimConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SnrDb,
    InrDb,
    NumTaps,
    CorrelationMode,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr_db" => Ok(Self::SnrDb),
            "inr_db" => Ok(Self::InrDb),
            "num_taps" => Ok(Self::NumTaps),
            "correlation_mode" => Ok(Self::CorrelationMode),
            other => Err(Error::Config(format!(
                "unknown sweep axis {other:?} (expected snr_db, inr_db, num_taps or correlation_mode)"
            ))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SnrDb => "snr_db",
            Self::InrDb => "inr_db",
            Self::NumTaps => "num_taps",
            Self::CorrelationMode => "correlation_mode",
        })
    }
}

impl SweepAxis {
    /// Copy of `cfg` with this axis set to `value`.
    pub fn apply(&self, cfg: &SimConfig, value: &str) -> Result<SimConfig> {
        let bad = || Error::Config(format!("invalid {self} value {value:?}"));
        let mut out = *cfg;
        match self {
            Self::SnrDb => out.noise.snr_db = value.trim().parse().map_err(|_| bad())?,
            Self::InrDb => out.noise.inr_db = value.trim().parse().map_err(|_| bad())?,
            Self::NumTaps => out.channel.num_taps = value.trim().parse().map_err(|_| bad())?,
            Self::CorrelationMode => {
                out.channel.correlation_mode = match value.trim() {
                    "iid" => CorrelationMode::Iid,
                    "identical" => CorrelationMode::Identical,
                    _ => return Err(bad()),
                }
            }
        }
        out.validate()?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: String,
    pub campaign: Campaign,
}

/// One campaign per value, all on the same base seed.
pub fn sweep(
    cfg: &SimConfig,
    axis: SweepAxis,
    values: &[String],
    n_trials: usize,
    base_seed: u64,
    exec: Execution,
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::Config("a sweep needs at least one value".into()));
    }
    let configs = values.iter().map(|v| axis.apply(cfg, v)).collect::<Result<Vec<_>>>()?;
    values
        .iter()
        .zip(&configs)
        .map(|(v, c)| {
            Ok(SweepPoint {
                value: v.trim().to_string(),
                campaign: run_campaign(c, n_trials, base_seed, exec)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_parse_and_apply() {
        let cfg = SimConfig::default();
        let axis: SweepAxis = "inr_db".parse().unwrap();
        assert_eq!(axis.apply(&cfg, "20").unwrap().noise.inr_db, 20.0);
        let axis: SweepAxis = "num_taps".parse().unwrap();
        assert_eq!(axis.apply(&cfg, "8").unwrap().channel.num_taps, 8);
        let axis: SweepAxis = "correlation_mode".parse().unwrap();
        assert_eq!(
            axis.apply(&cfg, "identical").unwrap().channel.correlation_mode,
            CorrelationMode::Identical
        );
        assert!("bandwidth".parse::<SweepAxis>().is_err());
        assert!(SweepAxis::NumTaps.apply(&cfg, "0").is_err());
        assert!(SweepAxis::SnrDb.apply(&cfg, "loud").is_err());
    }

    #[test]
    fn single_value_matches_campaign() {
        let cfg = SimConfig::default();
        let points = sweep(&cfg, SweepAxis::SnrDb, &["10".into()], 5, 9, Execution::Sequential).unwrap();
        let direct = run_campaign(&cfg, 5, 9, Execution::Sequential).unwrap();
        assert_eq!(points[0].campaign, direct);
    }
}
