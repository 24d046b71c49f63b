//! Experiment orchestration: configuration, trials, campaigns, sweeps and
//! result files.

mod campaign;
mod config;
mod output;
mod sweep;
mod trial;

pub use campaign::{median, run_campaign, Campaign, CampaignSummary, Execution, SUMMARY_HEADER};
pub use config::{ChannelSection, CorrelationMode, NoiseSection, PolicySection, SimConfig, SystemSection, TrunkPolicy};
pub use output::{write_campaign, write_sweep, write_traces, SUMMARY_FILE, TRACE_FILE, TRIALS_FILE};
pub use sweep::{sweep, SweepAxis, SweepPoint};
pub use trial::{round12, run_trial, run_trial_detailed, Spectra, StreamId, TrialOutcome, TrialRecord};
