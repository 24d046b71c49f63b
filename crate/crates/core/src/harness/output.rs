//! Result files: `trials.jsonl`, `summary.csv`, `trace.jsonl`.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::campaign::{Campaign, SUMMARY_HEADER};
use super::sweep::{SweepAxis, SweepPoint};
use crate::error::Result;
use crate::protocol::TraceRecord;

pub const TRIALS_FILE: &str = "trials.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRACE_FILE: &str = "trace.jsonl";

/// Writes a single campaign; its summary row has axis `all`.
pub fn write_campaign(dir: &Path, campaign: &Campaign) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(TRIALS_FILE), campaign.jsonl())?;
    let csv = format!("{SUMMARY_HEADER}\n{}\n", campaign.summary.csv_row("all"));
    fs::write(dir.join(SUMMARY_FILE), csv)?;
    Ok(())
}

/// Writes one summary row per point to `dir/summary.csv` and each point's
/// records to `dir/<axis>=<value>/trials.jsonl`.
pub fn write_sweep(dir: &Path, axis: SweepAxis, points: &[SweepPoint]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut csv = format!("{SUMMARY_HEADER}\n");
    for p in points {
        csv.push_str(&p.campaign.summary.csv_row(&p.value));
        csv.push('\n');
        let sub = dir.join(format!("{axis}={}", p.value));
        fs::create_dir_all(&sub)?;
        fs::write(sub.join(TRIALS_FILE), p.campaign.jsonl())?;
    }
    fs::write(dir.join(SUMMARY_FILE), csv)?;
    Ok(())
}

#[derive(Serialize)]
struct RunTrace<'a> {
    run: usize,
    #[serde(flatten)]
    record: &'a TraceRecord,
}

/// Writes `{run, slot, phase, event}` lines for every run.
pub fn write_traces(dir: &Path, traces: &[Vec<TraceRecord>]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut out = String::new();
    for (run, records) in traces.iter().enumerate() {
        for record in records {
            out.push_str(&serde_json::to_string(&RunTrace { run, record }).expect("trace serializes"));
            out.push('\n');
        }
    }
    fs::write(dir.join(TRACE_FILE), out)?;
    Ok(())
}
