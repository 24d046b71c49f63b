use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use iasim::harness::{
    run_campaign, run_trial_detailed, sweep, write_campaign, write_sweep, write_traces, Execution, SimConfig, SweepAxis,
};
use iasim::protocol::run_sync;
use iasim::rng::{mix_seed, stream_rng, Stream};
use iasim::{Error, Result};

#[derive(Parser)]
#[command(
    name = "iasim",
    version,
    about = "Non-classic interference alignment vs. OFDMA link-level simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and print its record.
    Trial {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print per-stream SNR next to the OFDMA SINR of each subcarrier.
        #[arg(long)]
        verbose: bool,
    },
    /// Monte Carlo campaign; writes trials.jsonl and summary.csv.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (1 runs sequentially).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// One campaign per axis value.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// snr_db, inr_db, num_taps or correlation_mode.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Repeated synchronization runs.
    Protocol {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        miss_prob: Option<f64>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for trace.jsonl.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: Option<&Path>) -> Result<SimConfig> {
    match path {
        Some(p) => SimConfig::load(p),
        None => Ok(SimConfig::default()),
    }
}

fn execution(jobs: Option<usize>) -> Result<Execution> {
    match jobs {
        Some(0) => Err(Error::Config("--jobs must be >= 1".into())),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            // a second call in the same process is harmless; keep the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Trial { config, seed, verbose } => {
            let cfg = load(config.as_deref())?;
            let outcome = run_trial_detailed(&cfg, 0, seed)?;
            println!("{}", outcome.record.to_json_line());
            if verbose {
                let r = &outcome.record;
                eprintln!("IA streams (r_d = {} bits):", r.r_d);
                for (s, (snr, a)) in r.streams.iter().zip(r.stream_snr.iter().zip(&r.alpha)) {
                    eprintln!(
                        "  user {} stream {}: SNR {:.2} dB, alpha {:.4}",
                        s.user,
                        s.stream,
                        10.0 * snr.log10(),
                        a
                    );
                }
                for (policy, assignment, rate) in &outcome.ofdma {
                    eprintln!("OFDMA {policy:?} (r_ref = {rate:.6} bits):");
                    for (q, (u, rho)) in assignment.owner.iter().zip(assignment.owned_sinr()).enumerate() {
                        eprintln!("  subcarrier {q} -> user {u}: SINR {:.2} dB", 10.0 * rho.log10());
                    }
                }
                eprintln!("gain {} over {:?}", r.gain, cfg.policies.baseline);
            }
        }
        Command::Run {
            config,
            trials,
            seed,
            out,
            jobs,
        } => {
            let cfg = load(config.as_deref())?;
            let campaign = run_campaign(&cfg, trials, seed, execution(jobs)?)?;
            write_campaign(&out, &campaign)?;
            let s = &campaign.summary;
            println!(
                "{} trials: mean gain {:.6} (median {:.6}, min {:.6}, max {:.6}, ci95 {:.6})",
                s.n_trials, s.mean_gain, s.median_gain, s.min_gain, s.max_gain, s.ci95
            );
        }
        Command::Sweep {
            config,
            axis,
            values,
            trials,
            seed,
            out,
            jobs,
        } => {
            let cfg = load(config.as_deref())?;
            let axis: SweepAxis = axis.parse()?;
            let points = sweep(&cfg, axis, &values, trials, seed, execution(jobs)?)?;
            write_sweep(&out, axis, &points)?;
            for p in &points {
                let s = &p.campaign.summary;
                println!("{axis}={}: mean gain {:.6} ± {:.6}", p.value, s.mean_gain, s.ci95);
            }
        }
        Command::Protocol {
            config,
            miss_prob,
            runs,
            seed,
            out,
        } => {
            let mut cfg = load(config.as_deref())?;
            if let Some(p) = miss_prob {
                cfg.protocol.miss_probability = p;
            }
            cfg.validate()?;
            if runs == 0 {
                return Err(Error::Config("--runs must be >= 1".into()));
            }
            let mut traces = Vec::with_capacity(runs);
            let mut total = 0u64;
            for i in 0..runs {
                let mut rng = stream_rng(mix_seed(seed, i as u64), Stream::Protocol);
                let trace = run_sync(&cfg.protocol, cfg.system.users, &mut rng)?;
                total += trace.slots_to_detect;
                traces.push(trace.records);
            }
            if let Some(dir) = out {
                write_traces(&dir, &traces)?;
            }
            let p = cfg.protocol.miss_probability;
            println!(
                "{runs} runs: mean slots-to-detect {:.4} (geometric mean 1/(1-p) = {:.4})",
                total as f64 / runs as f64,
                1.0 / (1.0 - p)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
