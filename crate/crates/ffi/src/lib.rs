//! C interface to the simulator.
//!
//! Configurations and campaigns are opaque handles created and released
//! through this API. Every fallible call returns an [`IaStatus`]; on failure
//! `iasim_last_error()` describes the problem on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use iasim::harness::{run_campaign, run_trial, Campaign, Execution, SimConfig};
use iasim::ofdma::OfdmaPolicy;
use iasim::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IaStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Numerical = 3,
    SyncTimeout = 4,
    InvalidArgument = 5,
    Io = 6,
    Panic = 7,
}

/// Simulation configuration.
pub struct IaConfig {
    inner: SimConfig,
}

/// Finished campaign: per-trial records and the summary.
pub struct IaCampaign {
    inner: Campaign,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IaTrialSummary {
    pub r_d: f64,
    pub r_ref_max_sinr: f64,
    pub r_ref_round_robin: f64,
    pub gain: f64,
    pub n_streams: usize,
    pub sync_slots: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IaCampaignSummary {
    pub n_trials: usize,
    pub mean_gain: f64,
    pub median_gain: f64,
    pub min_gain: f64,
    pub max_gain: f64,
    pub ci95: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> IaStatus {
    match err {
        Error::Trial { source, .. } => status_of(source),
        Error::Io(_) => IaStatus::Io,
        _ => match err.exit_code() {
            2 => IaStatus::Config,
            4 => IaStatus::SyncTimeout,
            _ => IaStatus::Numerical,
        },
    }
}

fn guard(f: impl FnOnce() -> Result<(), (IaStatus, String)>) -> IaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IaStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (IaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (IaStatus, String) {
    (IaStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn iasim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn iasim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Demo configuration: 4 subcarriers, 1 free dimension, 3 users, 10 dB SNR
/// and INR. Release with `iasim_config_free`.
#[no_mangle]
pub extern "C" fn iasim_config_default() -> *mut IaConfig {
    Box::into_raw(Box::new(IaConfig {
        inner: SimConfig::default(),
    }))
}

/// Parses a TOML configuration document.
///
/// # Safety
/// `toml` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iasim_config_from_toml(toml: *const c_char, out: *mut *mut IaConfig) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|_| (IaStatus::InvalidArgument, "config is not UTF-8".to_string()))?;
        let inner = SimConfig::from_toml_str(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(IaConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn iasim_config_free(cfg: *mut IaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets SNR and INR in dB.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iasim_config_set_noise(cfg: *mut IaConfig, snr_db: f64, inr_db: f64) -> IaStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        let mut next = cfg.inner;
        next.noise.snr_db = snr_db;
        next.noise.inr_db = inr_db;
        next.validate().map_err(lib_err)?;
        cfg.inner = next;
        Ok(())
    })
}

/// Toggles perfect channel knowledge (no estimation noise).
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iasim_config_set_perfect_csi(cfg: *mut IaConfig, perfect: bool) -> IaStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        cfg.inner.policies.perfect_csi = perfect;
        Ok(())
    })
}

/// Selects the OFDMA baseline: 0 = max SINR, 1 = round robin.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iasim_config_set_baseline(cfg: *mut IaConfig, policy: u32) -> IaStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        cfg.inner.policies.baseline = match policy {
            0 => OfdmaPolicy::MaxSinr,
            1 => OfdmaPolicy::RoundRobin,
            p => return Err((IaStatus::InvalidArgument, format!("unknown baseline {p}"))),
        };
        Ok(())
    })
}

/// Runs one trial on `seed`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iasim_run_trial(cfg: *const IaConfig, seed: u64, out: *mut IaTrialSummary) -> IaStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = run_trial(&cfg.inner, 0, seed).map_err(lib_err)?;
        *out = IaTrialSummary {
            r_d: r.r_d,
            r_ref_max_sinr: r.r_ref_max_sinr,
            r_ref_round_robin: r.r_ref_round_robin,
            gain: r.gain,
            n_streams: r.streams.len(),
            sync_slots: r.sync_slots,
        };
        Ok(())
    })
}

/// Runs `n_trials` trials from `base_seed`, in parallel unless
/// `sequential`. Release the result with `iasim_campaign_free`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iasim_campaign_run(
    cfg: *const IaConfig,
    n_trials: usize,
    base_seed: u64,
    sequential: bool,
    out: *mut *mut IaCampaign,
) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let exec = if sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        };
        let inner = run_campaign(&cfg.inner, n_trials, base_seed, exec).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(IaCampaign { inner }));
        Ok(())
    })
}

/// # Safety
/// `campaign` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn iasim_campaign_free(campaign: *mut IaCampaign) {
    if !campaign.is_null() {
        drop(Box::from_raw(campaign));
    }
}

/// # Safety
/// `campaign` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iasim_campaign_summary(campaign: *const IaCampaign, out: *mut IaCampaignSummary) -> IaStatus {
    guard(|| {
        let c = campaign.as_ref().ok_or_else(|| null("campaign"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = &c.inner.summary;
        *out = IaCampaignSummary {
            n_trials: s.n_trials,
            mean_gain: s.mean_gain,
            median_gain: s.median_gain,
            min_gain: s.min_gain,
            max_gain: s.max_gain,
            ci95: s.ci95,
        };
        Ok(())
    })
}

/// Copies up to `len` per-trial gains into `buf`; `written` receives the
/// count copied.
///
/// # Safety
/// `campaign` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn iasim_campaign_gains(
    campaign: *const IaCampaign,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> IaStatus {
    guard(|| {
        let c = campaign.as_ref().ok_or_else(|| null("campaign"))?;
        if buf.is_null() && len > 0 {
            return Err(null("buf"));
        }
        let n = len.min(c.inner.records.len());
        for (i, r) in c.inner.records.iter().take(n).enumerate() {
            *buf.add(i) = r.gain;
        }
        if let Some(w) = written.as_mut() {
            *w = n;
        }
        Ok(())
    })
}

/// JSON line of trial `index`. Free with `iasim_string_free`.
///
/// # Safety
/// `campaign` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iasim_campaign_record_json(
    campaign: *const IaCampaign,
    index: usize,
    out: *mut *mut c_char,
) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let c = campaign.as_ref().ok_or_else(|| null("campaign"))?;
        let r = c.inner.records.get(index).ok_or_else(|| {
            (
                IaStatus::InvalidArgument,
                format!("trial {index} out of range ({} trials)", c.inner.records.len()),
            )
        })?;
        *out = CString::new(r.to_json_line()).expect("JSON has no nul").into_raw();
        Ok(())
    })
}
