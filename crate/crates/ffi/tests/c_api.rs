use std::ffi::{CStr, CString};
use std::ptr;

use iasim::harness::{run_campaign, run_trial, Execution, SimConfig};
use iasim_ffi::*;

fn last_error() -> String {
    let p = iasim_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn config_from(toml: &str) -> (IaStatus, *mut IaConfig) {
    let src = CString::new(toml).unwrap();
    let mut cfg = ptr::null_mut();
    let st = unsafe { iasim_config_from_toml(src.as_ptr(), &mut cfg) };
    (st, cfg)
}

#[test]
fn trial_matches_library() {
    let cfg = iasim_config_default();
    let mut out = IaTrialSummary {
        r_d: 0.0,
        r_ref_max_sinr: 0.0,
        r_ref_round_robin: 0.0,
        gain: 0.0,
        n_streams: 0,
        sync_slots: 0,
    };
    assert_eq!(unsafe { iasim_run_trial(cfg, 17, &mut out) }, IaStatus::Ok);
    let r = run_trial(&SimConfig::default(), 0, 17).unwrap();
    assert_eq!(out.r_d, r.r_d);
    assert_eq!(out.gain, r.gain);
    assert_eq!(out.r_ref_round_robin, r.r_ref_round_robin);
    assert_eq!(out.n_streams, r.streams.len());
    assert_eq!(out.sync_slots, r.sync_slots);
    unsafe { iasim_config_free(cfg) };
}

#[test]
fn setters_change_the_configuration() {
    let cfg = iasim_config_default();
    unsafe {
        assert_eq!(iasim_config_set_noise(cfg, 20.0, 20.0), IaStatus::Ok);
        assert_eq!(iasim_config_set_perfect_csi(cfg, true), IaStatus::Ok);
        assert_eq!(iasim_config_set_baseline(cfg, 1), IaStatus::Ok);
        assert_eq!(iasim_config_set_baseline(cfg, 9), IaStatus::InvalidArgument);
    }
    assert!(last_error().contains("unknown baseline"));

    let mut expected = SimConfig::default();
    expected.noise.snr_db = 20.0;
    expected.noise.inr_db = 20.0;
    expected.policies.perfect_csi = true;
    expected.policies.baseline = iasim::ofdma::OfdmaPolicy::RoundRobin;
    let r = run_trial(&expected, 0, 3).unwrap();
    let mut out = unsafe { std::mem::zeroed::<IaTrialSummary>() };
    assert_eq!(unsafe { iasim_run_trial(cfg, 3, &mut out) }, IaStatus::Ok);
    assert_eq!(out.gain, r.gain);
    unsafe { iasim_config_free(cfg) };
}

#[test]
fn toml_errors_map_to_config_status() {
    let (st, cfg) = config_from("[system]\nantennas = 2\n");
    assert_eq!(st, IaStatus::Config);
    assert!(cfg.is_null());
    assert!(last_error().contains("antennas"));

    let (st, cfg) = config_from("[noise]\nsnr_db = 5.0\n");
    assert_eq!(st, IaStatus::Ok);
    assert!(!cfg.is_null());
    unsafe { iasim_config_free(cfg) };
}

#[test]
fn sync_timeout_is_reported() {
    let (st, cfg) = config_from("[protocol]\nbeacon_snr_db = 0.0\nslot_cap = 50\n");
    assert_eq!(st, IaStatus::Ok);
    let mut out = unsafe { std::mem::zeroed::<IaTrialSummary>() };
    assert_eq!(unsafe { iasim_run_trial(cfg, 1, &mut out) }, IaStatus::SyncTimeout);
    unsafe { iasim_config_free(cfg) };
}

#[test]
fn campaign_round_trip() {
    let cfg = iasim_config_default();
    let mut camp = ptr::null_mut();
    assert_eq!(
        unsafe { iasim_campaign_run(cfg, 25, 42, false, &mut camp) },
        IaStatus::Ok
    );
    let lib = run_campaign(&SimConfig::default(), 25, 42, Execution::Sequential).unwrap();

    let mut s = unsafe { std::mem::zeroed::<IaCampaignSummary>() };
    assert_eq!(unsafe { iasim_campaign_summary(camp, &mut s) }, IaStatus::Ok);
    assert_eq!(s.n_trials, 25);
    assert_eq!(s.mean_gain, lib.summary.mean_gain);
    assert_eq!(s.ci95, lib.summary.ci95);

    let mut gains = vec![0.0; 40];
    let mut written = 0;
    assert_eq!(
        unsafe { iasim_campaign_gains(camp, gains.as_mut_ptr(), gains.len(), &mut written) },
        IaStatus::Ok
    );
    assert_eq!(written, 25);
    for (g, r) in gains.iter().zip(&lib.records) {
        assert_eq!(*g, r.gain);
    }

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { iasim_campaign_record_json(camp, 7, &mut json) }, IaStatus::Ok);
    let line = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert_eq!(line, lib.records[7].to_json_line());
    unsafe { iasim_string_free(json) };

    assert_eq!(
        unsafe { iasim_campaign_record_json(camp, 25, &mut json) },
        IaStatus::InvalidArgument
    );
    assert!(json.is_null());
    assert!(last_error().contains("out of range"));

    unsafe {
        iasim_campaign_free(camp);
        iasim_config_free(cfg);
    }
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = unsafe { std::mem::zeroed::<IaTrialSummary>() };
    assert_eq!(
        unsafe { iasim_run_trial(ptr::null(), 1, &mut out) },
        IaStatus::NullPointer
    );
    assert_eq!(last_error(), "cfg is null");
    let cfg = iasim_config_default();
    unsafe {
        assert_eq!(iasim_run_trial(cfg, 1, ptr::null_mut()), IaStatus::NullPointer);
        assert_eq!(iasim_config_set_noise(ptr::null_mut(), 1.0, 1.0), IaStatus::NullPointer);
        assert_eq!(
            iasim_config_from_toml(ptr::null(), ptr::null_mut()),
            IaStatus::NullPointer
        );
        let mut camp = ptr::null_mut();
        assert_eq!(
            iasim_campaign_run(ptr::null(), 1, 1, true, &mut camp),
            IaStatus::NullPointer
        );
        assert!(camp.is_null());
        assert_eq!(
            iasim_campaign_gains(ptr::null(), ptr::null_mut(), 0, ptr::null_mut()),
            IaStatus::NullPointer
        );
        iasim_campaign_free(ptr::null_mut());
        iasim_config_free(ptr::null_mut());
        iasim_string_free(ptr::null_mut());
        iasim_config_free(cfg);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/iasim.h")).unwrap();
    assert!(header.contains("#ifndef IASIM_H"));
    for name in [
        "iasim_last_error",
        "iasim_string_free",
        "iasim_config_default",
        "iasim_config_from_toml",
        "iasim_config_free",
        "iasim_config_set_noise",
        "iasim_config_set_perfect_csi",
        "iasim_config_set_baseline",
        "iasim_run_trial",
        "iasim_campaign_run",
        "iasim_campaign_free",
        "iasim_campaign_summary",
        "iasim_campaign_gains",
        "iasim_campaign_record_json",
        "IA_STATUS_SYNC_TIMEOUT",
        "typedef struct IaConfig IaConfig",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
