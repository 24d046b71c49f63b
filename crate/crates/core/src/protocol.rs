//! Synchronization and feedback sequence between the two stations and the
//! users.
//!
//! The interferer broadcasts a beacon carrying its ID each slot. Once the
//! main station decodes the expected ID, the interferer sends its training
//! symbols, then the main station sends its own, then every user feeds its
//! candidates back over the wired link. Scheduling fires when all feedback
//! has arrived.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ia::Candidate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    MainBs,
    InterferingBs,
    Ue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeRole {
    pub role: NodeKind,
    pub id: u32,
}

/// Checks that node IDs are unique.
pub fn validate_roles(nodes: &[NodeRole]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in nodes {
        if !seen.insert(n.id) {
            return Err(Error::Config(format!("duplicate node id {}", n.id)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Phase {
    Listen,
    TrainInterferer,
    TrainMain,
    Feedback,
    Schedule,
    Done,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Listen => "LISTEN",
            Phase::TrainInterferer => "TRAIN_INTERFERER",
            Phase::TrainMain => "TRAIN_MAIN",
            Phase::Feedback => "FEEDBACK",
            Phase::Schedule => "SCHEDULE",
            Phase::Done => "DONE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Beacon { id: u32, snr_db: f64 },
    PilotInterfererDone,
    PilotMainDone,
    Feedback { user: usize },
    Tick,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Beacon { id, snr_db } => write!(f, "beacon(id={id}, snr={snr_db})"),
            Event::PilotInterfererDone => f.write_str("pilot_i_done"),
            Event::PilotMainDone => f.write_str("pilot_m_done"),
            Event::Feedback { user } => write!(f, "feedback(user={user})"),
            Event::Tick => f.write_str("tick"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolConfig {
    pub main_id: u32,
    pub interferer_id: u32,
    /// Beacon SNR at the main station.
    pub beacon_snr_db: f64,
    pub decode_threshold_db: f64,
    /// Chance that an above-threshold beacon is still not decoded.
    pub miss_probability: f64,
    /// Training OFDM symbols per station.
    pub training_symbols: usize,
    pub slot_cap: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            main_id: 1,
            interferer_id: 2,
            beacon_snr_db: 10.0,
            decode_threshold_db: 3.0,
            miss_probability: 0.1,
            training_symbols: 1,
            slot_cap: 10_000,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.miss_probability) {
            return Err(Error::Config(format!(
                "protocol.miss_probability = {} must lie in [0, 1)",
                self.miss_probability
            )));
        }
        if self.training_symbols == 0 {
            return Err(Error::Config("protocol.training_symbols must be >= 1".into()));
        }
        if self.slot_cap == 0 {
            return Err(Error::Config("protocol.slot_cap must be >= 1".into()));
        }
        if self.main_id == self.interferer_id {
            return Err(Error::Config(
                "protocol.main_id and protocol.interferer_id must differ".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolState {
    pub phase: Phase,
    pub slot: u64,
    pub decoded_id: Option<u32>,
    pilots_seen: usize,
    feedback: BTreeSet<usize>,
}

impl Default for ProtocolState {
    fn default() -> Self {
        Self {
            phase: Phase::Listen,
            slot: 0,
            decoded_id: None,
            pilots_seen: 0,
            feedback: BTreeSet::new(),
        }
    }
}

impl ProtocolState {
    pub fn feedback_received(&self) -> &BTreeSet<usize> {
        &self.feedback
    }
}

/// Advances the machine by one slot. `n_users` feedbacks gate SCHEDULE.
pub fn step(state: &ProtocolState, event: &Event, cfg: &ProtocolConfig, n_users: usize) -> Result<ProtocolState> {
    let violation = || Error::ProtocolViolation {
        phase: state.phase.to_string(),
        event: event.to_string(),
    };
    let mut next = state.clone();
    next.slot += 1;
    match (state.phase, event) {
        (_, Event::Tick) => {
            if state.phase == Phase::Schedule {
                next.phase = Phase::Done;
            }
        }
        (Phase::Listen, Event::Beacon { id, snr_db }) => {
            if *snr_db >= cfg.decode_threshold_db {
                next.decoded_id = Some(*id);
                if *id == cfg.interferer_id {
                    next.phase = Phase::TrainInterferer;
                }
            }
        }
        (Phase::TrainInterferer, Event::PilotInterfererDone) => {
            next.pilots_seen += 1;
            if next.pilots_seen >= cfg.training_symbols {
                next.pilots_seen = 0;
                next.phase = Phase::TrainMain;
            }
        }
        (Phase::TrainMain, Event::PilotMainDone) => {
            next.pilots_seen += 1;
            if next.pilots_seen >= cfg.training_symbols {
                next.pilots_seen = 0;
                next.phase = Phase::Feedback;
            }
        }
        (Phase::Feedback, Event::Feedback { user }) => {
            if *user >= n_users || !next.feedback.insert(*user) {
                return Err(violation());
            }
            if next.feedback.len() == n_users {
                next.phase = Phase::Schedule;
            }
        }
        _ => return Err(violation()),
    }
    Ok(next)
}

/// One line of `trace.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub slot: u64,
    pub phase: Phase,
    pub event: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncTrace {
    pub records: Vec<TraceRecord>,
    /// Slot at which the interferer's beacon was decoded.
    pub slots_to_detect: u64,
}

impl SyncTrace {
    pub fn final_phase(&self) -> Option<Phase> {
        self.records.last().map(|r| r.phase)
    }
}

/// Drives [`step`] through a full synchronization round.
///
/// Every listening slot carries a beacon. One uniform draw per listening slot
/// decides whether an above-threshold beacon is missed; a missed beacon is
/// delivered as a `tick`. The trace ends on entering SCHEDULE.
pub fn run_sync<R: Rng + ?Sized>(cfg: &ProtocolConfig, n_users: usize, rng: &mut R) -> Result<SyncTrace> {
    cfg.validate()?;
    let mut state = ProtocolState::default();
    let mut records = Vec::new();
    let mut slots_to_detect = 0;
    let push = |state: &ProtocolState, event: &Event, records: &mut Vec<TraceRecord>| {
        records.push(TraceRecord {
            slot: state.slot,
            phase: state.phase,
            event: event.to_string(),
        });
    };

    while state.phase == Phase::Listen {
        if state.slot >= cfg.slot_cap {
            return Err(Error::SyncTimeout { slots: state.slot });
        }
        let missed = rng.random::<f64>() < cfg.miss_probability;
        let event = if missed {
            Event::Tick
        } else {
            Event::Beacon {
                id: cfg.interferer_id,
                snr_db: cfg.beacon_snr_db,
            }
        };
        state = step(&state, &event, cfg, n_users)?;
        push(&state, &event, &mut records);
        if state.phase == Phase::TrainInterferer {
            slots_to_detect = state.slot;
        }
    }

    let tail = std::iter::repeat_n(Event::PilotInterfererDone, cfg.training_symbols)
        .chain(std::iter::repeat_n(Event::PilotMainDone, cfg.training_symbols))
        .chain((0..n_users).map(|user| Event::Feedback { user }));
    for event in tail {
        state = step(&state, &event, cfg, n_users)?;
        push(&state, &event, &mut records);
    }
    debug_assert_eq!(state.phase, Phase::Schedule);
    Ok(SyncTrace {
        records,
        slots_to_detect,
    })
}

/// Per-user candidate lists gathered over the wired feedback link.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeedbackBundle {
    entries: BTreeMap<usize, Vec<Candidate>>,
}

impl FeedbackBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, user: usize, candidates: Vec<Candidate>) {
        self.entries.insert(user, candidates);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Flattens a complete bundle in (user, stream) order.
pub fn collect_feedback(bundle: &FeedbackBundle, n_users: usize) -> Result<Vec<Candidate>> {
    let missing: Vec<usize> = (0..n_users).filter(|u| !bundle.entries.contains_key(u)).collect();
    if !missing.is_empty() {
        return Err(Error::MissingFeedback(missing));
    }
    let mut out = Vec::new();
    for user in 0..n_users {
        let mut cands = bundle.entries[&user].clone();
        cands.sort_by_key(|c| c.stream);
        out.extend(cands);
    }
    Ok(out)
}
