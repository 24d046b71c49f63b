mod common;

use common::ProtocolModel;
use iasim::protocol::{run_sync, step, Event, Phase, ProtocolConfig, ProtocolState};
use iasim::rng::{mix_seed, stream_rng, Stream};
use iasim::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_event<R: Rng>(rng: &mut R, cfg: &ProtocolConfig, n_users: usize) -> Event {
    match rng.random_range(0..7) {
        0 => Event::Beacon {
            id: cfg.interferer_id,
            snr_db: cfg.decode_threshold_db + 1.0,
        },
        1 => Event::Beacon {
            id: cfg.main_id,
            snr_db: 30.0,
        },
        2 => Event::Beacon {
            id: cfg.interferer_id,
            snr_db: cfg.decode_threshold_db - 1.0,
        },
        3 => Event::PilotInterfererDone,
        4 => Event::PilotMainDone,
        5 => Event::Feedback {
            user: rng.random_range(0..=n_users),
        },
        _ => Event::Tick,
    }
}

#[test]
fn random_event_orders_agree_with_reference_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..10_000 {
        let n_users = rng.random_range(1..=4);
        let cfg = ProtocolConfig {
            training_symbols: rng.random_range(1..=2),
            ..Default::default()
        };
        let mut model = ProtocolModel::new(
            n_users,
            cfg.interferer_id,
            cfg.decode_threshold_db,
            cfg.training_symbols,
        );
        let mut state = ProtocolState::default();
        for _ in 0..rng.random_range(1..30) {
            let e = random_event(&mut rng, &cfg, n_users);
            let legal = model.apply(&e);
            match step(&state, &e, &cfg, n_users) {
                Ok(next) => {
                    assert!(legal, "{e} accepted in {}", state.phase);
                    assert!(next.phase >= state.phase);
                    assert_eq!(next.slot, state.slot + 1);
                    assert_eq!(next.phase, model.phase());
                    state = next;
                }
                Err(Error::ProtocolViolation { phase, event }) => {
                    assert!(!legal, "{e} rejected in {}", state.phase);
                    assert_eq!(phase, state.phase.to_string());
                    assert_eq!(event, e.to_string());
                    break;
                }
                Err(other) => panic!("unexpected error {other}"),
            }
        }
    }
}

#[test]
fn legal_orders_reach_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..2000 {
        let n_users = rng.random_range(1..=5);
        let cfg = ProtocolConfig {
            training_symbols: rng.random_range(1..=3),
            ..Default::default()
        };
        let mut events = Vec::new();
        for _ in 0..rng.random_range(0..5) {
            events.push(if rng.random() {
                Event::Tick
            } else {
                Event::Beacon { id: 77, snr_db: 20.0 }
            });
        }
        events.push(Event::Beacon {
            id: cfg.interferer_id,
            snr_db: cfg.decode_threshold_db,
        });
        let mut body: Vec<Event> = Vec::new();
        body.extend(std::iter::repeat_n(Event::PilotInterfererDone, cfg.training_symbols));
        body.extend(std::iter::repeat_n(Event::PilotMainDone, cfg.training_symbols));
        let mut users: Vec<usize> = (0..n_users).collect();
        users.shuffle(&mut rng);
        body.extend(users.into_iter().map(|user| Event::Feedback { user }));
        for e in body {
            if rng.random_bool(0.3) {
                events.push(Event::Tick);
            }
            events.push(e);
        }
        let mut s = ProtocolState::default();
        for e in &events {
            s = step(&s, e, &cfg, n_users).unwrap();
        }
        assert_eq!(s.phase, Phase::Schedule);
    }
}

fn mean_slots(p: f64, runs: u64) -> f64 {
    let cfg = ProtocolConfig {
        miss_probability: p,
        ..Default::default()
    };
    let total: u64 = (0..runs)
        .map(|i| {
            run_sync(&cfg, 3, &mut stream_rng(mix_seed(99, i), Stream::Protocol))
                .unwrap()
                .slots_to_detect
        })
        .sum();
    total as f64 / runs as f64
}

#[test]
fn slots_to_detect_is_geometric() {
    for p in [0.0, 0.25, 0.5, 0.9] {
        let mean = mean_slots(p, 10_000);
        let expected = 1.0 / (1.0 - p);
        assert!(
            (mean - expected).abs() <= 0.05 * expected,
            "p={p}: {mean} vs {expected}"
        );
    }
}

#[test]
fn traces_are_monotone_and_end_in_schedule() {
    let cfg = ProtocolConfig {
        miss_probability: 0.6,
        training_symbols: 2,
        ..Default::default()
    };
    for i in 0..500 {
        let trace = run_sync(&cfg, 3, &mut stream_rng(i, Stream::Protocol)).unwrap();
        assert!(trace
            .records
            .windows(2)
            .all(|w| w[0].phase <= w[1].phase && w[0].slot + 1 == w[1].slot));
        assert_eq!(trace.final_phase(), Some(Phase::Schedule));
        assert_eq!(trace.records[0].slot, 1);
    }
}
