//! Link-level simulation of non-classic downlink interference alignment.
//!
//! A main base station serves `N_u` single-antenna users over `K` OFDM
//! subcarriers while a second base station interferes. Both stations confine
//! their transmissions to an `N_s = K - N_f` dimensional Hadamard trunk, which
//! leaves an `N_f` dimensional hole at every user. Each user projects onto the
//! null space of its interfering reduced channel, feeds the resulting
//! precoding directions back, and the main station picks the rate-maximizing
//! subset by exhaustive search and zero-forces the intra-cell interference.
//! The resulting rate is compared against classical OFDMA.
//!
//! Module map:
//!
//! * [`numerics`]: complex matrices, Hadamard trunk, SVD, inversion.
//! * [`channel`]: tapped-delay-line fading, frequency responses, AWGN, LS
//!   estimation.
//! * [`ia`]: null space, candidates, scheduling, ZF, rates, symbol oracle.
//! * [`ofdma`]: the reference scheme.
//! * [`protocol`]: the synchronization and feedback state machine.
//! * [`harness`]: configuration, trials, campaigns, sweeps, output files.

pub mod channel;
pub mod error;
pub mod harness;
pub mod ia;
pub mod numerics;
pub mod ofdma;
pub mod protocol;
pub mod rng;

pub use error::{Error, Result};
