//! TOML experiment configuration.
//!
//! ```toml
//! [system]
//! subcarriers = 4
//! free_dims = 1
//! users = 3
//! es = 1.0
//!
//! [channel]
//! num_taps = 4
//! max_delay = 4.0
//! power_decay = 0.0
//! anchor_first_tap = true
//! correlation_mode = "iid"      # or "identical"
//!
//! [noise]
//! snr_db = 10.0
//! inr_db = 10.0
//!
//! [policies]
//! baseline = "max_sinr"          # or "round_robin"
//! power_constraint = "per_stream" # or "total"
//! perfect_csi = false
//! trunk = "sylvester"            # or "random_unitary"
//!
//! [protocol]
//! main_id = 1
//! interferer_id = 2
//! beacon_snr_db = 10.0
//! decode_threshold_db = 3.0
//! miss_probability = 0.1
//! training_symbols = 1
//! slot_cap = 10000
//! ```
//!
//! Every key is optional and defaults to the value shown. Unknown keys are
//! rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelProfile;
use crate::error::{Error, Result};
use crate::ia::{PowerConstraint, SystemConfig};
use crate::ofdma::OfdmaPolicy;
use crate::protocol::ProtocolConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    /// Independent channels per user.
    #[default]
    Iid,
    /// Every user sees the same desired and interfering channel.
    Identical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TrunkPolicy {
    /// Both stations use the first `N_s` Sylvester-Hadamard columns.
    #[default]
    Sylvester,
    /// Each station draws its own random unitary trunk per trial.
    RandomUnitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSection {
    pub subcarriers: usize,
    pub free_dims: usize,
    pub users: usize,
    pub es: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            subcarriers: 4,
            free_dims: 1,
            users: 3,
            es: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSection {
    pub num_taps: usize,
    pub max_delay: f64,
    pub power_decay: f64,
    pub anchor_first_tap: bool,
    pub correlation_mode: CorrelationMode,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let p = ChannelProfile::default();
        Self {
            num_taps: p.num_taps,
            max_delay: p.max_delay,
            power_decay: p.power_decay,
            anchor_first_tap: p.anchor_first_tap,
            correlation_mode: CorrelationMode::Iid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    /// `es / σ²` in dB.
    pub snr_db: f64,
    /// `es_interferer / σ²` in dB.
    pub inr_db: f64,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            snr_db: 10.0,
            inr_db: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PolicySection {
    pub baseline: OfdmaPolicy,
    pub power_constraint: PowerConstraint,
    pub perfect_csi: bool,
    pub trunk: TrunkPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub system: SystemSection,
    pub channel: ChannelSection,
    pub noise: NoiseSection,
    pub policies: PolicySection,
    pub protocol: ProtocolConfig,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [("noise.snr_db", self.noise.snr_db), ("noise.inr_db", self.noise.inr_db)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{key} must be finite")));
            }
        }
        self.system()?;
        self.profile().validate()?;
        self.protocol.validate()
    }

    /// Noise variance from the symbol energy and SNR.
    pub fn sigma2(&self) -> f64 {
        self.system.es / db_to_linear(self.noise.snr_db)
    }

    /// Interferer per-stream symbol energy.
    pub fn es_interferer(&self) -> f64 {
        self.sigma2() * db_to_linear(self.noise.inr_db)
    }

    pub fn system(&self) -> Result<SystemConfig> {
        let mut sys = SystemConfig::new(
            self.system.subcarriers,
            self.system.free_dims,
            self.system.users,
            self.system.es,
            self.sigma2(),
        )?;
        sys.power = self.policies.power_constraint;
        Ok(sys)
    }

    pub fn profile(&self) -> ChannelProfile {
        ChannelProfile {
            num_taps: self.channel.num_taps,
            max_delay: self.channel.max_delay,
            power_decay: self.channel.power_decay,
            anchor_first_tap: self.channel.anchor_first_tap,
        }
    }
}
