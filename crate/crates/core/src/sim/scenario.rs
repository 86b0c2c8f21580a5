//! Scenario description consumed by the link simulator.

use serde::{Deserialize, Serialize};

use crate::detect::{ml_candidate_count, Detector, ML_BUDGET};
use crate::error::{Result, SimError};
use crate::fading::{ArrayKind, CorrelationSpec};
use crate::ofdm::OfdmConfig;

/// How channel taps evolve in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ChannelMode {
    /// Each tap of each antenna pair is an independent sum-of-oscillators
    /// fading process sampled once per OFDM symbol.
    MultipathJakes {
        tau_rms_s: f64,
        max_doppler_hz: f64,
        num_oscillators: usize,
        /// Spacing between successive channel samples; `None` uses
        /// `1 / (100 f_D)`.
        sample_period_s: Option<f64>,
        power_floor_db: f64,
    },
    /// Taps drawn i.i.d. Rayleigh once per trial and held for all of its
    /// symbols.
    BlockStaticRayleigh { tau_rms_s: f64, power_floor_db: f64 },
}

impl ChannelMode {
    pub fn tau_rms_s(&self) -> f64 {
        match self {
            ChannelMode::MultipathJakes { tau_rms_s, .. } | ChannelMode::BlockStaticRayleigh { tau_rms_s, .. } => {
                *tau_rms_s
            }
        }
    }

    pub fn power_floor_db(&self) -> f64 {
        match self {
            ChannelMode::MultipathJakes { power_floor_db, .. }
            | ChannelMode::BlockStaticRayleigh { power_floor_db, .. } => *power_floor_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    /// Stop a point once this many bit errors are collected...
    pub min_errors: u64,
    /// ...and at least this many trials have run.
    pub min_trials: u64,
    /// Hard cap on trials per point.
    pub max_trials: u64,
    /// Trials dispatched between stop checks. Fixed so results do not
    /// depend on the worker count.
    pub batch_trials: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule { min_errors: 200, min_trials: 16, max_trials: 20_000, batch_trials: 16 }
    }
}

impl StoppingRule {
    pub fn fixed(trials: u64) -> Self {
        StoppingRule { min_errors: u64::MAX, min_trials: trials, max_trials: trials, batch_trials: trials.clamp(1, 64) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_trials == 0 || self.batch_trials == 0 {
            return Err(SimError::invalid("stopping", "max_trials and batch_trials must be > 0"));
        }
        if self.min_errors == 0 {
            return Err(SimError::invalid("stopping.min_errors", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    pub ofdm: OfdmConfig,
    pub order: usize,
    pub nt: usize,
    pub nr: usize,
    /// Applied to both the transmit and the receive array.
    pub correlation: CorrelationSpec,
    pub detector: Detector,
    pub channel: ChannelMode,
    pub ebn0_db: Vec<f64>,
    pub stopping: StoppingRule,
    /// Detected OFDM symbols per trial; one extra leading symbol is sent
    /// so prefix-overrun interference is always present.
    pub symbols_per_trial: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.ofdm.validate()?;
        if self.nt == 0 || self.nr == 0 {
            return Err(SimError::invalid("antennas", "nt and nr must be >= 1"));
        }
        if self.ebn0_db.is_empty() {
            return Err(SimError::invalid("ebn0_db", "grid must not be empty"));
        }
        if self.ebn0_db.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(SimError::invalid("ebn0_db", "values must be finite or +inf"));
        }
        if self.symbols_per_trial == 0 {
            return Err(SimError::invalid("symbols_per_trial", "must be >= 1"));
        }
        self.stopping.validate()?;
        if let ArrayKind::Ura { nx, ny } = self.correlation.array {
            if nx * ny != self.nt || nx * ny != self.nr {
                return Err(SimError::invalid(
                    "array",
                    format!("URA {nx}x{ny} does not match {}x{} antennas", self.nt, self.nr),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.correlation.rho) {
            return Err(SimError::invalid("rho", "must lie in [0, 1]"));
        }
        match &self.channel {
            ChannelMode::MultipathJakes { max_doppler_hz, num_oscillators, sample_period_s, .. } => {
                if !(*max_doppler_hz >= 0.0) || *num_oscillators == 0 {
                    return Err(SimError::invalid("channel", "need max_doppler_hz >= 0 and num_oscillators >= 1"));
                }
                if let Some(ts) = sample_period_s {
                    if !(*ts > 0.0) {
                        return Err(SimError::invalid("channel.sample_period_s", "must be > 0"));
                    }
                }
            }
            ChannelMode::BlockStaticRayleigh { .. } => {}
        }
        if !(self.channel.tau_rms_s() >= 0.0) {
            return Err(SimError::invalid("tau_rms_s", "must be >= 0"));
        }
        match &self.detector {
            Detector::Ml => {
                let count = ml_candidate_count(self.order, self.nt);
                if count > ML_BUDGET {
                    return Err(SimError::MlBudgetExceeded { candidates: count, budget: ML_BUDGET });
                }
            }
            Detector::Pso(p) => p.validate()?,
            Detector::De(p) => p.validate()?,
            Detector::Zf | Detector::Mmse => {}
        }
        Ok(())
    }

    pub fn with_detector(&self, detector: Detector) -> Self {
        ScenarioConfig { detector, ..self.clone() }
    }

    pub fn with_correlation(&self, correlation: CorrelationSpec) -> Self {
        ScenarioConfig { correlation, ..self.clone() }
    }

    /// Short hex digest of the serialized configuration.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("scenario serializes");
        let digest = Sha256::digest(&json);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
