//! Per-subcarrier MIMO detection.

pub mod linear;
pub mod ml;
pub mod observation;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::heuristic::{de_detect, pso_detect, DeParams, PsoParams};
use crate::ofdm::QamConstellation;
use crate::rng::SimRng;

pub use crate::ofdm::quantize_to_constellation;
pub use linear::{detect_mmse, detect_mmse_soft, detect_zf, detect_zf_soft, linear_filter, LinearFilter};
pub use ml::{detect_ml, detect_ml_naive, ml_candidate_count, ML_BUDGET};
pub use observation::{fitness, real_decompose, stack_complex, unstack_real, MimoObservation, RealDecomposition};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DetectorMeta {
    /// Candidates visited (ML), iterations or generations (heuristics), 1
    /// for linear receivers.
    pub iterations: usize,
    /// `||y - H x_hat||^2` of the returned symbols.
    pub fitness: f64,
    pub flops: f64,
    /// Set when the linear receiver fell back to random decisions.
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorResult {
    pub x_hat: Vec<Complex64>,
    pub labels: Vec<usize>,
    pub hard_bits: Vec<u8>,
    pub meta: DetectorMeta,
}

impl DetectorResult {
    pub fn from_labels(labels: Vec<usize>, c: &QamConstellation, meta: DetectorMeta) -> Self {
        let x_hat = labels.iter().map(|&l| c.points()[l]).collect();
        let mut hard_bits = Vec::with_capacity(labels.len() * c.bits_per_symbol());
        for &l in &labels {
            c.push_label_bits(l, &mut hard_bits);
        }
        DetectorResult { x_hat, labels, hard_bits, meta }
    }

    /// Bit errors against transmitted labels.
    pub fn bit_errors(&self, sent: &[usize]) -> u64 {
        self.labels.iter().zip(sent).map(|(a, b)| (a ^ b).count_ones() as u64).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Detector {
    Ml,
    Zf,
    Mmse,
    Pso(PsoParams),
    De(DeParams),
}

impl Detector {
    pub fn name(&self) -> &'static str {
        match self {
            Detector::Ml => "ml",
            Detector::Zf => "zf",
            Detector::Mmse => "mmse",
            Detector::Pso(_) => "pso",
            Detector::De(_) => "de",
        }
    }

    pub fn detect(&self, obs: &MimoObservation, rng: &mut SimRng) -> Result<DetectorResult> {
        match self {
            Detector::Ml => detect_ml(obs),
            Detector::Zf => Ok(detect_zf(obs, rng)),
            Detector::Mmse => Ok(detect_mmse(obs, rng)),
            Detector::Pso(p) => {
                let rd = real_decompose(obs);
                Ok(pso_detect(&rd, obs.constellation, p, rng.random())?.result)
            }
            Detector::De(p) => {
                let rd = real_decompose(obs);
                Ok(de_detect(&rd, obs.constellation, p, rng.random())?.result)
            }
        }
    }
}
