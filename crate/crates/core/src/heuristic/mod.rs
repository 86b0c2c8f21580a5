//! Population-based detectors searching the real-valued symbol box.

pub mod calibrate;
pub mod de;
pub mod pso;
pub mod trace;

use num_complex::Complex64;

use crate::ofdm::QamConstellation;

pub use calibrate::{calibrate, CalibrationGrid, CalibrationPoint, CalibrationResult, GridCell};
pub use de::{de_detect, generate_trial, DeParams, TrialIndices};
pub use pso::{pso_detect, PsoParams, PsoState};
pub use trace::{convergence_profile, ConvergenceTrace, HeuristicOutcome, DEFAULT_PLATEAU_TOLERANCE};

pub(crate) fn resolve_bounds(bounds: Option<(f64, f64)>, c: &QamConstellation) -> (f64, f64) {
    bounds.unwrap_or((-c.max_level(), c.max_level()))
}

/// Index of the tuned parameter set (0, 0.5, 0.9) closest to `rho`.
pub(crate) fn nearest_rho_slot(rho: f64) -> usize {
    [0.0, 0.5, 0.9]
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &r)| {
            let d = (rho - r).abs();
            if d < acc.1 { (i, d) } else { acc }
        })
        .0
}

/// Slice a stacked `[Re; Im]` vector onto the constellation, returning the
/// per-antenna labels and the quantized real vector.
pub(crate) fn quantize_real(v: &[f64], c: &QamConstellation) -> (Vec<usize>, Vec<f64>) {
    let nt = v.len() / 2;
    let quantized: Vec<f64> = v.iter().map(|&x| c.slice_axis(x)).collect();
    let labels = (0..nt).map(|t| c.nearest_label(Complex64::new(quantized[t], quantized[nt + t]))).collect();
    (labels, quantized)
}
