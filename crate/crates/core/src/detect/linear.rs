//! Zero-forcing and MMSE linear receivers.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;

use super::observation::MimoObservation;
use super::{DetectorMeta, DetectorResult};
use crate::linalg::{CMatrix, CVector};
use crate::sim::flops::{flop_count, FlopModel};

/// Gram matrices with a larger condition number are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Linear receiver `W = (H^H H + delta I)^{-1} H^H`.
#[derive(Debug, Clone)]
pub struct LinearFilter {
    pub w: CMatrix,
    /// Condition number of the regularized Gram matrix.
    pub condition: f64,
}

impl LinearFilter {
    pub fn is_singular(&self) -> bool {
        !(self.condition <= MAX_CONDITION)
    }
}

/// Build the filter through a Hermitian eigendecomposition of `H^H H`.
/// The regularizer is added to the eigenvalues, so `delta = 0` reproduces
/// the zero-forcing filter bit for bit.
pub fn linear_filter(h: &CMatrix, delta: f64) -> LinearFilter {
    let hh = h.adjoint();
    let gram = &hh * h;
    let eig = SymmetricEigen::new(gram);
    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0) + delta).collect();
    let max = shifted.iter().cloned().fold(0.0, f64::max);
    let min = shifted.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    let v = &eig.eigenvectors;
    let inv_diag = CMatrix::from_diagonal(&CVector::from_iterator(
        shifted.len(),
        shifted.iter().map(|&l| Complex64::new(if l > 0.0 { 1.0 / l } else { 0.0 }, 0.0)),
    ));
    let w = v * inv_diag * v.adjoint() * hh;
    LinearFilter { w, condition }
}

fn run_linear<R: Rng + ?Sized>(
    obs: &MimoObservation,
    delta: f64,
    flops: f64,
    rng: &mut R,
) -> (DetectorResult, CVector) {
    let c = obs.constellation;
    let filter = linear_filter(&obs.h, delta);
    let soft = &filter.w * &obs.y;
    let singular = filter.is_singular();
    let labels: Vec<usize> = if singular {
        (0..obs.nt()).map(|_| rng.random_range(0..c.order())).collect()
    } else {
        soft.iter().map(|&z| c.nearest_label(z)).collect()
    };
    let x: Vec<Complex64> = labels.iter().map(|&l| c.points()[l]).collect();
    let meta = DetectorMeta { iterations: 1, fitness: obs.metric(&x), flops, singular };
    (DetectorResult::from_labels(labels, c, meta), soft)
}

/// Zero-forcing detection. Returns the result and the unquantized estimate.
pub fn detect_zf_soft<R: Rng + ?Sized>(obs: &MimoObservation, rng: &mut R) -> (DetectorResult, CVector) {
    let flops = flop_count(&FlopModel::Zf, obs.nt(), obs.nr());
    run_linear(obs, 0.0, flops, rng)
}

pub fn detect_zf<R: Rng + ?Sized>(obs: &MimoObservation, rng: &mut R) -> DetectorResult {
    detect_zf_soft(obs, rng).0
}

/// MMSE detection with regularizer `obs.noise_ratio`.
pub fn detect_mmse_soft<R: Rng + ?Sized>(obs: &MimoObservation, rng: &mut R) -> (DetectorResult, CVector) {
    let flops = flop_count(&FlopModel::Mmse, obs.nt(), obs.nr());
    run_linear(obs, obs.noise_ratio, flops, rng)
}

pub fn detect_mmse<R: Rng + ?Sized>(obs: &MimoObservation, rng: &mut R) -> DetectorResult {
    detect_mmse_soft(obs, rng).0
}
