//! Per-subcarrier observation model and its real-valued form.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::linalg::{CMatrix, CVector, RMatrix};
use crate::ofdm::QamConstellation;

/// `y = H x + z` on one subcarrier.
///
/// `noise_ratio` is `N0 / E_s` referred to the symbols `x` as they enter
/// `H`; with equal power allocation the caller folds the `1/sqrt(N_t)`
/// transmit scaling into `H`.
#[derive(Debug, Clone)]
pub struct MimoObservation<'a> {
    pub y: CVector,
    pub h: CMatrix,
    pub noise_ratio: f64,
    pub constellation: &'a QamConstellation,
}

impl<'a> MimoObservation<'a> {
    pub fn new(y: CVector, h: CMatrix, noise_ratio: f64, constellation: &'a QamConstellation) -> Result<Self> {
        if y.len() != h.nrows() {
            return Err(SimError::DimensionMismatch { expected: h.nrows(), actual: y.len() });
        }
        if !(noise_ratio >= 0.0) {
            return Err(SimError::invalid("noise_ratio", "must be >= 0"));
        }
        Ok(MimoObservation { y, h, noise_ratio, constellation })
    }

    pub fn nt(&self) -> usize {
        self.h.ncols()
    }

    pub fn nr(&self) -> usize {
        self.h.nrows()
    }

    /// Squared Euclidean distance `||y - H x||^2`.
    pub fn metric(&self, x: &[Complex64]) -> f64 {
        let mut total = 0.0;
        for r in 0..self.nr() {
            let mut acc = self.y[r];
            for (t, xt) in x.iter().enumerate() {
                acc -= self.h[(r, t)] * xt;
            }
            total += acc.norm_sqr();
        }
        total
    }
}

/// `[[Re H, -Im H], [Im H, Re H]]` with `y` and `x` stacked as `[Re; Im]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealDecomposition {
    pub h: RMatrix,
    pub y: DVector<f64>,
    /// Row-major copy of `h` for the hot fitness loop.
    h_rows: Vec<f64>,
}

impl RealDecomposition {
    pub fn n_dim(&self) -> usize {
        self.h.ncols()
    }

    pub fn n_rows(&self) -> usize {
        self.h.nrows()
    }
}

pub fn real_decompose(obs: &MimoObservation) -> RealDecomposition {
    let (nr, nt) = obs.h.shape();
    let h = RMatrix::from_fn(2 * nr, 2 * nt, |i, j| {
        let z = obs.h[(i % nr, j % nt)];
        match (i < nr, j < nt) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let y = DVector::from_fn(2 * nr, |i, _| if i < nr { obs.y[i].re } else { obs.y[i - nr].im });
    let h_rows = h.transpose().as_slice().to_vec();
    RealDecomposition { h, y, h_rows }
}

pub fn stack_complex(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|z| z.re).chain(x.iter().map(|z| z.im)).collect()
}

pub fn unstack_real(v: &[f64]) -> Vec<Complex64> {
    let n = v.len() / 2;
    (0..n).map(|i| Complex64::new(v[i], v[n + i])).collect()
}

/// `||y - H zeta||^2` in the real domain.
#[inline]
pub fn fitness(zeta: &[f64], rd: &RealDecomposition) -> f64 {
    let n = rd.n_dim();
    debug_assert_eq!(zeta.len(), n);
    let mut total = 0.0;
    for (i, row) in rd.h_rows.chunks_exact(n).enumerate() {
        let mut acc = rd.y[i];
        for (a, b) in row.iter().zip(zeta) {
            acc -= a * b;
        }
        total += acc * acc;
    }
    total
}
