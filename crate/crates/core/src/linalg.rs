//! Small dense linear-algebra helpers shared by the channel and detector code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, SimError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Eigenvalues below this (relative to the largest) are treated as rounding
/// noise and clipped to zero before taking square roots.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Principal square root of a real symmetric positive semidefinite matrix.
pub fn psd_sqrt(r: &RMatrix) -> Result<RMatrix> {
    if !r.is_square() {
        return Err(SimError::DimensionMismatch { expected: r.nrows(), actual: r.ncols() });
    }
    let eig = SymmetricEigen::new(r.clone());
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOLERANCE * scale {
        return Err(SimError::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let q = &eig.eigenvectors;
    Ok(q * DMatrix::from_diagonal(&roots) * q.transpose())
}

pub fn kron(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn to_complex(r: &RMatrix) -> CMatrix {
    r.map(|v| Complex64::new(v, 0.0))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
