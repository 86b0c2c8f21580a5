//! Single-tap frequency-domain equalization.

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Bins with `|H| <` this are treated as erased.
pub const ERASURE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    /// `Y[n] / H[n]`, or zero on erased bins.
    pub symbols: Vec<Complex64>,
    pub erased: Vec<bool>,
}

impl Equalized {
    pub fn num_erased(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }
}

pub fn equalize_siso(received: &[Complex64], response: &[Complex64]) -> Result<Equalized> {
    if received.len() != response.len() {
        return Err(SimError::DimensionMismatch { expected: response.len(), actual: received.len() });
    }
    let mut symbols = Vec::with_capacity(received.len());
    let mut erased = Vec::with_capacity(received.len());
    for (&y, &h) in received.iter().zip(response) {
        if h.norm() < ERASURE_THRESHOLD {
            symbols.push(Complex64::default());
            erased.push(true);
        } else {
            symbols.push(y / h);
            erased.push(false);
        }
    }
    Ok(Equalized { symbols, erased })
}
