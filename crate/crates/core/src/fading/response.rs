use std::f64::consts::PI;

use num_complex::Complex64;

use super::correlation::MimoChannelRealization;
use crate::error::{Result, SimError};
use crate::linalg::CMatrix;

/// Evaluates `H[k] = sum_l h[l] exp(-j 2 pi k l / N)` with a shared twiddle table.
#[derive(Debug, Clone)]
pub struct FrequencyResponder {
    twiddles: Vec<Complex64>,
}

impl FrequencyResponder {
    pub fn new(num_subcarriers: usize) -> Self {
        let n = num_subcarriers as f64;
        FrequencyResponder {
            twiddles: (0..num_subcarriers)
                .map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 / n))
                .collect(),
        }
    }

    pub fn num_subcarriers(&self) -> usize {
        self.twiddles.len()
    }

    /// Response of a scalar tap sequence at every bin. Taps beyond `N`
    /// alias onto `l mod N`, which is exact at the DFT bins.
    pub fn scalar(&self, taps: &[Complex64]) -> Vec<Complex64> {
        let n = self.twiddles.len();
        (0..n)
            .map(|k| {
                taps.iter()
                    .enumerate()
                    .map(|(l, h)| h * self.twiddles[(k * l) % n])
                    .sum()
            })
            .collect()
    }

    /// Per-bin matrices for a sequence of `N_r x N_t` tap matrices.
    pub fn matrices(&self, taps: &[CMatrix]) -> Vec<CMatrix> {
        let n = self.twiddles.len();
        let (nr, nt) = taps.first().map_or((0, 0), |t| t.shape());
        let mut out = vec![CMatrix::zeros(nr, nt); n];
        for (l, tap) in taps.iter().enumerate() {
            for (k, hk) in out.iter_mut().enumerate() {
                let w = self.twiddles[(k * l) % n];
                hk.zip_apply(tap, |acc, t| *acc += t * w);
            }
        }
        out
    }
}

/// Per-subcarrier MIMO response of a tap sequence (`taps[l]` is the
/// `N_r x N_t` gain matrix at delay `l`). Rejects channels longer than `N`.
pub fn channel_frequency_response(taps: &[CMatrix], num_subcarriers: usize) -> Result<MimoChannelRealization> {
    if taps.is_empty() {
        return Err(SimError::invalid("taps", "need at least one tap"));
    }
    if taps.len() > num_subcarriers {
        return Err(SimError::ChannelTooLong { taps: taps.len(), subcarriers: num_subcarriers });
    }
    let shape = taps[0].shape();
    if let Some(bad) = taps.iter().find(|t| t.shape() != shape) {
        return Err(SimError::DimensionMismatch { expected: shape.0 * shape.1, actual: bad.len() });
    }
    Ok(MimoChannelRealization {
        per_subcarrier: FrequencyResponder::new(num_subcarriers).matrices(taps),
        correlated: false,
    })
}
