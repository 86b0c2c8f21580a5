//! OFDM symbol construction: unitary IDFT plus cyclic prefix, and the
//! inverse at the receiver.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfdmConfig {
    pub num_subcarriers: usize,
    /// Cyclic prefix length as a fraction of `N`.
    pub cp_fraction: f64,
    pub bandwidth_hz: f64,
}

impl OfdmConfig {
    pub fn cp_len(&self) -> usize {
        (self.cp_fraction * self.num_subcarriers as f64).round() as usize
    }

    pub fn symbol_len(&self) -> usize {
        self.num_subcarriers + self.cp_len()
    }

    /// Energy overhead of the prefix, `(N + CP) / N`.
    pub fn cp_overhead(&self) -> f64 {
        self.symbol_len() as f64 / self.num_subcarriers as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_subcarriers == 0 || !self.num_subcarriers.is_power_of_two() {
            return Err(SimError::invalid("num_subcarriers", "must be a power of two"));
        }
        if !(0.0..1.0).contains(&self.cp_fraction) {
            return Err(SimError::invalid("cp_fraction", "must lie in [0, 1)"));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(SimError::invalid("bandwidth_hz", "must be > 0"));
        }
        Ok(())
    }
}

/// Reusable modulator/demodulator with cached FFT plans. Plans are shared
/// and thread-safe; scratch buffers are allocated per call.
#[derive(Clone)]
pub struct OfdmModem {
    cfg: OfdmConfig,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for OfdmModem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OfdmModem").field("cfg", &self.cfg).finish()
    }
}

impl OfdmModem {
    pub fn new(cfg: OfdmConfig) -> Result<Self> {
        cfg.validate()?;
        let mut planner = FftPlanner::new();
        let n = cfg.num_subcarriers;
        Ok(OfdmModem {
            cfg,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn config(&self) -> &OfdmConfig {
        &self.cfg
    }

    pub fn modulate(&self, freq_symbols: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.cfg.num_subcarriers;
        if freq_symbols.len() != n {
            return Err(SimError::DimensionMismatch { expected: n, actual: freq_symbols.len() });
        }
        let mut body = freq_symbols.to_vec();
        self.inverse.process(&mut body);
        body.iter_mut().for_each(|z| *z *= self.scale);
        let cp = self.cfg.cp_len();
        let mut out = Vec::with_capacity(n + cp);
        out.extend_from_slice(&body[n - cp..]);
        out.extend_from_slice(&body);
        Ok(out)
    }

    pub fn demodulate(&self, time_samples: &[Complex64]) -> Result<Vec<Complex64>> {
        let len = self.cfg.symbol_len();
        if time_samples.len() != len {
            return Err(SimError::DimensionMismatch { expected: len, actual: time_samples.len() });
        }
        let mut body = time_samples[self.cfg.cp_len()..].to_vec();
        self.forward.process(&mut body);
        body.iter_mut().for_each(|z| *z *= self.scale);
        Ok(body)
    }
}

pub fn ofdm_modulate(freq_symbols: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    OfdmModem::new(*cfg)?.modulate(freq_symbols)
}

pub fn ofdm_demodulate(time_samples: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    OfdmModem::new(*cfg)?.demodulate(time_samples)
}
