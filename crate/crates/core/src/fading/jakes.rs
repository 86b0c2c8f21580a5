//! Sum-of-cosines fading generator with Walsh–Hadamard weighting.
//!
//! Waveform `k` is
//!
//! ```text
//! C(t, k) = sqrt(2 / N_d) * sum_{n=1}^{N_d} W_k(n) * exp(j*phi_n) * cos(omega_n * t + theta_n)
//! phi_n   = pi * n / N_d
//! alpha_n = 2 * pi * (n - 0.5) / (4 * N_d)
//! omega_n = 2 * pi * f_D * cos(alpha_n)
//! ```
//!
//! where `W_k` is row `k` of a Walsh–Hadamard matrix and the phases
//! `theta_n ~ U[0, 2*pi)` are drawn independently for every waveform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::walsh::walsh_entry;
use crate::error::{Result, SimError};
use crate::par;
use crate::rng::{substream, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JakesConfig {
    pub num_oscillators: usize,
    pub max_doppler_hz: f64,
    pub sample_period_s: f64,
    pub num_waveforms: usize,
}

impl JakesConfig {
    /// 1024 oscillators, 83 Hz Doppler, 383.5 us sampling, four waveforms.
    pub fn table1() -> Self {
        JakesConfig {
            num_oscillators: 1024,
            max_doppler_hz: 83.0,
            sample_period_s: 383.5e-6,
            num_waveforms: 4,
        }
    }

    /// Order of the Walsh–Hadamard matrix backing the oscillator weights.
    pub fn walsh_order(&self) -> usize {
        self.num_oscillators.max(1).next_power_of_two()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_oscillators == 0 {
            return Err(SimError::invalid("num_oscillators", "must be at least 1"));
        }
        if !(self.max_doppler_hz >= 0.0 && self.max_doppler_hz.is_finite()) {
            return Err(SimError::invalid("max_doppler_hz", "must be finite and >= 0"));
        }
        if !(self.sample_period_s > 0.0 && self.sample_period_s.is_finite()) {
            return Err(SimError::invalid("sample_period_s", "must be finite and > 0"));
        }
        if self.num_waveforms > self.walsh_order() {
            return Err(SimError::invalid(
                "num_waveforms",
                format!(
                    "{} waveforms requested but the Walsh-Hadamard matrix has only {} rows",
                    self.num_waveforms,
                    self.walsh_order()
                ),
            ));
        }
        Ok(())
    }

    pub fn max_angular_doppler(&self) -> f64 {
        2.0 * PI * self.max_doppler_hz
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingWaveform {
    pub samples: Vec<Complex64>,
    pub waveform_index: usize,
    pub sample_period_s: f64,
}

impl FadingWaveform {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

/// One waveform's oscillator bank, evaluable at arbitrary times.
#[derive(Debug, Clone)]
pub struct OscillatorBank {
    weights: Vec<Complex64>,
    omegas: Vec<f64>,
    phases: Vec<f64>,
}

impl OscillatorBank {
    /// Draw a bank for Walsh–Hadamard row `row`. The caller is responsible
    /// for `row < cfg.walsh_order()`.
    pub fn new(cfg: &JakesConfig, row: usize, rng: &mut SimRng) -> Self {
        let nd = cfg.num_oscillators;
        let n0 = 4.0 * nd as f64;
        let scale = (2.0 / nd as f64).sqrt();
        let wm = cfg.max_angular_doppler();
        let mut weights = Vec::with_capacity(nd);
        let mut omegas = Vec::with_capacity(nd);
        let mut phases = Vec::with_capacity(nd);
        for n in 1..=nd {
            let phi = PI * n as f64 / nd as f64;
            let alpha = 2.0 * PI * (n as f64 - 0.5) / n0;
            let w = walsh_entry(row, n - 1) as f64;
            weights.push(Complex64::from_polar(scale * w, phi));
            omegas.push(wm * alpha.cos());
            phases.push(rng.random::<f64>() * 2.0 * PI);
        }
        OscillatorBank { weights, omegas, phases }
    }

    #[inline]
    pub fn sample_at(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.omegas)
            .zip(&self.phases)
            .map(|((w, om), th)| w * (om * t + th).cos())
            .sum()
    }
}

/// Generate `cfg.num_waveforms` fading waveforms of `num_samples` samples.
///
/// Waveform `k` uses Walsh–Hadamard row `k` and draws its phases from the
/// substream `(seed, k)`, so waveforms can be generated independently.
pub fn generate_jakes_waveforms(
    cfg: &JakesConfig,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<FadingWaveform>> {
    cfg.validate()?;
    if num_samples == 0 {
        return Err(SimError::invalid("num_samples", "must be at least 1"));
    }
    let ts = cfg.sample_period_s;
    Ok(par::map_range(0..cfg.num_waveforms, |k| {
        let mut rng = substream(seed, &[k as u64]);
        let bank = OscillatorBank::new(cfg, k, &mut rng);
        FadingWaveform {
            samples: (0..num_samples).map(|i| bank.sample_at(i as f64 * ts)).collect(),
            waveform_index: k,
            sample_period_s: ts,
        }
    }))
}
