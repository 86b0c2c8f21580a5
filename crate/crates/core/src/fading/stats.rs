//! Statistical checks for generated fading waveforms: autocorrelation,
//! periodogram, Kolmogorov–Smirnov distances and waveform cross-correlation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::jakes::{generate_jakes_waveforms, FadingWaveform, JakesConfig};
use crate::error::{Result, SimError};

/// Normalized empirical autocorrelation `Re{E[C(t + tau) C*(t)]} / E[|C|^2]`
/// for lags `0..=max_lag`, using the unbiased (per-lag count) estimator.
pub fn autocorrelation_empirical(w: &FadingWaveform, max_lag: usize) -> Result<Vec<f64>> {
    let n = w.samples.len();
    if max_lag >= n {
        return Err(SimError::invalid("max_lag", format!("{max_lag} >= {n} samples")));
    }
    let s = &w.samples;
    let p0 = s.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
    Ok((0..=max_lag)
        .map(|lag| {
            let acc: Complex64 = (0..n - lag).map(|i| s[i + lag] * s[i].conj()).sum();
            if p0 == 0.0 {
                1.0
            } else {
                acc.re / (n - lag) as f64 / p0
            }
        })
        .collect())
}

/// Zeroth-order Bessel function of the first kind, from its integral
/// representation `J0(x) = (1/pi) * int_0^pi cos(x sin t) dt`. The trapezoid
/// rule is spectrally accurate for this periodic integrand.
pub fn bessel_j0(x: f64) -> f64 {
    let m = 64 + 2 * x.abs().ceil() as usize;
    let h = PI / m as f64;
    let mut acc = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..m {
        acc += (x * (i as f64 * h).sin()).cos();
    }
    acc * h / PI
}

/// RMS deviation of an autocorrelation sequence from `J0(omega_m * tau)`.
pub fn autocorrelation_rms_error(acf: &[f64], max_doppler_hz: f64, sample_period_s: f64) -> f64 {
    let wm = 2.0 * PI * max_doppler_hz;
    let sq: f64 = acf
        .iter()
        .enumerate()
        .map(|(lag, r)| (r - bessel_j0(wm * lag as f64 * sample_period_s)).powi(2))
        .sum();
    (sq / acf.len() as f64).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdEstimate {
    /// Bin centre frequencies, ascending from `-fs/2`.
    pub freqs_hz: Vec<f64>,
    pub power: Vec<f64>,
    pub bin_width_hz: f64,
}

impl PsdEstimate {
    fn argmax_where(&self, pred: impl Fn(f64) -> bool) -> Option<f64> {
        self.freqs_hz
            .iter()
            .zip(&self.power)
            .filter(|(f, _)| pred(**f))
            .fold(None, |best: Option<(f64, f64)>, (&f, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((f, p)),
            })
            .map(|(f, _)| f)
    }

    /// Frequencies of the strongest negative-frequency and positive-frequency bins.
    pub fn peak_frequencies(&self) -> (Option<f64>, Option<f64>) {
        (self.argmax_where(|f| f < 0.0), self.argmax_where(|f| f > 0.0))
    }

    pub fn dc_fraction(&self) -> f64 {
        let total: f64 = self.power.iter().sum();
        let dc = self
            .freqs_hz
            .iter()
            .zip(&self.power)
            .find(|(f, _)| **f == 0.0)
            .map(|(_, p)| *p)
            .unwrap_or(0.0);
        if total == 0.0 {
            1.0
        } else {
            dc / total
        }
    }
}

/// Periodogram `|FFT(C)|^2 / N` with bins reordered to ascending frequency.
pub fn psd_empirical(w: &FadingWaveform) -> Result<PsdEstimate> {
    let n = w.samples.len();
    if n < 256 {
        return Err(SimError::invalid("num_samples", format!("periodogram needs >= 256 samples, got {n}")));
    }
    let mut buf = w.samples.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let fs = 1.0 / w.sample_period_s;
    let df = fs / n as f64;
    let half = n / 2;
    let mut freqs_hz = Vec::with_capacity(n);
    let mut power = Vec::with_capacity(n);
    // negative bins first: indices half..n map to -(n-half)..-1
    for k in (half..n).chain(0..half) {
        let signed = if k >= half { k as f64 - n as f64 } else { k as f64 };
        freqs_hz.push(signed * df);
        power.push(buf[k].norm_sqr() / n as f64);
    }
    Ok(PsdEstimate { freqs_hz, power, bin_width_hz: df })
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and the continuous CDF `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

/// KS distance of `|C|` from a Rayleigh law whose scale is the waveform's
/// own mean power.
pub fn ks_rayleigh_amplitude(w: &FadingWaveform) -> f64 {
    let omega = w.mean_power();
    let amps: Vec<f64> = w.samples.iter().map(|c| c.norm()).collect();
    ks_statistic(&amps, |r| 1.0 - (-r * r / omega).exp())
}

/// KS distance of `arg C` from the uniform law on `[-pi, pi]`.
pub fn ks_uniform_phase(w: &FadingWaveform) -> f64 {
    let phases: Vec<f64> = w.samples.iter().map(|c| c.arg()).collect();
    ks_statistic(&phases, |p| ((p + PI) / (2.0 * PI)).clamp(0.0, 1.0))
}

/// Magnitude of the zero-lag normalized cross-correlation of two waveforms.
pub fn cross_correlation(a: &FadingWaveform, b: &FadingWaveform) -> f64 {
    let n = a.samples.len().min(b.samples.len());
    let cross: Complex64 = (0..n).map(|i| a.samples[i] * b.samples[i].conj()).sum();
    let pa: f64 = a.samples[..n].iter().map(|c| c.norm_sqr()).sum();
    let pb: f64 = b.samples[..n].iter().map(|c| c.norm_sqr()).sum();
    cross.norm() / (pa * pb).sqrt()
}

/// Per-waveform statistics gathered by [`validate_jakes`].
#[derive(Debug, Clone, Serialize)]
pub struct WaveformStats {
    pub waveform_index: usize,
    pub mean_power: f64,
    pub ks_amplitude: f64,
    pub ks_phase: f64,
    pub autocorr_rms_error: f64,
    pub psd_peak_negative_hz: Option<f64>,
    pub psd_peak_positive_hz: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JakesValidation {
    pub config: JakesConfig,
    pub num_samples: usize,
    pub max_lag: usize,
    pub psd_bin_width_hz: f64,
    pub waveforms: Vec<WaveformStats>,
    pub max_cross_correlation: f64,
    /// Autocorrelation of waveform 0, lags `0..=max_lag`.
    pub autocorrelation: Vec<f64>,
}

impl JakesValidation {
    pub fn worst_ks_amplitude(&self) -> f64 {
        self.waveforms.iter().map(|w| w.ks_amplitude).fold(0.0, f64::max)
    }

    pub fn worst_ks_phase(&self) -> f64 {
        self.waveforms.iter().map(|w| w.ks_phase).fold(0.0, f64::max)
    }

    pub fn worst_autocorr_error(&self) -> f64 {
        self.waveforms.iter().map(|w| w.autocorr_rms_error).fold(0.0, f64::max)
    }

    pub fn worst_power_error(&self) -> f64 {
        self.waveforms.iter().map(|w| (w.mean_power - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest distance, in bins, between a PSD peak and `+-f_D`.
    pub fn worst_peak_offset_bins(&self) -> f64 {
        let fd = self.config.max_doppler_hz;
        self.waveforms
            .iter()
            .map(|w| {
                let neg = w.psd_peak_negative_hz.map_or(f64::INFINITY, |f| (f + fd).abs());
                let pos = w.psd_peak_positive_hz.map_or(f64::INFINITY, |f| (f - fd).abs());
                neg.max(pos) / self.psd_bin_width_hz
            })
            .fold(0.0, f64::max)
    }
}

/// Generate waveforms and compute every statistic used to validate them.
/// Autocorrelation lags run up to the coherence time `1 / f_D`.
pub fn validate_jakes(cfg: &JakesConfig, num_samples: usize, seed: u64) -> Result<JakesValidation> {
    if cfg.max_doppler_hz <= 0.0 {
        return Err(SimError::invalid("max_doppler_hz", "validation needs a positive Doppler frequency"));
    }
    let waves = generate_jakes_waveforms(cfg, num_samples, seed)?;
    let max_lag = ((1.0 / cfg.max_doppler_hz) / cfg.sample_period_s).floor() as usize;
    let max_lag = max_lag.min(num_samples - 1);
    let mut stats = Vec::with_capacity(waves.len());
    let mut acf0 = Vec::new();
    let mut bin_width = 0.0;
    for w in &waves {
        let acf = autocorrelation_empirical(w, max_lag)?;
        let psd = psd_empirical(w)?;
        bin_width = psd.bin_width_hz;
        let (neg, pos) = psd.peak_frequencies();
        stats.push(WaveformStats {
            waveform_index: w.waveform_index,
            mean_power: w.mean_power(),
            ks_amplitude: ks_rayleigh_amplitude(w),
            ks_phase: ks_uniform_phase(w),
            autocorr_rms_error: autocorrelation_rms_error(&acf, cfg.max_doppler_hz, cfg.sample_period_s),
            psd_peak_negative_hz: neg,
            psd_peak_positive_hz: pos,
        });
        if acf0.is_empty() {
            acf0 = acf;
        }
    }
    let mut max_cross: f64 = 0.0;
    for i in 0..waves.len() {
        for j in i + 1..waves.len() {
            max_cross = max_cross.max(cross_correlation(&waves[i], &waves[j]));
        }
    }
    Ok(JakesValidation {
        config: *cfg,
        num_samples,
        max_lag,
        psd_bin_width_hz: bin_width,
        waveforms: stats,
        max_cross_correlation: max_cross,
        autocorrelation: acf0,
    })
}
