use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Exponentially decaying multipath power-delay profile sampled at `1/W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDelayProfile {
    pub tap_delays_s: Vec<f64>,
    /// Linear tap powers, normalized to unit sum.
    pub tap_powers: Vec<f64>,
    /// Nominal RMS delay spread the profile was built from.
    pub tau_rms_s: f64,
    /// True when only a single tap survived truncation.
    pub flat: bool,
}

impl PowerDelayProfile {
    pub fn single_tap() -> Self {
        PowerDelayProfile { tap_delays_s: vec![0.0], tap_powers: vec![1.0], tau_rms_s: 0.0, flat: true }
    }

    pub fn num_taps(&self) -> usize {
        self.tap_powers.len()
    }

    /// Channel memory: number of taps minus one.
    pub fn memory(&self) -> usize {
        self.tap_powers.len() - 1
    }

    /// RMS delay spread computed from the discrete taps.
    pub fn rms_delay_spread(&self) -> f64 {
        let total: f64 = self.tap_powers.iter().sum();
        let mean: f64 = self.tap_powers.iter().zip(&self.tap_delays_s).map(|(p, t)| p * t).sum::<f64>() / total;
        let second: f64 =
            self.tap_powers.iter().zip(&self.tap_delays_s).map(|(p, t)| p * t * t).sum::<f64>() / total;
        (second - mean * mean).max(0.0).sqrt()
    }
}

/// Build an exponential profile: taps every `1/W` seconds with power
/// proportional to `exp(-t / tau_rms)`, dropping taps weaker than
/// `power_floor_db` relative to the first, then normalizing to unit power.
pub fn pdp_exponential(tau_rms_s: f64, sample_rate_hz: f64, power_floor_db: f64) -> Result<PowerDelayProfile> {
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(SimError::invalid("sample_rate_hz", "must be finite and > 0"));
    }
    if !(tau_rms_s >= 0.0 && tau_rms_s.is_finite()) {
        return Err(SimError::invalid("tau_rms_s", "must be finite and >= 0"));
    }
    if !(power_floor_db < 0.0) {
        return Err(SimError::invalid("power_floor_db", "must be negative"));
    }
    let spread_samples = tau_rms_s * sample_rate_hz;
    // tap l survives while exp(-l / spread) >= 10^(floor/10)
    let last = (-(power_floor_db / 10.0) * std::f64::consts::LN_10 * spread_samples + 1e-9).floor();
    let count = if spread_samples == 0.0 { 1 } else { last as usize + 1 };
    if count == 1 {
        return Ok(PowerDelayProfile { tau_rms_s, ..PowerDelayProfile::single_tap() });
    }
    let raw: Vec<f64> = (0..count).map(|l| (-(l as f64) / spread_samples).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(PowerDelayProfile {
        tap_delays_s: (0..count).map(|l| l as f64 / sample_rate_hz).collect(),
        tap_powers: raw.iter().map(|p| p / total).collect(),
        tau_rms_s,
        flat: false,
    })
}

/// Coherence time and bandwidth. Each is `None` when its input is not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceParams {
    pub coherence_time_s: Option<f64>,
    pub coherence_bandwidth_hz: Option<f64>,
}

pub fn coherence_params(max_doppler_hz: f64, tau_rms_s: f64) -> CoherenceParams {
    CoherenceParams {
        coherence_time_s: (max_doppler_hz > 0.0).then(|| 1.0 / max_doppler_hz),
        coherence_bandwidth_hz: (tau_rms_s > 0.0).then(|| 1.0 / (2.0 * std::f64::consts::PI * tau_rms_s)),
    }
}

/// Smallest subcarrier count whose spacing `W/N` is at most
/// `flatness_factor` times the coherence bandwidth.
pub fn min_subcarriers_flat(bandwidth_hz: f64, tau_rms_s: f64, flatness_factor: f64) -> Result<usize> {
    if !(bandwidth_hz > 0.0) {
        return Err(SimError::invalid("bandwidth_hz", "must be > 0"));
    }
    if !(flatness_factor > 0.0) {
        return Err(SimError::invalid("flatness_factor", "must be > 0"));
    }
    if !(tau_rms_s >= 0.0) {
        return Err(SimError::invalid("tau_rms_s", "must be >= 0"));
    }
    let n = (bandwidth_hz * 2.0 * std::f64::consts::PI * tau_rms_s / flatness_factor).ceil();
    Ok((n as usize).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn office_profile_tap_count() {
        // ln(1000) * 2.5us * 5MHz = 86.35 -> taps 0..=86
        let p = pdp_exponential(2.5e-6, 5e6, -30.0).unwrap();
        assert_eq!(p.num_taps(), 87);
        assert_eq!(p.memory(), 86);
        assert!(!p.flat);
    }

    #[test]
    fn powers_sum_to_one_and_delays_increase() {
        for (tau, w) in [(2.5e-6, 5e6), (51e-9, 20e6), (1e-7, 1e8)] {
            let p = pdp_exponential(tau, w, -30.0).unwrap();
            assert!((p.tap_powers.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(p.tap_delays_s[0], 0.0);
            assert!(p.tap_delays_s.windows(2).all(|d| d[1] > d[0]));
        }
    }

    #[test]
    fn rms_spread_matches_nominal_when_resolved() {
        // truncation at -30 dB and coarse sampling both shave the spread a little
        for (tau, w, tol) in [(2.5e-6, 5e6, 0.03), (51e-9, 20e6, 0.06)] {
            let p = pdp_exponential(tau, w, -30.0).unwrap();
            let rel = (p.rms_delay_spread() - tau).abs() / tau;
            assert!(rel < tol, "tau {tau}: rel err {rel}");
        }
    }

    #[test]
    fn vanishing_spread_gives_flat_profile() {
        for tau in [0.0, 1e-12] {
            let p = pdp_exponential(tau, 5e6, -30.0).unwrap();
            assert!(p.flat);
            assert_eq!(p.tap_powers, vec![1.0]);
        }
    }

    #[test]
    fn coherence_values() {
        let c = coherence_params(23.0, 51e-9);
        assert_eq!(c.coherence_time_s, Some(1.0 / 23.0));
        let bc = c.coherence_bandwidth_hz.unwrap();
        assert!((bc - 3.125e6).abs() / 3.125e6 < 0.002);
        let c = coherence_params(0.0, 2.5e-6);
        assert!(c.coherence_time_s.is_none());
        assert!((c.coherence_bandwidth_hz.unwrap() - 63_661.977).abs() < 0.01);
        assert!(coherence_params(1.0, 0.0).coherence_bandwidth_hz.is_none());
    }

    #[test]
    fn flatness_rule() {
        assert_eq!(min_subcarriers_flat(5e6, 2.5e-6, 0.2).unwrap(), 393);
        assert_eq!(min_subcarriers_flat(5e6, 2.5e-6, 1.0).unwrap(), 79);
        assert_eq!(min_subcarriers_flat(5e6, 0.0, 0.2).unwrap(), 1);
        assert_eq!(min_subcarriers_flat(5e6, 1e-15, 0.2).unwrap(), 1);
    }
}
