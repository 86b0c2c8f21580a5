//! Closed-form reference curves.

use crate::error::{Result, SimError};

/// Bit error probability of Gray-labeled square M-QAM over flat Rayleigh
/// fading with average `Eb/N0 = ebn0_db`.
///
/// Uses the exact per-bit-position AWGN expression, where every term is an
/// `erfc(sqrt(c * gamma_b))`, and averages each term over the exponential
/// SNR distribution: `E[erfc(sqrt(c g))] = 1 - sqrt(c gbar / (1 + c gbar))`.
pub fn analytic_ber_rayleigh(order: usize, ebn0_db: f64) -> Result<f64> {
    if !matches!(order, 4 | 16 | 256) {
        return Err(SimError::UnsupportedModulation(order));
    }
    if ebn0_db == f64::INFINITY {
        return Ok(0.0);
    }
    let gbar = 10f64.powf(ebn0_db / 10.0);
    let m = order as f64;
    let side = m.sqrt();
    let bits_per_axis = (order.trailing_zeros() / 2) as i32;
    let base = 3.0 * m.log2() / (2.0 * (m - 1.0));
    let mut total = 0.0;
    for k in 1..=bits_per_axis {
        let span = 2f64.powi(k - 1);
        let terms = ((1.0 - 2f64.powi(-k)) * side) as usize;
        let mut pk = 0.0;
        for i in 0..terms {
            let fi = i as f64;
            let sign = if ((fi * span / side).floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = span - (fi * span / side + 0.5).floor();
            let c = (2.0 * fi + 1.0).powi(2) * base;
            let avg_erfc = 1.0 - (c * gbar / (1.0 + c * gbar)).sqrt();
            pk += sign * weight * avg_erfc;
        }
        total += pk / side;
    }
    Ok(total / bits_per_axis as f64)
}
