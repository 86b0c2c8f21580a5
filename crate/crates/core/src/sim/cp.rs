//! Cyclic-prefix length study.

use serde::Serialize;

use super::monte_carlo::{run_monte_carlo, BerCurve};
use super::scenario::ScenarioConfig;
use crate::error::{Result, SimError};
use crate::ofdm::OfdmConfig;

/// Ratio `BER(high) / BER(mid)` above which a curve is flagged as floored.
pub const FLOOR_RATIO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpCurve {
    pub cp_fraction: f64,
    pub cp_len: usize,
    pub channel_memory: usize,
    pub curve: BerCurve,
    pub floor_ratio: Option<f64>,
    pub floor: bool,
}

/// `BER(highest Eb/N0) / BER(grid point nearest the middle of the range)`.
/// `None` when the curve has fewer than two points or both BERs are zero.
pub fn floor_ratio(curve: &BerCurve) -> Option<f64> {
    let (first, last) = (curve.points.first()?, curve.points.last()?);
    if curve.points.len() < 2 {
        return None;
    }
    let middle = 0.5 * (first.ebn0_db + last.ebn0_db);
    let mid = curve.points[..curve.points.len() - 1]
        .iter()
        .min_by(|a, b| (a.ebn0_db - middle).abs().total_cmp(&(b.ebn0_db - middle).abs()))?;
    match (mid.ber, last.ber) {
        (m, h) if m > 0.0 => Some(h / m),
        (_, h) if h > 0.0 => Some(f64::INFINITY),
        _ => None,
    }
}

pub fn cp_study(base: &ScenarioConfig, cp_fractions: &[f64]) -> Result<Vec<CpCurve>> {
    if cp_fractions.is_empty() {
        return Err(SimError::invalid("cp_fractions", "must not be empty"));
    }
    let mut out = Vec::with_capacity(cp_fractions.len());
    for &frac in cp_fractions {
        if !(0.0..1.0).contains(&frac) {
            return Err(SimError::invalid("cp_fractions", format!("{frac} is outside [0, 1)")));
        }
        let cfg = ScenarioConfig {
            id: format!("{}-cp{:.3}", base.id, frac),
            ofdm: OfdmConfig { cp_fraction: frac, ..base.ofdm },
            ..base.clone()
        };
        let sim = super::link::LinkSimulator::new(&cfg)?;
        let channel_memory = sim.pdp().memory();
        let curve = run_monte_carlo(&cfg)?;
        let ratio = floor_ratio(&curve);
        out.push(CpCurve {
            cp_fraction: frac,
            cp_len: cfg.ofdm.cp_len(),
            channel_memory,
            floor: ratio.is_some_and(|r| r > FLOOR_RATIO),
            floor_ratio: ratio,
            curve,
        });
    }
    Ok(out)
}
