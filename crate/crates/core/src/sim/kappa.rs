//! Sensibility of a detector's BER to a change of scenario.

use serde::Serialize;

use super::monte_carlo::{run_monte_carlo, BerPoint};
use super::scenario::ScenarioConfig;
use crate::detect::Detector;
use crate::error::{Result, SimError};
use crate::fading::CorrelationSpec;

/// `log10(ber_scn) - log10(ber_ref)`.
pub fn sensibility_kappa(ber_scn: f64, ber_ref: f64) -> Result<f64> {
    for (name, v) in [("ber_scn", ber_scn), ("ber_ref", ber_ref)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(SimError::invalid(name, format!("{v} is outside (0, 1]")));
        }
    }
    Ok(ber_scn.log10() - ber_ref.log10())
}

/// Sensibility from measured points. A point without errors only bounds
/// its BER by `1 / bits`, so the result becomes a one-sided bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Kappa {
    Value(f64),
    AtMost(f64),
    AtLeast(f64),
    Undefined,
}

impl Kappa {
    pub fn from_points(scn: &BerPoint, reference: &BerPoint) -> Kappa {
        let bound = |p: &BerPoint| 1.0 / p.bits.max(1) as f64;
        match (scn.errors, reference.errors) {
            (0, 0) => Kappa::Undefined,
            (0, _) => Kappa::AtMost(bound(scn).log10() - reference.ber.log10()),
            (_, 0) => Kappa::AtLeast(scn.ber.log10() - bound(reference).log10()),
            _ => Kappa::Value(scn.ber.log10() - reference.ber.log10()),
        }
    }

    /// Point value or the bound itself.
    pub fn estimate(&self) -> Option<f64> {
        match *self {
            Kappa::Value(v) | Kappa::AtMost(v) | Kappa::AtLeast(v) => Some(v),
            Kappa::Undefined => None,
        }
    }
}

impl std::fmt::Display for Kappa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kappa::Value(v) => write!(f, "{v:.4}"),
            Kappa::AtMost(v) => write!(f, "<{v:.4}"),
            Kappa::AtLeast(v) => write!(f, ">{v:.4}"),
            Kappa::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensibilityRow {
    pub detector: String,
    pub rho: f64,
    pub ebn0_db: f64,
    pub ber: f64,
    pub ber_reference: f64,
    pub kappa: Kappa,
}

/// Correlation sensibility: for each detector, BER at every `rho` against
/// the same detector at `rho = 0` on the base array, at one Eb/N0.
pub fn sensibility_table(
    base: &ScenarioConfig,
    detectors: &[Detector],
    rhos: &[f64],
    ebn0_db: f64,
) -> Result<Vec<SensibilityRow>> {
    let mut rows = Vec::new();
    let at = |det: &Detector, rho: f64| -> Result<BerPoint> {
        let cfg = ScenarioConfig {
            ebn0_db: vec![ebn0_db],
            ..base.with_detector(det.clone()).with_correlation(CorrelationSpec { rho, ..base.correlation })
        };
        Ok(run_monte_carlo(&cfg)?.points.remove(0))
    };
    for det in detectors {
        let reference = at(det, 0.0)?;
        for &rho in rhos {
            let p = at(det, rho)?;
            rows.push(SensibilityRow {
                detector: det.name().to_string(),
                rho,
                ebn0_db,
                ber: p.ber,
                ber_reference: reference.ber,
                kappa: Kappa::from_points(&p, &reference),
            });
        }
    }
    Ok(rows)
}
