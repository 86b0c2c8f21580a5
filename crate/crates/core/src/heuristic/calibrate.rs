//! Grid search over heuristic input parameters.

use serde::{Deserialize, Serialize};

use super::{DeParams, PsoParams};
use crate::detect::Detector;
use crate::error::{Result, SimError};
use crate::sim::{run_point, LinkSimulator, ScenarioConfig, StoppingRule};

/// Detector, named parameter values and population size of one grid cell.
pub type GridCell = (Detector, Vec<(&'static str, f64)>, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum CalibrationGrid {
    Pso { base: PsoParams, n_pop: Vec<usize>, c1: Vec<f64>, c2: Vec<f64>, w0: Vec<f64> },
    De { base: DeParams, n_ind: Vec<usize>, f_cr: Vec<f64>, f_mut: Vec<f64> },
}

impl CalibrationGrid {
    /// Grid that contains the tuned settings for every correlation level.
    pub fn default_pso() -> Self {
        CalibrationGrid::Pso {
            base: PsoParams::tuned(0.0),
            n_pop: vec![20, 40],
            c1: vec![2.0, 4.0],
            c2: vec![0.5, 1.0, 2.0],
            w0: vec![1.0, 1.5, 3.5],
        }
    }

    pub fn default_de() -> Self {
        CalibrationGrid::De {
            base: DeParams::tuned(0.0),
            n_ind: vec![20, 40],
            f_cr: vec![0.2, 0.6, 0.8],
            f_mut: vec![0.6, 0.8, 1.8],
        }
    }

    /// Cells in row-major order (first axis slowest).
    pub fn cells(&self) -> Vec<GridCell> {
        let mut out = Vec::new();
        match self {
            CalibrationGrid::Pso { base, n_pop, c1, c2, w0 } => {
                for &n in n_pop {
                    for &a in c1 {
                        for &b in c2 {
                            for &w in w0 {
                                let p = PsoParams { n_pop: n, c1: a, c2: b, w0: w, ..base.clone() };
                                let params = vec![("n_pop", n as f64), ("c1", a), ("c2", b), ("w0", w)];
                                out.push((Detector::Pso(p), params, n));
                            }
                        }
                    }
                }
            }
            CalibrationGrid::De { base, n_ind, f_cr, f_mut } => {
                for &n in n_ind {
                    for &cr in f_cr {
                        for &fm in f_mut {
                            let p = DeParams { n_ind: n, f_cr: cr, f_mut: fm, ..base.clone() };
                            let params = vec![("n_ind", n as f64), ("f_cr", cr), ("f_mut", fm)];
                            out.push((Detector::De(p), params, n));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationPoint {
    pub params: Vec<(&'static str, f64)>,
    pub detector: Detector,
    pub population: usize,
    pub mean_ber: f64,
    pub errors: u64,
    pub bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub best: CalibrationPoint,
    pub surface: Vec<CalibrationPoint>,
}

/// Evaluate every grid cell on `scenario` at `ebn0_db` over `trials`
/// trials. All cells share `seed`, hence the same channels, data and noise.
/// The lowest mean BER wins; ties go to the smaller population, then to
/// the earlier cell.
pub fn calibrate(
    grid: &CalibrationGrid,
    scenario: &ScenarioConfig,
    ebn0_db: f64,
    trials: u64,
    seed: u64,
) -> Result<CalibrationResult> {
    let cells = grid.cells();
    if cells.is_empty() {
        return Err(SimError::invalid("grid", "must contain at least one cell"));
    }
    if trials == 0 {
        return Err(SimError::invalid("trials", "must be >= 1"));
    }
    let rule = StoppingRule::fixed(trials);
    let mut surface = Vec::with_capacity(cells.len());
    for (detector, params, population) in cells {
        let cfg = ScenarioConfig { seed, ebn0_db: vec![ebn0_db], stopping: rule, ..scenario.with_detector(detector.clone()) };
        let sim = LinkSimulator::new(&cfg)?;
        let p = run_point(&sim, 0, ebn0_db, &rule)?;
        surface.push(CalibrationPoint { params, detector, population, mean_ber: p.ber, errors: p.errors, bits: p.bits });
    }
    let best = surface
        .iter()
        .fold(None::<&CalibrationPoint>, |best, p| match best {
            Some(b) if (b.errors, b.population) <= (p.errors, p.population) => Some(b),
            _ => Some(p),
        })
        .cloned()
        .expect("grid not empty");
    Ok(CalibrationResult { best, surface })
}
