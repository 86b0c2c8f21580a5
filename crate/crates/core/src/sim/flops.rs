//! Closed-form floating-point operation counts per subcarrier.

use serde::Serialize;

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FlopModel {
    Zf,
    Mmse,
    Ml { order: usize },
    Pso { n_pop: usize, iterations: usize },
    De { n_ind: usize, iterations: usize },
}

impl FlopModel {
    /// Build a model from a detector name and budget. `population` and
    /// `iterations` are used by the heuristics, `order` by ML.
    pub fn from_name(name: &str, order: usize, population: usize, iterations: usize) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "zf" => Ok(FlopModel::Zf),
            "mmse" => Ok(FlopModel::Mmse),
            "ml" => Ok(FlopModel::Ml { order }),
            "pso" => Ok(FlopModel::Pso { n_pop: population, iterations }),
            "de" => Ok(FlopModel::De { n_ind: population, iterations }),
            other => Err(SimError::invalid("detector", format!("unknown detector `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FlopModel::Zf => "zf",
            FlopModel::Mmse => "mmse",
            FlopModel::Ml { .. } => "ml",
            FlopModel::Pso { .. } => "pso",
            FlopModel::De { .. } => "de",
        }
    }
}

pub fn flop_count(model: &FlopModel, nt: usize, nr: usize) -> f64 {
    let (t, r) = (nt as f64, nr as f64);
    match *model {
        FlopModel::Zf => 16.0 / 3.0 * t.powi(3) + 4.0 * t * t + 32.0 * t * t * r + 4.0 * t * r - 2.0 * t,
        FlopModel::Mmse => 16.0 / 3.0 * t.powi(3) + 8.0 * t * t + 32.0 * t * t * r + 4.0 * t * r,
        FlopModel::Pso { n_pop, iterations } => {
            (n_pop * iterations) as f64 * (8.0 * t * r + 20.0 * t + 4.0 * r + 7.0)
        }
        FlopModel::De { n_ind, iterations } => {
            (n_ind * iterations) as f64 * (16.0 * t * r + 12.0 * t + 8.0 * r + 14.0)
        }
        FlopModel::Ml { order } => (order as f64).powi(2 * nt as i32) * (8.0 * t * r + 4.0 * r + 7.0),
    }
}

/// Operating point for the relative-complexity sweep: `N_t = N_r`,
/// populations `population_factor * 2 N_t`, fixed iterations and order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityAssumptions {
    pub population_factor: usize,
    pub iterations: usize,
    pub order: usize,
}

impl Default for ComplexityAssumptions {
    fn default() -> Self {
        ComplexityAssumptions { population_factor: 5, iterations: 50, order: 4 }
    }
}

impl ComplexityAssumptions {
    pub fn models(&self, nt: usize) -> [FlopModel; 5] {
        let pop = self.population_factor * 2 * nt;
        [
            FlopModel::Zf,
            FlopModel::Mmse,
            FlopModel::Pso { n_pop: pop, iterations: self.iterations },
            FlopModel::De { n_ind: pop, iterations: self.iterations },
            FlopModel::Ml { order: self.order },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlopEntry {
    pub detector: &'static str,
    pub nt: usize,
    pub nr: usize,
    pub flops: f64,
    pub ratio_vs_ml: f64,
    pub ratio_vs_zf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlopReport {
    pub assumptions: ComplexityAssumptions,
    pub entries: Vec<FlopEntry>,
}

impl FlopReport {
    pub fn get(&self, detector: &str, nt: usize) -> Option<&FlopEntry> {
        self.entries.iter().find(|e| e.detector == detector && e.nt == nt)
    }
}

pub fn relative_complexity(nt_range: &[usize], assumptions: ComplexityAssumptions) -> Result<FlopReport> {
    if nt_range.is_empty() {
        return Err(SimError::invalid("nt_range", "must not be empty"));
    }
    if nt_range.contains(&0) {
        return Err(SimError::invalid("nt_range", "antenna counts must be positive"));
    }
    let mut entries = Vec::new();
    for &nt in nt_range {
        let models = assumptions.models(nt);
        let ml = flop_count(&FlopModel::Ml { order: assumptions.order }, nt, nt);
        let zf = flop_count(&FlopModel::Zf, nt, nt);
        for m in models {
            let flops = flop_count(&m, nt, nt);
            entries.push(FlopEntry {
                detector: m.name(),
                nt,
                nr: nt,
                flops,
                ratio_vs_ml: flops / ml,
                ratio_vs_zf: flops / zf,
            });
        }
    }
    Ok(FlopReport { assumptions, entries })
}
