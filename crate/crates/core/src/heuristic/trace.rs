//! Convergence traces of population-based detectors.

use serde::Serialize;

use crate::detect::DetectorResult;

/// Relative tolerance used for [`ConvergenceTrace::iterations_to_plateau`].
pub const DEFAULT_PLATEAU_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    /// Global best fitness after each iteration.
    pub best_fitness: Vec<f64>,
    pub iterations_to_plateau: usize,
}

impl ConvergenceTrace {
    pub fn new(best_fitness: Vec<f64>) -> Self {
        let iterations_to_plateau = convergence_profile(&best_fitness, DEFAULT_PLATEAU_TOLERANCE);
        ConvergenceTrace { best_fitness, iterations_to_plateau }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.best_fitness.windows(2).all(|w| w[1] <= w[0])
    }
}

/// First iteration (1-based) from which the best fitness never improves by
/// more than `tolerance` relative to its value at that iteration. An empty
/// trace yields 0.
pub fn convergence_profile(trace: &[f64], tolerance: f64) -> usize {
    let Some(&last) = trace.last() else {
        return 0;
    };
    trace
        .iter()
        .position(|&f| f - last <= tolerance * f.abs())
        .map_or(trace.len(), |i| i + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicOutcome {
    pub result: DetectorResult,
    pub trace: ConvergenceTrace,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_trace_plateaus_immediately() {
        assert_eq!(convergence_profile(&[3.0; 10], 0.01), 1);
    }

    #[test]
    fn flat_after_forty() {
        let mut t: Vec<f64> = (0..40).map(|i| 100.0 / (1.0 + i as f64)).collect();
        t.extend(std::iter::repeat_n(t[39], 60));
        assert_eq!(convergence_profile(&t, 0.01), 40);
    }

    #[test]
    fn zero_floor() {
        assert_eq!(convergence_profile(&[4.0, 2.0, 0.0, 0.0], 0.01), 3);
        assert_eq!(convergence_profile(&[], 0.01), 0);
    }
}
