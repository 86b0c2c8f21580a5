//! Differential evolution (rand/1/bin) detection.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::trace::{ConvergenceTrace, HeuristicOutcome};
use super::{quantize_real, resolve_bounds};
use crate::detect::{fitness, DetectorMeta, DetectorResult, RealDecomposition};
use crate::error::{Result, SimError};
use crate::ofdm::QamConstellation;
use crate::rng::from_seed;
use crate::sim::flops::{flop_count, FlopModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    pub n_ind: usize,
    pub n_gen: usize,
    /// Mutation scale factor in `[0, 2]`.
    pub f_mut: f64,
    /// Crossover probability in `[0, 1]`.
    pub f_cr: f64,
    pub bounds: Option<(f64, f64)>,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams::tuned(0.0)
    }
}

impl DeParams {
    /// Tuned 4-QAM settings for the correlation index closest to `rho`
    /// among 0, 0.5 and 0.9.
    pub fn tuned(rho: f64) -> Self {
        let (f_cr, f_mut) = match super::nearest_rho_slot(rho) {
            0 => (0.6, 0.6),
            1 => (0.6, 0.8),
            _ => (0.8, 1.8),
        };
        DeParams { n_ind: 40, n_gen: 100, f_mut, f_cr, bounds: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_ind < 4 {
            return Err(SimError::invalid("n_ind", "must be >= 4"));
        }
        if self.n_gen == 0 {
            return Err(SimError::invalid("n_gen", "must be >= 1"));
        }
        if !(0.0..=2.0).contains(&self.f_mut) {
            return Err(SimError::invalid("f_mut", "must lie in [0, 2]"));
        }
        if !(0.0..=1.0).contains(&self.f_cr) {
            return Err(SimError::invalid("f_cr", "must lie in [0, 1]"));
        }
        if let Some((lo, hi)) = self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SimError::invalid("bounds", "must be a finite interval with lo < hi"));
            }
        }
        Ok(())
    }

    /// Warning text when `n_ind` is outside `[5, 10] * n_dim`.
    pub fn population_warning(&self, n_dim: usize) -> Option<String> {
        (!(5 * n_dim..=10 * n_dim).contains(&self.n_ind)).then(|| {
            format!("DE population {} is outside the recommended range [{}, {}]", self.n_ind, 5 * n_dim, 10 * n_dim)
        })
    }
}

/// Indices drawn for one trial vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialIndices {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
    /// Coordinate always taken from the mutant.
    pub r4: usize,
}

/// Build the trial vector for individual `k` of a particle-major
/// population.
#[allow(clippy::too_many_arguments)]
pub fn generate_trial<R: Rng + ?Sized>(
    population: &[f64],
    n_dim: usize,
    k: usize,
    f_mut: f64,
    f_cr: f64,
    (lo, hi): (f64, f64),
    rng: &mut R,
    out: &mut [f64],
) -> TrialIndices {
    let n_ind = population.len() / n_dim;
    let mut draw = |taken: &[usize]| loop {
        let r = rng.random_range(0..n_ind);
        if !taken.contains(&r) {
            break r;
        }
    };
    let r1 = draw(&[k]);
    let r2 = draw(&[k, r1]);
    let r3 = draw(&[k, r1, r2]);
    let r4 = rng.random_range(0..n_dim);
    let row = |j: usize| &population[j * n_dim..(j + 1) * n_dim];
    let (a, b, c, parent) = (row(r1), row(r2), row(r3), row(k));
    for i in 0..n_dim {
        let take_mutant = rng.random::<f64>() <= f_cr || i == r4;
        let v = if take_mutant { a[i] + f_mut * (b[i] - c[i]) } else { parent[i] };
        out[i] = v.clamp(lo, hi);
    }
    TrialIndices { r1, r2, r3, r4 }
}

pub fn de_detect(
    rd: &RealDecomposition,
    constellation: &QamConstellation,
    params: &DeParams,
    seed: u64,
) -> Result<HeuristicOutcome> {
    params.validate()?;
    let (lo, hi) = resolve_bounds(params.bounds, constellation);
    let n = rd.n_dim();
    let mut rng = from_seed(seed);
    let mut pop: Vec<f64> = (0..n * params.n_ind).map(|_| rng.random_range(lo..=hi)).collect();
    let mut fit: Vec<f64> = pop.chunks_exact(n).map(|p| fitness(p, rd)).collect();
    let mut trials = vec![0.0; pop.len()];
    let mut trace = Vec::with_capacity(params.n_gen);

    for _ in 0..params.n_gen {
        for k in 0..params.n_ind {
            let out = &mut trials[k * n..(k + 1) * n];
            generate_trial(&pop, n, k, params.f_mut, params.f_cr, (lo, hi), &mut rng, out);
        }
        for k in 0..params.n_ind {
            let t = &trials[k * n..(k + 1) * n];
            let f = fitness(t, rd);
            if f < fit[k] {
                fit[k] = f;
                pop[k * n..(k + 1) * n].copy_from_slice(t);
            }
        }
        trace.push(fit.iter().cloned().fold(f64::INFINITY, f64::min));
    }

    let best = fit
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, &f)| if f < acc.1 { (k, f) } else { acc })
        .0;
    let (labels, quantized) = quantize_real(&pop[best * n..(best + 1) * n], constellation);
    let meta = DetectorMeta {
        iterations: params.n_gen,
        fitness: fitness(&quantized, rd),
        flops: flop_count(&FlopModel::De { n_ind: params.n_ind, iterations: params.n_gen }, n / 2, rd.n_rows() / 2),
        singular: false,
    };
    Ok(HeuristicOutcome {
        result: DetectorResult::from_labels(labels, constellation, meta),
        trace: ConvergenceTrace::new(trace),
    })
}
