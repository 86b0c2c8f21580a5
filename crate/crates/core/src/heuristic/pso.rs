//! Particle swarm detection over the real-valued search box.

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
pub struct PsoParams {
    pub n_pop: usize,
    pub n_iter: usize,
    /// Cognitive factor.
    pub c1: f64,
    /// Social factor.
    pub c2: f64,
    /// Initial inertia.
    pub w0: f64,
    /// Inertia multiplier applied after every iteration.
    pub inertia_decay: f64,
    pub v_max: f64,
    /// Per-dimension interval; `None` spans the outermost constellation
    /// levels.
    pub bounds: Option<(f64, f64)>,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams::tuned(0.0)
    }
}

impl PsoParams {
    /// Tuned 4-QAM settings for the correlation index closest to `rho`
    /// among 0, 0.5 and 0.9.
    pub fn tuned(rho: f64) -> Self {
        let (c2, w0) = match super::nearest_rho_slot(rho) {
            0 => (1.0, 1.5),
            1 => (0.5, 1.5),
            _ => (1.0, 3.5),
        };
        PsoParams { n_pop: 40, n_iter: 100, c1: 4.0, c2, w0, inertia_decay: 0.99, v_max: 1.0, bounds: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pop == 0 {
            return Err(SimError::invalid("n_pop", "must be >= 1"));
        }
        if self.n_iter == 0 {
            return Err(SimError::invalid("n_iter", "must be >= 1"));
        }
        if !(self.v_max > 0.0) || !self.v_max.is_finite() {
            return Err(SimError::invalid("v_max", "must be finite and > 0"));
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("w0", self.w0), ("inertia_decay", self.inertia_decay)] {
            if !v.is_finite() {
                return Err(SimError::invalid(name, "must be finite"));
            }
        }
        if let Some((lo, hi)) = self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SimError::invalid("bounds", "must be a finite interval with lo < hi"));
            }
        }
        Ok(())
    }

    /// Warning text when `c1 + c2` exceeds the usual stability limit of 4.
    pub fn stability_warning(&self) -> Option<String> {
        (self.c1 + self.c2 > 4.0).then(|| {
            format!("PSO c1 + c2 = {} exceeds 4; the swarm may not settle", self.c1 + self.c2)
        })
    }
}

/// Internal swarm state, laid out particle-major.
#[derive(Debug, Clone)]
pub struct PsoState {
    pub n_dim: usize,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub personal_best: Vec<f64>,
    pub pb_fitness: Vec<f64>,
    pub global_best: Vec<f64>,
    pub gb_fitness: f64,
    pub inertia: f64,
}

impl PsoState {
    pub fn particle(&self, k: usize) -> &[f64] {
        &self.positions[k * self.n_dim..(k + 1) * self.n_dim]
    }

    pub fn max_speed(&self) -> f64 {
        self.velocities.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn refresh_global(&mut self) {
        let mut best = (self.gb_fitness, None);
        for (k, &f) in self.pb_fitness.iter().enumerate() {
            if f < best.0 {
                best = (f, Some(k));
            }
        }
        if let Some(k) = best.1 {
            self.gb_fitness = best.0;
            self.global_best.copy_from_slice(&self.personal_best[k * self.n_dim..(k + 1) * self.n_dim]);
        }
    }
}

pub(crate) fn pso_init<R: Rng + ?Sized>(
    rd: &RealDecomposition,
    params: &PsoParams,
    (lo, hi): (f64, f64),
    rng: &mut R,
) -> PsoState {
    let n = rd.n_dim();
    let positions: Vec<f64> = (0..n * params.n_pop).map(|_| rng.random_range(lo..=hi)).collect();
    let pb_fitness: Vec<f64> = positions.chunks_exact(n).map(|p| fitness(p, rd)).collect();
    let mut state = PsoState {
        n_dim: n,
        velocities: vec![0.0; positions.len()],
        personal_best: positions.clone(),
        positions,
        pb_fitness,
        global_best: vec![0.0; n],
        gb_fitness: f64::INFINITY,
        inertia: params.w0,
    };
    state.refresh_global();
    state
}

/// One synchronous iteration: velocity and position update for every
/// particle against the previous global best, then the best refresh.
pub(crate) fn pso_step<R: Rng + ?Sized>(
    state: &mut PsoState,
    rd: &RealDecomposition,
    params: &PsoParams,
    (lo, hi): (f64, f64),
    rng: &mut R,
) {
    let n = state.n_dim;
    let w = state.inertia;
    for k in 0..params.n_pop {
        let base = k * n;
        for d in 0..n {
            let i = base + d;
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let p = state.positions[i];
            let v = w * state.velocities[i]
                + params.c1 * u1 * (state.personal_best[i] - p)
                + params.c2 * u2 * (state.global_best[d] - p);
            let v = v.clamp(-params.v_max, params.v_max);
            state.velocities[i] = v;
            state.positions[i] = (p + v).clamp(lo, hi);
        }
        let f = fitness(&state.positions[base..base + n], rd);
        if f < state.pb_fitness[k] {
            state.pb_fitness[k] = f;
            state.personal_best[base..base + n].copy_from_slice(&state.positions[base..base + n]);
        }
    }
    state.refresh_global();
    state.inertia *= params.inertia_decay;
}

pub fn pso_detect(
    rd: &RealDecomposition,
    constellation: &QamConstellation,
    params: &PsoParams,
    seed: u64,
) -> Result<HeuristicOutcome> {
    params.validate()?;
    let bounds = resolve_bounds(params.bounds, constellation);
    let mut rng = from_seed(seed);
    let mut state = pso_init(rd, params, bounds, &mut rng);
    let mut trace = Vec::with_capacity(params.n_iter);
    for _ in 0..params.n_iter {
        pso_step(&mut state, rd, params, bounds, &mut rng);
        trace.push(state.gb_fitness);
    }
    let (labels, quantized) = quantize_real(&state.global_best, constellation);
    let nt = rd.n_dim() / 2;
    let meta = DetectorMeta {
        iterations: params.n_iter,
        fitness: fitness(&quantized, rd),
        flops: flop_count(&FlopModel::Pso { n_pop: params.n_pop, iterations: params.n_iter }, nt, rd.n_rows() / 2),
        singular: false,
    };
    Ok(HeuristicOutcome {
        result: DetectorResult::from_labels(labels, constellation, meta),
        trace: ConvergenceTrace::new(trace),
    })
}
