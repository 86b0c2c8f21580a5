//! Bit-error-rate estimation over an Eb/N0 grid.

use serde::Serialize;

use super::link::{LinkSimulator, TrialOutcome};
use super::scenario::{ScenarioConfig, StoppingRule};
use crate::error::Result;
use crate::par;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub ber: f64,
    pub bits: u64,
    pub errors: u64,
    pub trials: u64,
    pub random_decisions: u64,
    /// Standard error of `ber`: the larger of the binomial estimate and the
    /// between-trial estimate, which accounts for errors clustering within
    /// a channel realization.
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Default, Clone, Copy)]
struct Accumulator {
    bits: u64,
    errors: u64,
    trials: u64,
    random_decisions: u64,
    sum_rate: f64,
    sum_rate_sq: f64,
}

impl Accumulator {
    fn push(&mut self, t: &TrialOutcome) {
        self.bits += t.bits;
        self.errors += t.errors;
        self.trials += 1;
        self.random_decisions += t.random_decisions;
        let rate = t.errors as f64 / t.bits as f64;
        self.sum_rate += rate;
        self.sum_rate_sq += rate * rate;
    }

    fn finish(&self, ebn0_db: f64) -> BerPoint {
        let ber = if self.bits == 0 { 0.0 } else { self.errors as f64 / self.bits as f64 };
        let binomial = if self.bits == 0 { 0.0 } else { (ber * (1.0 - ber) / self.bits as f64).sqrt() };
        let n = self.trials as f64;
        let between = if self.trials > 1 {
            let mean = self.sum_rate / n;
            let var = (self.sum_rate_sq - n * mean * mean).max(0.0) / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        let std_error = binomial.max(between);
        BerPoint {
            ebn0_db,
            ber,
            bits: self.bits,
            errors: self.errors,
            trials: self.trials,
            random_decisions: self.random_decisions,
            std_error,
            ci_low: (ber - Z_95 * std_error).max(0.0),
            ci_high: (ber + Z_95 * std_error).min(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerCurve {
    pub scenario_id: String,
    pub detector: String,
    pub array: String,
    pub rho: f64,
    pub nt: usize,
    pub nr: usize,
    pub stopping: StoppingRule,
    pub fingerprint: String,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn point(&self, ebn0_db: f64) -> Option<&BerPoint> {
        self.points.iter().find(|p| (p.ebn0_db - ebn0_db).abs() < 1e-9)
    }

    pub fn bers(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ber).collect()
    }

    /// Eb/N0 where the curve first falls to `target`, by log-linear
    /// interpolation between grid points.
    pub fn ebn0_at(&self, target: f64) -> Option<f64> {
        for w in self.points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.ber >= target && b.ber <= target {
                if b.ber <= 0.0 || a.ber == b.ber {
                    return Some(b.ebn0_db);
                }
                let f = (a.ber.log10() - target.log10()) / (a.ber.log10() - b.ber.log10());
                return Some(a.ebn0_db + f * (b.ebn0_db - a.ebn0_db));
            }
        }
        None
    }
}

/// Estimate one grid point. Trials run in fixed-size batches; the stop
/// rule is checked only between batches, so the outcome is independent of
/// how many workers execute a batch.
pub fn run_point(sim: &LinkSimulator, point: usize, ebn0_db: f64, rule: &StoppingRule) -> Result<BerPoint> {
    let mut acc = Accumulator::default();
    while acc.trials < rule.max_trials && !(acc.errors >= rule.min_errors && acc.trials >= rule.min_trials) {
        let start = acc.trials;
        let end = (start + rule.batch_trials).min(rule.max_trials);
        let batch = par::map_range(start as usize..end as usize, |i| sim.run_trial(point, ebn0_db, i as u64));
        for outcome in batch {
            acc.push(&outcome?);
        }
    }
    Ok(acc.finish(ebn0_db))
}

pub fn run_monte_carlo(cfg: &ScenarioConfig) -> Result<BerCurve> {
    let sim = LinkSimulator::new(cfg)?;
    let mut points = Vec::with_capacity(cfg.ebn0_db.len());
    for (i, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        let p = run_point(&sim, i, ebn0, &cfg.stopping)?;
        log::debug!(
            "{} {} Eb/N0 {ebn0} dB: BER {:.3e} ({} errors / {} bits, {} trials)",
            cfg.id,
            cfg.detector.name(),
            p.ber,
            p.errors,
            p.bits,
            p.trials
        );
        points.push(p);
    }
    Ok(BerCurve {
        scenario_id: cfg.id.clone(),
        detector: cfg.detector.name().to_string(),
        array: cfg.correlation.array.label().to_string(),
        rho: cfg.correlation.rho,
        nt: cfg.nt,
        nr: cfg.nr,
        stopping: cfg.stopping,
        fingerprint: cfg.fingerprint(),
        points,
    })
}

/// `a <= b` up to `k` combined standard errors.
pub fn le_within(a: &BerPoint, b: &BerPoint, k: f64) -> bool {
    a.ber - b.ber <= k * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt()
}
