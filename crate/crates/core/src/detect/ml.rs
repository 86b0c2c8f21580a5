//! Exhaustive maximum-likelihood search.

use num_complex::Complex64;

use super::observation::MimoObservation;
use super::{DetectorMeta, DetectorResult};
use crate::error::{Result, SimError};

/// Largest candidate count `M^{N_t}` the exhaustive search accepts.
pub const ML_BUDGET: u128 = 1 << 24;

/// Candidates within this relative margin of the running best are kept and
/// re-scored from scratch, so incremental rounding cannot change the argmin.
const TIE_MARGIN: f64 = 1e-8;

pub fn ml_candidate_count(order: usize, nt: usize) -> u128 {
    (order as u128).saturating_pow(nt as u32)
}

/// Argmin of `||y - H x||^2` over all `M^{N_t}` symbol vectors.
///
/// Candidates are visited in reflected mixed-radix Gray order so each step
/// changes one antenna by one label and the residual is updated with a
/// single column. Ties resolve to the lexicographically smallest label
/// vector (antenna 0 most significant).
pub fn detect_ml(obs: &MimoObservation) -> Result<DetectorResult> {
    let c = obs.constellation;
    let m = c.order();
    let (nr, nt) = obs.h.shape();
    let count = ml_candidate_count(m, nt);
    if count > ML_BUDGET {
        return Err(SimError::MlBudgetExceeded { candidates: count, budget: ML_BUDGET });
    }
    let points = c.points();
    let cols: Vec<Vec<Complex64>> = (0..nt).map(|t| obs.h.column(t).iter().copied().collect()).collect();

    let mut labels = vec![0usize; nt];
    let mut dirs = vec![1isize; nt];
    let mut residual: Vec<Complex64> = obs.y.iter().copied().collect();
    for col in &cols {
        for (res, h) in residual.iter_mut().zip(col.iter()) {
            *res -= h * points[0];
        }
    }

    let norm = |res: &[Complex64]| res.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut best = norm(&residual);
    let mut near: Vec<Vec<usize>> = vec![labels.clone()];

    loop {
        // advance the least significant antenna that can still move
        let mut p = 0;
        while p < nt {
            let t = nt - 1 - p;
            let next = labels[t] as isize + dirs[t];
            if (0..m as isize).contains(&next) {
                let next = next as usize;
                let delta = points[next] - points[labels[t]];
                for r in 0..nr {
                    residual[r] -= cols[t][r] * delta;
                }
                labels[t] = next;
                break;
            }
            dirs[t] = -dirs[t];
            p += 1;
        }
        if p == nt {
            break;
        }
        let metric = norm(&residual);
        let margin = TIE_MARGIN * (1.0 + best);
        if metric < best - margin {
            best = metric;
            near.clear();
            near.push(labels.clone());
        } else if metric <= best + margin {
            best = best.min(metric);
            near.push(labels.clone());
        }
    }

    let mut winner: Option<(f64, Vec<usize>)> = None;
    for cand in near {
        let x: Vec<Complex64> = cand.iter().map(|&l| points[l]).collect();
        let metric = obs.metric(&x);
        let better = match &winner {
            None => true,
            Some((bm, bl)) => metric < *bm || (metric == *bm && cand < *bl),
        };
        if better {
            winner = Some((metric, cand));
        }
    }
    let (metric, labels) = winner.expect("at least one candidate");
    Ok(DetectorResult::from_labels(
        labels,
        c,
        DetectorMeta { iterations: count as usize, fitness: metric, ..Default::default() },
    ))
}

/// Plain lexicographic enumeration; reference for tests and benches.
pub fn detect_ml_naive(obs: &MimoObservation) -> Result<DetectorResult> {
    let c = obs.constellation;
    let (m, nt) = (c.order(), obs.nt());
    let count = ml_candidate_count(m, nt);
    if count > ML_BUDGET {
        return Err(SimError::MlBudgetExceeded { candidates: count, budget: ML_BUDGET });
    }
    let mut best = (f64::INFINITY, vec![0; nt]);
    let mut labels = vec![0usize; nt];
    for idx in 0..count as usize {
        let mut rem = idx;
        for t in (0..nt).rev() {
            labels[t] = rem % m;
            rem /= m;
        }
        let x: Vec<Complex64> = labels.iter().map(|&l| c.points()[l]).collect();
        let metric = obs.metric(&x);
        if metric < best.0 {
            best = (metric, labels.clone());
        }
    }
    Ok(DetectorResult::from_labels(
        best.1,
        c,
        DetectorMeta { iterations: count as usize, fitness: best.0, ..Default::default() },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::observation::{fitness, real_decompose, stack_complex};
    use crate::linalg::{CMatrix, CVector};
    use crate::ofdm::QamConstellation;
    use crate::rng::from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_obs<'a>(
        c: &'a QamConstellation,
        nr: usize,
        nt: usize,
        noise: f64,
        seed: u64,
    ) -> (MimoObservation<'a>, Vec<usize>) {
        let mut rng = from_seed(seed);
        let mut g = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let h = CMatrix::from_fn(nr, nt, |_, _| g());
        let labels: Vec<usize> = (0..nt).map(|i| (seed as usize + 7 * i) % c.order()).collect();
        let x = CVector::from_iterator(nt, labels.iter().map(|&l| c.points()[l]));
        let y = &h * x + CVector::from_fn(nr, |_, _| g() * noise);
        (MimoObservation::new(y, h, 0.0, c).unwrap(), labels)
    }

    #[test]
    fn noiseless_recovers_transmitted() {
        for order in [4, 16] {
            let c = QamConstellation::new(order).unwrap();
            for seed in 0..20 {
                let (obs, labels) = random_obs(&c, 3, 2, 0.0, seed);
                let res = detect_ml(&obs).unwrap();
                assert_eq!(res.labels, labels);
                assert!(res.meta.fitness < 1e-20);
            }
        }
    }

    #[test]
    fn budget_guard() {
        let c = QamConstellation::new(256).unwrap();
        let (obs, _) = random_obs(&c, 4, 4, 0.0, 1);
        assert!(matches!(detect_ml(&obs), Err(SimError::MlBudgetExceeded { .. })));
        let c = QamConstellation::new(4).unwrap();
        let (obs, _) = random_obs(&c, 12, 12, 0.0, 1);
        assert_eq!(ml_candidate_count(4, 12), ML_BUDGET);
        assert!(ml_candidate_count(4, 13) > ML_BUDGET);
        drop(obs);
    }

    #[test]
    fn exact_tie_prefers_first_candidate() {
        // y = 0 and H = 0: every candidate scores the same
        let c = QamConstellation::new(4).unwrap();
        let obs = MimoObservation::new(CVector::zeros(2), CMatrix::zeros(2, 2), 0.0, &c).unwrap();
        assert_eq!(detect_ml(&obs).unwrap().labels, vec![0, 0]);
    }

    #[test]
    fn matches_real_domain_enumeration() {
        let c = QamConstellation::new(4).unwrap();
        for seed in 0..50 {
            let (obs, _) = random_obs(&c, 2, 2, 0.6, seed);
            let rd = real_decompose(&obs);
            let mut best = f64::INFINITY;
            for a in c.points() {
                for b in c.points() {
                    best = best.min(fitness(&stack_complex(&[*a, *b]), &rd));
                }
            }
            let res = detect_ml(&obs).unwrap();
            assert!((res.meta.fitness - best).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gray_sweep_matches_naive(seed in any::<u64>(), nt in 1usize..4, nr in 1usize..4,
                                    order_idx in 0usize..2, noise in 0.0f64..3.0) {
            let c = QamConstellation::new([4, 16][order_idx]).unwrap();
            let (obs, _) = random_obs(&c, nr, nt, noise, seed);
            let fast = detect_ml(&obs).unwrap();
            let slow = detect_ml_naive(&obs).unwrap();
            prop_assert_eq!(fast.labels, slow.labels);
            prop_assert_eq!(fast.meta.fitness, slow.meta.fitness);
        }
    }
}
