//! Independent reference computations checked against the library.

use mimo_ofdm::detect::{detect_ml, Detector, MimoObservation};
use mimo_ofdm::fading::{ArrayKind, CorrelationSpec};
use mimo_ofdm::linalg::{CMatrix, CVector};
use mimo_ofdm::ofdm::{OfdmConfig, QamConstellation};
use mimo_ofdm::rng::substream;
use mimo_ofdm::sim::{analytic_ber_rayleigh, run_monte_carlo, ChannelMode, ScenarioConfig, StoppingRule};
use num_complex::Complex64;
use rand::Rng;
use statrs::function::erf::erfc;

fn q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Bit error rate of one Gray-labeled PAM axis in AWGN, by enumerating the
/// decision regions of every transmitted level.
fn pam_gray_ber(levels: usize, spacing_over_sigma: f64) -> f64 {
    let bits = levels.trailing_zeros() as usize;
    let gray = |i: usize| i ^ (i >> 1);
    let mut wrong = 0.0;
    for sent in 0..levels {
        for got in 0..levels {
            if got == sent {
                continue;
            }
            // region of level `got` spans half a spacing either side, open at the ends
            let lo = if got == 0 { f64::NEG_INFINITY } else { got as f64 - sent as f64 - 0.5 };
            let hi = if got == levels - 1 { f64::INFINITY } else { got as f64 - sent as f64 + 0.5 };
            let tail = |edge: f64| {
                if edge.is_infinite() {
                    if edge > 0.0 { 0.0 } else { 1.0 }
                } else {
                    q(edge * spacing_over_sigma)
                }
            };
            let p = tail(lo) - tail(hi);
            wrong += p * (gray(sent) ^ gray(got)).count_ones() as f64;
        }
    }
    wrong / (levels * bits) as f64
}

/// Flat Rayleigh average of the square-QAM AWGN bit error rate by
/// quadrature over the exponential channel gain.
fn rayleigh_ber_numeric(order: usize, ebn0_db: f64) -> f64 {
    let levels = (order as f64).sqrt() as usize;
    let es = 2.0 * (order as f64 - 1.0) / 3.0;
    let n0 = es / ((order as f64).log2() * 10f64.powf(ebn0_db / 10.0));
    let sigma = (n0 / 2.0).sqrt();
    // gain g = |h|^2 ~ Exp(1); substitute g = u^2 so the integrand is smooth at 0
    let (steps, u_max) = (200_000, 12.0);
    let h = u_max / steps as f64;
    let mut acc = 0.0;
    for i in 0..=steps {
        let u = i as f64 * h;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        let g = u * u;
        acc += w * 2.0 * u * (-g).exp() * pam_gray_ber(levels, 2.0 * g.sqrt() / sigma);
    }
    acc * h
}

#[test]
fn analytic_rayleigh_matches_quadrature() {
    for order in [4, 16] {
        for db in [0.0, 5.0, 10.0, 20.0, 30.0] {
            let closed = analytic_ber_rayleigh(order, db).unwrap();
            let numeric = rayleigh_ber_numeric(order, db);
            assert!((closed - numeric).abs() <= 1e-5 * numeric, "M={order} {db} dB: {closed} vs {numeric}");
        }
    }
}

#[test]
fn awgn_pam_oracle_reduces_to_qpsk_formula() {
    for s in [0.5, 1.0, 2.0, 4.0] {
        // antipodal levels sit half a spacing from the threshold
        assert!((pam_gray_ber(2, s) - q(s / 2.0)).abs() < 1e-15);
    }
}

fn metric(h: &CMatrix, y: &CVector, x: &CVector) -> f64 {
    (y - h * x).norm_squared()
}

#[test]
fn ml_matches_explicit_enumeration() {
    for (order, nt, nr) in [(4, 2, 2), (16, 2, 2), (4, 3, 2), (4, 2, 4)] {
        let c = QamConstellation::new(order).unwrap();
        for trial in 0..25u64 {
            let mut rng = substream(99, &[order as u64, nt as u64, trial]);
            let mut g = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 2.0;
            let h = CMatrix::from_fn(nr, nt, |_, _| g());
            let y = CVector::from_fn(nr, |_, _| g() * 3.0);
            let mut best = (f64::INFINITY, vec![]);
            let total = order.pow(nt as u32);
            for idx in 0..total {
                // antenna 0 is the most significant digit
                let labels: Vec<usize> = (0..nt).map(|t| (idx / order.pow((nt - 1 - t) as u32)) % order).collect();
                let x = CVector::from_iterator(nt, labels.iter().map(|&l| c.points()[l]));
                let m = metric(&h, &y, &x);
                if m < best.0 {
                    best = (m, labels);
                }
            }
            let obs = MimoObservation::new(y.clone(), h.clone(), 0.1, &c).unwrap();
            let got = detect_ml(&obs).unwrap();
            assert_eq!(got.labels, best.1, "order {order} {nt}x{nr} trial {trial}");
            assert!((got.meta.fitness - best.0).abs() <= 1e-9 * (1.0 + best.0));
        }
    }
}

fn flat_siso(order: usize, ebn0: Vec<f64>) -> ScenarioConfig {
    ScenarioConfig {
        id: "flat-siso".into(),
        ofdm: OfdmConfig { num_subcarriers: 64, cp_fraction: 0.25, bandwidth_hz: 20e6 },
        order,
        nt: 1,
        nr: 1,
        correlation: CorrelationSpec { array: ArrayKind::Ula, rho: 0.0 },
        detector: Detector::Zf,
        channel: ChannelMode::BlockStaticRayleigh { tau_rms_s: 0.0, power_floor_db: -30.0 },
        ebn0_db: ebn0,
        stopping: StoppingRule { min_errors: 400, min_trials: 16, max_trials: 20_000, batch_trials: 16 },
        symbols_per_trial: 1,
        seed: 5,
    }
}

#[test]
fn siso_flat_fading_tracks_analytic_curve() {
    for order in [4, 16] {
        let cfg = flat_siso(order, vec![0.0, 10.0, 20.0]);
        let shift = 10.0 * cfg.ofdm.cp_overhead().log10();
        let curve = run_monte_carlo(&cfg).unwrap();
        for p in &curve.points {
            let want = analytic_ber_rayleigh(order, p.ebn0_db - shift).unwrap();
            assert!(
                (p.ber - want).abs() <= 4.0 * p.std_error,
                "M={order} {} dB: {} ± {} vs {want}",
                p.ebn0_db,
                p.ber,
                p.std_error
            );
        }
    }
}

#[test]
fn noiseless_link_is_error_free() {
    for det in [Detector::Zf, Detector::Mmse, Detector::Ml] {
        let mut cfg = flat_siso(16, vec![f64::INFINITY]);
        cfg.nt = 2;
        cfg.nr = 2;
        cfg.detector = det;
        cfg.stopping = StoppingRule::fixed(8);
        let p = &run_monte_carlo(&cfg).unwrap().points[0];
        assert_eq!(p.errors, 0, "{:?}", cfg.detector);
    }
}
