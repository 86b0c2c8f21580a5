//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero when any fails. Pass criterion numbers as arguments
//! (`cargo test --test acceptance -- 4 7`) to run a subset.

use std::time::Instant;

use mimo_ofdm::config::{parse_config_str, preset};
use mimo_ofdm::detect::{Detector, MimoObservation};
use mimo_ofdm::fading::{min_subcarriers_flat, validate_jakes, ArrayKind, CorrelationSpec, JakesConfig};
use mimo_ofdm::heuristic::{
    convergence_profile, de_detect, pso_detect, DeParams, PsoParams, DEFAULT_PLATEAU_TOLERANCE,
};
use mimo_ofdm::linalg::{CMatrix, CVector};
use mimo_ofdm::ofdm::{noise_variance, QamConstellation};
use mimo_ofdm::rng::{substream, SimRng};
use mimo_ofdm::sim::{
    analytic_ber_rayleigh, cp_study, flop_count, le_within, relative_complexity, run_monte_carlo,
    sensibility_kappa, sensibility_table, BerCurve, BerPoint, ComplexityAssumptions, FlopModel, ScenarioConfig,
    StoppingRule,
};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

const SEED: u64 = 20_240_601;

// Criterion 1
const KS_MAX: f64 = 0.02;
const ACF_RMS_MAX: f64 = 0.05;
const CROSS_MAX: f64 = 0.05;
const PSD_PEAK_BINS: f64 = 1.0;
const JAKES_SAMPLES: usize = 16384;

// Criteria 2, 4, 5
const SIGMAS: f64 = 3.0;
const FLAT_RULE_N: usize = 393;

// Criterion 3
const FLOOR_RATIO_LIMIT: f64 = 0.5;

// Criterion 4
const MMSE_ZF_GAP_DB: f64 = 3.0;
const MMSE_ZF_GAP_TOL_DB: f64 = 1.5;
const GAP_TARGET_BER: f64 = 1e-2;

// Criterion 5
const ZF_CORRELATION_PENALTY: f64 = 10.0;

// Criterion 6
const ORACLE_RUNS: u64 = 1000;
const ORACLE_NOISELESS_RATE: f64 = 0.99;
const ORACLE_NOISY_RATE: f64 = 0.95;
const ORACLE_EBN0_DB: f64 = 12.0;
const FITNESS_RTOL: f64 = 1e-9;

// Criterion 7
const PLATEAU_SEEDS: u64 = 100;
const PLATEAU_EBN0_DB: f64 = 15.0;
const PLATEAU_BAND: (f64, f64) = (25.0, 60.0);

// Criterion 8
const FLOP_TUPLES: usize = 10;
const FLOP_RTOL: f64 = 1e-12;

// Criterion 9: a kappa estimate from e errors on each side has a standard
// deviation near sqrt(2 / e) / ln 10, about 0.02 at 1000 errors.
const SENSIBILITY_STOPPING: StoppingRule =
    StoppingRule { min_errors: 1000, min_trials: 16, max_trials: 20_000, batch_trials: 16 };

// Criterion 10
const ARRAY_LOG_GAP: f64 = 0.3;

type Criterion = (usize, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn table4_base(nt: usize) -> ScenarioConfig {
    let cfg = parse_config_str(preset("table4-mimo").unwrap(), true).unwrap().config;
    cfg.mimo_ber()
        .unwrap()
        .into_iter()
        .find(|s| s.nt == nt && s.correlation.rho == 0.0)
        .map(|s| ScenarioConfig { seed: SEED, ..s })
        .unwrap()
}

fn table2_base(n: usize) -> ScenarioConfig {
    let cfg = parse_config_str(preset("table2-ofdm").unwrap(), true).unwrap().config;
    cfg.ofdm_ber()
        .unwrap()
        .into_iter()
        .find(|s| s.ofdm.num_subcarriers == n)
        .map(|s| ScenarioConfig { seed: SEED, ..s })
        .unwrap()
}

fn at(curve: &BerCurve, db: f64) -> &BerPoint {
    curve.point(db).unwrap()
}

fn fmt_point(p: &BerPoint) -> String {
    format!("{:.3e}±{:.1e}", p.ber, p.std_error)
}

fn criterion_1() -> Outcome {
    let cfg = JakesConfig::table1();
    let v = validate_jakes(&cfg, JAKES_SAMPLES, SEED).unwrap();
    let (ka, kp, acf, cross, peak) = (
        v.worst_ks_amplitude(),
        v.worst_ks_phase(),
        v.worst_autocorr_error(),
        v.max_cross_correlation,
        v.worst_peak_offset_bins(),
    );
    let pass = ka < KS_MAX && kp < KS_MAX && acf < ACF_RMS_MAX && cross < CROSS_MAX && peak <= PSD_PEAK_BINS;
    Outcome::new(
        pass,
        format!(
            "KS amp {ka:.4}, KS phase {kp:.4} (< {KS_MAX}); acf rms {acf:.4} (< {ACF_RMS_MAX}); \
             cross {cross:.4} (< {CROSS_MAX}); psd peak offset {peak:.2} bins (<= {PSD_PEAK_BINS})"
        ),
    )
}

fn criterion_2() -> Outcome {
    let n_flat = min_subcarriers_flat(5e6, 2.5e-6, 0.2).unwrap();
    let grid = vec![10.0, 15.0, 20.0];
    let wide = run_monte_carlo(&ScenarioConfig { ebn0_db: grid.clone(), ..table2_base(512) }).unwrap();
    let narrow = run_monte_carlo(&ScenarioConfig { ebn0_db: vec![20.0], ..table2_base(64) }).unwrap();
    // Eb counts the prefix energy, so the reference shifts by the prefix overhead.
    let shift_db = 10.0 * wide_overhead().log10();
    let mut pass = n_flat == FLAT_RULE_N;
    let mut detail = format!("N_flat = {n_flat}; N=512:");
    for &db in &grid {
        let p = at(&wide, db);
        let reference = analytic_ber_rayleigh(16, db - shift_db).unwrap();
        let ok = (p.ber - reference).abs() <= SIGMAS * p.std_error;
        pass &= ok;
        detail += &format!(" {db}dB {} vs {reference:.3e}{}", fmt_point(p), if ok { "" } else { " (off)" });
    }
    let (p64, p512) = (at(&narrow, 20.0), at(&wide, 20.0));
    let worse = p64.ber - p512.ber >= SIGMAS * (p64.std_error.powi(2) + p512.std_error.powi(2)).sqrt();
    pass &= worse;
    detail += &format!("; N=64 at 20dB {} (worse by >= {SIGMAS} sigma: {worse})", fmt_point(p64));
    Outcome::new(pass, detail)
}

fn wide_overhead() -> f64 {
    table2_base(512).ofdm.cp_overhead()
}

fn criterion_3() -> Outcome {
    let base = ScenarioConfig { ebn0_db: vec![10.0, 20.0, 30.0], ..table2_base(512) };
    let curves = cp_study(&base, &[0.10, 0.20]).unwrap();
    let ratio = |i: usize| at(&curves[i].curve, 30.0).ber / at(&curves[i].curve, 20.0).ber;
    let (short, long) = (ratio(0), ratio(1));
    let pass = short > FLOOR_RATIO_LIMIT && long <= FLOOR_RATIO_LIMIT && curves[0].floor && !curves[1].floor;
    let describe = |i: usize| {
        let c = &curves[i];
        format!(
            "CP {}% ({} samples, memory {}): BER20 {} BER30 {} ratio {:.3}",
            c.cp_fraction * 100.0,
            c.cp_len,
            c.channel_memory,
            fmt_point(at(&c.curve, 20.0)),
            fmt_point(at(&c.curve, 30.0)),
            ratio(i)
        )
    };
    Outcome::new(pass, format!("{}; {} (floor iff > {FLOOR_RATIO_LIMIT})", describe(0), describe(1)))
}

fn criterion_4() -> Outcome {
    let base = ScenarioConfig { ebn0_db: (0..=12).map(|i| 2.0 * i as f64).collect(), ..table4_base(4) };
    let ml = run_monte_carlo(&base.with_detector(Detector::Ml)).unwrap();
    let mmse = run_monte_carlo(&base.with_detector(Detector::Mmse)).unwrap();
    let zf = run_monte_carlo(&base.with_detector(Detector::Zf)).unwrap();
    let mut ordered = true;
    let mut violations = Vec::new();
    for i in 0..base.ebn0_db.len() {
        let (a, b, c) = (&ml.points[i], &mmse.points[i], &zf.points[i]);
        if !(le_within(a, b, SIGMAS) && le_within(b, c, SIGMAS)) {
            ordered = false;
            violations.push(a.ebn0_db);
        }
    }
    let gap = match (zf.ebn0_at(GAP_TARGET_BER), mmse.ebn0_at(GAP_TARGET_BER)) {
        (Some(z), Some(m)) => Some(z - m),
        _ => None,
    };
    let gap_ok = gap.is_some_and(|g| (g - MMSE_ZF_GAP_DB).abs() <= MMSE_ZF_GAP_TOL_DB);
    let at24 = |c: &BerCurve| fmt_point(c.points.last().unwrap());
    Outcome::new(
        ordered && gap_ok,
        format!(
            "ordering ML<=MMSE<=ZF within {SIGMAS} sigma at all points: {ordered} {violations:?}; \
             MMSE-ZF gap at BER {GAP_TARGET_BER:e}: {} dB (want {MMSE_ZF_GAP_DB}±{MMSE_ZF_GAP_TOL_DB}); \
             24dB ML {} MMSE {} ZF {}",
            gap.map_or("n/a".into(), |g| format!("{g:.2}")),
            at24(&ml),
            at24(&mmse),
            at24(&zf)
        ),
    )
}

fn criterion_5() -> Outcome {
    let base = ScenarioConfig { ebn0_db: vec![24.0], ..table4_base(4) };
    let detectors = [
        Detector::Ml,
        Detector::Zf,
        Detector::Mmse,
        Detector::Pso(PsoParams::tuned(0.0)),
        Detector::De(DeParams::tuned(0.0)),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for det in detectors {
        let run = |rho: f64| {
            let cfg = base.with_detector(det.clone()).with_correlation(CorrelationSpec { rho, ..base.correlation });
            run_monte_carlo(&cfg).unwrap().points.remove(0)
        };
        let (p0, p9) = (run(0.0), run(0.9));
        let mut ok = le_within(&p0, &p9, SIGMAS);
        let ratio = p9.ber / p0.ber;
        if det == Detector::Zf {
            ok &= ratio >= ZF_CORRELATION_PENALTY;
        }
        pass &= ok;
        detail.push(format!("{} {} -> {} (x{ratio:.1})", det.name(), fmt_point(&p0), fmt_point(&p9)));
    }
    Outcome::new(
        pass,
        format!("24dB rho 0 -> 0.9: {}; ZF ratio must be >= {ZF_CORRELATION_PENALTY}", detail.join(", ")),
    )
}

fn gaussian(rng: &mut SimRng) -> Complex64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// One flat Rayleigh observation in detector units: `y = H x / sqrt(Nt) + n`.
fn random_observation(
    c: &QamConstellation,
    nt: usize,
    nr: usize,
    ebn0_db: f64,
    rng: &mut SimRng,
) -> (CVector, CMatrix, f64) {
    let sigma2 = noise_variance(c.average_energy(), c.bits_per_symbol(), ebn0_db, 1.0, nt);
    let h = CMatrix::from_fn(nr, nt, |_, _| gaussian(rng)) / Complex64::new((nt as f64).sqrt(), 0.0);
    let x = CVector::from_fn(nt, |_, _| c.points()[rng.random_range(0..c.order())]);
    let n = CVector::from_fn(nr, |_, _| gaussian(rng) * sigma2.sqrt());
    (&h * x + n, h, sigma2 / c.average_energy())
}

fn oracle_rate(detector: &Detector, ebn0_db: f64, stream: u64) -> f64 {
    let c = QamConstellation::new(4).unwrap();
    let mut hits = 0;
    for run in 0..ORACLE_RUNS {
        let mut rng = substream(SEED, &[6, stream, run]);
        let (y, h, ratio) = random_observation(&c, 2, 2, ebn0_db, &mut rng);
        let obs = MimoObservation::new(y, h, ratio, &c).unwrap();
        let ml = Detector::Ml.detect(&obs, &mut rng).unwrap().meta.fitness;
        let heur = detector.detect(&obs, &mut rng).unwrap().meta.fitness;
        if heur - ml <= FITNESS_RTOL * (1.0 + ml) {
            hits += 1;
        }
    }
    hits as f64 / ORACLE_RUNS as f64
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, det) in [Detector::Pso(PsoParams::tuned(0.0)), Detector::De(DeParams::tuned(0.0))].iter().enumerate() {
        let clean = oracle_rate(det, f64::INFINITY, 2 * i as u64);
        let noisy = oracle_rate(det, ORACLE_EBN0_DB, 2 * i as u64 + 1);
        pass &= clean >= ORACLE_NOISELESS_RATE && noisy >= ORACLE_NOISY_RATE;
        detail.push(format!("{} noiseless {:.1}% / {ORACLE_EBN0_DB}dB {:.1}%", det.name(), clean * 100.0, noisy * 100.0));
    }
    Outcome::new(
        pass,
        format!(
            "{} of {ORACLE_RUNS} runs match ML fitness (want >= {}% / {}%)",
            detail.join(", "),
            ORACLE_NOISELESS_RATE * 100.0,
            ORACLE_NOISY_RATE * 100.0
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn criterion_7() -> Outcome {
    let c = QamConstellation::new(4).unwrap();
    let mut pso = Vec::new();
    let mut de = Vec::new();
    for seed in 0..PLATEAU_SEEDS {
        let mut rng = substream(SEED, &[7, seed]);
        let (y, h, ratio) = random_observation(&c, 4, 4, PLATEAU_EBN0_DB, &mut rng);
        let obs = MimoObservation::new(y, h, ratio, &c).unwrap();
        let rd = mimo_ofdm::detect::real_decompose(&obs);
        let p = pso_detect(&rd, &c, &PsoParams::tuned(0.0), rng.random()).unwrap();
        let d = de_detect(&rd, &c, &DeParams::tuned(0.0), rng.random()).unwrap();
        pso.push(convergence_profile(&p.trace.best_fitness, DEFAULT_PLATEAU_TOLERANCE) as f64);
        de.push(convergence_profile(&d.trace.best_fitness, DEFAULT_PLATEAU_TOLERANCE) as f64);
    }
    let (mp, md) = (median(pso), median(de));
    let inside = |m: f64| (PLATEAU_BAND.0..=PLATEAU_BAND.1).contains(&m);
    Outcome::new(
        inside(mp) && inside(md),
        format!("median plateau iteration PSO {mp} DE {md} (want within {PLATEAU_BAND:?})"),
    )
}

/// Operation counts written out independently, scaled by 3 so every
/// coefficient is an integer.
fn flop_oracle_x3(model: &FlopModel, nt: i128, nr: i128) -> i128 {
    match *model {
        FlopModel::Zf => 16 * nt.pow(3) + 12 * nt * nt + 96 * nt * nt * nr + 12 * nt * nr - 6 * nt,
        FlopModel::Mmse => 16 * nt.pow(3) + 24 * nt * nt + 96 * nt * nt * nr + 12 * nt * nr,
        FlopModel::Ml { order } => 3 * (order as i128).pow(2 * nt as u32) * (8 * nt * nr + 4 * nr + 7),
        FlopModel::Pso { n_pop, iterations } => {
            3 * (n_pop * iterations) as i128 * (8 * nt * nr + 20 * nt + 4 * nr + 7)
        }
        FlopModel::De { n_ind, iterations } => {
            3 * (n_ind * iterations) as i128 * (16 * nt * nr + 12 * nt + 8 * nr + 14)
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = substream(SEED, &[8]);
    let mut mismatches = 0;
    for _ in 0..FLOP_TUPLES {
        let nt = rng.random_range(1..=6usize);
        let nr = rng.random_range(nt..=8usize);
        let order = [4usize, 16, 64][rng.random_range(0..3)];
        let pop = rng.random_range(2..=80usize);
        let iters = rng.random_range(1..=200usize);
        let models = [
            FlopModel::Zf,
            FlopModel::Mmse,
            FlopModel::Ml { order },
            FlopModel::Pso { n_pop: pop, iterations: iters },
            FlopModel::De { n_ind: pop, iterations: iters },
        ];
        for m in &models {
            let want = flop_oracle_x3(m, nt as i128, nr as i128) as f64 / 3.0;
            let got = flop_count(m, nt, nr);
            if (got - want).abs() > FLOP_RTOL * want.abs() {
                mismatches += 1;
            }
        }
    }
    let ml = flop_count(&FlopModel::Ml { order: 4 }, 2, 2);
    let report = relative_complexity(&[2, 4, 8], ComplexityAssumptions::default()).unwrap();
    let mut order_ok = true;
    let mut ratio_ok = true;
    let mut worst = Vec::new();
    for nt in [2, 4, 8] {
        let (pso, de) = (report.get("pso", nt).unwrap(), report.get("de", nt).unwrap());
        order_ok &= pso.flops < de.flops;
        for det in ["zf", "mmse", "pso", "de"] {
            let e = report.get(det, nt).unwrap();
            if e.ratio_vs_ml >= 1.0 {
                ratio_ok = false;
                worst.push(format!("{det}@{nt}: {:.0}/{:.0}", e.flops, report.get("ml", nt).unwrap().flops));
            }
        }
    }
    Outcome::new(
        mismatches == 0 && ml == 12032.0 && order_ok && ratio_ok,
        format!(
            "{mismatches} formula mismatches over {FLOP_TUPLES} tuples; ML(2,2,4) = {ml}; PSO < DE: {order_ok}; \
             ratio vs ML < 1 for all non-ML at Nt in {{2,4,8}}: {ratio_ok}{}",
            if worst.is_empty() { String::new() } else { format!(" (violations {})", worst.join(", ")) }
        ),
    )
}

fn criterion_9() -> Outcome {
    let exact = sensibility_kappa(1e-3, 1e-2).unwrap();
    let base = ScenarioConfig { stopping: SENSIBILITY_STOPPING, ..table4_base(4) };
    let detectors = [Detector::Ml, Detector::Zf, Detector::Mmse, Detector::Pso(PsoParams::tuned(0.0))];
    let rows = sensibility_table(&base, &detectors, &[0.5, 0.9], 12.0).unwrap();
    let mut pass = exact == -1.0;
    let mut detail = vec![format!("kappa(1e-3, 1e-2) = {exact}")];
    for rho in [0.5, 0.9] {
        let k = |name: &str| {
            rows.iter().find(|r| r.detector == name && r.rho == rho).unwrap().kappa.estimate().unwrap()
        };
        let (ml, zf, mmse, pso) = (k("ml"), k("zf"), k("mmse"), k("pso"));
        let ok = ml >= zf.max(mmse).max(pso) && zf <= ml.min(mmse).min(pso);
        pass &= ok;
        detail.push(format!("rho {rho}: ML {ml:.3} ZF {zf:.3} MMSE {mmse:.3} PSO {pso:.3} (ML max, ZF min: {ok})"));
    }
    Outcome::new(pass, detail.join("; "))
}

fn criterion_10() -> Outcome {
    let base = ScenarioConfig { ebn0_db: vec![24.0], ..table4_base(4) };
    let mut pass = true;
    let mut detail = Vec::new();
    for det in [Detector::Zf, Detector::Mmse, Detector::Pso(PsoParams::tuned(0.5))] {
        let run = |array: ArrayKind| {
            let cfg = base.with_detector(det.clone()).with_correlation(CorrelationSpec { array, rho: 0.5 });
            run_monte_carlo(&cfg).unwrap().points.remove(0)
        };
        let (ula, ura) = (run(ArrayKind::Ula), run(ArrayKind::Ura { nx: 2, ny: 2 }));
        let gap = (ura.ber.log10() - ula.ber.log10()).abs();
        let ok = gap <= ARRAY_LOG_GAP;
        pass &= ok;
        detail.push(format!("{} ULA {} URA {} |dlog10| {gap:.3}", det.name(), fmt_point(&ula), fmt_point(&ura)));
    }
    Outcome::new(pass, format!("{} (want <= {ARRAY_LOG_GAP})", detail.join(", ")))
}

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [Criterion; 10] = [
        (1, "jakes statistics", criterion_1),
        (2, "subcarrier flatness", criterion_2),
        (3, "cyclic prefix floor", criterion_3),
        (4, "detector ordering", criterion_4),
        (5, "correlation degradation", criterion_5),
        (6, "heuristic vs ML oracle", criterion_6),
        (7, "convergence plateau", criterion_7),
        (8, "flop model", criterion_8),
        (9, "sensibility", criterion_9),
        (10, "URA vs ULA", criterion_10),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{name}]: {verdict} ({:.1}s) {}", start.elapsed().as_secs_f64(), out.detail);
        if !out.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: {} failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
    println!("acceptance: all selected criteria passed");
}
