//! Command-line front end for the MIMO-OFDM simulator.
//!
//! Every experiment reads a TOML file (or a bundled preset name), writes
//! CSV results into `--out`, and records a `manifest.json` with the seed,
//! crate version, run time and a SHA-256 digest of every output.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use mimo_ofdm::config::{parse_config, preset_names, ExperimentConfig, ParsedConfig};
use mimo_ofdm::detect::Detector;
use mimo_ofdm::fading::validate_jakes;
use mimo_ofdm::heuristic::calibrate;
use mimo_ofdm::sim::report::{
    sha256_hex, write_autocorrelation_csv, write_ber_csv, write_calibration_csv, write_cp_summary_csv,
    write_flop_csv, write_jakes_stats_csv, write_sensibility_csv,
};
use mimo_ofdm::sim::{cp_study, relative_complexity, run_monte_carlo, sensibility_table, ScenarioConfig};
use mimo_ofdm::SimError;
use serde_json::json;

#[derive(Parser)]
#[command(name = "mimo-ofdm", version, about = "Link-level MIMO-OFDM BER simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate Jakes waveforms and check their statistics.
    JakesValidate(Common),
    /// SISO OFDM BER over subcarrier counts.
    OfdmBer(Common),
    /// BER for several cyclic-prefix lengths, with floor detection.
    CpStudy(Common),
    /// MIMO BER over antennas, arrays, correlations and detectors.
    MimoBer(Common),
    /// Grid search over heuristic detector parameters.
    Calibrate(Common),
    /// FLOP counts and ratios against ML.
    Complexity(Common),
    /// Correlation sensibility table.
    Sensibility(Common),
    /// List bundled presets.
    Presets,
}

#[derive(Args)]
struct Common {
    /// TOML file, or the name of a bundled preset.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Override `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Reject unknown configuration keys instead of warning.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

fn config_err(e: SimError) -> CliError {
    CliError::Config(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Collects output files and their digests.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(runtime_err)?;
        Ok(Outputs { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn write(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut Vec<u8>) -> mimo_ofdm::Result<()>,
    ) -> Result<(), CliError> {
        let mut buf = Vec::new();
        fill(&mut buf).map_err(runtime_err)?;
        std::fs::write(self.dir.join(name), &buf).map_err(runtime_err)?;
        self.files.push((name.to_string(), sha256_hex(&buf)));
        info!("wrote {}", self.dir.join(name).display());
        Ok(())
    }
}

fn load(common: &Common) -> Result<ParsedConfig, CliError> {
    let mut parsed = match &common.config {
        Some(path) => parse_config(path, common.strict).map_err(config_err)?,
        None => ParsedConfig { config: ExperimentConfig::default(), unknown_keys: Vec::new() },
    };
    for key in &parsed.unknown_keys {
        warn!("ignoring unknown configuration key `{key}`");
    }
    if let Some(seed) = common.seed {
        parsed.config.set_seed(seed);
    }
    Ok(parsed)
}

fn warn_detector(d: &Detector, nt: usize) {
    match d {
        Detector::Pso(p) => {
            if let Some(w) = p.stability_warning() {
                warn!("{w}");
            }
        }
        Detector::De(p) => {
            if let Some(w) = p.population_warning(2 * nt) {
                warn!("{w}");
            }
        }
        _ => {}
    }
}

fn run_curves(scenarios: &[ScenarioConfig], out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let mut curves = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        warn_detector(&s.detector, s.nt);
        info!("running {} ({})", s.id, s.detector.name());
        curves.push(run_monte_carlo(s).map_err(runtime_err)?);
    }
    out.write("ber.csv", |b| write_ber_csv(b, &curves))?;
    Ok(scenarios.iter().map(|s| s.fingerprint()).collect())
}

fn run(name: &str, command: Command) -> Result<(), CliError> {
    let common = match command {
        Command::Presets => {
            for p in preset_names() {
                println!("{p}");
            }
            return Ok(());
        }
        Command::JakesValidate(ref c)
        | Command::OfdmBer(ref c)
        | Command::CpStudy(ref c)
        | Command::MimoBer(ref c)
        | Command::Calibrate(ref c)
        | Command::Complexity(ref c)
        | Command::Sensibility(ref c) => c,
    };
    if let Some(n) = common.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(runtime_err)?;
    }
    let parsed = load(common)?;
    let cfg = &parsed.config;
    let start = Instant::now();
    let mut out = Outputs::new(&common.out)?;
    let mut fingerprints = Vec::new();
    let mut summary = serde_json::Value::Null;

    match command {
        Command::JakesValidate(_) => {
            let (jakes, samples, seed) = cfg.jakes().map_err(config_err)?;
            let v = validate_jakes(&jakes, samples, seed).map_err(runtime_err)?;
            out.write("jakes_stats.csv", |b| write_jakes_stats_csv(b, &v))?;
            out.write("autocorrelation.csv", |b| write_autocorrelation_csv(b, &v))?;
            summary = json!({
                "worst_ks_amplitude": v.worst_ks_amplitude(),
                "worst_ks_phase": v.worst_ks_phase(),
                "worst_autocorr_rms_error": v.worst_autocorr_error(),
                "max_cross_correlation": v.max_cross_correlation,
                "worst_psd_peak_offset_bins": v.worst_peak_offset_bins(),
                "psd_bin_width_hz": v.psd_bin_width_hz,
            });
        }
        Command::OfdmBer(_) => {
            let scenarios = cfg.ofdm_ber().map_err(config_err)?;
            fingerprints = run_curves(&scenarios, &mut out)?;
        }
        Command::MimoBer(_) => {
            let scenarios = cfg.mimo_ber().map_err(config_err)?;
            fingerprints = run_curves(&scenarios, &mut out)?;
        }
        Command::CpStudy(_) => {
            let (base, fractions) = cfg.cp_study().map_err(config_err)?;
            let curves = cp_study(&base, &fractions).map_err(runtime_err)?;
            let ber: Vec<_> = curves.iter().map(|c| c.curve.clone()).collect();
            out.write("ber.csv", |b| write_ber_csv(b, &ber))?;
            out.write("cp_summary.csv", |b| write_cp_summary_csv(b, &curves))?;
            fingerprints.push(base.fingerprint());
        }
        Command::Calibrate(_) => {
            let job = cfg.calibrate().map_err(config_err)?;
            let mut best = Vec::new();
            for s in &job.scenarios {
                let rho = s.correlation.rho;
                info!("calibrating at rho = {rho}");
                let r = calibrate(&job.grid, s, job.ebn0_db, job.trials, job.seed).map_err(runtime_err)?;
                out.write(&format!("calibration_rho{rho}.csv"), |b| write_calibration_csv(b, &r))?;
                best.push(json!({
                    "rho": rho,
                    "params": r.best.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "mean_ber": r.best.mean_ber,
                }));
                fingerprints.push(s.fingerprint());
            }
            summary = json!({ "best": best });
        }
        Command::Complexity(_) => {
            let (nt, assumptions) = cfg.complexity().map_err(config_err)?;
            let report = relative_complexity(&nt, assumptions).map_err(config_err)?;
            out.write("flops.csv", |b| write_flop_csv(b, &report))?;
        }
        Command::Sensibility(_) => {
            let job = cfg.sensibility().map_err(config_err)?;
            for d in &job.detectors {
                warn_detector(d, job.base.nt);
            }
            let rows =
                sensibility_table(&job.base, &job.detectors, &job.rhos, job.ebn0_db).map_err(runtime_err)?;
            out.write("sensibility.csv", |b| write_sensibility_csv(b, &rows))?;
            fingerprints.push(job.base.fingerprint());
        }
        Command::Presets => unreachable!(),
    }

    let snapshot = cfg.to_toml().map_err(runtime_err)?;
    out.write("config.snapshot.toml", |b| {
        b.extend_from_slice(snapshot.as_bytes());
        Ok(())
    })?;
    let manifest = json!({
        "experiment": name,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed(),
        "duration_s": start.elapsed().as_secs_f64(),
        "unknown_keys": parsed.unknown_keys,
        "scenario_fingerprints": fingerprints,
        "summary": summary,
        "outputs": out.files.iter().map(|(f, h)| json!({ "file": f, "sha256": h })).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(runtime_err)?;
    std::fs::write(out.dir.join("manifest.json"), text).map_err(runtime_err)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::JakesValidate(_) => "jakes-validate",
        Command::OfdmBer(_) => "ofdm-ber",
        Command::CpStudy(_) => "cp-study",
        Command::MimoBer(_) => "mimo-ber",
        Command::Calibrate(_) => "calibrate",
        Command::Complexity(_) => "complexity",
        Command::Sensibility(_) => "sensibility",
        Command::Presets => "presets",
    };
    match run(name, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
