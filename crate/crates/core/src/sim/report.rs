//! CSV exports.

use std::io::Write;

use num_complex::Complex64;

use super::cp::CpCurve;
use super::flops::FlopReport;
use super::kappa::{Kappa, SensibilityRow};
use super::monte_carlo::BerCurve;
use crate::error::{Result, SimError};
use crate::fading::JakesValidation;
use crate::heuristic::{CalibrationResult, ConvergenceTrace};

fn csv_err(e: csv::Error) -> SimError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SimError::Io(io),
        other => SimError::Config(format!("csv: {other:?}")),
    }
}

/// Render an Eb/N0 value; `+inf` becomes `inf`.
fn db(v: f64) -> String {
    if v == f64::INFINITY { "inf".into() } else { format!("{v}") }
}

pub fn write_ber_csv<W: Write>(out: W, curves: &[BerCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario_id", "detector", "array", "rho", "ebn0_db", "ber", "ci_low", "ci_high", "bits", "errors"])
        .map_err(csv_err)?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                c.scenario_id.clone(),
                c.detector.clone(),
                c.array.clone(),
                format!("{}", c.rho),
                db(p.ebn0_db),
                format!("{:e}", p.ber),
                format!("{:e}", p.ci_low),
                format!("{:e}", p.ci_high),
                p.bits.to_string(),
                p.errors.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_flop_csv<W: Write>(out: W, report: &FlopReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["detector", "nt", "nr", "flops", "ratio_vs_ml", "ratio_vs_zf"]).map_err(csv_err)?;
    for e in &report.entries {
        w.write_record([
            e.detector.to_string(),
            e.nt.to_string(),
            e.nr.to_string(),
            format!("{}", e.flops),
            format!("{:e}", e.ratio_vs_ml),
            format!("{:e}", e.ratio_vs_zf),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(out: W, trace: &ConvergenceTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "best_fitness"]).map_err(csv_err)?;
    for (i, f) in trace.best_fitness.iter().enumerate() {
        w.write_record([(i + 1).to_string(), format!("{f:e}")]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_calibration_csv<W: Write>(out: W, result: &CalibrationResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = result.surface.first() else {
        return Ok(());
    };
    let mut header: Vec<String> = first.params.iter().map(|(k, _)| k.to_string()).collect();
    header.push("mean_ber".into());
    w.write_record(&header).map_err(csv_err)?;
    for p in &result.surface {
        let mut row: Vec<String> = p.params.iter().map(|(_, v)| format!("{v}")).collect();
        row.push(format!("{:e}", p.mean_ber));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_waveform_csv<W: Write>(out: W, samples: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sample_index", "re", "im"]).map_err(csv_err)?;
    for (i, z) in samples.iter().enumerate() {
        w.write_record([i.to_string(), format!("{:e}", z.re), format!("{:e}", z.im)]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cp_summary_csv<W: Write>(out: W, curves: &[CpCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cp_fraction", "cp_len", "channel_memory", "floor_ratio", "floor"]).map_err(csv_err)?;
    for c in curves {
        w.write_record([
            format!("{}", c.cp_fraction),
            c.cp_len.to_string(),
            c.channel_memory.to_string(),
            c.floor_ratio.map_or(String::new(), |r| format!("{r:e}")),
            c.floor.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sensibility_csv<W: Write>(out: W, rows: &[SensibilityRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["detector", "rho", "ebn0_db", "ber", "ber_reference", "kappa", "kappa_kind"])
        .map_err(csv_err)?;
    for r in rows {
        let kind = match r.kappa {
            Kappa::Value(_) => "value",
            Kappa::AtMost(_) => "at_most",
            Kappa::AtLeast(_) => "at_least",
            Kappa::Undefined => "undefined",
        };
        w.write_record([
            r.detector.clone(),
            format!("{}", r.rho),
            db(r.ebn0_db),
            format!("{:e}", r.ber),
            format!("{:e}", r.ber_reference),
            r.kappa.estimate().map_or(String::new(), |k| format!("{k}")),
            kind.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per waveform with its distribution and spectrum checks.
pub fn write_jakes_stats_csv<W: Write>(out: W, v: &JakesValidation) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "waveform",
        "mean_power",
        "ks_amplitude",
        "ks_phase",
        "autocorr_rms_error",
        "psd_peak_negative_hz",
        "psd_peak_positive_hz",
    ])
    .map_err(csv_err)?;
    let opt = |f: Option<f64>| f.map_or(String::new(), |v| format!("{v}"));
    for s in &v.waveforms {
        w.write_record([
            s.waveform_index.to_string(),
            format!("{:e}", s.mean_power),
            format!("{:e}", s.ks_amplitude),
            format!("{:e}", s.ks_phase),
            format!("{:e}", s.autocorr_rms_error),
            opt(s.psd_peak_negative_hz),
            opt(s.psd_peak_positive_hz),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Empirical autocorrelation of waveform 0 beside `J0(omega_m tau)`.
pub fn write_autocorrelation_csv<W: Write>(out: W, v: &JakesValidation) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "tau_s", "empirical", "bessel_j0"]).map_err(csv_err)?;
    let wm = v.config.max_angular_doppler();
    for (lag, r) in v.autocorrelation.iter().enumerate() {
        let tau = lag as f64 * v.config.sample_period_s;
        w.write_record([
            lag.to_string(),
            format!("{tau:e}"),
            format!("{r:e}"),
            format!("{:e}", crate::fading::stats::bessel_j0(wm * tau)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Lowercase hex SHA-256 of `data`.
pub fn sha256_hex(data: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}
