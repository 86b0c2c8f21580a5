//! TOML experiment files and bundled presets.
//!
//! Keys carry their unit in the name (`bandwidth_hz`, `tau_rms_s`). Every
//! field is optional at parse time; each experiment then checks the keys it
//! needs and reports all missing ones at once.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::detect::Detector;
use crate::error::{Result, SimError};
use crate::fading::{ArrayKind, CorrelationSpec, JakesConfig};
use crate::heuristic::{CalibrationGrid, DeParams, PsoParams};
use crate::ofdm::OfdmConfig;
use crate::sim::{ChannelMode, ComplexityAssumptions, ScenarioConfig, StoppingRule};

const PRESETS: &[(&str, &str)] = &[
    ("table1-jakes", include_str!("../presets/table1-jakes.toml")),
    ("table2-ofdm", include_str!("../presets/table2-ofdm.toml")),
    ("table4-mimo", include_str!("../presets/table4-mimo.toml")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A scalar or a list in the file, always a list in memory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub seed: Option<u64>,
    pub id: Option<String>,
    pub symbols_per_trial: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OfdmSection {
    pub num_subcarriers: Option<OneOrMany<usize>>,
    pub cp_fraction: Option<f64>,
    pub bandwidth_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModulationSection {
    pub order: Option<OneOrMany<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MimoSection {
    /// Entries like `"4x4"` (`N_t x N_r`).
    pub antennas: Option<OneOrMany<String>>,
    /// `"ula"` or `"ura"`.
    pub array: Option<OneOrMany<String>>,
    pub rho: Option<OneOrMany<f64>>,
    pub detectors: Option<OneOrMany<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelSection {
    /// `"multipath-jakes"` or `"block-static"`.
    pub mode: Option<String>,
    pub tau_rms_s: Option<f64>,
    pub max_doppler_hz: Option<f64>,
    pub num_oscillators: Option<usize>,
    pub jakes_sample_period_s: Option<f64>,
    pub power_floor_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSection {
    pub ebn0_db: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StoppingSection {
    pub min_errors: Option<u64>,
    pub min_trials: Option<u64>,
    pub max_trials: Option<u64>,
    pub batch_trials: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PsoSection {
    pub n_pop: Option<usize>,
    pub n_iter: Option<usize>,
    pub c1: Option<f64>,
    /// Defaults to the tuned value for the scenario's correlation.
    pub c2: Option<f64>,
    pub w0: Option<f64>,
    pub inertia_decay: Option<f64>,
    pub v_max: Option<f64>,
    /// Half-width of the search box; defaults to the outermost level.
    pub search_bound: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeSection {
    pub n_ind: Option<usize>,
    pub n_gen: Option<usize>,
    pub f_mut: Option<f64>,
    pub f_cr: Option<f64>,
    pub search_bound: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JakesSection {
    pub num_oscillators: Option<usize>,
    pub max_doppler_hz: Option<f64>,
    pub sample_period_s: Option<f64>,
    pub num_waveforms: Option<usize>,
    pub num_samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CpStudySection {
    pub num_subcarriers: Option<usize>,
    pub cp_fractions: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CalibrateSection {
    /// `"pso"` or `"de"`.
    pub algorithm: Option<String>,
    pub antennas: Option<String>,
    pub ebn0_db: Option<f64>,
    pub trials: Option<u64>,
    pub rho: Option<OneOrMany<f64>>,
    pub n_pop: Option<Vec<usize>>,
    pub c1: Option<Vec<f64>>,
    pub c2: Option<Vec<f64>>,
    pub w0: Option<Vec<f64>>,
    pub n_ind: Option<Vec<usize>>,
    pub f_cr: Option<Vec<f64>>,
    pub f_mut: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SensibilitySection {
    pub antennas: Option<String>,
    pub ebn0_db: Option<f64>,
    pub rho: Option<Vec<f64>>,
    pub detectors: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexitySection {
    pub nt: Option<Vec<usize>>,
    pub population_factor: Option<usize>,
    pub iterations: Option<usize>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub run: Option<RunSection>,
    pub ofdm: Option<OfdmSection>,
    pub modulation: Option<ModulationSection>,
    pub mimo: Option<MimoSection>,
    pub channel: Option<ChannelSection>,
    pub sweep: Option<SweepSection>,
    pub stopping: Option<StoppingSection>,
    pub pso: Option<PsoSection>,
    pub de: Option<DeSection>,
    pub jakes: Option<JakesSection>,
    pub cp_study: Option<CpStudySection>,
    pub calibrate: Option<CalibrateSection>,
    pub sensibility: Option<SensibilitySection>,
    pub complexity: Option<ComplexitySection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    JakesValidate,
    OfdmBer,
    CpStudy,
    MimoBer,
    Calibrate,
    Complexity,
    Sensibility,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::JakesValidate => "jakes-validate",
            Experiment::OfdmBer => "ofdm-ber",
            Experiment::CpStudy => "cp-study",
            Experiment::MimoBer => "mimo-ber",
            Experiment::Calibrate => "calibrate",
            Experiment::Complexity => "complexity",
            Experiment::Sensibility => "sensibility",
        }
    }
}

/// Parsed file plus any keys the schema did not recognize.
#[derive(Debug, Clone)]
pub struct ParsedConfig {
    pub config: ExperimentConfig,
    pub unknown_keys: Vec<String>,
}

/// Parse TOML text. Unknown keys are errors when `strict`, otherwise they
/// are returned for the caller to report.
pub fn parse_config_str(text: &str, strict: bool) -> Result<ParsedConfig> {
    let mut unknown_keys = Vec::new();
    let de = toml::de::Deserializer::new(text);
    let config: ExperimentConfig = serde_ignored::deserialize(de, |path| unknown_keys.push(path.to_string().replace(".?", "")))
        .map_err(|e| SimError::Config(e.to_string()))?;
    if strict && !unknown_keys.is_empty() {
        return Err(SimError::Config(format!("unknown keys: {}", unknown_keys.join(", "))));
    }
    Ok(ParsedConfig { config, unknown_keys })
}

/// Parse a file path, or a bundled preset name when no such file exists.
pub fn parse_config(path: &std::path::Path, strict: bool) -> Result<ParsedConfig> {
    if !path.exists() {
        if let Some(text) = path.to_str().and_then(preset) {
            return parse_config_str(text, strict);
        }
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text, strict)
}

/// Collects missing keys so they are reported together.
#[derive(Default)]
struct Missing(Vec<String>);

impl Missing {
    fn need<T: Clone>(&mut self, v: Option<&T>, key: &str) -> Option<T> {
        if v.is_none() {
            self.0.push(key.to_string());
        }
        v.cloned()
    }

    fn finish(self, experiment: Experiment) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(SimError::Config(format!(
                "missing required keys for {}: {}",
                experiment.name(),
                self.0.join(", ")
            )))
        }
    }
}

fn section<T: Default + Clone>(s: &Option<T>) -> T {
    s.clone().unwrap_or_default()
}

pub fn parse_antennas(s: &str) -> Result<(usize, usize)> {
    let err = || SimError::Config(format!("antenna spec `{s}` is not of the form NtxNr"));
    let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(err)?;
    let nt: usize = a.trim().parse().map_err(|_| err())?;
    let nr: usize = b.trim().parse().map_err(|_| err())?;
    if nt == 0 || nr == 0 {
        return Err(err());
    }
    Ok((nt, nr))
}

/// Most nearly square `nx * ny = n` with `nx >= ny`.
pub fn ura_geometry(n: usize) -> (usize, usize) {
    let mut ny = (n as f64).sqrt().floor() as usize;
    while ny > 1 && !n.is_multiple_of(ny) {
        ny -= 1;
    }
    let ny = ny.max(1);
    (n / ny, ny)
}

fn array_kind(name: &str, nt: usize, nr: usize) -> Result<ArrayKind> {
    match name.to_ascii_lowercase().as_str() {
        "ula" => Ok(ArrayKind::Ula),
        "ura" => {
            if nt != nr {
                return Err(SimError::Config(format!("URA needs equal antenna counts, got {nt}x{nr}")));
            }
            let (nx, ny) = ura_geometry(nt);
            Ok(ArrayKind::Ura { nx, ny })
        }
        other => Err(SimError::Config(format!("unknown array `{other}` (expected ula or ura)"))),
    }
}

impl ExperimentConfig {
    pub fn seed(&self) -> Option<u64> {
        self.run.as_ref().and_then(|r| r.seed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.run.get_or_insert_with(Default::default).seed = Some(seed);
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| SimError::Config(e.to_string()))
    }

    fn stopping(&self) -> StoppingRule {
        let s = section(&self.stopping);
        let d = StoppingRule::default();
        StoppingRule {
            min_errors: s.min_errors.unwrap_or(d.min_errors),
            min_trials: s.min_trials.unwrap_or(d.min_trials),
            max_trials: s.max_trials.unwrap_or(d.max_trials),
            batch_trials: s.batch_trials.unwrap_or(d.batch_trials),
        }
    }

    pub fn detector(&self, name: &str, rho: f64) -> Result<Detector> {
        match name.to_ascii_lowercase().as_str() {
            "ml" => Ok(Detector::Ml),
            "zf" => Ok(Detector::Zf),
            "mmse" => Ok(Detector::Mmse),
            "pso" => {
                let s = section(&self.pso);
                let t = PsoParams::tuned(rho);
                Ok(Detector::Pso(PsoParams {
                    n_pop: s.n_pop.unwrap_or(t.n_pop),
                    n_iter: s.n_iter.unwrap_or(t.n_iter),
                    c1: s.c1.unwrap_or(t.c1),
                    c2: s.c2.unwrap_or(t.c2),
                    w0: s.w0.unwrap_or(t.w0),
                    inertia_decay: s.inertia_decay.unwrap_or(t.inertia_decay),
                    v_max: s.v_max.unwrap_or(t.v_max),
                    bounds: s.search_bound.map(|b| (-b, b)),
                }))
            }
            "de" => {
                let s = section(&self.de);
                let t = DeParams::tuned(rho);
                Ok(Detector::De(DeParams {
                    n_ind: s.n_ind.unwrap_or(t.n_ind),
                    n_gen: s.n_gen.unwrap_or(t.n_gen),
                    f_mut: s.f_mut.unwrap_or(t.f_mut),
                    f_cr: s.f_cr.unwrap_or(t.f_cr),
                    bounds: s.search_bound.map(|b| (-b, b)),
                }))
            }
            other => Err(SimError::Config(format!("unknown detector `{other}` (expected ml, zf, mmse, pso or de)"))),
        }
    }

    fn channel_mode(&self, m: &mut Missing) -> Option<ChannelMode> {
        let c = section(&self.channel);
        let mode = m.need(c.mode.as_ref(), "channel.mode");
        let tau = m.need(c.tau_rms_s.as_ref(), "channel.tau_rms_s");
        let floor = c.power_floor_db.unwrap_or(-30.0);
        match mode.as_deref() {
            Some("multipath-jakes") | Some("jakes") => {
                let fd = m.need(c.max_doppler_hz.as_ref(), "channel.max_doppler_hz");
                let nd = m.need(c.num_oscillators.as_ref(), "channel.num_oscillators");
                Some(ChannelMode::MultipathJakes {
                    tau_rms_s: tau?,
                    max_doppler_hz: fd?,
                    num_oscillators: nd?,
                    sample_period_s: c.jakes_sample_period_s,
                    power_floor_db: floor,
                })
            }
            Some("block-static") | Some("block-static-rayleigh") => {
                Some(ChannelMode::BlockStaticRayleigh { tau_rms_s: tau?, power_floor_db: floor })
            }
            Some(other) => {
                m.0.push(format!("channel.mode (unknown value `{other}`)"));
                None
            }
            None => None,
        }
    }

    /// Scenario grid shared by the BER experiments: one entry per
    /// subcarrier count, order, antenna pair, array, correlation and
    /// detector (in that nesting order).
    fn scenarios(&self, experiment: Experiment, mimo_required: bool) -> Result<Vec<ScenarioConfig>> {
        let mut m = Missing::default();
        let run = section(&self.run);
        let ofdm = section(&self.ofdm);
        let seed = m.need(run.seed.as_ref(), "run.seed");
        let subcarriers = m.need(ofdm.num_subcarriers.as_ref(), "ofdm.num_subcarriers");
        let cp = m.need(ofdm.cp_fraction.as_ref(), "ofdm.cp_fraction");
        let bw = m.need(ofdm.bandwidth_hz.as_ref(), "ofdm.bandwidth_hz");
        let order = m.need(section(&self.modulation).order.as_ref(), "modulation.order");
        let channel = self.channel_mode(&mut m);
        let ebn0 = m.need(section(&self.sweep).ebn0_db.as_ref(), "sweep.ebn0_db");
        let mimo = section(&self.mimo);
        let (antennas, arrays, rhos, detectors) = if mimo_required {
            (
                m.need(mimo.antennas.as_ref(), "mimo.antennas").map(|v| v.to_vec()),
                m.need(mimo.array.as_ref(), "mimo.array").map(|v| v.to_vec()),
                m.need(mimo.rho.as_ref(), "mimo.rho").map(|v| v.to_vec()),
                m.need(mimo.detectors.as_ref(), "mimo.detectors").map(|v| v.to_vec()),
            )
        } else {
            (
                Some(mimo.antennas.map_or(vec!["1x1".to_string()], |v| v.to_vec())),
                Some(mimo.array.map_or(vec!["ula".to_string()], |v| v.to_vec())),
                Some(mimo.rho.map_or(vec![0.0], |v| v.to_vec())),
                Some(mimo.detectors.map_or(vec!["zf".to_string()], |v| v.to_vec())),
            )
        };
        m.finish(experiment)?;
        let (seed, subcarriers, cp, bw, order, channel, ebn0) =
            (seed.unwrap(), subcarriers.unwrap(), cp.unwrap(), bw.unwrap(), order.unwrap(), channel.unwrap(), ebn0.unwrap());
        let base_id = run.id.clone().unwrap_or_else(|| experiment.name().to_string());
        let stopping = self.stopping();

        let mut out = Vec::new();
        for &n in &subcarriers.to_vec() {
            for &mo in &order.to_vec() {
                for ant in antennas.as_ref().unwrap() {
                    let (nt, nr) = parse_antennas(ant)?;
                    for array in arrays.as_ref().unwrap() {
                        let kind = array_kind(array, nt, nr)?;
                        for &rho in rhos.as_ref().unwrap() {
                            for det in detectors.as_ref().unwrap() {
                                let detector = self.detector(det, rho)?;
                                let cfg = ScenarioConfig {
                                    id: format!("{base_id}-n{n}-m{mo}-{nt}x{nr}-{}-rho{rho}", kind.label()),
                                    ofdm: OfdmConfig { num_subcarriers: n, cp_fraction: cp, bandwidth_hz: bw },
                                    order: mo,
                                    nt,
                                    nr,
                                    correlation: CorrelationSpec { array: kind, rho },
                                    detector,
                                    channel: channel.clone(),
                                    ebn0_db: ebn0.clone(),
                                    stopping,
                                    symbols_per_trial: run.symbols_per_trial.unwrap_or(1),
                                    seed,
                                };
                                cfg.validate()?;
                                out.push(cfg);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn ofdm_ber(&self) -> Result<Vec<ScenarioConfig>> {
        self.scenarios(Experiment::OfdmBer, false)
    }

    pub fn mimo_ber(&self) -> Result<Vec<ScenarioConfig>> {
        self.scenarios(Experiment::MimoBer, true)
    }

    pub fn jakes(&self) -> Result<(JakesConfig, usize, u64)> {
        let mut m = Missing::default();
        let j = section(&self.jakes);
        let seed = m.need(section(&self.run).seed.as_ref(), "run.seed");
        let nd = m.need(j.num_oscillators.as_ref(), "jakes.num_oscillators");
        let fd = m.need(j.max_doppler_hz.as_ref(), "jakes.max_doppler_hz");
        let ts = m.need(j.sample_period_s.as_ref(), "jakes.sample_period_s");
        let k = m.need(j.num_waveforms.as_ref(), "jakes.num_waveforms");
        let ns = m.need(j.num_samples.as_ref(), "jakes.num_samples");
        m.finish(Experiment::JakesValidate)?;
        let cfg = JakesConfig {
            num_oscillators: nd.unwrap(),
            max_doppler_hz: fd.unwrap(),
            sample_period_s: ts.unwrap(),
            num_waveforms: k.unwrap(),
        };
        cfg.validate()?;
        Ok((cfg, ns.unwrap(), seed.unwrap()))
    }

    /// Base SISO scenario and the prefix fractions to sweep.
    pub fn cp_study(&self) -> Result<(ScenarioConfig, Vec<f64>)> {
        let c = section(&self.cp_study);
        let mut m = Missing::default();
        let fractions = m.need(c.cp_fractions.as_ref(), "cp_study.cp_fractions");
        m.finish(Experiment::CpStudy)?;
        let mut base = self.scenarios(Experiment::CpStudy, false)?;
        if let Some(n) = c.num_subcarriers {
            base.retain(|s| s.ofdm.num_subcarriers == n);
        }
        let base = base.into_iter().next().ok_or_else(|| {
            SimError::Config("cp_study.num_subcarriers does not match any ofdm.num_subcarriers entry".into())
        })?;
        Ok((base, fractions.unwrap()))
    }

    fn pick_antennas(&self, key: Option<&String>, experiment: Experiment) -> Result<Vec<ScenarioConfig>> {
        let all = self.scenarios(experiment, true)?;
        let Some(ant) = key else {
            return Ok(all);
        };
        let (nt, nr) = parse_antennas(ant)?;
        let picked: Vec<_> = all.into_iter().filter(|s| s.nt == nt && s.nr == nr).collect();
        if picked.is_empty() {
            return Err(SimError::Config(format!("antennas `{ant}` not listed in mimo.antennas")));
        }
        Ok(picked)
    }

    /// Calibration jobs: one `(scenario, grid)` per correlation index.
    pub fn calibrate(&self) -> Result<CalibrationJob> {
        let c = section(&self.calibrate);
        let mut m = Missing::default();
        let algorithm = m.need(c.algorithm.as_ref(), "calibrate.algorithm");
        let ebn0 = m.need(c.ebn0_db.as_ref(), "calibrate.ebn0_db");
        let trials = m.need(c.trials.as_ref(), "calibrate.trials");
        m.finish(Experiment::Calibrate)?;
        let algorithm = algorithm.unwrap().to_ascii_lowercase();
        let grid = match algorithm.as_str() {
            "pso" => {
                let CalibrationGrid::Pso { base, n_pop, c1, c2, w0 } = CalibrationGrid::default_pso() else {
                    unreachable!()
                };
                let base = match self.detector("pso", 0.0)? {
                    Detector::Pso(p) => p,
                    _ => base,
                };
                CalibrationGrid::Pso {
                    base,
                    n_pop: c.n_pop.clone().unwrap_or(n_pop),
                    c1: c.c1.clone().unwrap_or(c1),
                    c2: c.c2.clone().unwrap_or(c2),
                    w0: c.w0.clone().unwrap_or(w0),
                }
            }
            "de" => {
                let CalibrationGrid::De { base, n_ind, f_cr, f_mut } = CalibrationGrid::default_de() else {
                    unreachable!()
                };
                let base = match self.detector("de", 0.0)? {
                    Detector::De(p) => p,
                    _ => base,
                };
                CalibrationGrid::De {
                    base,
                    n_ind: c.n_ind.clone().unwrap_or(n_ind),
                    f_cr: c.f_cr.clone().unwrap_or(f_cr),
                    f_mut: c.f_mut.clone().unwrap_or(f_mut),
                }
            }
            other => return Err(SimError::Config(format!("calibrate.algorithm `{other}` must be pso or de"))),
        };
        let scenarios = self.pick_antennas(c.antennas.as_ref(), Experiment::Calibrate)?;
        let base = scenarios[0].clone();
        let rhos = c.rho.map(|r| r.to_vec()).unwrap_or_else(|| {
            let mut r: Vec<f64> = scenarios.iter().map(|s| s.correlation.rho).collect();
            r.dedup();
            r
        });
        let jobs = rhos
            .into_iter()
            .map(|rho| base.with_correlation(CorrelationSpec { rho, ..base.correlation }))
            .collect();
        Ok(CalibrationJob { grid, scenarios: jobs, ebn0_db: ebn0.unwrap(), trials: trials.unwrap(), seed: base.seed })
    }

    pub fn sensibility(&self) -> Result<SensibilityJob> {
        let s = section(&self.sensibility);
        let mut m = Missing::default();
        let ebn0 = m.need(s.ebn0_db.as_ref(), "sensibility.ebn0_db");
        let rho = m.need(s.rho.as_ref(), "sensibility.rho");
        m.finish(Experiment::Sensibility)?;
        let base = self.pick_antennas(s.antennas.as_ref(), Experiment::Sensibility)?.remove(0);
        let names = s.detectors.clone().unwrap_or_else(|| {
            section(&self.mimo).detectors.map_or(vec!["zf".into()], |d| d.to_vec())
        });
        let detectors = names.iter().map(|n| self.detector(n, 0.0)).collect::<Result<Vec<_>>>()?;
        Ok(SensibilityJob { base, detectors, names, rhos: rho.unwrap(), ebn0_db: ebn0.unwrap() })
    }

    pub fn complexity(&self) -> Result<(Vec<usize>, ComplexityAssumptions)> {
        let c = section(&self.complexity);
        let d = ComplexityAssumptions::default();
        Ok((
            c.nt.unwrap_or_else(|| vec![2, 4, 8, 16]),
            ComplexityAssumptions {
                population_factor: c.population_factor.unwrap_or(d.population_factor),
                iterations: c.iterations.unwrap_or(d.iterations),
                order: c.order.unwrap_or(d.order),
            },
        ))
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationJob {
    pub grid: CalibrationGrid,
    pub scenarios: Vec<ScenarioConfig>,
    pub ebn0_db: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SensibilityJob {
    pub base: ScenarioConfig,
    /// Detector parameters are resolved at `rho = 0`; heuristics are
    /// re-tuned per correlation by [`SensibilityJob::detector_for`].
    pub detectors: Vec<Detector>,
    pub names: Vec<String>,
    pub rhos: Vec<f64>,
    pub ebn0_db: f64,
}

/// Deserialize a section on its own, mainly for tests.
pub fn parse_section<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))
}
