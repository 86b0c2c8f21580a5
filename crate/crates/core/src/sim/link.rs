//! One Monte-Carlo trial of the MIMO-OFDM link in the time domain.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::scenario::{ChannelMode, ScenarioConfig};
use crate::detect::{Detector, MimoObservation};
use crate::error::Result;
use crate::fading::{pdp_exponential, CorrelationRoots, FrequencyResponder, JakesConfig, OscillatorBank, PowerDelayProfile};
use crate::linalg::{CMatrix, CVector};
use crate::ofdm::{add_awgn, equalize_siso, noise_variance, OfdmModem, QamConstellation};
use crate::rng::{substream, SimRng};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    pub bits: u64,
    pub errors: u64,
    /// Subcarriers decided at random (erased bins or singular receivers).
    pub random_decisions: u64,
}

/// Per-symbol tap matrices: `taps[m][l]` is the `N_r x N_t` gain at delay `l`
/// during OFDM symbol `m`.
type TapSchedule = Vec<Vec<CMatrix>>;

#[derive(Debug, Clone)]
pub struct LinkSimulator {
    cfg: ScenarioConfig,
    constellation: QamConstellation,
    modem: OfdmModem,
    pdp: PowerDelayProfile,
    tap_amplitudes: Vec<f64>,
    roots: CorrelationRoots,
    responder: FrequencyResponder,
    jakes: Option<JakesConfig>,
}

impl LinkSimulator {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let constellation = QamConstellation::new(cfg.order)?;
        let modem = OfdmModem::new(cfg.ofdm)?;
        let tau = cfg.channel.tau_rms_s();
        let pdp = if tau == 0.0 {
            PowerDelayProfile::single_tap()
        } else {
            pdp_exponential(tau, cfg.ofdm.bandwidth_hz, cfg.channel.power_floor_db())?
        };
        let rt = cfg.correlation.matrix(cfg.nt)?;
        let rr = cfg.correlation.matrix(cfg.nr)?;
        let jakes = match cfg.channel {
            ChannelMode::MultipathJakes { max_doppler_hz, num_oscillators, sample_period_s, .. }
                if max_doppler_hz > 0.0 =>
            {
                Some(JakesConfig {
                    num_oscillators,
                    max_doppler_hz,
                    sample_period_s: sample_period_s.unwrap_or(1.0 / (100.0 * max_doppler_hz)),
                    num_waveforms: 1,
                })
            }
            _ => None,
        };
        Ok(LinkSimulator {
            tap_amplitudes: pdp.tap_powers.iter().map(|p| p.sqrt()).collect(),
            roots: CorrelationRoots::new(&rt, &rr)?,
            responder: FrequencyResponder::new(cfg.ofdm.num_subcarriers),
            constellation,
            modem,
            pdp,
            jakes,
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn constellation(&self) -> &QamConstellation {
        &self.constellation
    }

    pub fn pdp(&self) -> &PowerDelayProfile {
        &self.pdp
    }

    /// Complex noise variance per time-domain sample at `ebn0_db`.
    pub fn noise_variance(&self, ebn0_db: f64) -> f64 {
        noise_variance(
            self.constellation.average_energy(),
            self.constellation.bits_per_symbol(),
            ebn0_db,
            self.cfg.ofdm.cp_overhead(),
            self.cfg.nt,
        )
    }

    fn complex_gaussian(rng: &mut SimRng) -> Complex64 {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn draw_taps(&self, num_symbols: usize, rng: &mut SimRng) -> TapSchedule {
        let (nr, nt) = (self.cfg.nr, self.cfg.nt);
        let shape = |g: CMatrix, l: usize| self.roots.apply(&g) * Complex64::new(self.tap_amplitudes[l], 0.0);
        match &self.jakes {
            None => {
                let taps: Vec<CMatrix> = (0..self.tap_amplitudes.len())
                    .map(|l| shape(CMatrix::from_fn(nr, nt, |_, _| Self::complex_gaussian(rng)), l))
                    .collect();
                vec![taps; num_symbols]
            }
            Some(jcfg) => {
                let order = jcfg.walsh_order();
                let num_taps = self.tap_amplitudes.len();
                // raw[m][l] before correlation
                let mut raw = vec![vec![CMatrix::zeros(nr, nt); num_taps]; num_symbols];
                for r in 0..nr {
                    for t in 0..nt {
                        for l in 0..num_taps {
                            let index = (r * nt + t) * num_taps + l;
                            let bank = OscillatorBank::new(jcfg, index % order, rng);
                            for (m, sym) in raw.iter_mut().enumerate() {
                                sym[l][(r, t)] = bank.sample_at(m as f64 * jcfg.sample_period_s);
                            }
                        }
                    }
                }
                raw.into_iter()
                    .map(|sym| sym.into_iter().enumerate().map(|(l, g)| shape(g, l)).collect())
                    .collect()
            }
        }
    }

    /// Run trial `trial` of grid point `point`. Channel, data and noise come
    /// from substream `(seed, point, trial, 0)` and detector randomness from
    /// `(seed, point, trial, 1)`, so different detectors given the same
    /// scenario see identical channels.
    pub fn run_trial(&self, point: usize, ebn0_db: f64, trial: u64) -> Result<TrialOutcome> {
        let seed = self.cfg.seed;
        let mut rng = substream(seed, &[point as u64, trial, 0]);
        let mut det_rng = substream(seed, &[point as u64, trial, 1]);
        let c = &self.constellation;
        let (nr, nt) = (self.cfg.nr, self.cfg.nt);
        let n = self.cfg.ofdm.num_subcarriers;
        let sym_len = self.cfg.ofdm.symbol_len();
        let num_symbols = self.cfg.symbols_per_trial + 1;
        let tx_scale = 1.0 / (nt as f64).sqrt();

        let taps = self.draw_taps(num_symbols, &mut rng);

        // labels[m][t][k]
        let mut labels = vec![vec![vec![0usize; n]; nt]; num_symbols];
        let mut tx = vec![Vec::with_capacity(num_symbols * sym_len); nt];
        for sym_labels in labels.iter_mut() {
            for (t, ant) in sym_labels.iter_mut().enumerate() {
                for l in ant.iter_mut() {
                    *l = rng.random_range(0..c.order());
                }
                let freq: Vec<Complex64> = ant.iter().map(|&l| c.points()[l] * tx_scale).collect();
                tx[t].extend(self.modem.modulate(&freq)?);
            }
        }

        // time-varying linear convolution: samples of symbol m use taps[m]
        let num_taps = self.tap_amplitudes.len();
        let mut rx = vec![vec![Complex64::default(); num_symbols * sym_len]; nr];
        for (m, sym_taps) in taps.iter().enumerate() {
            for (r, rx_r) in rx.iter_mut().enumerate() {
                for (t, tx_t) in tx.iter().enumerate() {
                    let h: Vec<Complex64> = (0..num_taps).map(|l| sym_taps[l][(r, t)]).collect();
                    for i in m * sym_len..(m + 1) * sym_len {
                        let mut acc = Complex64::default();
                        for (l, hl) in h.iter().enumerate().take(i + 1) {
                            acc += hl * tx_t[i - l];
                        }
                        rx_r[i] += acc;
                    }
                }
            }
        }

        let sigma2 = self.noise_variance(ebn0_db);
        let noise_ratio = sigma2 / c.average_energy();
        let mut out = TrialOutcome::default();
        for m in 1..num_symbols {
            let range = m * sym_len..(m + 1) * sym_len;
            let mut freq_rx = Vec::with_capacity(nr);
            for rx_r in rx.iter() {
                let mut seg = rx_r[range.clone()].to_vec();
                add_awgn(&mut seg, sigma2, &mut rng);
                freq_rx.push(self.modem.demodulate(&seg)?);
            }
            let sent = &labels[m];
            out.bits += (n * nt * c.bits_per_symbol()) as u64;

            if nr == 1 && nt == 1 && self.cfg.detector == Detector::Zf {
                let h: Vec<Complex64> = taps[m].iter().map(|tap| tap[(0, 0)]).collect();
                let eq = equalize_siso(&freq_rx[0], &self.responder.scalar(&h))?;
                for ((&erased, &z), &want) in eq.erased.iter().zip(&eq.symbols).zip(&sent[0]) {
                    let label = if erased {
                        out.random_decisions += 1;
                        det_rng.random_range(0..c.order())
                    } else {
                        c.nearest_label(z)
                    };
                    out.errors += (label ^ want).count_ones() as u64;
                }
                continue;
            }

            let responses = self.responder.matrices(&taps[m]);
            for (k, hk) in responses.iter().enumerate() {
                let y = CVector::from_iterator(nr, freq_rx.iter().map(|f| f[k]));
                let h_eff = hk * Complex64::new(tx_scale, 0.0);
                let obs = MimoObservation::new(y, h_eff, noise_ratio, c)?;
                let res = self.cfg.detector.detect(&obs, &mut det_rng)?;
                if res.meta.singular {
                    out.random_decisions += 1;
                }
                out.errors += res.labels.iter().zip(sent).map(|(a, s)| (a ^ s[k]).count_ones() as u64).sum::<u64>();
            }
        }
        Ok(out)
    }
}
