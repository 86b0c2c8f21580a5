//! Properties of the fading generator and its statistics.

use mimo_ofdm::fading::{
    autocorrelation_empirical, generate_jakes_waveforms, psd_empirical, walsh_hadamard_matrix, JakesConfig,
};

fn cfg(fd: f64, nd: usize, k: usize) -> JakesConfig {
    JakesConfig { num_oscillators: nd, max_doppler_hz: fd, sample_period_s: 1e-3, num_waveforms: k }
}

#[test]
fn walsh_rows_are_orthogonal() {
    for order in [1, 2, 4, 64] {
        let w = walsh_hadamard_matrix(order).unwrap();
        for i in 0..order {
            for j in 0..order {
                let dot: i64 = (0..order).map(|n| (w[i][n] * w[j][n]) as i64).sum();
                assert_eq!(dot, if i == j { order as i64 } else { 0 });
            }
        }
    }
    assert!(walsh_hadamard_matrix(12).is_err());
}

#[test]
fn zero_doppler_gives_constant_waveforms_and_flat_autocorrelation() {
    let w = generate_jakes_waveforms(&cfg(0.0, 128, 2), 512, 1).unwrap();
    for wf in &w {
        let acf = autocorrelation_empirical(wf, 50).unwrap();
        assert!(acf.iter().all(|r| (r - 1.0).abs() < 1e-9));
        let psd = psd_empirical(wf).unwrap();
        assert!(psd.dc_fraction() > 1.0 - 1e-9);
    }
}

#[test]
fn unit_mean_power_on_average() {
    let c = JakesConfig { num_waveforms: 8, ..JakesConfig::table1() };
    let w = generate_jakes_waveforms(&c, 16384, 21).unwrap();
    let mean: f64 = w.iter().map(|x| x.mean_power()).sum::<f64>() / w.len() as f64;
    assert!((mean - 1.0).abs() < 0.15, "mean power {mean}");
}

#[test]
fn doubling_samples_halves_bin_width() {
    let c = cfg(40.0, 256, 1);
    let a = psd_empirical(&generate_jakes_waveforms(&c, 4096, 2).unwrap()[0]).unwrap();
    let b = psd_empirical(&generate_jakes_waveforms(&c, 8192, 2).unwrap()[0]).unwrap();
    assert!((a.bin_width_hz / b.bin_width_hz - 2.0).abs() < 1e-12);
}

#[test]
fn spectrum_is_band_limited_to_doppler() {
    let c = cfg(40.0, 256, 1);
    let w = &generate_jakes_waveforms(&c, 8192, 4).unwrap()[0];
    let psd = psd_empirical(w).unwrap();
    let total: f64 = psd.power.iter().sum();
    let outside: f64 = psd
        .freqs_hz
        .iter()
        .zip(&psd.power)
        .filter(|(f, _)| f.abs() > 40.0 + 4.0 * psd.bin_width_hz)
        .map(|(_, p)| p)
        .sum();
    assert!(outside / total < 0.02, "out-of-band fraction {}", outside / total);
}

#[test]
fn autocorrelation_starts_at_one() {
    let w = &generate_jakes_waveforms(&cfg(20.0, 64, 1), 1000, 8).unwrap()[0];
    let acf = autocorrelation_empirical(w, 10).unwrap();
    assert!((acf[0] - 1.0).abs() < 1e-12);
    assert!(autocorrelation_empirical(w, 1000).is_err());
}
