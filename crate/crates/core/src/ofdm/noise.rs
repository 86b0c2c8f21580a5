//! AWGN calibrated to Eb/N0.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::qam::QamConstellation;
use crate::rng::from_seed;

/// Total complex noise variance `sigma^2` for a target Eb/N0.
///
/// `symbol_energy` is the constellation energy `E_s`, `rate_overhead` is the
/// cyclic-prefix factor `(N + CP) / N` and `streams` the number of spatially
/// multiplexed symbols sharing `E_s` under equal power allocation. Returns 0
/// for `ebn0_db = +inf`.
pub fn noise_variance(
    symbol_energy: f64,
    bits_per_symbol: usize,
    ebn0_db: f64,
    rate_overhead: f64,
    streams: usize,
) -> f64 {
    if ebn0_db == f64::INFINITY {
        return 0.0;
    }
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    symbol_energy * rate_overhead / (streams as f64 * bits_per_symbol as f64 * ebn0)
}

/// Add circular complex Gaussian noise of total variance `sigma2` in place.
pub fn add_awgn<R: Rng + ?Sized>(samples: &mut [Complex64], sigma2: f64, rng: &mut R) {
    if sigma2 == 0.0 {
        return;
    }
    let s = (sigma2 / 2.0).sqrt();
    for z in samples.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z += Complex64::new(s * re, s * im);
    }
}

/// Single-stream noise injection at the given Eb/N0.
pub fn awgn_inject(
    samples: &[Complex64],
    ebn0_db: f64,
    constellation: &QamConstellation,
    rate_overhead: f64,
    seed: u64,
) -> Vec<Complex64> {
    let sigma2 = noise_variance(
        constellation.average_energy(),
        constellation.bits_per_symbol(),
        ebn0_db,
        rate_overhead,
        1,
    );
    let mut out = samples.to_vec();
    add_awgn(&mut out, sigma2, &mut from_seed(seed));
    out
}
