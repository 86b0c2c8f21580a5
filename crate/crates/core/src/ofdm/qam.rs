//! Square M-QAM with per-axis reflected Gray labeling on the integer grid
//! `{-(L-1), ..., -1, 1, ..., L-1}` (`L = sqrt(M)`).
//!
//! A symbol label is `log2(M)` bits, most significant first: the first half
//! is the Gray label of the in-phase level, the second half that of the
//! quadrature level.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QamConstellation {
    order: usize,
    side: usize,
    bits_per_symbol: usize,
    /// Points indexed by label.
    points: Vec<Complex64>,
    average_energy: f64,
}

#[inline]
fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn inverse_gray(mut g: usize) -> usize {
    let mut i = 0;
    while g != 0 {
        i ^= g;
        g >>= 1;
    }
    i
}

impl QamConstellation {
    pub fn new(order: usize) -> Result<Self> {
        if !matches!(order, 4 | 16 | 256) {
            return Err(SimError::UnsupportedModulation(order));
        }
        let side = (order as f64).sqrt().round() as usize;
        let bits_per_symbol = order.trailing_zeros() as usize;
        let half = bits_per_symbol / 2;
        let level = |g: usize| (2 * inverse_gray(g)) as f64 - (side - 1) as f64;
        let points: Vec<Complex64> = (0..order)
            .map(|label| Complex64::new(level(label >> half), level(label & (side - 1))))
            .collect();
        let average_energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
        Ok(QamConstellation { order, side, bits_per_symbol, points, average_energy })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn average_energy(&self) -> f64 {
        self.average_energy
    }

    /// Largest per-axis amplitude, `L - 1`.
    pub fn max_level(&self) -> f64 {
        (self.side - 1) as f64
    }

    /// Per-axis levels in ascending order.
    pub fn axis_levels(&self) -> Vec<f64> {
        (0..self.side).map(|i| self.level_of_index(i)).collect()
    }

    #[inline]
    fn level_of_index(&self, i: usize) -> f64 {
        (2 * i) as f64 - (self.side - 1) as f64
    }

    /// Index of the nearest axis level. An exact tie goes to the level with
    /// the smaller Gray label.
    #[inline]
    pub fn slice_axis_index(&self, v: f64) -> usize {
        let t = (v + (self.side - 1) as f64) / 2.0;
        if !(t > 0.0) {
            return 0;
        }
        let lo = (t.floor() as usize).min(self.side - 1);
        if lo + 1 >= self.side {
            return self.side - 1;
        }
        let dlo = (v - self.level_of_index(lo)).abs();
        let dhi = (v - self.level_of_index(lo + 1)).abs();
        if dlo < dhi || (dlo == dhi && gray(lo) < gray(lo + 1)) {
            lo
        } else {
            lo + 1
        }
    }

    /// Nearest axis level value.
    #[inline]
    pub fn slice_axis(&self, v: f64) -> f64 {
        self.level_of_index(self.slice_axis_index(v))
    }

    /// Label of the nearest constellation point (minimum Euclidean
    /// distance, lexicographically smallest label on ties).
    #[inline]
    pub fn nearest_label(&self, z: Complex64) -> usize {
        let half = self.bits_per_symbol / 2;
        (gray(self.slice_axis_index(z.re)) << half) | gray(self.slice_axis_index(z.im))
    }

    pub fn quantize(&self, z: Complex64) -> Complex64 {
        self.points[self.nearest_label(z)]
    }

    /// Append the bits of `label`, most significant first.
    pub fn push_label_bits(&self, label: usize, out: &mut Vec<u8>) {
        for b in (0..self.bits_per_symbol).rev() {
            out.push(((label >> b) & 1) as u8);
        }
    }

    pub fn label_from_bits(&self, bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
    }
}

pub fn qam_modulate(bits: &[u8], c: &QamConstellation) -> Result<Vec<Complex64>> {
    let m = c.bits_per_symbol();
    if !bits.len().is_multiple_of(m) {
        return Err(SimError::invalid(
            "bits",
            format!("{} bits is not a multiple of {m} bits per symbol", bits.len()),
        ));
    }
    Ok(bits.chunks(m).map(|chunk| c.points[c.label_from_bits(chunk)]).collect())
}

pub fn qam_demodulate(symbols: &[Complex64], c: &QamConstellation) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * c.bits_per_symbol());
    for &s in symbols {
        c.push_label_bits(c.nearest_label(s), &mut out);
    }
    out
}

/// Per-entry nearest constellation point.
pub fn quantize_to_constellation(x_soft: &[Complex64], c: &QamConstellation) -> Vec<Complex64> {
    x_soft.iter().map(|&z| c.quantize(z)).collect()
}
