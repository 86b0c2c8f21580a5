//! QAM mapping, OFDM modulation, noise injection and per-bin equalization.

pub mod equalize;
pub mod modem;
pub mod noise;
pub mod qam;

pub use equalize::{equalize_siso, Equalized};
pub use modem::{ofdm_demodulate, ofdm_modulate, OfdmConfig, OfdmModem};
pub use noise::{add_awgn, awgn_inject, noise_variance};
pub use qam::{qam_demodulate, qam_modulate, quantize_to_constellation, QamConstellation};
