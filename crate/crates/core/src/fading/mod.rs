//! Multipath Rayleigh fading and spatial antenna correlation.

pub mod correlation;
pub mod jakes;
pub mod pdp;
pub mod response;
pub mod stats;
pub mod walsh;

pub use correlation::{
    apply_spatial_correlation, ula_correlation, ura_correlation, ArrayKind, CorrelationRoots,
    CorrelationSpec, MimoChannelRealization, SpatialCorrelationMatrix,
};
pub use jakes::{generate_jakes_waveforms, FadingWaveform, JakesConfig, OscillatorBank};
pub use pdp::{coherence_params, min_subcarriers_flat, pdp_exponential, CoherenceParams, PowerDelayProfile};
pub use response::{channel_frequency_response, FrequencyResponder};
pub use stats::{autocorrelation_empirical, psd_empirical, validate_jakes, JakesValidation, PsdEstimate};
pub use walsh::walsh_hadamard_matrix;
