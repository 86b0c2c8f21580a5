// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod detect;
pub mod error;
pub mod fading;
pub mod heuristic;
pub mod linalg;
pub mod ofdm;
pub mod par;
pub mod rng;
pub mod sim;

pub use error::{Result, SimError};
