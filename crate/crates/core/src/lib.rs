//! Denoising of repeated-measurement signal matrices by optimal shrinkage.
//!
//! The crate is organised around a `p × n` observation matrix whose columns
//! are repeated responses to the same stimulus (click-evoked otoacoustic
//! emissions are the motivating case):
//!
//! * [`shrinkage`] holds the three matrix denoisers: covariance-based optimal
//!   shrinkage, SVD-based optimal shrinkage under Frobenius loss, and the
//!   eigenbasis Wiener filter.
//! * [`pipeline`] turns a calibrated recording into a [`UnitMatrix`]
//!   (band-pass, click detection, segmentation, three-click summation,
//!   artifact rejection, tail-based noise estimation).
//! * [`eval`] measures quality: point-wise medians, SNR and enhancement.
//! * [`synth`] generates synthetic signal/noise matrices and runs the
//!   Monte-Carlo comparison harness.
//! * [`io`] reads and writes the CSV/JSON/WAV formats used by the CLI.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below name the `f64` instantiations that the harness and the CLI
//! use.

pub mod error;
pub mod eval;
pub mod io;
pub mod pipeline;
pub mod scalar;
pub mod shrinkage;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{db_spl, pointwise_median, snr_db, snr_enhancement, SnrReport};
pub use pipeline::{PipelineConfig, ResponseUnit, SampleBuffer};
pub use scalar::Real;
pub use shrinkage::{
    cos_coefficient, cos_denoise, covariance_spectrum, debias_eigenvalue, denoise,
    frobenius_shrinker, sos_denoise, wiener_coefficient, wiener_denoise, CovarianceSpectrum,
    DenoiseResult, Method, NoiseEstimate, UnitMatrix,
};
pub use synth::{BenchScenario, MonteCarloTable, SynthConfig};

pub type UnitMatrix64 = UnitMatrix<f64>;
pub type UnitMatrix32 = UnitMatrix<f32>;
pub type NoiseEstimate64 = NoiseEstimate<f64>;
pub type DenoiseResult64 = DenoiseResult<f64>;
pub type CovarianceSpectrum64 = CovarianceSpectrum<f64>;
pub type SampleBuffer64 = SampleBuffer<f64>;
pub type ResponseUnit64 = ResponseUnit<f64>;
