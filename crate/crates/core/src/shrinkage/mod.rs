//! Matrix denoisers for a `p × n` observation matrix.
//!
//! Three estimators share the same inputs, a [`UnitMatrix`] and a noise level:
//!
//! * covariance-based optimal shrinkage ([`cos_denoise`]): the sample
//!   covariance eigenvalues are debiased against the Marchenko–Pastur model
//!   and turned into thresholded filter gains applied in the eigenbasis;
//! * SVD-based optimal shrinkage ([`sos_denoise`]): singular values of the
//!   normalized matrix `Y / (σ√n)` are replaced by the Frobenius-optimal
//!   shrinker, which zeroes everything inside the noise bulk;
//! * the eigenbasis Wiener filter ([`wiener_denoise`]), which applies
//!   `l / (l + σ²)` to the raw eigenvalues.
//!
//! Every function here is a pure, deterministic transform of its inputs.

mod coefficients;
mod denoise;
mod spectrum;

pub use coefficients::{
    cos_coefficient, debias_eigenvalue, frobenius_shrinker, observed_eigenvalue,
    wiener_coefficient,
};
pub use denoise::{
    baseline, cos_denoise, cos_denoise_with, denoise, sos_denoise, wiener_denoise,
    wiener_denoise_with,
};
pub use spectrum::{covariance_basis, covariance_spectrum, CovarianceBasis, CovarianceSpectrum};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Observation matrix: rows are time samples, columns are repeated units.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitMatrix<T: Real> {
    data: DMatrix<T>,
    sample_rate: f64,
}

impl<T: Real> UnitMatrix<T> {
    pub fn new(data: DMatrix<T>, sample_rate: f64) -> Result<Self> {
        let (p, n) = data.shape();
        if p < 2 || n < 2 {
            return Err(invalid(format!(
                "unit matrix must be at least 2 x 2, got {p} x {n}"
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!(
                "non-finite entry at row {}, column {}",
                idx % p,
                idx / p
            )));
        }
        Ok(Self { data, sample_rate })
    }

    /// Number of samples per unit.
    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    /// Number of units.
    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    /// Aspect ratio `p / n`.
    pub fn beta(&self) -> T {
        T::from_usize_lossy(self.p()) / T::from_usize_lossy(self.n())
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn data(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<T> {
        self.data
    }
}

/// Scalar noise standard deviation plus the per-unit values it averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate<T> {
    sigma: T,
    per_unit_sigmas: Vec<T>,
}

impl<T: Real> NoiseEstimate<T> {
    /// Averages per-unit standard deviations into the global level.
    pub fn from_per_unit(per_unit_sigmas: Vec<T>) -> Result<Self> {
        if per_unit_sigmas.is_empty() {
            return Err(invalid("noise estimate needs at least one unit"));
        }
        if per_unit_sigmas
            .iter()
            .any(|s| !s.is_finite() || *s < T::zero())
        {
            return Err(invalid("per-unit noise levels must be finite and non-negative"));
        }
        let sum = per_unit_sigmas.iter().fold(T::zero(), |acc, s| acc + *s);
        let sigma = sum / T::from_usize_lossy(per_unit_sigmas.len());
        Ok(Self {
            sigma,
            per_unit_sigmas,
        })
    }

    /// A noise level known a priori (simulation, or a CLI override).
    pub fn known(sigma: T) -> Result<Self> {
        Self::from_per_unit(vec![sigma])
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn per_unit_sigmas(&self) -> &[T] {
        &self.per_unit_sigmas
    }
}

/// Denoising method. The short names are the CLI and file-format spelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Point-wise median of the observed matrix; no matrix denoising.
    #[serde(rename = "bm")]
    Baseline,
    #[serde(rename = "wf")]
    Wiener,
    #[serde(rename = "cos")]
    CovarianceShrinkage,
    #[serde(rename = "sos")]
    SvdShrinkage,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Baseline,
        Method::Wiener,
        Method::CovarianceShrinkage,
        Method::SvdShrinkage,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Method::Baseline => "bm",
            Method::Wiener => "wf",
            Method::CovarianceShrinkage => "cos",
            Method::SvdShrinkage => "sos",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bm" | "baseline" | "median" => Ok(Method::Baseline),
            "wf" | "wiener" => Ok(Method::Wiener),
            "cos" => Ok(Method::CovarianceShrinkage),
            "sos" => Ok(Method::SvdShrinkage),
            other => Err(invalid(format!(
                "unknown method '{other}' (expected bm, wf, cos or sos)"
            ))),
        }
    }
}

/// Output of a denoiser.
///
/// For the covariance methods `spectrum_before` holds the `p` sample
/// covariance eigenvalues and `spectrum_after` the filter gains in `[0, 1]`.
/// For SVD shrinkage they hold the normalized singular values `ξ_i` and the
/// shrunken values `η*(ξ_i)`. The baseline leaves both empty.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult<T: Real> {
    pub x_hat: DMatrix<T>,
    pub spectrum_before: Vec<T>,
    pub spectrum_after: Vec<T>,
    pub effective_rank: usize,
    pub method: Method,
}

impl<T: Real> DenoiseResult<T> {
    pub(crate) fn new(
        x_hat: DMatrix<T>,
        spectrum_before: Vec<T>,
        spectrum_after: Vec<T>,
        method: Method,
    ) -> Self {
        let effective_rank = spectrum_after.iter().filter(|v| **v > T::zero()).count();
        Self {
            x_hat,
            spectrum_before,
            spectrum_after,
            effective_rank,
            method,
        }
    }
}
