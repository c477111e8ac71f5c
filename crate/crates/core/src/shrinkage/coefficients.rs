//! Scalar shrinkage rules.

use crate::error::{invalid, Result};
use crate::scalar::Real;

fn check_non_negative<T: Real>(name: &str, v: T) -> Result<()> {
    if !v.is_finite() || v < T::zero() {
        return Err(invalid(format!("{name} must be finite and non-negative, got {}", v.as_f64())));
    }
    Ok(())
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if !v.is_finite() || v <= T::zero() {
        return Err(invalid(format!("{name} must be finite and positive, got {}", v.as_f64())));
    }
    Ok(())
}

/// Sample covariance eigenvalue produced by a population spike `lambda`
/// under noise level `sigma` and aspect ratio `beta`:
/// `l = (λ + σ²)(1 + βσ²/λ)`.
///
/// Only meaningful above the detection threshold `λ > σ²√β`.
pub fn observed_eigenvalue<T: Real>(lambda: T, sigma: T, beta: T) -> T {
    let s2 = sigma * sigma;
    (lambda + s2) * (T::one() + beta * s2 / lambda)
}

/// Recovers the population eigenvalue from an observed one by taking the
/// positive root of the spike quadratic.
///
/// Returns zero when the discriminant is negative (the observation sits
/// inside the noise bulk) or when both roots are negative (below the lower
/// bulk edge).
pub fn debias_eigenvalue<T: Real>(l: T, sigma: T, beta: T) -> Result<T> {
    check_non_negative("eigenvalue", l)?;
    check_non_negative("sigma", sigma)?;
    check_positive("beta", beta)?;
    if sigma == T::zero() {
        return Ok(l);
    }
    let s2 = sigma * sigma;
    let b = s2 * (T::one() + beta) - l;
    let disc = b * b - T::lit(4.0) * s2 * s2 * beta;
    if disc < T::zero() {
        return Ok(T::zero());
    }
    let lambda = (-b + disc.sqrt()) / T::lit(2.0);
    Ok(lambda.max(T::zero()))
}

/// Covariance-shrinkage filter gain `h = K / (1 + K)` for a debiased
/// eigenvalue, with `K = ((λ/σ²)² − β) / (λ/σ² + β)` above the threshold
/// `λ/σ² ≥ √β` and zero below it.
///
/// `sigma = 0` is the noiseless limit: gain 1 for any positive eigenvalue.
pub fn cos_coefficient<T: Real>(lambda: T, sigma: T, beta: T) -> Result<T> {
    check_non_negative("lambda", lambda)?;
    check_non_negative("sigma", sigma)?;
    check_positive("beta", beta)?;
    if sigma == T::zero() {
        return Ok(if lambda > T::zero() { T::one() } else { T::zero() });
    }
    let ratio = lambda / (sigma * sigma);
    let root = beta.sqrt();
    if ratio <= root {
        return Ok(T::zero());
    }
    let k = (ratio - root) * (ratio + root) / (ratio + beta);
    Ok((k / (T::one() + k)).max(T::zero()))
}

/// Frobenius-loss optimal singular value shrinker for white noise of unit
/// level: `η(ξ) = √((ξ² − β − 1)² − 4β) / ξ` for `ξ > 1 + √β`, else 0.
pub fn frobenius_shrinker<T: Real>(xi: T, beta: T) -> Result<T> {
    check_non_negative("singular value", xi)?;
    check_positive("beta", beta)?;
    let root = beta.sqrt();
    let edge = T::one() + root;
    if xi <= edge {
        return Ok(T::zero());
    }
    // Factored radicand (ξ − e₊)(ξ + e₊)(ξ² − e₋²): no cancellation near the
    // edge, where the expanded form loses most of its digits.
    let lower = T::one() - root;
    let radicand = (xi - edge) * (xi + edge) * (xi * xi - lower * lower);
    Ok(radicand.sqrt() / xi)
}

/// Wiener gain `l / (l + σ²)` on a raw (not debiased) eigenvalue.
pub fn wiener_coefficient<T: Real>(l: T, sigma: T) -> Result<T> {
    check_non_negative("eigenvalue", l)?;
    check_non_negative("sigma", sigma)?;
    let denom = l + sigma * sigma;
    if denom == T::zero() {
        return Ok(T::zero());
    }
    Ok(l / denom)
}
