use nalgebra::DMatrix;

use crate::error::Result;
use crate::scalar::Real;
use crate::shrinkage::coefficients::{
    cos_coefficient, debias_eigenvalue, frobenius_shrinker, wiener_coefficient,
};
use crate::shrinkage::spectrum::{covariance_basis, thin_svd, CovarianceBasis};
use crate::shrinkage::{DenoiseResult, Method, NoiseEstimate, UnitMatrix};

/// Dispatches to the denoiser for `method`.
pub fn denoise<T: Real>(
    method: Method,
    y: &UnitMatrix<T>,
    noise: &NoiseEstimate<T>,
) -> Result<DenoiseResult<T>> {
    match method {
        Method::Baseline => Ok(baseline(y)),
        Method::Wiener => wiener_denoise(y, noise),
        Method::CovarianceShrinkage => cos_denoise(y, noise),
        Method::SvdShrinkage => sos_denoise(y, noise),
    }
}

/// The baseline leaves the matrix untouched; its estimate is the point-wise
/// median taken downstream.
pub fn baseline<T: Real>(y: &UnitMatrix<T>) -> DenoiseResult<T> {
    DenoiseResult::new(y.data().clone(), Vec::new(), Vec::new(), Method::Baseline)
}

/// Covariance-based optimal shrinkage:
/// `X̂ = μ̂1ᵀ + U H Uᵀ (Y − μ̂1ᵀ)` with `H` built from debiased eigenvalues.
pub fn cos_denoise<T: Real>(y: &UnitMatrix<T>, noise: &NoiseEstimate<T>) -> Result<DenoiseResult<T>> {
    let basis = covariance_basis(y)?;
    cos_denoise_with(y, &basis, noise)
}

/// [`cos_denoise`] on a precomputed basis, so that it can be shared with
/// [`wiener_denoise_with`].
pub fn cos_denoise_with<T: Real>(
    y: &UnitMatrix<T>,
    basis: &CovarianceBasis<T>,
    noise: &NoiseEstimate<T>,
) -> Result<DenoiseResult<T>> {
    let sigma = noise.sigma();
    let beta = y.beta();
    let gains = basis
        .eigenvalues
        .iter()
        .map(|&l| {
            let lambda = debias_eigenvalue(l, sigma, beta)?;
            cos_coefficient(lambda, sigma, beta)
        })
        .collect::<Result<Vec<T>>>()?;
    let x_hat = if sigma == T::zero() {
        y.data().clone()
    } else {
        filter_in_basis(basis, &gains)
    };
    Ok(DenoiseResult::new(
        x_hat,
        basis.eigenvalues.clone(),
        gains,
        Method::CovarianceShrinkage,
    ))
}

/// Eigenbasis Wiener filter: same form as [`cos_denoise`] with gains
/// `l_i / (l_i + σ²)` on the raw eigenvalues.
pub fn wiener_denoise<T: Real>(
    y: &UnitMatrix<T>,
    noise: &NoiseEstimate<T>,
) -> Result<DenoiseResult<T>> {
    let basis = covariance_basis(y)?;
    wiener_denoise_with(y, &basis, noise)
}

pub fn wiener_denoise_with<T: Real>(
    y: &UnitMatrix<T>,
    basis: &CovarianceBasis<T>,
    noise: &NoiseEstimate<T>,
) -> Result<DenoiseResult<T>> {
    let sigma = noise.sigma();
    let gains = basis
        .eigenvalues
        .iter()
        .map(|&l| wiener_coefficient(l, sigma))
        .collect::<Result<Vec<T>>>()?;
    let x_hat = if sigma == T::zero() {
        y.data().clone()
    } else {
        filter_in_basis(basis, &gains)
    };
    Ok(DenoiseResult::new(
        x_hat,
        basis.eigenvalues.clone(),
        gains,
        Method::Wiener,
    ))
}

fn filter_in_basis<T: Real>(basis: &CovarianceBasis<T>, gains: &[T]) -> DMatrix<T> {
    let (p, n) = basis.centered.shape();
    let mut x_hat = DMatrix::from_fn(p, n, |i, _| basis.mean[i]);
    let keep: Vec<usize> = (0..basis.vectors.ncols())
        .filter(|&k| gains[k] > T::zero())
        .collect();
    if keep.is_empty() {
        return x_hat;
    }
    let u = basis.vectors.select_columns(&keep);
    let mut coords = u.transpose() * &basis.centered;
    for (row, &k) in keep.iter().enumerate() {
        coords.row_mut(row).scale_mut(gains[k]);
    }
    x_hat += u * coords;
    x_hat
}

/// SVD-based optimal shrinkage under Frobenius loss.
///
/// Decomposes `Ŷ = Y / (σ√n)`, replaces each singular value `ξ_i` by
/// `η*(ξ_i)` and rescales: `X̂ = σ√n · U L̂ Vᵀ`. With `σ = 0` the input is
/// returned unchanged and both spectra report the raw singular values.
pub fn sos_denoise<T: Real>(y: &UnitMatrix<T>, noise: &NoiseEstimate<T>) -> Result<DenoiseResult<T>> {
    let sigma = noise.sigma();
    if sigma == T::zero() {
        let svd = thin_svd(y.data())?;
        let values = svd.singular_values;
        return Ok(DenoiseResult::new(
            y.data().clone(),
            values.clone(),
            values,
            Method::SvdShrinkage,
        ));
    }

    let scale = sigma * T::from_usize_lossy(y.n()).sqrt();
    let normalized = y.data() / scale;
    let svd = thin_svd(&normalized)?;
    let beta = y.beta();
    let shrunk = svd
        .singular_values
        .iter()
        .map(|&xi| frobenius_shrinker(xi, beta))
        .collect::<Result<Vec<T>>>()?;

    let keep: Vec<usize> = (0..shrunk.len()).filter(|&k| shrunk[k] > T::zero()).collect();
    let x_hat = if keep.is_empty() {
        DMatrix::zeros(y.p(), y.n())
    } else {
        let mut u = svd.u.select_columns(&keep);
        for (col, &k) in keep.iter().enumerate() {
            u.column_mut(col).scale_mut(shrunk[k] * scale);
        }
        u * svd.v_t.select_rows(&keep)
    };
    Ok(DenoiseResult::new(
        x_hat,
        svd.singular_values,
        shrunk,
        Method::SvdShrinkage,
    ))
}
