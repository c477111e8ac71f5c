//! Eigen- and singular-value decompositions with reproducible ordering.
//!
//! Vectors are sign-normalized so that the entry of largest magnitude is
//! positive (first such entry on ties), and values are sorted in
//! non-increasing order with a stable sort, so equal values keep the
//! order the solver produced them in.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::shrinkage::UnitMatrix;

/// Mean, eigenvalues and eigenvectors of the sample covariance
/// `S_n = (1/n) Σ (y_i − μ̂)(y_i − μ̂)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpectrum<T: Real> {
    pub mean: DVector<T>,
    /// `l_1 ≥ … ≥ l_p ≥ 0`.
    pub eigenvalues: DVector<T>,
    /// `p × p` orthogonal matrix, column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: DMatrix<T>,
}

/// Covariance eigensystem restricted to the column space of the centered
/// data, obtained from a thin SVD of `Y − μ̂1ᵀ`.
///
/// `eigenvalues` has length `p`; entries past `vectors.ncols()` are exact
/// zeros. Both covariance denoisers give zero gain to zero eigenvalues when
/// `σ > 0`, so the omitted directions never contribute.
#[derive(Debug, Clone)]
pub struct CovarianceBasis<T: Real> {
    pub mean: DVector<T>,
    pub centered: DMatrix<T>,
    pub eigenvalues: Vec<T>,
    pub vectors: DMatrix<T>,
}

pub(crate) struct ThinSvd<T: Real> {
    /// `p × r` left singular vectors, `r = min(p, n)`.
    pub u: DMatrix<T>,
    pub singular_values: Vec<T>,
    /// `r × n`.
    pub v_t: DMatrix<T>,
}

fn diagnostics<T: Real>(m: &DMatrix<T>) -> String {
    let max_abs = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs().as_f64()));
    let non_finite = m.iter().filter(|v| !v.is_finite()).count();
    format!(
        "{} x {} matrix, frobenius norm {:.6e}, max |entry| {:.6e}, {} non-finite entries",
        m.nrows(),
        m.ncols(),
        m.norm().as_f64(),
        max_abs,
        non_finite
    )
}

/// Convergence tolerance for the SVD. A tolerance of one machine epsilon can
/// converge to a wrong leading value on rank-deficient input.
fn svd_tolerance<T: Real>() -> T {
    T::default_epsilon() * T::lit(5.0)
}

fn max_iterations(dim: usize) -> usize {
    1000 * dim.max(10)
}

/// Column mean and centered data. The mean is accumulated relative to the
/// first column so that identical columns give an exactly zero residual.
pub(crate) fn center<T: Real>(data: &DMatrix<T>) -> (DVector<T>, DMatrix<T>) {
    let (p, n) = data.shape();
    let n_t = T::from_usize_lossy(n);
    let mean = DVector::from_fn(p, |j, _| {
        let anchor = data[(j, 0)];
        let offset = (0..n).fold(T::zero(), |acc, i| acc + (data[(j, i)] - anchor));
        anchor + offset / n_t
    });
    let mut centered = data.clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    (mean, centered)
}

fn descending_order<T: Real>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

/// Index of the first entry with the largest magnitude.
fn dominant_index<T: Real>(col: nalgebra::DVectorView<'_, T>) -> usize {
    let mut best = 0;
    let mut best_abs = T::zero();
    for (i, v) in col.iter().enumerate() {
        let a = v.abs();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    best
}

pub(crate) fn thin_svd<T: Real>(m: &DMatrix<T>) -> Result<ThinSvd<T>> {
    let (p, n) = m.shape();
    if p < n {
        let t = thin_svd(&m.transpose())?;
        let mut out = ThinSvd {
            u: t.v_t.transpose(),
            singular_values: t.singular_values,
            v_t: t.u.transpose(),
        };
        normalize_signs(&mut out);
        return Ok(out);
    }

    // Tall case: reduce to the n × n triangular factor first.
    let (q, core) = if p > n {
        let qr = m.clone().qr();
        (Some(qr.q()), qr.r())
    } else {
        (None, m.clone())
    };
    let svd = SVD::try_new(core, true, true, svd_tolerance(), max_iterations(n))
        .ok_or_else(|| Error::Numerical(format!("SVD did not converge: {}", diagnostics(m))))?;
    let (u_core, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD returned no singular vectors".into())),
    };
    let u = match q {
        Some(q) => q * u_core,
        None => u_core,
    };

    let values: Vec<T> = svd.singular_values.iter().copied().collect();
    let order = descending_order(&values);
    let r = values.len();
    let mut out = ThinSvd {
        u: DMatrix::from_fn(p, r, |i, k| u[(i, order[k])]),
        singular_values: order.iter().map(|&k| values[k]).collect(),
        v_t: DMatrix::from_fn(r, n, |k, j| v_t[(order[k], j)]),
    };
    normalize_signs(&mut out);
    Ok(out)
}

fn normalize_signs<T: Real>(svd: &mut ThinSvd<T>) {
    for k in 0..svd.u.ncols() {
        let idx = dominant_index(svd.u.column(k));
        if svd.u[(idx, k)] < T::zero() {
            svd.u.column_mut(k).neg_mut();
            svd.v_t.row_mut(k).neg_mut();
        }
    }
}

/// Full eigendecomposition of the sample covariance.
///
/// Costs `O(p³)`; the denoisers use [`covariance_basis`] instead, which
/// yields the same nonzero eigenpairs from a thin SVD.
pub fn covariance_spectrum<T: Real>(y: &UnitMatrix<T>) -> Result<CovarianceSpectrum<T>> {
    let n = T::from_usize_lossy(y.n());
    let (mean, centered) = center(y.data());
    let s = (&centered * centered.transpose()) / n;
    let eig = SymmetricEigen::try_new(s.clone(), T::default_epsilon(), max_iterations(y.p()))
        .ok_or_else(|| {
            Error::Numerical(format!(
                "covariance eigensolver did not converge: {}",
                diagnostics(&s)
            ))
        })?;

    let raw: Vec<T> = eig.eigenvalues.iter().copied().collect();
    let order = descending_order(&raw);
    let top = raw[order[0]].max(T::zero());
    let tol = T::lit(1e-10).max(T::lit(64.0) * T::default_epsilon()) * top;
    let mut eigenvalues = DVector::zeros(raw.len());
    for (k, &idx) in order.iter().enumerate() {
        let v = raw[idx];
        if v < -tol {
            return Err(Error::Numerical(format!(
                "covariance eigenvalue {} is negative beyond round-off (tolerance {}): {}",
                v.as_f64(),
                tol.as_f64(),
                diagnostics(&s)
            )));
        }
        eigenvalues[k] = v.max(T::zero());
    }
    let p = y.p();
    let mut eigenvectors = DMatrix::from_fn(p, p, |i, k| eig.eigenvectors[(i, order[k])]);
    for k in 0..p {
        let idx = dominant_index(eigenvectors.column(k));
        if eigenvectors[(idx, k)] < T::zero() {
            eigenvectors.column_mut(k).neg_mut();
        }
    }
    Ok(CovarianceSpectrum {
        mean,
        eigenvalues,
        eigenvectors,
    })
}

/// Nonzero covariance eigenpairs via a thin SVD of the centered data.
pub fn covariance_basis<T: Real>(y: &UnitMatrix<T>) -> Result<CovarianceBasis<T>> {
    let (p, n) = (y.p(), y.n());
    let (mean, centered) = center(y.data());
    let r = p.min(n);
    let mut eigenvalues = vec![T::zero(); p];
    if centered.iter().all(|v| *v == T::zero()) {
        return Ok(CovarianceBasis {
            mean,
            centered,
            eigenvalues,
            vectors: DMatrix::identity(p, r),
        });
    }
    let svd = thin_svd(&centered)?;
    let n_t = T::from_usize_lossy(n);
    for (dst, s) in eigenvalues.iter_mut().zip(&svd.singular_values) {
        *dst = *s * *s / n_t;
    }
    Ok(CovarianceBasis {
        mean,
        centered,
        eigenvalues,
        vectors: svd.u,
    })
}
