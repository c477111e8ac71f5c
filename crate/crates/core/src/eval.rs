//! Quality metrics: point-wise median, SNR, SNR enhancement and dB SPL.
//!
//! Standard deviations use the population form (divide by the vector
//! length) for both the signal and the error, so the SNR ratio does not
//! depend on the normalization convention.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::shrinkage::Method;

/// Reference pressure for sound pressure level, in pascals.
pub const SPL_REFERENCE_PA: f64 = 20e-6;

/// Median of a slice. Even lengths average the two central order statistics.
pub fn median<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / T::lit(2.0)
    })
}

/// Sample quantile with linear interpolation between order statistics
/// (`h = (N − 1) q`). NaNs sort last; infinities are ordinary values.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi || sorted[lo] == sorted[hi] {
        return Some(sorted[lo]);
    }
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Interquartile range `Q3 − Q1`.
pub fn iqr(values: &[f64]) -> Option<f64> {
    Some(quantile(values, 0.75)? - quantile(values, 0.25)?)
}

/// Row-wise median of a `p × n` matrix.
pub fn pointwise_median<T: Real>(m: &DMatrix<T>) -> Result<DVector<T>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(invalid("point-wise median of an empty matrix"));
    }
    let mut row = vec![T::zero(); m.ncols()];
    Ok(DVector::from_fn(m.nrows(), |i, _| {
        for (dst, v) in row.iter_mut().zip(m.row(i).iter()) {
            *dst = *v;
        }
        median(&row).expect("non-empty row")
    }))
}

fn population_std<T: Real>(v: impl ExactSizeIterator<Item = T> + Clone) -> T {
    let len = T::from_usize_lossy(v.len());
    let mean = v.clone().fold(T::zero(), |a, x| a + x) / len;
    let var = v.fold(T::zero(), |a, x| a + (x - mean) * (x - mean)) / len;
    var.sqrt()
}

/// `10·log10(σ_x² / σ_w²)` with `w = x̂ − x`.
///
/// Returns `+∞` when the error has zero spread (including a pure constant
/// offset, which the standard deviation ignores).
pub fn snr_db<T: Real>(x_hat: &[T], x: &[T]) -> Result<f64> {
    if x_hat.len() != x.len() {
        return Err(invalid(format!(
            "estimate has length {} but reference has length {}",
            x_hat.len(),
            x.len()
        )));
    }
    if x.is_empty() {
        return Err(invalid("SNR of empty vectors"));
    }
    let sx = population_std(x.iter().copied());
    if !(sx > T::zero()) {
        return Err(invalid("reference signal has zero standard deviation"));
    }
    let sw = population_std(x_hat.iter().zip(x).map(|(a, b)| *a - *b));
    if sw == T::zero() {
        return Ok(f64::INFINITY);
    }
    let ratio = sx.as_f64() / sw.as_f64();
    Ok(20.0 * ratio.log10())
}

/// Sound pressure level of an RMS pressure, re 20 µPa.
pub fn db_spl(p_rms: f64) -> Result<f64> {
    if !(p_rms.is_finite() && p_rms > 0.0) {
        return Err(invalid(format!("pressure must be positive, got {p_rms}")));
    }
    Ok(20.0 * (p_rms / SPL_REFERENCE_PA).log10())
}

/// Inverse of [`db_spl`].
pub fn pascals_from_db_spl(level_db: f64) -> f64 {
    SPL_REFERENCE_PA * 10f64.powf(level_db / 20.0)
}

/// SNR of one method's estimate against a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub method: Method,
    pub n: usize,
    #[serde(with = "serde_db")]
    pub snr_db: f64,
    /// `snr_db − snr_db(BM)` on the same data, when a baseline is known.
    #[serde(default, with = "serde_db_opt", skip_serializing_if = "Option::is_none")]
    pub enhancement_db: Option<f64>,
    /// Describes the ground truth used, e.g. `synthetic-truth` or a hash of
    /// the reference vector. Two reports are comparable only if this matches.
    pub reference: String,
}

impl SnrReport {
    pub fn new(method: Method, n: usize, snr_db: f64, reference: impl Into<String>) -> Self {
        Self {
            method,
            n,
            snr_db,
            enhancement_db: None,
            reference: reference.into(),
        }
    }

    /// Fills in `enhancement_db` relative to `baseline`.
    pub fn with_baseline(mut self, baseline: &SnrReport) -> Result<Self> {
        self.enhancement_db = Some(snr_enhancement(&self, baseline)?);
        Ok(self)
    }
}

/// SNR difference between a method and the baseline on the same data.
pub fn snr_enhancement(report: &SnrReport, baseline: &SnrReport) -> Result<f64> {
    if report.n != baseline.n || report.reference != baseline.reference {
        return Err(invalid(format!(
            "reports are not comparable: n {} vs {}, reference '{}' vs '{}'",
            report.n, baseline.n, report.reference, baseline.reference
        )));
    }
    if report.snr_db == baseline.snr_db {
        // Covers the ∞ − ∞ case.
        return Ok(0.0);
    }
    Ok(report.snr_db - baseline.snr_db)
}

/// JSON cannot carry infinities; they are written as the strings `"inf"`,
/// `"-inf"` and `"nan"`.
pub(crate) mod serde_db {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("invalid dB value '{other}'"))),
            },
        }
    }
}

pub(crate) mod serde_db_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::serde_db::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::serde_db")] f64);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
