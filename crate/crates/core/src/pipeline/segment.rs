use crate::error::{invalid, Error, Result};
use crate::pipeline::{PipelineConfig, RawUnit, ResponseUnit, SampleBuffer};
use crate::scalar::Real;

/// Fraction of the global peak a sample must reach to count as a click.
///
/// Under the `(+1, +1, −2)` protocol the first click peaks at exactly half
/// of the global maximum, so the threshold sits below one half.
pub const CLICK_THRESHOLD_FRACTION: f64 = 0.4;
/// Half-width of the window searched for the click's local maximum.
pub const CLICK_REFINE_MS: f64 = 1.0;

/// Index of the first click: the first sample whose magnitude reaches
/// [`CLICK_THRESHOLD_FRACTION`] of the global peak, refined to the largest
/// magnitude within ±1 ms.
pub fn detect_first_click<T: Real>(buf: &SampleBuffer<T>) -> Result<usize> {
    let x = buf.samples();
    let peak = x.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if !(peak > T::zero()) {
        return Err(Error::Detection("buffer is silent".into()));
    }
    let threshold = peak * T::lit(CLICK_THRESHOLD_FRACTION);
    let first = x
        .iter()
        .position(|v| v.abs() >= threshold)
        .expect("peak sample reaches the threshold");
    let half = ((CLICK_REFINE_MS * buf.sample_rate() / 1000.0).round() as usize).max(1);
    let lo = first.saturating_sub(half);
    let hi = (first + half + 1).min(x.len());
    let mut best = first;
    for i in lo..hi {
        if x[i].abs() > x[best].abs() {
            best = i;
        }
    }
    Ok(best)
}

/// Consecutive non-overlapping `3T` units starting at `t0`. A trailing
/// partial unit is dropped.
pub fn segment_units<T: Real>(
    buf: &SampleBuffer<T>,
    t0: usize,
    cfg: &PipelineConfig,
) -> Result<Vec<RawUnit<T>>> {
    let unit_len = 3 * cfg.click_interval_samples;
    if unit_len == 0 {
        return Err(invalid("click interval must be positive"));
    }
    let available = buf.len().saturating_sub(t0);
    let count = available / unit_len;
    if count == 0 {
        return Err(invalid(format!(
            "{available} samples after time zero (index {t0}) cannot hold one {unit_len}-sample unit"
        )));
    }
    Ok((0..count)
        .map(|k| {
            let start = t0 + k * unit_len;
            RawUnit {
                samples: buf.samples()[start..start + unit_len].to_vec(),
                start_index: start,
            }
        })
        .collect())
}

/// Sums the responses to the three clicks of a unit:
/// `r[j] = u[j] + u[j + T] + u[j + 2T]`.
///
/// With click amplitudes `(+1, +1, −2)` any linear response cancels and the
/// nonlinear residual remains.
pub fn extract_response<T: Real>(unit: &RawUnit<T>, cfg: &PipelineConfig) -> Result<ResponseUnit<T>> {
    let t = cfg.click_interval_samples;
    if unit.samples.len() != 3 * t {
        return Err(invalid(format!(
            "unit has {} samples, expected {}",
            unit.samples.len(),
            3 * t
        )));
    }
    let u = &unit.samples;
    let r = (0..t).map(|j| u[j] + u[j + t] + u[j + 2 * t]).collect();
    Ok(ResponseUnit::new(r))
}
