use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::eval::{db_spl, pascals_from_db_spl};
use crate::pipeline::{
    ms_to_samples, PipelineConfig, RejectionReason, RejectionSummary, ResponseUnit,
};
use crate::scalar::Real;
use crate::shrinkage::{NoiseEstimate, UnitMatrix};

/// Responses split by artifact rejection; both lists keep input order.
#[derive(Debug, Clone)]
pub struct ScreenedResponses<T> {
    pub kept: Vec<ResponseUnit<T>>,
    pub rejected: Vec<ResponseUnit<T>>,
    pub summary: RejectionSummary,
}

/// Rejects every response with an instantaneous level above
/// `reject_threshold_db_spl` (re 20 µPa) strictly after the guard window.
///
/// The guard is measured from each response's click onset, i.e. after the
/// three clicks have been summed.
pub fn reject_artifacts<T: Real>(
    responses: Vec<ResponseUnit<T>>,
    cfg: &PipelineConfig,
    sample_rate: f64,
) -> ScreenedResponses<T> {
    let limit = T::lit(pascals_from_db_spl(cfg.reject_threshold_db_spl));
    let first_checked = ms_to_samples(cfg.reject_guard_ms, sample_rate) + 1;
    let total = responses.len();
    let mut kept = Vec::with_capacity(total);
    let mut rejected = Vec::new();
    for mut r in responses {
        let offender = r
            .samples
            .iter()
            .enumerate()
            .skip(first_checked)
            .find(|(_, v)| v.abs() > limit);
        match offender {
            Some((idx, v)) => {
                r.rejected = true;
                r.rejection_reason = Some(RejectionReason::LevelExceeded {
                    sample_index: idx,
                    level_db_spl: db_spl(v.abs().as_f64()).unwrap_or(f64::INFINITY),
                });
                rejected.push(r);
            }
            None => {
                r.rejected = false;
                r.rejection_reason = None;
                kept.push(r);
            }
        }
    }
    let rejected_fraction = if total == 0 {
        0.0
    } else {
        rejected.len() as f64 / total as f64
    };
    let summary = RejectionSummary {
        total,
        kept: kept.len(),
        rejected: rejected.len(),
        rejected_fraction,
        abandoned: rejected_fraction > cfg.max_reject_fraction,
    };
    ScreenedResponses {
        kept,
        rejected,
        summary,
    }
}

/// Noise level as the mean over units of the standard deviation of each
/// response's final `noise_tail_ms`.
pub fn estimate_noise<T: Real>(
    responses: &[ResponseUnit<T>],
    cfg: &PipelineConfig,
    sample_rate: f64,
) -> Result<NoiseEstimate<T>> {
    if responses.is_empty() {
        return Err(invalid("cannot estimate noise from zero responses"));
    }
    let tail = ms_to_samples(cfg.noise_tail_ms, sample_rate);
    if tail < 2 {
        return Err(invalid("noise tail shorter than two samples"));
    }
    let per_unit = responses
        .iter()
        .map(|r| {
            let len = r.samples.len();
            if tail > len {
                return Err(invalid(format!(
                    "noise tail of {tail} samples exceeds the {len}-sample response"
                )));
            }
            let w = &r.samples[len - tail..];
            let count = T::from_usize_lossy(tail);
            let mean = w.iter().fold(T::zero(), |a, v| a + *v) / count;
            let var = w.iter().fold(T::zero(), |a, v| a + (*v - mean) * (*v - mean)) / count;
            Ok(var.sqrt())
        })
        .collect::<Result<Vec<T>>>()?;
    NoiseEstimate::from_per_unit(per_unit)
}

/// Stacks the leading `analysis_window_ms` of each response as columns.
pub fn build_matrix<T: Real>(
    kept: &[ResponseUnit<T>],
    cfg: &PipelineConfig,
    sample_rate: f64,
) -> Result<UnitMatrix<T>> {
    if kept.is_empty() {
        return Err(invalid("no responses to build a matrix from"));
    }
    let p = ms_to_samples(cfg.analysis_window_ms, sample_rate);
    if let Some(short) = kept.iter().find(|r| r.samples.len() < p) {
        return Err(invalid(format!(
            "response of {} samples is shorter than the {p}-sample analysis window",
            short.samples.len()
        )));
    }
    let data = DMatrix::from_fn(p, kept.len(), |i, j| kept[j].samples[i]);
    UnitMatrix::new(data, sample_rate)
}
