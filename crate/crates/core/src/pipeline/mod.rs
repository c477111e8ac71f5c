//! Recording-to-matrix pipeline.
//!
//! A calibrated recording under the three-click nonlinear protocol
//! (`+1, +1, −2` clicks, one click every `T` samples) is turned into a
//! [`UnitMatrix`]:
//!
//! 1. zero-phase band-pass ([`bandpass`]);
//! 2. the first click above 40% of the global peak is time zero
//!    ([`detect_first_click`]);
//! 3. the buffer is cut into non-overlapping `3T` units ([`segment_units`]);
//! 4. the three click responses of each unit are summed, cancelling the
//!    linear part ([`extract_response`]);
//! 5. responses exceeding the level limit after the guard window are
//!    rejected, and the recording is abandoned if too many are
//!    ([`reject_artifacts`]);
//! 6. the noise level is the mean standard deviation of the response tails
//!    ([`estimate_noise`]) and the matrix columns are the leading analysis
//!    windows ([`build_matrix`]).

mod filter;
mod quality;
mod segment;

pub use filter::bandpass;
pub use quality::{build_matrix, estimate_noise, reject_artifacts, ScreenedResponses};
pub use segment::{detect_first_click, extract_response, segment_units};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::shrinkage::{NoiseEstimate, UnitMatrix};

/// Calibrated pressure waveform in pascals.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer<T> {
    samples: Vec<T>,
    sample_rate: f64,
}

impl<T: Real> SampleBuffer<T> {
    pub fn new(samples: Vec<T>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

/// One `3T`-sample stimulus unit cut from the recording.
#[derive(Debug, Clone, PartialEq)]
pub struct RawUnit<T> {
    pub samples: Vec<T>,
    pub start_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cause", rename_all = "snake_case")]
pub enum RejectionReason {
    /// An instantaneous amplitude after the guard window exceeded the limit.
    LevelExceeded { sample_index: usize, level_db_spl: f64 },
}

/// Summed three-click response of one unit, `T` samples long.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseUnit<T> {
    pub samples: Vec<T>,
    pub rejected: bool,
    pub rejection_reason: Option<RejectionReason>,
}

impl<T> ResponseUnit<T> {
    pub fn new(samples: Vec<T>) -> Self {
        Self {
            samples,
            rejected: false,
            rejection_reason: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Samples between consecutive clicks (`T`).
    pub click_interval_samples: usize,
    pub bandpass_low: f64,
    pub bandpass_high: f64,
    /// Butterworth order of each band edge; applied forward and backward.
    pub bandpass_order: usize,
    pub reject_threshold_db_spl: f64,
    pub reject_guard_ms: f64,
    pub analysis_window_ms: f64,
    pub noise_tail_ms: f64,
    pub max_reject_fraction: f64,
    /// WAV calibration: pressure corresponding to digital full scale.
    pub pascals_per_full_scale: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            click_interval_samples: 4400,
            bandpass_low: 800.0,
            bandpass_high: 10_000.0,
            bandpass_order: 6,
            reject_threshold_db_spl: 50.0,
            reject_guard_ms: 5.0,
            analysis_window_ms: 20.0,
            noise_tail_ms: 40.0,
            max_reject_fraction: 0.8,
            pascals_per_full_scale: 1.0,
        }
    }
}

/// Whole samples in `ms` milliseconds, rounded down.
pub fn ms_to_samples(ms: f64, sample_rate: f64) -> usize {
    // The epsilon keeps exact products such as 20 ms × 44.1 kHz from
    // landing one sample short.
    (ms * sample_rate / 1000.0 + 1e-9).floor().max(0.0) as usize
}

impl PipelineConfig {
    pub fn validate(&self, sample_rate: f64) -> Result<()> {
        if self.click_interval_samples == 0 {
            return Err(invalid("click interval must be at least one sample"));
        }
        let nyquist = sample_rate / 2.0;
        if !(self.bandpass_low > 0.0
            && self.bandpass_low < self.bandpass_high
            && self.bandpass_high < nyquist)
        {
            return Err(invalid(format!(
                "band edges must satisfy 0 < {} < {} < {} (Nyquist)",
                self.bandpass_low, self.bandpass_high, nyquist
            )));
        }
        if self.bandpass_order < 2 || !self.bandpass_order.is_multiple_of(2) {
            return Err(invalid(format!(
                "band-pass order must be even and at least 2, got {}",
                self.bandpass_order
            )));
        }
        let unit_ms = self.click_interval_samples as f64 * 1000.0 / sample_rate;
        for (name, ms) in [
            ("rejection guard", self.reject_guard_ms),
            ("analysis window", self.analysis_window_ms),
            ("noise tail", self.noise_tail_ms),
        ] {
            if !(ms >= 0.0 && ms <= unit_ms) {
                return Err(invalid(format!(
                    "{name} of {ms} ms does not fit in the {unit_ms:.3} ms response"
                )));
            }
        }
        if ms_to_samples(self.analysis_window_ms, sample_rate) < 2 {
            return Err(invalid("analysis window shorter than two samples"));
        }
        if ms_to_samples(self.noise_tail_ms, sample_rate) < 2 {
            return Err(invalid("noise tail shorter than two samples"));
        }
        if !(0.0..=1.0).contains(&self.max_reject_fraction) {
            return Err(invalid("max reject fraction must lie in [0, 1]"));
        }
        if !(self.pascals_per_full_scale.is_finite() && self.pascals_per_full_scale > 0.0) {
            return Err(invalid("pascals per full scale must be positive"));
        }
        Ok(())
    }
}

/// Counts from artifact rejection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectionSummary {
    pub total: usize,
    pub kept: usize,
    pub rejected: usize,
    pub rejected_fraction: f64,
    /// Set when the rejected fraction exceeds the configured maximum.
    pub abandoned: bool,
}

/// Result of [`process_recording`]. `matrix` and `noise` are absent when the
/// recording was abandoned.
#[derive(Debug, Clone)]
pub struct PipelineOutput<T: Real> {
    pub t0: usize,
    pub summary: RejectionSummary,
    pub matrix: Option<UnitMatrix<T>>,
    pub noise: Option<NoiseEstimate<T>>,
}

/// Runs every pipeline stage on a raw recording.
pub fn process_recording<T: Real>(
    buf: &SampleBuffer<T>,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput<T>> {
    cfg.validate(buf.sample_rate())?;
    let filtered = bandpass(buf, cfg)?;
    let t0 = detect_first_click(&filtered)?;
    let units = segment_units(&filtered, t0, cfg)?;
    let responses = units
        .iter()
        .map(|u| extract_response(u, cfg))
        .collect::<Result<Vec<_>>>()?;
    let screened = reject_artifacts(responses, cfg, buf.sample_rate());
    if screened.summary.abandoned {
        log::warn!(
            "recording abandoned: {} of {} units rejected",
            screened.summary.rejected,
            screened.summary.total
        );
        return Ok(PipelineOutput {
            t0,
            summary: screened.summary,
            matrix: None,
            noise: None,
        });
    }
    let noise = estimate_noise(&screened.kept, cfg, buf.sample_rate())?;
    let matrix = build_matrix(&screened.kept, cfg, buf.sample_rate())?;
    Ok(PipelineOutput {
        t0,
        summary: screened.summary,
        matrix: Some(matrix),
        noise: Some(noise),
    })
}
