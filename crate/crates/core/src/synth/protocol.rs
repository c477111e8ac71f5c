//! Synthetic recordings under the three-click nonlinear protocol.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::eval::pascals_from_db_spl;
use crate::pipeline::SampleBuffer;
use crate::synth::{base_column, SynthConfig};

/// Parameters of a synthetic recording. Units are stimulus repetitions of
/// three clicks with amplitudes `(+1, +1, −2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecordingSpec {
    pub sample_rate: f64,
    pub click_interval_samples: usize,
    pub units: usize,
    /// Noise-only samples before the first click.
    pub lead_samples: usize,
    /// Samples after the last complete unit; keep below three intervals.
    pub tail_samples: usize,
    /// Peak pressure of a `+1` click.
    pub click_pa: f64,
    /// Damped ringing added to every click response, relative to the click.
    pub ring_ratio: f64,
    pub ring_hz: f64,
    pub ring_decay_ms: f64,
    /// RMS over the first 20 ms of the nonlinear residual that follows the
    /// first click of every unit.
    pub residual_db_spl: f64,
    /// RMS of the additive white noise.
    pub noise_db_spl: f64,
    /// Units that receive a tone-burst artifact.
    pub artifact_units: Vec<usize>,
    pub artifact_pa: f64,
    pub artifact_at_ms: f64,
    pub seed: u64,
}

impl Default for RecordingSpec {
    fn default() -> Self {
        Self {
            sample_rate: 44_100.0,
            click_interval_samples: 4400,
            units: 60,
            lead_samples: 1500,
            tail_samples: 2200,
            click_pa: 0.2,
            ring_ratio: 0.3,
            ring_hz: 2500.0,
            ring_decay_ms: 1.0,
            residual_db_spl: 20.0,
            noise_db_spl: 25.0,
            artifact_units: Vec::new(),
            artifact_pa: 0.02,
            artifact_at_ms: 30.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Recording {
    pub buffer: SampleBuffer<f64>,
    /// Index of the first `+1` click.
    pub first_click: usize,
    /// Nonlinear residual relative to a unit's first click, `T` samples.
    pub residual: Vec<f64>,
}

/// Builds the recording described by `spec`.
pub fn three_click_recording(spec: &RecordingSpec) -> Result<Recording> {
    let t = spec.click_interval_samples;
    if spec.units == 0 || t == 0 {
        return Err(invalid("recording needs at least one unit and a positive click interval"));
    }
    if spec.tail_samples >= 3 * t {
        return Err(invalid("tail must be shorter than one unit"));
    }
    let fs = spec.sample_rate;
    let analysis = ((0.020 * fs) as usize).min(t);
    let chirp = base_column(&SynthConfig {
        p: analysis,
        sample_rate: fs,
        rms_level_db_spl: spec.residual_db_spl,
        ..SynthConfig::default()
    })?;
    let mut residual = chirp;
    residual.resize(t, 0.0);

    let ring_len = ((8.0 * spec.ring_decay_ms / 1000.0) * fs) as usize;
    let click: Vec<f64> = (0..ring_len.max(1))
        .map(|i| {
            let tt = i as f64 / fs;
            let ring = spec.ring_ratio
                * (-tt * 1000.0 / spec.ring_decay_ms).exp()
                * (2.0 * PI * spec.ring_hz * tt).sin();
            spec.click_pa * (if i == 0 { 1.0 } else { 0.0 } + ring)
        })
        .collect();

    let burst_len = (0.002 * fs) as usize;
    let artifact_offset = (spec.artifact_at_ms / 1000.0 * fs) as usize;
    if artifact_offset + burst_len > 3 * t {
        return Err(invalid("artifact does not fit inside a unit"));
    }

    let len = spec.lead_samples + spec.units * 3 * t + spec.tail_samples;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise_pa = pascals_from_db_spl(spec.noise_db_spl);
    let mut x: Vec<f64> = (0..len)
        .map(|_| noise_pa * rng.sample::<f64, _>(StandardNormal))
        .collect();

    // The stimulus train runs on into the tail, so the last complete unit
    // has a following click like every other unit.
    for u in 0..=spec.units {
        let start = spec.lead_samples + u * 3 * t;
        for (k, amp) in [1.0, 1.0, -2.0].into_iter().enumerate() {
            let at = start + k * t;
            for (i, c) in click.iter().enumerate() {
                if at + i < len {
                    x[at + i] += amp * c;
                }
            }
        }
        if u == spec.units {
            break;
        }
        for (i, r) in residual.iter().enumerate() {
            x[start + i] += r;
        }
        if spec.artifact_units.contains(&u) {
            let at = start + artifact_offset;
            for i in 0..burst_len {
                let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / burst_len as f64).cos();
                x[at + i] += spec.artifact_pa * w * (2.0 * PI * 3000.0 * i as f64 / fs).sin();
            }
        }
    }

    Ok(Recording {
        buffer: SampleBuffer::new(x, fs)?,
        first_click: spec.lead_samples,
        residual,
    })
}
