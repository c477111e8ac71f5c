//! Synthetic signal and noise matrices, and the Monte-Carlo harness.
//!
//! The clean response is a parametric chirp: instantaneous frequency
//! `f_end + (f_start − f_end)·e^{−t/τ}` under the envelope
//! `(t/t_p)²·e^{2(1 − t/t_p)}`, which rises smoothly from zero, peaks at one
//! at `t_p` and then decays. Columns of the signal matrix are that chirp
//! scaled by independent `N(1, gain_std²)` gains, so the matrix has rank one.

mod bench;
mod protocol;
pub mod rng;

pub use bench::{
    calibrate_sigma, run_benchmark, run_benchmark_serial, BenchScenario, FailedRealization,
    MonteCarloTable, NoiseKind, RawSnr, ScenarioFile, TableRow,
};
pub use protocol::{three_click_recording, Recording, RecordingSpec};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::eval::pascals_from_db_spl;
use crate::pipeline::SampleBuffer;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub p: usize,
    pub sample_rate: f64,
    pub f_start: f64,
    pub f_end: f64,
    pub if_decay_ms: f64,
    pub envelope_peak_ms: f64,
    pub rms_level_db_spl: f64,
    pub gain_std: f64,
    pub seed: u64,
    /// Relative RMS of an optional second, independently weighted component
    /// that makes the signal matrix rank two.
    pub second_component: Option<f64>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            p: 1280,
            sample_rate: 64_000.0,
            f_start: 6000.0,
            f_end: 1000.0,
            if_decay_ms: 3.0,
            envelope_peak_ms: 4.0,
            rms_level_db_spl: -1.30,
            gain_std: 0.1,
            seed: 2024,
            second_component: None,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_end > 0.0 && self.f_start > self.f_end) {
            return Err(invalid(format!(
                "need f_start > f_end > 0, got {} and {}",
                self.f_start, self.f_end
            )));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 2.0 * self.f_start) {
            return Err(invalid("sample rate must exceed twice f_start"));
        }
        if (self.p as f64) / self.sample_rate < 0.010 - 1e-12 {
            return Err(invalid(format!(
                "p = {} at {} Hz is shorter than 10 ms",
                self.p, self.sample_rate
            )));
        }
        if !(self.if_decay_ms > 0.0 && self.envelope_peak_ms > 0.0) {
            return Err(invalid("time constants must be positive"));
        }
        if !(self.gain_std.is_finite() && self.gain_std >= 0.0) {
            return Err(invalid("gain_std must be finite and non-negative"));
        }
        if !self.rms_level_db_spl.is_finite() {
            return Err(invalid("rms level must be finite"));
        }
        if let Some(a) = self.second_component {
            if !(a.is_finite() && a >= 0.0) {
                return Err(invalid("second component amplitude must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn target_rms(&self) -> f64 {
        pascals_from_db_spl(self.rms_level_db_spl)
    }
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// The noiseless chirp at the configured RMS level, before gain scaling.
pub fn base_column(cfg: &SynthConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let tau = cfg.if_decay_ms / 1000.0;
    let tp = cfg.envelope_peak_ms / 1000.0;
    let df = cfg.f_start - cfg.f_end;
    let raw: Vec<f64> = (0..cfg.p)
        .map(|i| {
            let t = i as f64 / cfg.sample_rate;
            let phase = 2.0 * PI * (cfg.f_end * t + df * tau * (1.0 - (-t / tau).exp()));
            let r = t / tp;
            r * r * (2.0 * (1.0 - r)).exp() * phase.sin()
        })
        .collect();
    let scale = cfg.target_rms() / rms(&raw);
    Ok(raw.into_iter().map(|v| v * scale).collect())
}

/// Fixed tone burst used as the optional second component: the chirp's
/// envelope delayed to twice the peak time, at the mean of the two edge
/// frequencies.
fn second_column(cfg: &SynthConfig) -> Vec<f64> {
    let tp = 2.0 * cfg.envelope_peak_ms / 1000.0;
    let f = 0.5 * (cfg.f_start + cfg.f_end);
    let raw: Vec<f64> = (0..cfg.p)
        .map(|i| {
            let t = i as f64 / cfg.sample_rate;
            let r = t / tp;
            r * r * (2.0 * (1.0 - r)).exp() * (2.0 * PI * f * t).sin()
        })
        .collect();
    let scale = cfg.target_rms() / rms(&raw);
    raw.into_iter().map(|v| v * scale).collect()
}

fn gain_distribution(cfg: &SynthConfig) -> Normal<f64> {
    Normal::new(1.0, cfg.gain_std).expect("gain_std validated")
}

/// One clean column: the base chirp times a `N(1, gain_std²)` gain.
pub fn synth_clean_column<T: Real, R: Rng + ?Sized>(
    cfg: &SynthConfig,
    rng: &mut R,
) -> Result<DVector<T>> {
    Ok(make_signal_matrix(cfg, 1, rng)?.column(0).into_owned())
}

/// `p × n` signal matrix; column `i` is `g_i` times the base chirp, plus the
/// optional second component weighted by an independent standard normal.
pub fn make_signal_matrix<T: Real, R: Rng + ?Sized>(
    cfg: &SynthConfig,
    n: usize,
    rng: &mut R,
) -> Result<DMatrix<T>> {
    if n == 0 {
        return Err(invalid("signal matrix needs at least one column"));
    }
    let base = base_column(cfg)?;
    let gains = gain_distribution(cfg);
    let second = cfg
        .second_component
        .map(|a| (a, second_column(cfg)));
    let mut x = DMatrix::zeros(cfg.p, n);
    for j in 0..n {
        let g = gains.sample(rng);
        let mut col: Vec<f64> = base.iter().map(|b| g * b).collect();
        if let Some((a, s)) = &second {
            let h: f64 = rng.sample(StandardNormal);
            for (c, v) in col.iter_mut().zip(s) {
                *c += a * h * v;
            }
        }
        for (i, v) in col.into_iter().enumerate() {
            x[(i, j)] = T::lit(v);
        }
    }
    Ok(x)
}

/// `p × n` matrix of i.i.d. `N(0, σ²)` entries, drawn in column-major order.
pub fn white_noise_matrix<T: Real, R: Rng + ?Sized>(
    p: usize,
    n: usize,
    sigma: f64,
    rng: &mut R,
) -> Result<DMatrix<T>> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(invalid(format!("noise sigma must be non-negative, got {sigma}")));
    }
    let draws = (0..p * n).map(|_| {
        let z: f64 = rng.sample(StandardNormal);
        T::lit(sigma * z)
    });
    Ok(DMatrix::from_iterator(p, n, draws))
}

/// Linear-interpolation resampling to `target_rate`.
pub fn resample_linear<T: Real>(buf: &SampleBuffer<T>, target_rate: f64) -> Result<SampleBuffer<T>> {
    if !(target_rate.is_finite() && target_rate > 0.0) {
        return Err(invalid("target sample rate must be positive"));
    }
    let fs = buf.sample_rate();
    if fs == target_rate || buf.is_empty() {
        return SampleBuffer::new(buf.samples().to_vec(), target_rate);
    }
    let x = buf.samples();
    let out_len = (((x.len() - 1) as f64) * target_rate / fs).floor() as usize + 1;
    let out = (0..out_len)
        .map(|k| {
            let pos = k as f64 * fs / target_rate;
            let i = (pos.floor() as usize).min(x.len() - 1);
            let frac = pos - i as f64;
            let a = x[i].as_f64();
            let b = x[(i + 1).min(x.len() - 1)].as_f64();
            T::lit(a + frac * (b - a))
        })
        .collect();
    SampleBuffer::new(out, target_rate)
}

/// A recording normalized to zero mean and unit variance, ready for window
/// picks.
#[derive(Debug, Clone)]
pub struct NormalizedRecording {
    samples: Vec<f64>,
}

impl NormalizedRecording {
    pub fn new<T: Real>(buf: &SampleBuffer<T>) -> Result<Self> {
        let x: Vec<f64> = buf.samples().iter().map(|v| v.as_f64()).collect();
        if x.len() < 2 {
            return Err(invalid("ambient recording has fewer than two samples"));
        }
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let std = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64).sqrt();
        if !(std > 0.0) {
            return Err(invalid("ambient recording has zero variance"));
        }
        Ok(Self {
            samples: x.into_iter().map(|v| (v - mean) / std).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Uniformly random window of `p·n` samples reshaped column by column
    /// and scaled by `sigma`. Returns the window offset as well.
    pub fn noise_matrix<T: Real, R: Rng + ?Sized>(
        &self,
        p: usize,
        n: usize,
        sigma: f64,
        rng: &mut R,
    ) -> Result<(DMatrix<T>, usize)> {
        let need = p * n;
        if need == 0 || need > self.samples.len() {
            return Err(invalid(format!(
                "ambient recording has {} samples, {need} needed for a {p} x {n} matrix",
                self.samples.len()
            )));
        }
        let offset = rng.random_range(0..=self.samples.len() - need);
        let window = &self.samples[offset..offset + need];
        let m = DMatrix::from_iterator(p, n, window.iter().map(|v| T::lit(sigma * v)));
        Ok((m, offset))
    }
}

/// Ambient-noise matrix from a recording already at the target rate.
pub fn ambient_noise_matrix<T: Real, R: Rng + ?Sized>(
    buf: &SampleBuffer<T>,
    p: usize,
    n: usize,
    sigma: f64,
    rng: &mut R,
) -> Result<DMatrix<T>> {
    Ok(NormalizedRecording::new(buf)?.noise_matrix(p, n, sigma, rng)?.0)
}

/// Pink (1/f power) noise: white Gaussian noise whose spectrum is scaled by
/// `1/√f`, with the DC bin removed.
pub fn colored_noise_recording<R: Rng + ?Sized>(
    len: usize,
    sample_rate: f64,
    rng: &mut R,
) -> Result<SampleBuffer<f64>> {
    if len < 2 {
        return Err(invalid("colored noise needs at least two samples"));
    }
    let mut spec: Vec<Complex<f64>> = (0..len)
        .map(|_| Complex::new(rng.sample(StandardNormal), 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut spec);
    spec[0] = Complex::new(0.0, 0.0);
    for (k, c) in spec.iter_mut().enumerate().skip(1) {
        // Bin k and its mirror len − k share one physical frequency.
        let f = k.min(len - k) as f64;
        *c /= f.sqrt();
    }
    planner.plan_fft_inverse(len).process(&mut spec);
    let scale = 1.0 / len as f64;
    SampleBuffer::new(spec.into_iter().map(|c| c.re * scale).collect(), sample_rate)
}
