//! Zero-phase Butterworth band-pass.
//!
//! Each band edge is an even-order Butterworth filter realised as a cascade
//! of bilinear-transform biquads. The cascade runs forward and then
//! backward over an odd-extended copy of the signal, starting each pass
//! from the steady state of a constant input so that edges do not ring.

use std::f64::consts::PI;

use crate::error::Result;
use crate::pipeline::{PipelineConfig, SampleBuffer};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
struct Biquad {
    b: [f64; 3],
    /// `a1, a2` with `a0` normalized to one.
    a: [f64; 2],
}

#[derive(Debug, Clone, Copy)]
enum Edge {
    LowPass,
    HighPass,
}

impl Biquad {
    fn new(edge: Edge, cutoff: f64, q: f64, sample_rate: f64) -> Self {
        let w0 = 2.0 * PI * cutoff / sample_rate;
        let (sin, cos) = w0.sin_cos();
        let alpha = sin / (2.0 * q);
        let a0 = 1.0 + alpha;
        let b = match edge {
            Edge::LowPass => [(1.0 - cos) / 2.0, 1.0 - cos, (1.0 - cos) / 2.0],
            Edge::HighPass => [(1.0 + cos) / 2.0, -(1.0 + cos), (1.0 + cos) / 2.0],
        };
        Self {
            b: [b[0] / a0, b[1] / a0, b[2] / a0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
        }
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }
}

fn butterworth(edge: Edge, order: usize, cutoff: f64, sample_rate: f64) -> Vec<Biquad> {
    (0..order / 2)
        .map(|k| {
            let theta = (2 * k + 1) as f64 * PI / (2 * order) as f64;
            Biquad::new(edge, cutoff, 1.0 / (2.0 * theta.sin()), sample_rate)
        })
        .collect()
}

/// Per-section transposed direct-form II state for a unit constant input.
fn steady_state(sections: &[Biquad]) -> Vec<[f64; 2]> {
    let mut level = 1.0;
    sections
        .iter()
        .map(|s| {
            let g = s.dc_gain();
            let z = [(g - s.b[0]) * level, (s.b[2] - s.a[1] * g) * level];
            level *= g;
            z
        })
        .collect()
}

fn run_cascade(sections: &[Biquad], zi: &[[f64; 2]], x: &mut [f64]) {
    let x0 = x[0];
    for (s, z0) in sections.iter().zip(zi) {
        let (mut z1, mut z2) = (z0[0] * x0, z0[1] * x0);
        for v in x.iter_mut() {
            let input = *v;
            let y = s.b[0] * input + z1;
            z1 = s.b[1] * input - s.a[0] * y + z2;
            z2 = s.b[2] * input - s.a[1] * y;
            *v = y;
        }
    }
}

fn filtfilt(sections: &[Biquad], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return x.to_vec();
    }
    let pad = (3 * (2 * sections.len() + 1)).min(n - 1);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

    let zi = steady_state(sections);
    run_cascade(sections, &zi, &mut ext);
    ext.reverse();
    run_cascade(sections, &zi, &mut ext);
    ext.reverse();
    ext[pad..pad + n].to_vec()
}

/// Zero-phase band-pass between the configured edges.
pub fn bandpass<T: Real>(buf: &SampleBuffer<T>, cfg: &PipelineConfig) -> Result<SampleBuffer<T>> {
    cfg.validate(buf.sample_rate())?;
    let fs = buf.sample_rate();
    let mut sections = butterworth(Edge::HighPass, cfg.bandpass_order, cfg.bandpass_low, fs);
    sections.extend(butterworth(Edge::LowPass, cfg.bandpass_order, cfg.bandpass_high, fs));
    let x: Vec<f64> = buf.samples().iter().map(|v| v.as_f64()).collect();
    let y = filtfilt(&sections, &x);
    SampleBuffer::new(y.into_iter().map(T::lit).collect(), fs)
}
