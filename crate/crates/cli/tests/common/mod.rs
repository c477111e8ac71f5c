#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ceoae_core::io::{sidecar_path, write_json, write_matrix_csv, write_wav, MatrixSidecar};
use ceoae_core::synth::{three_click_recording, Recording, RecordingSpec};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Writes a synthetic three-click recording as a float WAV at 1 Pa full scale.
pub fn write_fixture(dir: &Path, name: &str, spec: &RecordingSpec) -> (PathBuf, Recording) {
    let rec = three_click_recording(spec).unwrap();
    let path = dir.join(name);
    write_wav(&path, &rec.buffer, 1.0).unwrap();
    (path, rec)
}

pub fn fixture_spec(units: usize, artifacts: usize) -> RecordingSpec {
    RecordingSpec {
        units,
        artifact_units: (0..artifacts).collect(),
        ..RecordingSpec::default()
    }
}

pub fn noise_matrix(p: usize, n: usize, sigma: f64, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(p, n, |_, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        sigma * z
    })
}

/// Rank-one chirp-like matrix plus white noise.
pub fn signal_plus_noise(p: usize, n: usize, amp: f64, sigma: f64, seed: u64) -> DMatrix<f64> {
    let noise = noise_matrix(p, n, sigma, seed);
    DMatrix::from_fn(p, n, |i, j| {
        let t = i as f64 / p as f64;
        let g = 1.0 + 0.1 * ((j as f64) * 0.7).sin();
        amp * g * (t * (1.0 - t) * 4.0) * (2.0 * std::f64::consts::PI * 12.0 * t * t).sin()
            + noise[(i, j)]
    })
}

/// Writes `m` as CSV, optionally with a sidecar carrying `sigma`.
pub fn write_matrix(dir: &Path, name: &str, m: &DMatrix<f64>, sigma: Option<f64>) -> PathBuf {
    let path = dir.join(name);
    write_matrix_csv(&path, m).unwrap();
    if let Some(s) = sigma {
        write_json(
            &sidecar_path(&path),
            &MatrixSidecar {
                sample_rate: 44_100.0,
                p: m.nrows(),
                n: m.ncols(),
                sigma: Some(s),
                per_unit_sigmas: Vec::new(),
                rejection: None,
                source: None,
            },
        )
        .unwrap();
    }
    path
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}
