use std::fmt::Write as _;
use std::path::PathBuf;

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::eval::{iqr, median, pointwise_median, snr_db};
use crate::pipeline::SampleBuffer;
use crate::scalar::Real;
use crate::shrinkage::{
    cos_denoise_with, covariance_basis, sos_denoise, wiener_denoise_with, Method, NoiseEstimate,
    UnitMatrix,
};
use crate::synth::rng::{sub_stream, Purpose};
use crate::synth::{
    base_column, colored_noise_recording, make_signal_matrix, resample_linear, white_noise_matrix,
    NormalizedRecording, SynthConfig,
};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseKind {
    #[default]
    White,
    /// Windows of a user-supplied WAV recording, resampled to the synthesis
    /// rate.
    Ambient { path: PathBuf },
    /// Generated 1/f noise of the given length, for runs without a recording.
    Pink { duration_s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchScenario {
    pub n_values: Vec<usize>,
    /// Noise level in pascals, used as is when `target_bm_snr_db` is unset.
    pub sigma: f64,
    /// When set, `sigma` is replaced by the level at which the baseline's
    /// expected SNR at `calibration_n` columns equals this value.
    pub target_bm_snr_db: Option<f64>,
    pub calibration_n: usize,
    pub noise_kind: NoiseKind,
    pub realizations: usize,
    pub methods: Vec<Method>,
}

impl Default for BenchScenario {
    fn default() -> Self {
        Self {
            n_values: vec![400, 200, 100, 50],
            sigma: 1.93e-6,
            target_bm_snr_db: Some(5.08),
            calibration_n: 400,
            noise_kind: NoiseKind::White,
            realizations: 100,
            methods: Method::ALL.to_vec(),
        }
    }
}

impl BenchScenario {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(invalid("realizations must be at least 1"));
        }
        if self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 2) {
            return Err(invalid("n_values must be non-empty with every n >= 2"));
        }
        if self.methods.is_empty() {
            return Err(invalid("at least one method is required"));
        }
        match self.target_bm_snr_db {
            Some(t) if !t.is_finite() => return Err(invalid("target SNR must be finite")),
            Some(_) if self.calibration_n < 2 => {
                return Err(invalid("calibration_n must be at least 2"))
            }
            None if !(self.sigma.is_finite() && self.sigma > 0.0) => {
                return Err(invalid(format!("sigma must be positive, got {}", self.sigma)))
            }
            _ => {}
        }
        if let NoiseKind::Pink { duration_s } = self.noise_kind {
            if !(duration_s.is_finite() && duration_s > 0.0) {
                return Err(invalid("pink noise duration must be positive"));
            }
        }
        Ok(())
    }
}

/// Scenario file layout: both sections optional, missing fields default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: BenchScenario,
    pub synth: SynthConfig,
}

/// Noise level giving the baseline an expected SNR of `target_db` with `n`
/// columns.
///
/// The point-wise median of `n` Gaussian samples has variance close to
/// `πσ²/(2n)`, and the truth is the median-gain chirp, so
/// `σ = std(base) · 10^(−target/20) · √(2n/π)`.
pub fn calibrate_sigma(cfg: &SynthConfig, target_db: f64, n: usize) -> Result<f64> {
    let base = base_column(cfg)?;
    let mean = base.iter().sum::<f64>() / base.len() as f64;
    let std = (base.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / base.len() as f64).sqrt();
    Ok(std * 10f64.powf(-target_db / 20.0) * (2.0 * n as f64 / std::f64::consts::PI).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub method: Method,
    pub n: usize,
    #[serde(with = "crate::eval::serde_db")]
    pub median_db: f64,
    #[serde(with = "crate::eval::serde_db")]
    pub iqr_db: f64,
    pub realizations_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSnr {
    pub method: Method,
    pub n: usize,
    pub realization: usize,
    #[serde(with = "crate::eval::serde_db")]
    pub snr_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedRealization {
    pub n: usize,
    pub realization: usize,
    pub error: String,
}

/// Median and IQR of the SNR across realizations for every `(method, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloTable {
    pub sigma: f64,
    pub seed: u64,
    pub realizations: usize,
    pub rows: Vec<TableRow>,
    pub raw: Vec<RawSnr>,
    pub failures: Vec<FailedRealization>,
}

fn fmt_db(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

impl MonteCarloTable {
    pub fn row(&self, method: Method, n: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.method == method && r.n == n)
    }

    pub fn median_db(&self, method: Method, n: usize) -> Option<f64> {
        self.row(method, n).map(|r| r.median_db)
    }

    /// Rows as CSV: `method,n,median_db,iqr_db,realizations_used`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,n,median_db,iqr_db,realizations_used\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.method,
                r.n,
                fmt_db(r.median_db),
                fmt_db(r.iqr_db),
                r.realizations_used
            );
        }
        s
    }

    /// Per-realization SNRs as CSV: `method,n,realization,snr_db`.
    pub fn raw_to_csv(&self) -> String {
        let mut s = String::from("method,n,realization,snr_db\n");
        for r in &self.raw {
            let _ = writeln!(s, "{},{},{},{}", r.method, r.n, r.realization, fmt_db(r.snr_db));
        }
        s
    }
}

enum NoiseSource {
    White,
    Recording(NormalizedRecording),
}

impl NoiseSource {
    fn prepare(kind: &NoiseKind, cfg: &SynthConfig) -> Result<Self> {
        match kind {
            NoiseKind::White => Ok(NoiseSource::White),
            NoiseKind::Ambient { path } => {
                let buf: SampleBuffer<f64> = crate::io::read_wav(path, 1.0)?;
                let buf = resample_linear(&buf, cfg.sample_rate)?;
                Ok(NoiseSource::Recording(NormalizedRecording::new(&buf)?))
            }
            NoiseKind::Pink { duration_s } => {
                let len = (duration_s * cfg.sample_rate).round() as usize;
                let mut rng = sub_stream(cfg.seed, Purpose::ColoredSource, 0, 0);
                let buf = colored_noise_recording(len, cfg.sample_rate, &mut rng)?;
                Ok(NoiseSource::Recording(NormalizedRecording::new(&buf)?))
            }
        }
    }

    fn matrix<T: Real>(&self, p: usize, n: usize, sigma: f64, rng: &mut ChaCha8Rng) -> Result<DMatrix<T>> {
        match self {
            NoiseSource::White => white_noise_matrix(p, n, sigma, rng),
            NoiseSource::Recording(rec) => Ok(rec.noise_matrix(p, n, sigma, rng)?.0),
        }
    }
}

struct Cell {
    n: usize,
    realization: usize,
}

fn run_cell<T: Real>(
    cell: &Cell,
    cfg: &SynthConfig,
    methods: &[Method],
    sigma: f64,
    source: &NoiseSource,
) -> Result<Vec<f64>> {
    let (n, r) = (cell.n, cell.realization);
    let x: DMatrix<T> = make_signal_matrix(cfg, n, &mut sub_stream(cfg.seed, Purpose::Signal, n, r))?;
    let truth = pointwise_median(&x)?;
    let z: DMatrix<T> = source.matrix(cfg.p, n, sigma, &mut sub_stream(cfg.seed, Purpose::Noise, n, r))?;
    let y = UnitMatrix::new(x + z, cfg.sample_rate)?;
    let noise = NoiseEstimate::known(T::lit(sigma))?;
    let basis = if methods
        .iter()
        .any(|m| matches!(m, Method::Wiener | Method::CovarianceShrinkage))
    {
        Some(covariance_basis(&y)?)
    } else {
        None
    };
    methods
        .iter()
        .map(|m| {
            let estimate = match m {
                Method::Baseline => pointwise_median(y.data())?,
                Method::Wiener => {
                    let b = basis.as_ref().expect("basis computed for wf");
                    pointwise_median(&wiener_denoise_with(&y, b, &noise)?.x_hat)?
                }
                Method::CovarianceShrinkage => {
                    let b = basis.as_ref().expect("basis computed for cos");
                    pointwise_median(&cos_denoise_with(&y, b, &noise)?.x_hat)?
                }
                Method::SvdShrinkage => pointwise_median(&sos_denoise(&y, &noise)?.x_hat)?,
            };
            snr_db(estimate.as_slice(), truth.as_slice())
        })
        .collect()
}

/// Runs every `(n, realization)` cell of the scenario in parallel and
/// aggregates the SNRs.
///
/// Each cell draws its signal and noise from its own sub-streams of
/// `cfg.seed`, so the table does not depend on thread scheduling. A cell
/// that fails is logged, listed in `failures` and left out of the
/// aggregates.
pub fn run_benchmark<T: Real>(scenario: &BenchScenario, cfg: &SynthConfig) -> Result<MonteCarloTable> {
    run::<T>(scenario, cfg, true)
}

/// Single-threaded [`run_benchmark`]; produces the identical table.
pub fn run_benchmark_serial<T: Real>(
    scenario: &BenchScenario,
    cfg: &SynthConfig,
) -> Result<MonteCarloTable> {
    run::<T>(scenario, cfg, false)
}

fn run<T: Real>(scenario: &BenchScenario, cfg: &SynthConfig, parallel: bool) -> Result<MonteCarloTable> {
    scenario.validate()?;
    cfg.validate()?;
    let sigma = match scenario.target_bm_snr_db {
        Some(t) => calibrate_sigma(cfg, t, scenario.calibration_n)?,
        None => scenario.sigma,
    };
    log::info!("benchmark noise level {sigma:.4e} Pa");
    let source = NoiseSource::prepare(&scenario.noise_kind, cfg)?;
    let cells: Vec<Cell> = scenario
        .n_values
        .iter()
        .flat_map(|&n| (0..scenario.realizations).map(move |realization| Cell { n, realization }))
        .collect();
    let methods = &scenario.methods;
    let work = |c: &Cell| run_cell::<T>(c, cfg, methods, sigma, &source);
    let outcomes: Vec<Result<Vec<f64>>> = if parallel {
        cells.par_iter().map(work).collect()
    } else {
        cells.iter().map(work).collect()
    };

    let mut raw = Vec::new();
    let mut failures = Vec::new();
    for (cell, outcome) in cells.iter().zip(outcomes) {
        match outcome {
            Ok(snrs) => raw.extend(methods.iter().zip(snrs).map(|(&method, snr_db)| RawSnr {
                method,
                n: cell.n,
                realization: cell.realization,
                snr_db,
            })),
            Err(e) => {
                log::warn!("realization {} at n = {} failed: {e}", cell.realization, cell.n);
                failures.push(FailedRealization {
                    n: cell.n,
                    realization: cell.realization,
                    error: e.to_string(),
                });
            }
        }
    }

    let mut rows = Vec::new();
    for &method in methods {
        for &n in &scenario.n_values {
            let values: Vec<f64> = raw
                .iter()
                .filter(|r| r.method == method && r.n == n)
                .map(|r| r.snr_db)
                .collect();
            rows.push(TableRow {
                method,
                n,
                median_db: median(&values).unwrap_or(f64::NAN),
                iqr_db: iqr(&values).unwrap_or(f64::NAN),
                realizations_used: values.len(),
            });
        }
    }
    Ok(MonteCarloTable {
        sigma,
        seed: cfg.seed,
        realizations: scenario.realizations,
        rows,
        raw,
        failures,
    })
}
