use std::path::{Path, PathBuf};

use ceoae_core::io::{
    read_json, read_matrix_csv, read_vector_csv, read_wav, sidecar_path, write_json,
    write_matrix_csv, write_vector_csv, MatrixSidecar,
};
use ceoae_core::pipeline::{process_recording, RejectionSummary};
use ceoae_core::synth::{run_benchmark, ScenarioFile};
use ceoae_core::{
    denoise, pointwise_median, snr_db, Method, MonteCarloTable, NoiseEstimate, PipelineConfig,
    SnrReport, UnitMatrix,
};
use serde::{Deserialize, Serialize};

use crate::args::{DenoiseArgs, EvalArgs, SegmentArgs, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{now, RunManifest};

pub const MATRIX_FILE: &str = "Y.csv";
pub const XHAT_FILE: &str = "xhat.csv";
pub const MEDIAN_FILE: &str = "median.csv";
pub const SPECTRUM_FILE: &str = "spectrum.json";
pub const TABLE_CSV: &str = "table.csv";
pub const TABLE_JSON: &str = "table.json";
pub const RAW_CSV: &str = "raw_snr.csv";
pub const REPORT_FILE: &str = "report.json";

fn prepare_dir(out: &Path) -> CliResult<()> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out.display())))
}

fn to_value<S: Serialize>(s: &S) -> serde_json::Value {
    serde_json::to_value(s).unwrap_or(serde_json::Value::Null)
}

fn read_config<D: for<'de> Deserialize<'de> + Default>(path: Option<&PathBuf>) -> CliResult<D> {
    match path {
        None => Ok(D::default()),
        Some(p) => read_json(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
    }
}

#[derive(Debug, Clone)]
pub struct SegmentOutcome {
    pub matrix_path: Option<PathBuf>,
    pub summary: RejectionSummary,
    pub p: usize,
    pub n: usize,
}

/// Runs the recording pipeline and writes `Y.csv` with its sidecar.
///
/// An abandoned recording still gets its sidecar (counts and the abandon
/// flag, no matrix) and manifest before the error is returned.
pub fn cmd_segment(args: &SegmentArgs, out: &Path) -> CliResult<SegmentOutcome> {
    let started = now();
    let cfg: PipelineConfig = read_config(args.config.as_ref())?;
    let buf = read_wav(&args.wav, cfg.pascals_per_full_scale)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.wav.display())))?;
    let result = process_recording(&buf, &cfg)?;
    prepare_dir(out)?;

    let matrix_path = out.join(MATRIX_FILE);
    let (p, n) = result.matrix.as_ref().map_or((0, 0), |m| (m.p(), m.n()));
    let sidecar = MatrixSidecar {
        sample_rate: buf.sample_rate(),
        p,
        n,
        sigma: result.noise.as_ref().map(|s| s.sigma()),
        per_unit_sigmas: result
            .noise
            .as_ref()
            .map(|s| s.per_unit_sigmas().to_vec())
            .unwrap_or_default(),
        rejection: Some(result.summary),
        source: Some(args.wav.display().to_string()),
    };
    write_json(&sidecar_path(&matrix_path), &sidecar)?;
    if let Some(m) = &result.matrix {
        write_matrix_csv(&matrix_path, m.data())?;
    }

    let mut manifest = RunManifest::new("segment", to_value(&cfg), None, started);
    manifest.add_input(&args.wav)?;
    if let Some(c) = &args.config {
        manifest.add_input(c)?;
    }
    manifest.write(out)?;

    if result.summary.abandoned {
        return Err(CliError::Abandoned(format!(
            "{} of {} units rejected ({:.1}% > {:.1}%)",
            result.summary.rejected,
            result.summary.total,
            100.0 * result.summary.rejected_fraction,
            100.0 * cfg.max_reject_fraction
        )));
    }
    log::info!(
        "kept {} of {} units, matrix {p} x {n}",
        result.summary.kept,
        result.summary.total
    );
    Ok(SegmentOutcome {
        matrix_path: Some(matrix_path),
        summary: result.summary,
        p,
        n,
    })
}

/// Spectrum diagnostics of one denoising run.
///
/// For `cos` and `wf` the `spectrum_after` entries are the per-eigenvalue
/// filter coefficients; for `sos` they are the shrunken singular values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub method: Method,
    pub p: usize,
    pub n: usize,
    pub beta: f64,
    pub sigma: Option<f64>,
    pub effective_rank: usize,
    pub spectrum_before: Vec<f64>,
    pub spectrum_after: Vec<f64>,
}

pub fn cmd_denoise(args: &DenoiseArgs, out: &Path) -> CliResult<SpectrumReport> {
    let started = now();
    let data = read_matrix_csv::<f64>(&args.matrix)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.matrix.display())))?;
    let side_path = sidecar_path(&args.matrix);
    let sidecar: Option<MatrixSidecar> = if side_path.exists() {
        Some(read_json(&side_path)?)
    } else {
        None
    };
    let sample_rate = sidecar.as_ref().map_or(1.0, |s| s.sample_rate);
    let y = UnitMatrix::new(data, sample_rate)?;

    let noise = match (args.sigma, &sidecar) {
        (Some(s), _) => Some(NoiseEstimate::known(s)?),
        (None, Some(sc)) if !sc.per_unit_sigmas.is_empty() => {
            Some(NoiseEstimate::from_per_unit(sc.per_unit_sigmas.clone())?)
        }
        (None, Some(MatrixSidecar { sigma: Some(s), .. })) => Some(NoiseEstimate::known(*s)?),
        _ => None,
    };
    let noise = match (noise, args.method) {
        (Some(n), _) => n,
        (None, Method::Baseline) => NoiseEstimate::known(0.0)?,
        (None, m) => {
            return Err(CliError::Input(format!(
                "method {m} needs a noise level: pass --sigma or provide a sidecar with sigma"
            )))
        }
    };

    let result = denoise(args.method, &y, &noise)?;
    prepare_dir(out)?;
    let xhat_path = out.join(XHAT_FILE);
    write_matrix_csv(&xhat_path, &result.x_hat)?;
    write_json(
        &sidecar_path(&xhat_path),
        &MatrixSidecar {
            sample_rate,
            p: y.p(),
            n: y.n(),
            sigma: Some(noise.sigma()),
            per_unit_sigmas: Vec::new(),
            rejection: None,
            source: Some(args.matrix.display().to_string()),
        },
    )?;
    let median = pointwise_median(&result.x_hat)?;
    write_vector_csv(&out.join(MEDIAN_FILE), median.as_slice())?;
    let report = SpectrumReport {
        method: args.method,
        p: y.p(),
        n: y.n(),
        beta: y.beta(),
        sigma: (args.method != Method::Baseline).then(|| noise.sigma()),
        effective_rank: result.effective_rank,
        spectrum_before: result.spectrum_before,
        spectrum_after: result.spectrum_after,
    };
    write_json(&out.join(SPECTRUM_FILE), &report)?;

    let mut manifest = RunManifest::new(
        "denoise",
        serde_json::json!({ "method": args.method, "sigma_override": args.sigma }),
        None,
        started,
    );
    manifest.add_input(&args.matrix)?;
    if side_path.exists() {
        manifest.add_input(&side_path)?;
    }
    manifest.write(out)?;
    Ok(report)
}

/// Scenario file plus command-line overrides.
pub fn effective_scenario(args: &SimulateArgs) -> CliResult<ScenarioFile> {
    let mut file: ScenarioFile = read_config(args.config.as_ref())?;
    if let Some(seed) = args.seed {
        file.synth.seed = seed;
    }
    if let Some(n) = &args.n {
        file.scenario.n_values = n.clone();
    }
    if let Some(r) = args.realizations {
        file.scenario.realizations = r;
    }
    if let Some(m) = &args.method {
        file.scenario.methods = m.clone();
    }
    if let Some(s) = args.sigma {
        file.scenario.sigma = s;
        file.scenario.target_bm_snr_db = None;
    }
    file.scenario.validate()?;
    file.synth.validate()?;
    Ok(file)
}

pub fn cmd_simulate(args: &SimulateArgs, out: &Path) -> CliResult<MonteCarloTable> {
    let started = now();
    let file = effective_scenario(args)?;
    let table = run_benchmark::<f64>(&file.scenario, &file.synth)?;
    prepare_dir(out)?;
    std::fs::write(out.join(TABLE_CSV), table.to_csv())?;
    std::fs::write(out.join(RAW_CSV), table.raw_to_csv())?;
    write_json(&out.join(TABLE_JSON), &table)?;
    for f in &table.failures {
        log::warn!("n = {}, realization {}: {}", f.n, f.realization, f.error);
    }
    let mut manifest = RunManifest::new("simulate", to_value(&file), Some(file.synth.seed), started);
    if let Some(c) = &args.config {
        manifest.add_input(c)?;
    }
    manifest.write(out)?;
    Ok(table)
}

pub fn cmd_eval(args: &EvalArgs, out: &Path) -> CliResult<SnrReport> {
    let started = now();
    let read = |p: &PathBuf| {
        read_vector_csv::<f64>(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
    };
    let xhat = read(&args.xhat)?;
    let truth = read(&args.truth)?;
    let n = args.n.unwrap_or(0);
    let reference = args
        .reference
        .clone()
        .unwrap_or_else(|| args.truth.display().to_string());
    let snr = snr_db(xhat.as_slice(), truth.as_slice())?;
    let mut report = SnrReport::new(args.method, n, snr, reference.clone());
    if let Some(b) = &args.baseline {
        let base = read(b)?;
        let base_snr = snr_db(base.as_slice(), truth.as_slice())?;
        report = report.with_baseline(&SnrReport::new(Method::Baseline, n, base_snr, reference))?;
    }
    prepare_dir(out)?;
    write_json(&out.join(REPORT_FILE), &report)?;
    let mut manifest = RunManifest::new(
        "eval",
        serde_json::json!({ "method": args.method, "n": args.n, "reference": args.reference }),
        None,
        started,
    );
    manifest.add_input(&args.xhat)?;
    manifest.add_input(&args.truth)?;
    if let Some(b) = &args.baseline {
        manifest.add_input(b)?;
    }
    manifest.write(out)?;
    Ok(report)
}
