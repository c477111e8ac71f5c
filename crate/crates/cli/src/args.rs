use std::path::PathBuf;

use ceoae_core::Method;
use clap::{Args, Parser, Subcommand};

/// Environment variable naming the default output root. Each command writes
/// to `<root>/<command>` when `--out` is not given.
pub const OUT_ROOT_ENV: &str = "CEOAE_OUT";

#[derive(Debug, Parser)]
#[command(name = "ceoae", version, about = "Denoise repeated-measurement response matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn a calibrated WAV recording into a unit matrix (Y.csv + Y.json).
    Segment(SegmentArgs),
    /// Denoise a unit matrix with bm, wf, cos or sos.
    Denoise(DenoiseArgs),
    /// Run the Monte-Carlo method comparison.
    Simulate(SimulateArgs),
    /// SNR of an estimate against a reference vector.
    Eval(EvalArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Segment(_) => "segment",
            Command::Denoise(_) => "denoise",
            Command::Simulate(_) => "simulate",
            Command::Eval(_) => "eval",
        }
    }

    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Segment(a) => a.out.as_ref(),
            Command::Denoise(a) => a.out.as_ref(),
            Command::Simulate(a) => a.out.as_ref(),
            Command::Eval(a) => a.out.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SegmentArgs {
    /// Mono WAV recording.
    pub wav: PathBuf,
    /// Pipeline configuration (JSON); missing fields take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DenoiseArgs {
    /// Matrix CSV; its JSON sidecar supplies the noise level.
    pub matrix: PathBuf,
    #[arg(long)]
    pub method: Method,
    /// Noise standard deviation in pascals, overriding the sidecar.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Scenario file (JSON with `scenario` and `synth` sections).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated column counts, e.g. `400,200`.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Comma-separated subset of bm, wf, cos, sos.
    #[arg(long, value_delimiter = ',')]
    pub method: Option<Vec<Method>>,
    /// Fixed noise level in pascals; disables SNR calibration.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Estimated vector (CSV).
    pub xhat: PathBuf,
    /// Reference vector (CSV).
    pub truth: PathBuf,
    /// Baseline estimate; adds the enhancement over it to the report.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Method that produced `xhat`.
    #[arg(long, default_value = "sos")]
    pub method: Method,
    /// Number of units behind the estimate, recorded in the report.
    #[arg(long)]
    pub n: Option<usize>,
    /// Description of the reference.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
