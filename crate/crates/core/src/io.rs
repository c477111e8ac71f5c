//! File formats: matrices and vectors as headerless CSV, a JSON sidecar
//! next to each matrix, and calibrated mono WAV.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write followed by a read reproduces every value exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pipeline::{RejectionSummary, SampleBuffer};
use crate::scalar::Real;

fn parse_field<T: Real>(field: &str, row: usize, col: usize) -> Result<T> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| invalid(format!("row {}, column {}: '{field}' is not a number", row + 1, col + 1)))?;
    if !v.is_finite() {
        return Err(invalid(format!("row {}, column {}: non-finite value", row + 1, col + 1)));
    }
    Ok(T::lit(v))
}

/// One matrix row per line, columns separated by commas.
pub fn write_matrix_csv<T: Real>(path: &Path, m: &DMatrix<T>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    let mut record = Vec::with_capacity(m.ncols());
    for i in 0..m.nrows() {
        record.clear();
        record.extend(m.row(i).iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv<T: Real>(path: &Path) -> Result<DMatrix<T>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)?;
    let mut values = Vec::new();
    let mut ncols = None;
    let mut nrows = 0;
    for (i, record) in r.records().enumerate() {
        let record = record?;
        match ncols {
            None => ncols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(invalid(format!(
                    "{}: row {} has {} columns, expected {c}",
                    path.display(),
                    i + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        for (j, field) in record.iter().enumerate() {
            values.push(parse_field::<T>(field, i, j)?);
        }
        nrows += 1;
    }
    let ncols = ncols.ok_or_else(|| invalid(format!("{}: empty matrix file", path.display())))?;
    Ok(DMatrix::from_row_slice(nrows, ncols, &values))
}

/// One value per line.
pub fn write_vector_csv<T: Real>(path: &Path, v: &[T]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for x in v {
        writeln!(w, "{x}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a vector stored one value per line, or as a single row.
pub fn read_vector_csv<T: Real>(path: &Path) -> Result<DVector<T>> {
    let m: DMatrix<T> = read_matrix_csv(path)?;
    if m.ncols() == 1 || m.nrows() == 1 {
        Ok(DVector::from_iterator(m.len(), m.iter().copied()))
    } else {
        Err(invalid(format!(
            "{}: expected a vector, found a {} x {} matrix",
            path.display(),
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Metadata stored beside a matrix CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub sample_rate: f64,
    pub p: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_unit_sigmas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejection: Option<RejectionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// `Y.csv` → `Y.json`.
pub fn sidecar_path(matrix_path: &Path) -> PathBuf {
    matrix_path.with_extension("json")
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
}

/// Reads a mono WAV file and converts it to pascals: digital full scale
/// maps to `pascals_per_full_scale`. Integer (8 to 32 bit) and 32-bit float
/// samples are supported.
pub fn read_wav(path: &Path, pascals_per_full_scale: f64) -> Result<SampleBuffer<f64>> {
    if !(pascals_per_full_scale.is_finite() && pascals_per_full_scale > 0.0) {
        return Err(invalid("pascals per full scale must be positive"));
    }
    let mut reader = hound::WavReader::open(path)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(invalid(format!(
            "{}: expected a mono recording, found {} channels",
            path.display(),
            spec.channels
        )));
    }
    let samples: Vec<f64> = match spec.sample_format {
        hound::SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64 * pascals_per_full_scale))
            .collect::<std::result::Result<_, _>>()?,
        hound::SampleFormat::Int => {
            let full_scale = (1u64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f64 / full_scale * pascals_per_full_scale))
                .collect::<std::result::Result<_, _>>()?
        }
    };
    SampleBuffer::new(samples, spec.sample_rate as f64)
}

/// Writes a mono 32-bit float WAV; `pascals_per_full_scale` maps back to
/// digital full scale. The sample rate is rounded to whole hertz.
pub fn write_wav<T: Real>(path: &Path, buf: &SampleBuffer<T>, pascals_per_full_scale: f64) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate().round() as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut w = hound::WavWriter::create(path, spec)?;
    for v in buf.samples() {
        w.write_sample((v.as_f64() / pascals_per_full_scale) as f32)?;
    }
    w.finalize()?;
    Ok(())
}
