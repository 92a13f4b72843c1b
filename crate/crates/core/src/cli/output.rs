//! CSV and manifest emission.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::montecarlo::SweepRecord;
use crate::states::StateClass;

pub const SWEEP_HEADER: [&str; 8] = [
    "index",
    "class",
    "n_a",
    "avg_qfi",
    "coherence",
    "log_negativity",
    "param_json",
    "seed",
];

/// `%.9g`: nine significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e9)`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (8 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InsufficientData(format!("malformed CSV: {other:?}")),
    }
}

/// Serializes sweep records. `index_offset` renumbers rows when several
/// sweeps share one file.
pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord], index_offset: usize) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_error)?;
    for (k, r) in records.iter().enumerate() {
        w.write_record([
            (index_offset + k).to_string(),
            r.class_tag.name().to_string(),
            fmt_sig(r.n_a),
            fmt_sig(r.avg_qfi),
            opt(r.coherence),
            opt(r.log_negativity),
            serde_json::to_string(&r.raw_parameters)?,
            r.state_seed.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_xy_csv<W: Write>(out: W, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for &(x, y) in rows {
        w.write_record([fmt_sig(x), fmt_sig(y)]).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// A sweep row as read back from CSV.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub index: usize,
    pub class: String,
    pub n_a: f64,
    pub avg_qfi: f64,
    pub coherence: Option<f64>,
    pub log_negativity: Option<f64>,
    pub param_json: String,
    pub seed: u64,
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// Everything needed to rerun a command, plus digests of what it wrote.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub class_ranges: Option<serde_json::Value>,
    pub timestamp_unix: u64,
    /// File name to SHA-256 hex digest.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(config: serde_json::Value, seed: Option<u64>, class_ranges: Option<serde_json::Value>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line: std::env::args().collect(),
            config,
            seed,
            class_ranges,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, path: &Path) -> Result<()> {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.insert(name, sha256_file(path)?);
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// `<out>.manifest.json` next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub fn parse_class(name: &str) -> Option<StateClass> {
    StateClass::ALL.iter().copied().find(|c| c.name() == name)
}
