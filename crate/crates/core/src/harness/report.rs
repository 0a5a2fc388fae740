use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::blowup::BlowupReport;
use super::config::ExperimentConfig;
use super::sweep::{ConvergenceReport, ProbeConstant, SweepRow};

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_JSON: &str = "summary.json";
pub const BLOWUP_CSV: &str = "blowup.csv";
pub const BLOWUP_JSON: &str = "blowup.json";

/// JSON summary of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual: Option<f64>,
    pub pass: bool,
    pub n_max: usize,
    pub field_error_monotone: bool,
    pub probe_constants: Vec<ProbeConstant>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupSummary {
    pub growth: f64,
    pub diverging: bool,
    pub pass: bool,
    pub n_max: usize,
    pub config: ExperimentConfig,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: &[R]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `sweep.csv` (delta, spectral_error, field_error, energy) and
/// `summary.json` into `dir`; returns both paths.
pub fn emit_report(report: &ConvergenceReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    create_dir(dir)?;
    let csv_path = dir.join(SWEEP_CSV);
    write_csv::<SweepRow>(&csv_path, &["delta", "spectral_error", "field_error", "energy"], &report.rows)?;
    let json_path = dir.join(SWEEP_JSON);
    let summary = Summary {
        slope: report.fit.as_ref().map(|f| f.slope),
        intercept: report.fit.as_ref().map(|f| f.intercept),
        residual: report.fit.as_ref().map(|f| f.residual),
        pass: report.pass,
        n_max: report.n_max,
        field_error_monotone: report.field_error_monotone,
        probe_constants: report.probe_constants.clone(),
        config: report.config.clone(),
    };
    write_json(&json_path, &summary)?;
    Ok((csv_path, json_path))
}

pub fn emit_blowup_report(report: &BlowupReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    create_dir(dir)?;
    let csv_path = dir.join(BLOWUP_CSV);
    write_csv(&csv_path, &["delta", "energy"], &report.rows)?;
    let json_path = dir.join(BLOWUP_JSON);
    write_json(
        &json_path,
        &BlowupSummary {
            growth: report.growth,
            diverging: report.diverging,
            pass: report.pass,
            n_max: report.n_max,
            config: report.config.clone(),
        },
    )?;
    Ok((csv_path, json_path))
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads `(delta, error)` pairs from a CSV with a `delta` column and an
/// error column (`spectral_error` by default).
pub fn read_rate_csv(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = r.headers().map_err(csv_err)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{}: no column `{name}`", path.display())))
    };
    let (di, ei) = (find("delta")?, find(column)?);
    let mut deltas = Vec::new();
    let mut errors = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let num = |i: usize| {
            rec[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        };
        deltas.push(num(di)?);
        errors.push(num(ei)?);
    }
    Ok((deltas, errors))
}

/// Config echoed in a summary, ready to re-run.
pub fn config_from_summary(path: &Path) -> Result<ExperimentConfig> {
    let cfg = read_summary(path)?.config;
    cfg.validate()?;
    Ok(cfg)
}
