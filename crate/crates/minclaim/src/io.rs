//! Portfolio JSON, CSV outputs and fingerprints.
//!
//! Numbers are written with 17 significant digits so that every value
//! round-trips bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use minclaim_core::portfolio::PortfolioDef;
use minclaim_core::{linspace, BoundsCurve, Portfolio, SurvivalCurve};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sampler::{SampleBatch, SimulationRow};

/// Parses a portfolio. Malformed JSON is a [`Error::Json`]; a well-formed
/// document with out-of-range parameters is a core domain error.
pub fn parse_portfolio(text: &str, context: &str) -> Result<Portfolio> {
    let def: PortfolioDef = serde_json::from_str(text).map_err(|source| Error::Json {
        context: context.to_string(),
        source,
    })?;
    Ok(Portfolio::try_from(def)?)
}

pub fn read_portfolio(path: &Path) -> Result<Portfolio> {
    parse_portfolio(&read_text(path)?, &path.display().to_string())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `content`, creating parent directories as needed.
pub fn write_text(path: &Path, content: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, content).map_err(io)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        context: "serializing output".into(),
        source,
    })?;
    s.push('\n');
    Ok(s)
}

/// SHA-256 of the compact canonical JSON of the portfolio, hex encoded.
pub fn fingerprint(p: &Portfolio) -> Result<String> {
    let canonical = serde_json::to_string(p).map_err(|source| Error::Json {
        context: "serializing portfolio".into(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
}

/// 17 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses `X_MAX:N` into `N` equispaced points on `[0, X_MAX]`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::usage(format!("grid `{spec}` is not X_MAX:N"));
    let (x_max, n) = spec.split_once(':').ok_or_else(bad)?;
    let x_max: f64 = x_max.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(Error::usage("grid is empty"));
    }
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(Error::usage(format!("grid upper end {x_max} must be positive")));
    }
    Ok(linspace(0.0, x_max, n))
}

pub fn survival_csv(curve: &SurvivalCurve) -> String {
    let mut out = String::from("x,exact\n");
    for (x, v) in curve.xs.iter().zip(&curve.values) {
        let _ = writeln!(out, "{},{}", fmt_num(*x), fmt_num(*v));
    }
    out
}

pub fn bounds_csv(curve: &BoundsCurve) -> String {
    let mut out = String::from("x,exact,lower,upper,method\n");
    for i in 0..curve.xs.len() {
        let exact = curve.exact.as_ref().map_or(String::new(), |e| fmt_num(e[i]));
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(curve.xs[i]),
            exact,
            fmt_num(curve.lower[i]),
            fmt_num(curve.upper[i]),
            curve.method
        );
    }
    out
}

pub fn simulation_csv(rows: &[SimulationRow]) -> String {
    let mut out = String::from("x,empirical,se,analytic,abs_err,within_3se\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_num(r.x),
            fmt_num(r.empirical),
            fmt_num(r.se),
            fmt_num(r.analytic),
            fmt_num(r.abs_err),
            r.within_3se
        );
    }
    out
}

pub fn batch_csv(batch: &SampleBatch) -> String {
    let mut out = String::with_capacity(24 * batch.y_min.len() + 2);
    out.push_str("y\n");
    for y in &batch.y_min {
        out.push_str(&fmt_num(*y));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct BatchSidecar<'a> {
    seed: u64,
    n_samples: usize,
    fingerprint: &'a str,
}

pub fn batch_sidecar(batch: &SampleBatch) -> Result<String> {
    to_json_pretty(&BatchSidecar {
        seed: batch.seed,
        n_samples: batch.n_samples,
        fingerprint: &batch.fingerprint,
    })
}

/// Parses a numeric CSV written by this module into its header and rows.
/// Non-numeric cells (method tags, booleans) are returned as `NaN`.
pub fn read_numeric_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}
