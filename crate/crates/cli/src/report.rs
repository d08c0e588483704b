//! CSV and JSON report emission. Every report carries the seed and the
//! configuration that produced it: CSV as leading `#` lines, JSON under
//! `meta`.

use std::collections::BTreeMap;

use serde::Serialize;
use ztnet::zarankiewicz::{BoundReport, LevelRecord};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(command: &str, seed: u64) -> Self {
        Meta { command: command.to_string(), seed, config: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }
}

/// CSV columns of the bound report, one row per recursion level.
pub const BOUND_COLUMNS: [&str; 12] =
    ["level", "m", "n", "eps", "eps_prime", "s", "s_prime", "heavy_a", "heavy_b", "additive", "bound", "edges"];

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub level: usize,
    pub m: usize,
    pub n: usize,
    pub eps: f64,
    pub eps_prime: f64,
    pub s: Option<usize>,
    pub s_prime: Option<usize>,
    pub heavy_a: usize,
    pub heavy_b: usize,
    pub additive: u64,
    pub bound: u64,
    pub edges: usize,
}

impl From<&LevelRecord> for BoundRow {
    fn from(l: &LevelRecord) -> Self {
        BoundRow {
            level: l.level,
            m: l.m,
            n: l.n,
            eps: l.eps,
            eps_prime: l.eps_prime,
            s: l.s,
            s_prime: l.s_prime,
            heavy_a: l.heavy_a,
            heavy_b: l.heavy_b,
            additive: l.additive,
            bound: l.bound,
            edges: l.edges,
        }
    }
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("csv output: {e}"))
}

pub fn csv_with_meta<T: Serialize>(meta: &Meta, rows: &[T]) -> Result<String, CliError> {
    let mut out = format!("# command: {}\n# seed: {}\n", meta.command, meta.seed);
    for (k, v) in &meta.config {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    out.push_str(&String::from_utf8(bytes).map_err(csv_error)?);
    Ok(out)
}

pub fn json_with_meta<T: Serialize>(meta: &Meta, report: &T) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        meta: &'a Meta,
        report: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { meta, report }).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn bound_csv(meta: &Meta, report: &BoundReport) -> Result<String, CliError> {
    let rows: Vec<BoundRow> = report.levels.iter().map(BoundRow::from).collect();
    csv_with_meta(meta, &rows)
}
