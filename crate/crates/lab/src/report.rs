//! CSV tables and the sweep summary.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::LabError;

pub const EULER_HEADER: [&str; 5] = ["time", "mass", "total_energy", "min_rho", "cfl"];
pub const QG_HEADER: [&str; 4] = ["time", "energy", "enstrophy", "mean_zeta"];
pub const ACOUSTIC_HEADER: [&str; 5] = ["time", "energy", "sup_s", "sup_w", "recurrence_flag"];
pub const DIAGNOSTICS_HEADER: [&str; 7] =
    ["epsilon", "time", "E", "E_kin", "E_pot", "div_res", "bal_res"];
pub const FREESPACE_HEADER: [&str; 3] = ["tau", "sup_s", "sup_w"];

/// 17 significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// In-memory CSV table, written with CRLF line ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    /// Row whose last cell is a 0/1 flag.
    pub fn push_flagged(&mut self, row: &[f64], flag: bool) {
        let mut cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        cells.push(if flag { "1" } else { "0" }.to_string());
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn extend(&mut self, other: &Table) {
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        write_file(path, &self.to_bytes())
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), LabError> {
    let io = |source| LabError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(bytes).map_err(io)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub epsilon: f64,
    pub status: RunStatus,
    pub error: Option<String>,
    /// Effective Euler step.
    pub dt: f64,
    pub steps: usize,
    pub hyperdiffusion: f64,
    pub records: usize,
    pub final_time: f64,
    pub sup_energy: Option<f64>,
    pub initial_total_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub epsilon: f64,
    pub sup_energy: f64,
    pub mean_div_residual: f64,
    pub mean_balance_residual: f64,
    pub weak_div_residual: f64,
    pub weak_balance_residual: f64,
    pub energy_ratio: Option<f64>,
    pub weak_div_ratio: Option<f64>,
    pub weak_balance_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QgSummary {
    pub dt: f64,
    pub energy_drift: f64,
    pub enstrophy_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: ExperimentConfig,
    pub runs: Vec<RunSummary>,
    pub qg: QgSummary,
    /// Cross-ε table over the successful runs; empty with fewer than two.
    pub metrics: Vec<MetricRow>,
    pub metrics_error: Option<String>,
    pub failed: bool,
}

impl SweepSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
