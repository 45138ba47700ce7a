//! CSV and JSON artifacts.

use std::fs::{self, File};
use std::io::Write;
use std::path::Path;

use healthmon_core::analysis::{LinearFit, SwitchingSurface};
use healthmon_core::{HealthState, Lattice, SolveReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::render::{Cell, GridRender};

fn coord_header(dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("h{k}")).collect()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::parse(path, e)
}

/// One row per lattice state: coordinates then `column`.
pub fn write_state_csv(path: &Path, lattice: &Lattice, column: &str, values: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = coord_header(lattice.dim());
    header.push(column.into());
    w.write_record(&header).map_err(csv_err(path))?;
    for (i, v) in values.iter().enumerate() {
        let mut row: Vec<String> = lattice.state(i).coords().iter().map(u32::to_string).collect();
        row.push(v.to_string());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_policy_csv(path: &Path, lattice: &Lattice, cells: &[Cell]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = coord_header(lattice.dim());
    header.push("action".into());
    w.write_record(&header).map_err(csv_err(path))?;
    for (i, cell) in cells.iter().enumerate() {
        let mut row: Vec<String> = lattice.state(i).coords().iter().map(u32::to_string).collect();
        row.push(cell.label().into());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Policy read back from `policy.csv`, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    pub dim: usize,
    pub rows: Vec<(Vec<u32>, Cell)>,
}

impl PolicyTable {
    /// Grid for a complete two-dimensional table in lattice order.
    pub fn to_grid(&self) -> Result<GridRender> {
        if self.dim != 2 {
            return Err(CliError::Invalid(format!(
                "can only render n = 2 policies, got n = {}",
                self.dim
            )));
        }
        let max_level = self.rows.iter().flat_map(|(h, _)| h.iter().copied()).max().unwrap_or(0);
        let lattice = Lattice::new(2, max_level)?;
        if self.rows.len() != lattice.len()
            || self
                .rows
                .iter()
                .enumerate()
                .any(|(i, (h, _))| lattice.index_of(h) != Some(i))
        {
            return Err(CliError::Invalid(
                "policy table must list every state of the (H+1) x (H+1) grid in lattice order".into(),
            ));
        }
        let cells: Vec<Cell> = self.rows.iter().map(|(_, c)| *c).collect();
        Ok(GridRender::from_cells(max_level, &cells))
    }
}

pub fn read_policy_csv(path: &Path) -> Result<PolicyTable> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header = r.headers().map_err(csv_err(path))?.clone();
    let dim = header.len().saturating_sub(1);
    if dim == 0 || header.get(dim) != Some("action") {
        return Err(CliError::parse(
            path,
            "expected coordinate columns followed by `action`",
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let bad = |what: &str| CliError::parse(path, format!("row {}: {what}", line + 1));
        let coords = (0..dim)
            .map(|k| record[k].trim().parse::<u32>().map_err(|_| bad("bad coordinate")))
            .collect::<Result<Vec<_>>>()?;
        let cell = Cell::from_label(record[dim].trim()).ok_or_else(|| bad("unknown action"))?;
        rows.push((coords, cell));
    }
    Ok(PolicyTable { dim, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub weights: Vec<u32>,
    pub threshold: i64,
    pub exact: bool,
    pub misclassified: usize,
}

impl From<&LinearFit> for FitRecord {
    fn from(f: &LinearFit) -> Self {
        FitRecord {
            weights: f.weights.clone(),
            threshold: f.threshold,
            exact: f.exact,
            misclassified: f.misclassified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub intensive_set: Vec<Vec<u32>>,
    pub frontier: Vec<Vec<u32>>,
    pub linear_fit: Option<FitRecord>,
    pub fit_exact: bool,
}

fn coords(states: &[HealthState]) -> Vec<Vec<u32>> {
    states.iter().map(|h| h.coords().to_vec()).collect()
}

impl From<&SwitchingSurface> for SurfaceRecord {
    fn from(s: &SwitchingSurface) -> Self {
        SurfaceRecord {
            intensive_set: coords(&s.intensive_set),
            frontier: coords(&s.frontier),
            linear_fit: s.linear_fit.as_ref().map(Into::into),
            fit_exact: s.fit_exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl ReportRecord {
    pub fn new(report: &SolveReport, tolerance: f64, max_iter: usize) -> Self {
        ReportRecord {
            iterations: report.iterations,
            final_residual: report.final_residual,
            converged: report.converged,
            tolerance,
            max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionRecord {
    pub axis: String,
    pub values: Vec<f64>,
    pub intensive_counts: Vec<usize>,
    /// `nested[k]`: the set at `values[k]` is contained in the set at `values[k+1]`.
    pub nested: Vec<bool>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("records serialize");
    text.push('\n');
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_round_trip() {
        use Cell::*;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("policy.csv");
        let lattice = Lattice::new(2, 1).unwrap();
        let cells = [Critical, Intensive, Intensive, Ordinary];
        write_policy_csv(&path, &lattice, &cells).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "h1,h2,action\n0,0,critical\n0,1,intensive\n1,0,intensive\n1,1,ordinary\n"
        );
        let table = read_policy_csv(&path).unwrap();
        assert_eq!(table.to_grid().unwrap(), GridRender::from_cells(1, &cells));
    }

    #[test]
    fn rejects_incomplete_tables() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("policy.csv");
        fs::write(&path, "h1,h2,action\n0,0,critical\n1,1,ordinary\n").unwrap();
        assert!(read_policy_csv(&path).unwrap().to_grid().is_err());
        fs::write(&path, "h1,h2,action\n0,0,sometimes\n").unwrap();
        assert!(read_policy_csv(&path).is_err());
    }

    #[test]
    fn values_keep_full_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("value.csv");
        let lattice = Lattice::new(1, 1).unwrap();
        let v = [35.0, 0.1 + 0.2];
        write_state_csv(&path, &lattice, "value", &v).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(last, v[1]);
    }
}
