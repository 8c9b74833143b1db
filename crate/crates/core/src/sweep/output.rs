//! CSV/JSON result files and the per-cell cache.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{Cell, SweepResult};
use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Long-format CSV: one row per cell, axis columns then the value column.
/// Headers carry units, e.g. `ictd_ms`. Categorical axes print their label.
pub fn result_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    let header: Vec<String> = result
        .axes
        .iter()
        .map(|a| if a.unit.is_empty() { a.name.clone() } else { format!("{}_{}", a.name, a.unit) })
        .chain(std::iter::once(result.quantity.clone()))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (flat, v) in result.values.iter().enumerate() {
        for (axis, &i) in result.axes.iter().zip(&result.unravel(flat)) {
            match axis.labels.get(i) {
                Some(label) => out.push_str(label),
                None => write!(out, "{}", axis.values[i]).unwrap(),
            }
            out.push(',');
        }
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Writes `<kind>-<hash16>.csv` and `.json` into `dir`; returns both paths.
pub fn write_result(result: &SweepResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let hash = &result.metadata.config_hash;
    let stem = format!("{}-{}", result.metadata.kind, &hash[..hash.len().min(16)]);
    let csv = dir.join(format!("{stem}.csv"));
    let json = dir.join(format!("{stem}.json"));
    write_atomic(&csv, result_csv(result).as_bytes())?;
    write_atomic(&json, serde_json::to_string_pretty(result)?.as_bytes())?;
    Ok((csv, json))
}

/// h_bar values keyed by cell coordinates, stored as `<dir>/<hash>.json`.
/// The hash covers everything that determines a cell's value, so one file
/// serves every sweep kind run with the same model and stimulus.
#[derive(Debug)]
pub struct CellCache {
    path: PathBuf,
    cells: BTreeMap<String, f64>,
}

impl CellCache {
    pub fn open(dir: &Path, hash: &str) -> Result<Self> {
        let path = dir.join(format!("{hash}.json"));
        let cells = match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("corrupt cache {}: {e}", path.display())))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(Self { path, cells })
    }

    fn key(cell: &Cell) -> String {
        // `{:?}` prints the shortest round-trip representation
        format!("{:?}|{:?}|{:?}|{:?}", cell.point.ictd, cell.point.icld, cell.x, cell.y)
    }

    pub fn get(&self, cell: &Cell) -> Option<f64> {
        self.cells.get(&Self::key(cell)).copied()
    }

    pub fn insert(&mut self, cell: &Cell, value: f64) {
        self.cells.insert(Self::key(cell), value);
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn save(&self) -> Result<()> {
        write_atomic(&self.path, serde_json::to_string(&self.cells)?.as_bytes())
    }
}
