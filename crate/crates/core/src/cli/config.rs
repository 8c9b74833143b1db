//! Run configuration file (TOML). Every key is optional; unknown keys are
//! rejected. Angles are in degrees and times in milliseconds.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panning::WilliamsCurves;
use crate::render::{default_analytic_set, load_hrir_set, HrirSet};
use crate::sweep::{CompareSpec, GridSpec, PsrAverageSpec, PsrSurfaceSpec, SpatialSpec, SweepConfig};
use crate::uncertainty::DictionaryConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// HRIR JSON file; the analytic spherical head when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hrir: Option<PathBuf>,
    pub dictionary_path: PathBuf,
    pub output_dir: PathBuf,
    /// Williams-curve control points; the built-in digitisation when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub williams_curves: Option<PathBuf>,
    pub dictionary: DictionaryConfig,
    pub sweep: SweepConfig,
    pub grid: GridSpec,
    pub spatial: SpatialSpec,
    pub psr_surface: PsrSurfaceSpec,
    pub psr_avg: PsrAverageSpec,
    pub compare: CompareSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hrir: None,
            dictionary_path: PathBuf::from("out/dictionary.json"),
            output_dir: PathBuf::from("out"),
            williams_curves: None,
            dictionary: DictionaryConfig::default(),
            sweep: SweepConfig::default(),
            grid: GridSpec::default(),
            spatial: SpatialSpec::default(),
            psr_surface: PsrSurfaceSpec::default(),
            psr_avg: PsrAverageSpec::default(),
            compare: CompareSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::from_toml(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(Error::MissingResource(path.to_path_buf()))
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks run before any computation.
    pub fn validate(&self) -> Result<()> {
        self.dictionary.stimulus.validate()?;
        self.dictionary.filterbank.validate()?;
        self.sweep.stimulus.validate()?;
        self.sweep.setup()?;
        self.sweep.pose(0.0, 0.0)?;
        if !(self.sweep.model.p > 0.0) || !(self.dictionary.p > 0.0) {
            return Err(Error::Config("p must be positive".into()));
        }
        if self.sweep.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        for r in [self.grid.ictd_ms, self.grid.icld_db, self.spatial.x_m, self.spatial.y_m] {
            r.values()?;
        }
        if self.grid.ictd_ms.values()?.iter().any(|t| t.abs() > 1.0 + 1e-9) {
            return Err(Error::Config("grid ICTD must stay within +-1 ms".into()));
        }
        Ok(())
    }

    pub fn load_hrirs(&self) -> Result<HrirSet> {
        match &self.hrir {
            Some(path) => load_hrir_set(path),
            None => Ok(default_analytic_set()),
        }
    }

    pub fn load_curves(&self) -> Result<WilliamsCurves> {
        match &self.williams_curves {
            Some(path) => WilliamsCurves::load(path),
            None => Ok(WilliamsCurves::default()),
        }
    }
}
