//! Free-field cue dictionary: per-band ITD/ILD of single sources on an
//! azimuth grid, averaged over several noise realisations.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{likelihood_from_arrays, circular_variance};
use crate::error::{Error, Result};
use crate::frontend::{binaural_cues, Filterbank, FilterbankSpec};
use crate::render::{free_field_source, render, DelayMode, HrirSet, RenderOptions};
use crate::geometry::SourcePlacement;
use crate::stimuli::{generate, Stimulus};

pub const DICTIONARY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DictionaryConfig {
    pub theta_grid_deg: Vec<f64>,
    pub repetitions: usize,
    pub p: f64,
    pub source_distance: f64,
    pub stimulus: Stimulus,
    pub filterbank: FilterbankSpec,
    pub delay_mode: DelayMode,
}

impl Default for DictionaryConfig {
    fn default() -> Self {
        Self {
            theta_grid_deg: default_theta_grid_deg(),
            repetitions: 10,
            p: super::DEFAULT_P,
            source_distance: 2.0,
            stimulus: Stimulus::default(),
            filterbank: FilterbankSpec::default(),
            delay_mode: DelayMode::WindowedSinc,
        }
    }
}

/// -90 to +90 degrees in 5 degree steps.
pub fn default_theta_grid_deg() -> Vec<f64> {
    (0..37).map(|k| -90.0 + 5.0 * k as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub hrir: String,
    pub stimulus: Stimulus,
    pub repetitions: usize,
    pub seeds: Vec<u64>,
    pub source_distance_m: f64,
    pub filterbank: FilterbankSpec,
    pub delay_mode: DelayMode,
    /// Band weights used when computing `h_min`.
    pub h_min_weights: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionaryBand {
    pub center_hz: f64,
    pub fitd_s: Vec<f64>,
    pub fild_db: Vec<f64>,
    pub max_abs_fitd: f64,
    pub max_abs_fild: f64,
}

impl DictionaryBand {
    fn from_cues(center_hz: f64, fitd_s: Vec<f64>, fild_db: Vec<f64>) -> Self {
        let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Self {
            center_hz,
            max_abs_fitd: max_abs(&fitd_s),
            max_abs_fild: max_abs(&fild_db),
            fitd_s,
            fild_db,
        }
    }

    pub fn normalized_fitd(&self) -> Vec<f64> {
        self.fitd_s.iter().map(|v| v / self.max_abs_fitd).collect()
    }

    pub fn normalized_fild(&self) -> Vec<f64> {
        self.fild_db.iter().map(|v| v / self.max_abs_fild).collect()
    }
}

/// Immutable after construction; cheap to share between threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeFieldDictionary {
    pub version: u32,
    pub provenance: Provenance,
    pub theta_grid_deg: Vec<f64>,
    pub bands: Vec<DictionaryBand>,
    pub h_min: f64,
    pub p: f64,
}

impl FreeFieldDictionary {
    pub fn theta_grid(&self) -> Vec<f64> {
        self.theta_grid_deg.iter().map(|d| d.to_radians()).collect()
    }

    pub fn center_frequencies(&self) -> Vec<f64> {
        self.bands.iter().map(|b| b.center_hz).collect()
    }

    /// Index of the band whose centre is closest to `f` hertz.
    pub fn band_nearest(&self, f: f64) -> usize {
        self.bands
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.center_hz - f).abs().total_cmp(&(b.1.center_hz - f).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != DICTIONARY_VERSION {
            return Err(Error::DictionaryMismatch(format!(
                "unsupported dictionary version {}",
                self.version
            )));
        }
        let n = self.theta_grid_deg.len();
        if n < 2 || self.theta_grid_deg.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::DictionaryMismatch("azimuth grid must be strictly increasing".into()));
        }
        if self
            .theta_grid_deg
            .iter()
            .zip(self.theta_grid_deg.iter().rev())
            .any(|(a, b)| (a + b).abs() > 1e-9)
        {
            return Err(Error::DictionaryMismatch("azimuth grid must be symmetric about 0".into()));
        }
        if self.bands.is_empty() {
            return Err(Error::DictionaryMismatch("dictionary has no bands".into()));
        }
        for (i, b) in self.bands.iter().enumerate() {
            if b.fitd_s.len() != n || b.fild_db.len() != n {
                return Err(Error::DictionaryMismatch(format!("band {i} has wrong length")));
            }
            if !(b.max_abs_fitd > 0.0 && b.max_abs_fild > 0.0) {
                return Err(Error::DegenerateDictionaryBand {
                    band: i,
                    center_hz: b.center_hz,
                });
            }
        }
        if !(self.h_min > 0.0 && self.h_min < 1.0) {
            return Err(Error::DictionaryMismatch(format!("h_min {} outside (0, 1)", self.h_min)));
        }
        if !(self.p > 0.0) {
            return Err(Error::DictionaryMismatch(format!("invalid exponent p = {}", self.p)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dict: Self = serde_json::from_str(text)?;
        dict.validate()?;
        Ok(dict)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::from_json(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(Error::MissingResource(path.to_path_buf()))
            }
            Err(e) => Err(e.into()),
        }
    }
}

/// Uncertainty of each dictionary direction scored against the dictionary
/// itself with uniform weights; the minimum over directions is `h_min`.
pub fn self_scores(bands: &[DictionaryBand], theta_grid: &[f64], p: f64) -> Vec<f64> {
    let fitd: Vec<Vec<f64>> = bands.iter().map(DictionaryBand::normalized_fitd).collect();
    let fild: Vec<Vec<f64>> = bands.iter().map(DictionaryBand::normalized_fild).collect();
    let weights = vec![1.0; bands.len()];
    (0..theta_grid.len())
        .map(|k| {
            let itd: Vec<f64> = fitd.iter().map(|b| b[k]).collect();
            let ild: Vec<f64> = fild.iter().map(|b| b[k]).collect();
            let f = likelihood_from_arrays(&itd, &ild, &weights, &fitd, &fild, p);
            circular_variance(&f, theta_grid)
        })
        .collect()
}

/// Renders single sources on the grid and averages their cues.
pub fn build_dictionary(hrirs: &HrirSet, config: &DictionaryConfig) -> Result<FreeFieldDictionary> {
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    if !(config.p > 0.0) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {}", config.p)));
    }
    let bank = Filterbank::new(config.filterbank)?;
    let opts = RenderOptions {
        sample_rate: config.filterbank.sample_rate,
        delay_mode: config.delay_mode,
        ..RenderOptions::default()
    };
    let theta: Vec<f64> = config.theta_grid_deg.iter().map(|d| d.to_radians()).collect();
    for &t in &theta {
        hrirs.nearest(t)?;
    }
    let seeds: Vec<u64> = (0..config.repetitions as u64)
        .map(|r| config.stimulus.seed.wrapping_add(r))
        .collect();
    let signals = seeds
        .iter()
        .map(|&s| generate(&config.stimulus.with_seed(s)))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..theta.len())
        .flat_map(|k| (0..signals.len()).map(move |r| (k, r)))
        .collect();
    let cues = jobs
        .par_iter()
        .map(|&(k, r)| {
            let placement = SourcePlacement::new(theta[k], config.source_distance)?;
            let ears = render(&[free_field_source(&signals[r], placement)], hrirs, &opts)?;
            binaural_cues(&ears, &bank)
        })
        .collect::<Result<Vec<_>>>()?;

    let n_bands = bank.channels().len();
    let reps = signals.len();
    let mut bands = Vec::with_capacity(n_bands);
    for (i, cf) in bank.center_frequencies().into_iter().enumerate() {
        let mut fitd = Vec::with_capacity(theta.len());
        let mut fild = Vec::with_capacity(theta.len());
        for k in 0..theta.len() {
            let (mut sum_t, mut sum_l, mut count) = (0.0, 0.0, 0usize);
            for c in &cues[k * reps..(k + 1) * reps] {
                let b = &c.bands[i];
                if b.valid {
                    sum_t += b.itd;
                    sum_l += b.ild;
                    count += 1;
                }
            }
            if count == 0 {
                return Err(Error::DegenerateDictionaryBand { band: i, center_hz: cf });
            }
            fitd.push(sum_t / count as f64);
            fild.push(sum_l / count as f64);
        }
        let band = DictionaryBand::from_cues(cf, fitd, fild);
        if !(band.max_abs_fitd > 0.0 && band.max_abs_fild > 0.0) {
            return Err(Error::DegenerateDictionaryBand { band: i, center_hz: cf });
        }
        bands.push(band);
    }

    let h_min = self_scores(&bands, &theta, config.p)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let dict = FreeFieldDictionary {
        version: DICTIONARY_VERSION,
        provenance: Provenance {
            hrir: hrirs.metadata().to_string(),
            stimulus: config.stimulus,
            repetitions: config.repetitions,
            seeds,
            source_distance_m: config.source_distance,
            filterbank: config.filterbank,
            delay_mode: config.delay_mode,
            h_min_weights: "uniform".into(),
        },
        theta_grid_deg: config.theta_grid_deg.clone(),
        bands,
        h_min,
        p: config.p,
    };
    dict.validate()?;
    Ok(dict)
}
