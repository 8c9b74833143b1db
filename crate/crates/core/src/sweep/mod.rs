//! Parameter sweeps over panning points, listener positions and microphone
//! arrangements, each cell scored through the full render-and-model path.
//!
//! Cells are evaluated in parallel and assembled in grid order, so results
//! do not depend on the worker count. Values are stored row-major with the
//! last axis varying fastest.

mod output;

pub use output::{result_csv, write_result, CellCache};

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::frontend::Filterbank;
use crate::geometry::{ListenerPose, PanningPoint, StereoSetup, DEFAULT_EAR_ANGLE_DEG, DEFAULT_HEAD_RADIUS, SPEED_OF_SOUND};
use crate::panning::{arrangement_curve, coverage_angle, psr_curve, psr_design, MicArrangement, WilliamsCurves};
use crate::render::{render, stereo_pair_sources, DelayMode, HrirSet, RenderOptions};
use crate::stimuli::{generate, Stimulus};
use crate::uncertainty::{localization_uncertainty, FreeFieldDictionary, ModelOptions, Provenance};

/// Inclusive arithmetic range `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub const fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub const fn single(v: f64) -> Self {
        Self { start: v, stop: v, step: 1.0 }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("range bounds must be finite".into()));
        }
        if self.start == self.stop {
            return Ok(vec![self.start]);
        }
        if !(self.step > 0.0) || self.stop < self.start {
            return Err(Error::InvalidParameter(format!(
                "empty range {}..{} step {}",
                self.start, self.stop, self.step
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        // snap to 12 decimals so 0.01 * 9 prints as 0.09
        Ok((0..n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

/// Settings shared by every sweep kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub base_angle_deg: f64,
    pub loudspeaker_distance_m: f64,
    pub speed_of_sound: f64,
    pub head_radius_m: f64,
    pub ear_angle_deg: f64,
    /// Single realization used for every cell.
    pub stimulus: Stimulus,
    pub model: ModelOptions,
    pub delay_mode: DelayMode,
    /// Bound on parallel cell evaluation; all cores when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Directory of the per-cell cache; disabled when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            base_angle_deg: 60.0,
            loudspeaker_distance_m: 2.0,
            speed_of_sound: SPEED_OF_SOUND,
            head_radius_m: DEFAULT_HEAD_RADIUS,
            ear_angle_deg: DEFAULT_EAR_ANGLE_DEG,
            stimulus: Stimulus::default(),
            model: ModelOptions::default(),
            delay_mode: DelayMode::WindowedSinc,
            workers: None,
            cache_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn setup(&self) -> Result<StereoSetup> {
        StereoSetup::with_speed_of_sound(
            self.base_angle_deg.to_radians(),
            self.loudspeaker_distance_m,
            self.speed_of_sound,
        )
    }

    pub fn pose(&self, x: f64, y: f64) -> Result<ListenerPose> {
        ListenerPose::new(x, y, self.head_radius_m, self.ear_angle_deg.to_radians())
    }

    /// The part of the config that determines cell values.
    fn hashed(&self) -> Self {
        Self {
            workers: None,
            cache_dir: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
    /// Categorical names; `values` then holds the indices.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            values,
            labels: Vec::new(),
        }
    }

    pub fn categorical(name: &str, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            unit: String::new(),
            values: (0..labels.len()).map(|k| k as f64).collect(),
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepMetadata {
    pub kind: String,
    pub config_hash: String,
    /// Echo of the sweep config and grid spec.
    pub config: serde_json::Value,
    pub dictionary: Provenance,
    pub h_min: f64,
    pub hrir: String,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    /// Name of the tabulated quantity, e.g. `h_bar`.
    pub quantity: String,
    pub values: Vec<f64>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.axes.len(), "index rank");
        index.iter().zip(&self.axes).fold(0, |acc, (&i, a)| {
            assert!(i < a.len(), "index out of range");
            acc * a.len() + i
        })
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.offset(index)]
    }

    /// Grid index of a flat offset.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut index = vec![0; self.axes.len()];
        for (slot, axis) in index.iter_mut().zip(&self.axes).rev() {
            *slot = flat % axis.len();
            flat /= axis.len();
        }
        index
    }

    pub fn validate(&self) -> Result<()> {
        let cells: usize = self.shape().iter().product();
        if cells != self.values.len() || self.axes.iter().any(Axis::is_empty) {
            return Err(Error::Numerical(format!(
                "result holds {} values for shape {:?}",
                self.values.len(),
                self.shape()
            )));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite sweep value {v}")));
        }
        Ok(())
    }

    /// Flat offset and value of the smallest entry (first one on ties).
    pub fn argmin(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (k, v)| if v < best.1 { (k, v) } else { best })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluates h_bar for loudspeaker-pair conditions. Holds everything that
/// is shared between cells: the stimulus, filterbank and dictionary.
pub struct Scorer<'a> {
    config: SweepConfig,
    hrirs: &'a HrirSet,
    dict: &'a FreeFieldDictionary,
    curves: WilliamsCurves,
    bank: Filterbank,
    signal: Vec<f64>,
    setup: StereoSetup,
    render_opts: RenderOptions,
    hash: String,
}

impl<'a> Scorer<'a> {
    pub fn new(
        config: &SweepConfig,
        hrirs: &'a HrirSet,
        dict: &'a FreeFieldDictionary,
        curves: WilliamsCurves,
    ) -> Result<Self> {
        dict.validate()?;
        let spec = dict.provenance.filterbank;
        if (config.stimulus.sample_rate - spec.sample_rate).abs() > 1e-9
            || (hrirs.sample_rate() - spec.sample_rate).abs() > 1e-9
        {
            return Err(Error::SampleRateMismatch {
                expected: spec.sample_rate,
                found: config.stimulus.sample_rate,
            });
        }
        if let Some(0) = config.workers {
            return Err(Error::InvalidParameter("worker count must be at least 1".into()));
        }
        let setup = config.setup()?;
        config.pose(0.0, 0.0)?;
        let signal = generate(&config.stimulus)?;
        let bank = Filterbank::new(spec)?;
        let hash = {
            let mut h = Sha256::new();
            h.update(serde_json::to_vec(&config.hashed())?);
            h.update(dict.to_json()?.as_bytes());
            h.update(hrirs.to_json()?.as_bytes());
            for (t, l) in curves.control_points() {
                h.update(t.to_le_bytes());
                h.update(l.to_le_bytes());
            }
            h.finalize().iter().map(|b| format!("{b:02x}")).collect()
        };
        Ok(Self {
            config: config.clone(),
            hrirs,
            dict,
            curves,
            bank,
            signal,
            setup,
            render_opts: RenderOptions {
                sample_rate: spec.sample_rate,
                speed_of_sound: config.speed_of_sound,
                delay_mode: config.delay_mode,
            },
            hash,
        })
    }

    pub fn config(&self) -> &SweepConfig {
        &self.config
    }

    pub fn setup(&self) -> &StereoSetup {
        &self.setup
    }

    pub fn curves(&self) -> &WilliamsCurves {
        &self.curves
    }

    pub fn dictionary(&self) -> &FreeFieldDictionary {
        self.dict
    }

    /// Hash of everything that determines a cell's value.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// h_bar for one panning point heard at `(x, y)`.
    pub fn score(&self, point: PanningPoint, x: f64, y: f64) -> Result<f64> {
        let pose = self.config.pose(x, y)?;
        let sources = stereo_pair_sources(&self.signal, point, &self.setup, &pose)?;
        let ears = render(&sources, self.hrirs, &self.render_opts)?;
        Ok(localization_uncertainty(&ears, self.dict, &self.bank, &self.config.model)?.h_bar)
    }

    /// Scores many cells in parallel, reusing cached values when enabled.
    /// Repeated cells are evaluated once. Output order follows `cells`.
    pub fn score_cells(&self, cells: &[Cell]) -> Result<Vec<f64>> {
        let mut cache = match &self.config.cache_dir {
            Some(dir) => Some(CellCache::open(dir, &self.hash)?),
            None => None,
        };
        let mut slot_of: HashMap<[u64; 4], usize> = HashMap::new();
        let mut unique: Vec<Cell> = Vec::new();
        let slots: Vec<usize> = cells
            .iter()
            .map(|c| {
                *slot_of.entry(c.bits()).or_insert_with(|| {
                    unique.push(*c);
                    unique.len() - 1
                })
            })
            .collect();
        let known: Vec<Option<f64>> = unique
            .iter()
            .map(|c| cache.as_ref().and_then(|k| k.get(c)))
            .collect();
        let todo: Vec<usize> = (0..unique.len()).filter(|&i| known[i].is_none()).collect();
        let fresh = self.install(|| {
            todo.par_iter()
                .map(|&i| {
                    let c = &unique[i];
                    self.score(c.point, c.x, c.y)
                })
                .collect::<Result<Vec<_>>>()
        })??;
        let mut values: Vec<f64> = known.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        for (&i, &v) in todo.iter().zip(&fresh) {
            values[i] = v;
        }
        if let Some(cache) = cache.as_mut() {
            if !todo.is_empty() {
                for (&i, &v) in todo.iter().zip(&fresh) {
                    cache.insert(&unique[i], v);
                }
                cache.save()?;
            }
        }
        Ok(slots.into_iter().map(|k| values[k]).collect())
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.config.workers {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }

    fn metadata<S: Serialize>(&self, kind: &str, spec: &S, started: Instant) -> Result<SweepMetadata> {
        let config = serde_json::json!({
            "sweep": self.config.hashed(),
            "spec": spec,
        });
        let mut bytes = self.hash.clone().into_bytes();
        bytes.extend(kind.as_bytes());
        bytes.extend(serde_json::to_vec(spec)?);
        Ok(SweepMetadata {
            kind: kind.into(),
            config_hash: sha256_hex(&bytes),
            config,
            dictionary: self.dict.provenance.clone(),
            h_min: self.dict.h_min,
            hrir: self.hrirs.metadata().into(),
            runtime_s: started.elapsed().as_secs_f64(),
        })
    }

    fn finish<S: Serialize>(
        &self,
        kind: &str,
        spec: &S,
        started: Instant,
        axes: Vec<Axis>,
        quantity: &str,
        values: Vec<f64>,
    ) -> Result<SweepResult> {
        let result = SweepResult {
            axes,
            quantity: quantity.into(),
            values,
            metadata: self.metadata(kind, spec, started)?,
        };
        result.validate()?;
        Ok(result)
    }
}

/// One panning condition at one listener position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub point: PanningPoint,
    pub x: f64,
    pub y: f64,
}

impl Cell {
    pub fn new(point: PanningPoint, x: f64, y: f64) -> Self {
        Self { point, x, y }
    }

    fn bits(&self) -> [u64; 4] {
        [self.point.ictd, self.point.icld, self.x, self.y].map(f64::to_bits)
    }
}

/// ICTD x ICLD grid at one listener position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub ictd_ms: Range,
    pub icld_db: Range,
    pub x_m: f64,
    pub y_m: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            ictd_ms: Range::new(-1.0, 1.0, 0.05),
            icld_db: Range::new(-18.0, 18.0, 1.0),
            x_m: 0.0,
            y_m: 0.0,
        }
    }
}

/// h_bar over ICTD (first axis) and ICLD (second axis).
pub fn grid_ictd_icld(scorer: &Scorer<'_>, spec: &GridSpec) -> Result<SweepResult> {
    let started = Instant::now();
    let ictd = spec.ictd_ms.values()?;
    let icld = spec.icld_db.values()?;
    if let Some(t) = ictd.iter().find(|t| t.abs() > 1.0 + 1e-9) {
        return Err(Error::BeyondSummingRegime { ictd_ms: *t });
    }
    let cells: Vec<Cell> = ictd
        .iter()
        .flat_map(|&t| icld.iter().map(move |&l| Cell::new(PanningPoint::new(t * 1e-3, l), spec.x_m, spec.y_m)))
        .collect();
    let values = scorer.score_cells(&cells)?;
    scorer.finish(
        "grid",
        spec,
        started,
        vec![Axis::new("ictd", "ms", ictd), Axis::new("icld", "dB", icld)],
        "h_bar",
        values,
    )
}

/// Listener-position map of a PSR pair, averaged over source angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpatialSpec {
    pub x_m: Range,
    pub y_m: Range,
    /// Inter-microphone distance of the PSR pair.
    pub d_m: f64,
    pub theta_s_deg: Range,
}

impl Default for SpatialSpec {
    fn default() -> Self {
        Self {
            x_m: Range::new(-0.2, 0.2, 0.05),
            y_m: Range::new(-0.2, 0.2, 0.05),
            d_m: 0.0,
            theta_s_deg: Range::new(-30.0, 30.0, 5.0),
        }
    }
}

/// Mean h_bar over `theta_s` per listener position (x first, then y).
pub fn spatial_map(scorer: &Scorer<'_>, spec: &SpatialSpec) -> Result<SweepResult> {
    let started = Instant::now();
    let xs = spec.x_m.values()?;
    let ys = spec.y_m.values()?;
    let design = psr_design(spec.d_m, scorer.setup.base_angle, &scorer.curves, scorer.config.speed_of_sound)?;
    let points = spec
        .theta_s_deg
        .values()?
        .into_iter()
        .map(|t| psr_curve(&design, t.to_radians()))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::with_capacity(xs.len() * ys.len() * points.len());
    for &x in &xs {
        for &y in &ys {
            cells.extend(points.iter().map(|&p| Cell::new(p, x, y)));
        }
    }
    let h = scorer.score_cells(&cells)?;
    let values = h.chunks(points.len()).map(mean).collect();
    scorer.finish(
        "spatial",
        spec,
        started,
        vec![Axis::new("x", "m", xs), Axis::new("y", "m", ys)],
        "h_bar_mean",
        values,
    )
}

/// PSR uncertainty over inter-microphone distance and source angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsrSurfaceSpec {
    pub d_m: Range,
    pub theta_s_deg: Range,
    pub x_m: f64,
    pub y_m: f64,
}

impl Default for PsrSurfaceSpec {
    fn default() -> Self {
        Self {
            d_m: Range::new(0.0, 0.375, 0.025),
            theta_s_deg: Range::new(-30.0, 30.0, 2.5),
            x_m: 0.0,
            y_m: 0.0,
        }
    }
}

fn psr_points(scorer: &Scorer<'_>, d: f64, theta_deg: &[f64]) -> Result<Vec<PanningPoint>> {
    let design = psr_design(d, scorer.setup.base_angle, &scorer.curves, scorer.config.speed_of_sound)?;
    theta_deg.iter().map(|t| psr_curve(&design, t.to_radians())).collect()
}

/// h_bar over `d` (first axis) and `theta_s` (second axis).
pub fn psr_surface(scorer: &Scorer<'_>, spec: &PsrSurfaceSpec) -> Result<SweepResult> {
    let started = Instant::now();
    let ds = spec.d_m.values()?;
    let thetas = spec.theta_s_deg.values()?;
    let mut cells = Vec::with_capacity(ds.len() * thetas.len());
    for &d in &ds {
        cells.extend(psr_points(scorer, d, &thetas)?.into_iter().map(|p| Cell::new(p, spec.x_m, spec.y_m)));
    }
    let values = scorer.score_cells(&cells)?;
    scorer.finish(
        "psr-surface",
        spec,
        started,
        vec![Axis::new("d", "m", ds), Axis::new("theta_s", "deg", thetas)],
        "h_bar",
        values,
    )
}

/// Listener positions averaged together in [`psr_average_vs_d`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseSet {
    pub label: String,
    pub x_m: Range,
    #[serde(default)]
    pub y_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsrAverageSpec {
    pub d_m: Range,
    /// Spacing of the source angles between the midline and the left
    /// loudspeaker.
    pub theta_s_step_deg: f64,
    pub pose_sets: Vec<PoseSet>,
}

impl Default for PsrAverageSpec {
    fn default() -> Self {
        Self {
            d_m: Range::new(0.0, 0.372, 0.0155),
            theta_s_step_deg: 2.5,
            pose_sets: vec![
                PoseSet { label: "on-center".into(), x_m: Range::single(0.0), y_m: 0.0 },
                PoseSet { label: "x-0-5cm".into(), x_m: Range::new(0.0, 0.05, 0.01), y_m: 0.0 },
                PoseSet { label: "x-0-15cm".into(), x_m: Range::new(0.0, 0.15, 0.01), y_m: 0.0 },
            ],
        }
    }
}

/// Mean h_bar per (pose set, d), averaged over source angles in
/// `[0, phi0 / 2]` and over the positions of each pose set.
pub fn psr_average_vs_d(scorer: &Scorer<'_>, spec: &PsrAverageSpec) -> Result<SweepResult> {
    let started = Instant::now();
    if spec.pose_sets.is_empty() {
        return Err(Error::InvalidParameter("no pose sets".into()));
    }
    let ds = spec.d_m.values()?;
    let half = 0.5 * scorer.config.base_angle_deg;
    let thetas = Range::new(0.0, half, spec.theta_s_step_deg).values()?;
    let mut cells = Vec::new();
    let mut groups = Vec::new();
    for set in &spec.pose_sets {
        let xs = set.x_m.values()?;
        for &d in &ds {
            let points = psr_points(scorer, d, &thetas)?;
            let before = cells.len();
            for &x in &xs {
                cells.extend(points.iter().map(|&p| Cell::new(p, x, set.y_m)));
            }
            groups.push(before..cells.len());
        }
    }
    let h = scorer.score_cells(&cells)?;
    let values = groups.into_iter().map(|r| mean(&h[r])).collect();
    scorer.finish(
        "psr-avg",
        spec,
        started,
        vec![
            Axis::categorical("pose_set", spec.pose_sets.iter().map(|s| s.label.clone()).collect()),
            Axis::new("d", "m", ds),
        ],
        "h_bar_mean",
        values,
    )
}

/// A microphone arrangement named in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ArrangementSpec {
    Psr { d_m: f64 },
    Preset { name: String },
}

impl ArrangementSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Psr { d_m } => format!("psr-{}", trim_float(d_m * 100.0)),
            Self::Preset { name } => name.to_ascii_lowercase(),
        }
    }

    pub fn build(&self, setup: &StereoSetup, curves: &WilliamsCurves) -> Result<MicArrangement> {
        match self {
            Self::Psr { d_m } => Ok(MicArrangement::psr(psr_design(
                *d_m,
                setup.base_angle,
                curves,
                setup.speed_of_sound,
            )?)),
            Self::Preset { name } => MicArrangement::preset(name),
        }
    }
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// The eight pairs of the standard comparison, amplitude methods first.
pub fn default_arrangements() -> Vec<ArrangementSpec> {
    let preset = |n: &str| ArrangementSpec::Preset { name: n.into() };
    vec![
        ArrangementSpec::Psr { d_m: 0.0 },
        preset("blumlein"),
        preset("xy"),
        preset("ortf"),
        ArrangementSpec::Psr { d_m: 0.186 },
        preset("din"),
        preset("nos"),
        ArrangementSpec::Psr { d_m: 0.372 },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSpec {
    pub arrangements: Vec<ArrangementSpec>,
    pub x_m: Range,
    pub y_m: f64,
    /// Source angles spread uniformly over each coverage angle.
    pub n_angles: usize,
}

impl Default for CompareSpec {
    fn default() -> Self {
        Self {
            arrangements: default_arrangements(),
            x_m: Range::new(-0.2, 0.2, 0.01),
            y_m: 0.0,
            n_angles: 30,
        }
    }
}

/// `n` evenly spaced angles spanning `[-width / 2, width / 2]`, radians.
pub fn coverage_angles(width: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|k| -0.5 * width + width * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Mean and excursion (max minus min) of h_bar over source angles within
/// each arrangement's coverage angle, per (arrangement, x).
pub fn arrangement_comparison(scorer: &Scorer<'_>, spec: &CompareSpec) -> Result<(SweepResult, SweepResult)> {
    let started = Instant::now();
    if spec.arrangements.is_empty() || spec.n_angles == 0 {
        return Err(Error::InvalidParameter("comparison needs arrangements and angles".into()));
    }
    let xs = spec.x_m.values()?;
    let mut cells = Vec::new();
    for arr in &spec.arrangements {
        let mic = arr.build(&scorer.setup, &scorer.curves)?;
        let width = coverage_angle(&mic, &scorer.curves);
        if width <= 0.0 {
            return Err(Error::InvalidParameter(format!("{} has no coverage", arr.label())));
        }
        let points = coverage_angles(width, spec.n_angles)
            .into_iter()
            .map(|t| arrangement_curve(&mic, t))
            .collect::<Result<Vec<_>>>()?;
        for &x in &xs {
            cells.extend(points.iter().map(|&p| Cell::new(p, x, spec.y_m)));
        }
    }
    let h = scorer.score_cells(&cells)?;
    let chunks: Vec<&[f64]> = h.chunks(spec.n_angles).collect();
    let means = chunks.iter().map(|c| mean(c)).collect();
    let excursions = chunks
        .iter()
        .map(|c| {
            let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    let axes = vec![
        Axis::categorical("arrangement", spec.arrangements.iter().map(ArrangementSpec::label).collect()),
        Axis::new("x", "m", xs),
    ];
    Ok((
        scorer.finish("compare-mean", spec, started, axes.clone(), "h_bar_mean", means)?,
        scorer.finish("compare-excursion", spec, started, axes, "h_bar_excursion", excursions)?,
    ))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "pearson needs two equal-length series of at least 3 values, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return Err(Error::Numerical("pearson correlation of a constant series".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}
