//! Head-related impulse response sets: validation, JSON exchange format and
//! an analytic spherical-head fallback.
//!
//! Exchange format (one JSON document):
//!
//! ```json
//! {
//!   "sample_rate": 44100,
//!   "metadata": "optional provenance string",
//!   "entries": [ { "azimuth_deg": -90.0, "left": [...], "right": [...] }, ... ]
//! }
//! ```
//!
//! Azimuths are in degrees, positive to the left, strictly increasing.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::delay::{delay_impulse, DelayMode};
use crate::error::{Error, Result};
use crate::geometry::{ear_incidence_angles, ear_path_length};

const COVERAGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HrirEntry {
    /// Radians, positive left.
    pub azimuth: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Immutable, validated set of HRIR pairs on the horizontal plane.
#[derive(Debug, Clone, PartialEq)]
pub struct HrirSet {
    sample_rate: f64,
    entries: Vec<HrirEntry>,
    metadata: String,
    circular: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HrirFile {
    sample_rate: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    metadata: String,
    entries: Vec<HrirFileEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HrirFileEntry {
    azimuth_deg: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl HrirSet {
    pub fn new(sample_rate: f64, entries: Vec<HrirEntry>, metadata: impl Into<String>) -> Result<Self> {
        if !(sample_rate > 0.0) {
            return Err(Error::MalformedHrir(format!("invalid sample rate {sample_rate}")));
        }
        let first = entries.first().ok_or(Error::EmptyHrirSet)?;
        for pair in entries.windows(2) {
            if !(pair[1].azimuth > pair[0].azimuth) {
                return Err(Error::UnsortedAzimuths {
                    azimuth_deg: pair[1].azimuth.to_degrees(),
                });
            }
        }
        let len = first.left.len();
        if len == 0 {
            return Err(Error::MalformedHrir("zero-length impulse response".into()));
        }
        for e in &entries {
            for ir in [&e.left, &e.right] {
                if ir.len() != len {
                    return Err(Error::InconsistentIrLength {
                        expected: len,
                        found: ir.len(),
                    });
                }
                if ir.iter().any(|v| !v.is_finite()) {
                    return Err(Error::MalformedHrir("non-finite IR sample".into()));
                }
            }
        }
        let min = entries[0].azimuth;
        let max = entries[entries.len() - 1].azimuth;
        let max_gap = entries
            .windows(2)
            .map(|p| p[1].azimuth - p[0].azimuth)
            .fold(0.0, f64::max);
        let circular = min <= -PI + COVERAGE_TOL + max_gap && max >= PI - COVERAGE_TOL - max_gap
            && entries.len() > 2;
        let half_pi = 0.5 * PI;
        if min > -half_pi + COVERAGE_TOL || max < half_pi - COVERAGE_TOL {
            return Err(Error::CoverageGap {
                azimuth_deg: if min > -half_pi + COVERAGE_TOL { -90.0 } else { 90.0 },
                min_deg: min.to_degrees(),
                max_deg: max.to_degrees(),
            });
        }
        Ok(Self {
            sample_rate,
            entries,
            metadata: metadata.into(),
            circular,
        })
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn entries(&self) -> &[HrirEntry] {
        &self.entries
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn ir_len(&self) -> usize {
        self.entries[0].left.len()
    }

    /// Nearest entry by azimuth. Ties go to the entry closer to the median
    /// plane so that mirrored sources select mirrored entries.
    pub fn nearest(&self, azimuth: f64) -> Result<&HrirEntry> {
        let min = self.entries[0].azimuth;
        let max = self.entries[self.entries.len() - 1].azimuth;
        if !self.circular && (azimuth < min - COVERAGE_TOL || azimuth > max + COVERAGE_TOL) {
            return Err(Error::CoverageGap {
                azimuth_deg: azimuth.to_degrees(),
                min_deg: min.to_degrees(),
                max_deg: max.to_degrees(),
            });
        }
        let dist = |e: &HrirEntry| {
            let d = (azimuth - e.azimuth).abs();
            if self.circular {
                d.min(2.0 * PI - d)
            } else {
                d
            }
        };
        let best = self
            .entries
            .iter()
            .min_by(|a, b| {
                let (da, db) = (dist(a), dist(b));
                if (da - db).abs() <= 1e-12 {
                    a.azimuth.abs().total_cmp(&b.azimuth.abs())
                } else {
                    da.total_cmp(&db)
                }
            })
            .expect("non-empty set");
        Ok(best)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HrirFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedHrir(e.to_string()))?;
        let entries = file
            .entries
            .into_iter()
            .map(|e| HrirEntry {
                azimuth: e.azimuth_deg.to_radians(),
                left: e.left,
                right: e.right,
            })
            .collect();
        Self::new(file.sample_rate, entries, file.metadata)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = HrirFile {
            sample_rate: self.sample_rate,
            metadata: self.metadata.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| HrirFileEntry {
                    azimuth_deg: e.azimuth.to_degrees(),
                    left: e.left.clone(),
                    right: e.right.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, self.to_json()?.as_bytes())
    }
}

/// Reads and validates an HRIR set in the JSON exchange format.
pub fn load_hrir_set(path: &Path) -> Result<HrirSet> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingResource(path.to_path_buf()))
        }
        Err(e) => return Err(e.into()),
    };
    HrirSet::from_json(&text)
}

/// Parameters of the analytic spherical-head model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalHead {
    pub head_radius: f64,
    pub ear_angle: f64,
    pub sample_rate: f64,
    pub speed_of_sound: f64,
}

impl Default for SphericalHead {
    fn default() -> Self {
        Self {
            head_radius: crate::geometry::DEFAULT_HEAD_RADIUS,
            ear_angle: crate::geometry::DEFAULT_EAR_ANGLE_DEG.to_radians(),
            sample_rate: crate::stimuli::DEFAULT_SAMPLE_RATE,
            speed_of_sound: crate::geometry::SPEED_OF_SOUND,
        }
    }
}

/// Source distance used to evaluate the ear path lengths (far field).
const REFERENCE_DISTANCE: f64 = 100.0;
/// High-frequency shelf gain at the shadowed extreme.
const SHADOW_ALPHA_MIN: f64 = 0.1;
/// Incidence angle of deepest shadow, radians.
const SHADOW_THETA_MIN: f64 = 150.0 * PI / 180.0;
/// Impulse response length of the analytic set, samples.
pub const ANALYTIC_IR_LEN: usize = 144;

/// High-frequency gain of the head-shadow shelf at a given incidence angle.
fn shadow_alpha(incidence: f64) -> f64 {
    (1.0 + 0.5 * SHADOW_ALPHA_MIN)
        + (1.0 - 0.5 * SHADOW_ALPHA_MIN) * (incidence / SHADOW_THETA_MIN * PI).cos()
}

/// Bilinear-transformed one-pole/one-zero shelf
/// `H(s) = (2 w0 + alpha s) / (2 w0 + s)`, `w0 = c / r_h`, applied in place.
fn apply_head_shadow(ir: &mut [f64], incidence: f64, head: &SphericalHead) {
    let w0 = head.speed_of_sound / head.head_radius;
    let fs = head.sample_rate;
    let alpha = shadow_alpha(incidence);
    let norm = w0 + fs;
    let b0 = (w0 + alpha * fs) / norm;
    let b1 = (w0 - alpha * fs) / norm;
    let a1 = (w0 - fs) / norm;
    let (mut x1, mut y1) = (0.0, 0.0);
    for v in ir.iter_mut() {
        let x = *v;
        let y = b0 * x + b1 * x1 - a1 * y1;
        x1 = x;
        y1 = y;
        *v = y;
    }
}

fn ear_response(incidence: f64, bulk_delay: f64, head: &SphericalHead) -> Result<Vec<f64>> {
    let path = ear_path_length(REFERENCE_DISTANCE, head.head_radius, incidence)?;
    let delay = bulk_delay + (path - REFERENCE_DISTANCE) / head.speed_of_sound * head.sample_rate;
    let imp = delay_impulse(delay, DelayMode::WindowedSinc);
    let mut ir = vec![0.0; ANALYTIC_IR_LEN];
    for (k, &t) in imp.taps.iter().enumerate() {
        let idx = imp.start + k as isize;
        debug_assert!(idx >= 0);
        if let Some(slot) = ir.get_mut(idx as usize) {
            *slot += t;
        }
    }
    apply_head_shadow(&mut ir, incidence, head);
    Ok(ir)
}

/// Analytic HRIR set for a rigid sphere: per ear, a fractional delay from the
/// exact ear path (direct or tangent-plus-arc) followed by a first-order
/// head-shadow shelf whose high-frequency gain falls from about +6 dB at
/// frontal incidence to -20 dB at 150 degrees incidence.
pub fn spherical_head_hrirs(head: &SphericalHead, azimuths: &[f64]) -> Result<HrirSet> {
    if !(head.head_radius > 0.0 && head.sample_rate > 0.0 && head.speed_of_sound > 0.0) {
        return Err(Error::InvalidParameter(
            "spherical head parameters must be positive".into(),
        ));
    }
    let bulk = (head.head_radius / head.speed_of_sound * head.sample_rate).ceil()
        + super::delay::KERNEL_HALF as f64
        + 1.0;
    let entries = azimuths
        .iter()
        .map(|&az| {
            let (inc_l, inc_r) = ear_incidence_angles(az, head.ear_angle);
            Ok(HrirEntry {
                azimuth: az,
                left: ear_response(inc_l, bulk, head)?,
                right: ear_response(inc_r, bulk, head)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HrirSet::new(
        head.sample_rate,
        entries,
        format!(
            "analytic spherical head: r_h={} m, ear_angle={:.1} deg, shelf alpha_min={}, theta_min=150 deg, fs={} Hz",
            head.head_radius,
            head.ear_angle.to_degrees(),
            SHADOW_ALPHA_MIN,
            head.sample_rate
        ),
    )
}

/// Azimuth grid from `-180` to `+180` degrees inclusive in `step_deg` steps.
pub fn full_circle_grid(step_deg: f64) -> Vec<f64> {
    let n = (360.0 / step_deg).round() as i64;
    (0..=n)
        .map(|k| (-180.0 + k as f64 * step_deg).to_radians())
        .collect()
}

/// Default analytic set: default head, 1 degree full-circle grid.
pub fn default_analytic_set() -> HrirSet {
    spherical_head_hrirs(&SphericalHead::default(), &full_circle_grid(1.0))
        .expect("default spherical head parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(az_deg: f64, len: usize) -> HrirEntry {
        let mut ir = vec![0.0; len];
        ir[0] = 1.0;
        HrirEntry {
            azimuth: az_deg.to_radians(),
            left: ir.clone(),
            right: ir,
        }
    }

    fn broadband_itd(e: &HrirEntry, fs: f64) -> f64 {
        // lag of the cross-correlation peak between the two IRs, parabolic refinement
        let n = e.left.len() as isize;
        let corr = |lag: isize| -> f64 {
            (0..n)
                .filter_map(|i| {
                    let j = i + lag;
                    (j >= 0 && j < n).then(|| e.left[i as usize] * e.right[j as usize])
                })
                .sum()
        };
        let lags: Vec<isize> = (-40..=40).collect();
        let values: Vec<f64> = lags.iter().map(|&l| corr(l)).collect();
        let (k, _) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let (ym, y0, yp) = (values[k - 1], values[k], values[k + 1]);
        let shift = 0.5 * (ym - yp) / (ym - 2.0 * y0 + yp);
        (lags[k] as f64 + shift) / fs
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(HrirSet::new(44100.0, vec![], ""), Err(Error::EmptyHrirSet)));
        let dup = vec![entry(-90.0, 4), entry(0.0, 4), entry(0.0, 4), entry(90.0, 4)];
        assert!(matches!(
            HrirSet::new(44100.0, dup, ""),
            Err(Error::UnsortedAzimuths { .. })
        ));
        let ragged = vec![entry(-90.0, 4), entry(90.0, 5)];
        assert!(matches!(
            HrirSet::new(44100.0, ragged, ""),
            Err(Error::InconsistentIrLength { .. })
        ));
        let narrow = vec![entry(-45.0, 4), entry(45.0, 4)];
        assert!(matches!(
            HrirSet::new(44100.0, narrow, ""),
            Err(Error::CoverageGap { .. })
        ));
    }

    #[test]
    fn json_round_trip_five_degree_grid() {
        let entries: Vec<_> = (0..37).map(|k| entry(-90.0 + 5.0 * k as f64, 8)).collect();
        let set = HrirSet::new(44100.0, entries, "unit impulses").unwrap();
        let back = HrirSet::from_json(&set.to_json().unwrap()).unwrap();
        assert_eq!(back.entries().len(), 37);
        assert_eq!(back.metadata(), "unit impulses");
    }

    #[test]
    fn malformed_json_is_reported() {
        assert!(matches!(
            HrirSet::from_json("{\"sample_rate\": 44100"),
            Err(Error::MalformedHrir(_))
        ));
        assert!(matches!(
            HrirSet::from_json("{\"sample_rate\": 44100, \"entries\": []}"),
            Err(Error::EmptyHrirSet)
        ));
    }

    #[test]
    fn nearest_selection_and_coverage() {
        let entries: Vec<_> = (0..37).map(|k| entry(-90.0 + 5.0 * k as f64, 2)).collect();
        let set = HrirSet::new(44100.0, entries, "").unwrap();
        assert_eq!(set.nearest(12.0f64.to_radians()).unwrap().azimuth, 10f64.to_radians());
        assert_eq!(set.nearest(2.5f64.to_radians()).unwrap().azimuth, 0.0);
        assert_eq!(set.nearest((-2.5f64).to_radians()).unwrap().azimuth, 0.0);
        assert!(matches!(
            set.nearest(95f64.to_radians()),
            Err(Error::CoverageGap { .. })
        ));
        let circle = default_analytic_set();
        assert!(circle.nearest(179.7f64.to_radians()).is_ok());
        assert!(circle.nearest((-179.7f64).to_radians()).is_ok());
    }

    #[test]
    fn median_plane_entries_are_identical() {
        let set = default_analytic_set();
        let e = set.nearest(0.0).unwrap();
        assert_eq!(e.left, e.right);
    }

    #[test]
    fn lateral_itd_close_to_natural_maximum() {
        let set = default_analytic_set();
        let itd = broadband_itd(set.nearest(90f64.to_radians()).unwrap(), set.sample_rate());
        assert!((0.60e-3..=0.70e-3).contains(&itd), "ITD at +90 deg = {itd}");
    }

    #[test]
    fn itd_is_odd_in_azimuth() {
        let set = default_analytic_set();
        for k in 0..=18 {
            let az = (5.0 * k as f64).to_radians();
            let a = broadband_itd(set.nearest(az).unwrap(), set.sample_rate());
            let b = broadband_itd(set.nearest(-az).unwrap(), set.sample_rate());
            assert!((a + b).abs() < 1e-9, "azimuth {k}: {a} vs {b}");
        }
    }

    #[test]
    fn shadow_shelf_gains() {
        assert!((shadow_alpha(0.0) - 2.0).abs() < 1e-12);
        assert!((shadow_alpha(SHADOW_THETA_MIN) - SHADOW_ALPHA_MIN).abs() < 1e-12);
    }
}
