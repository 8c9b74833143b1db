//! Williams curves: ICTD/ICLD pairs that place a phantom source exactly at
//! one of the loudspeakers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper end of the summing-localization regime, seconds.
pub const MAX_SUMMING_ICTD: f64 = 1e-3;
/// Slack used when comparing against the curves, dB.
pub const CURVE_TOLERANCE_DB: f64 = 1e-9;

/// Approximate digitisation of the left curve, `(ICTD ms, ICLD dB)`.
/// Anchored at (0 ms, 15 dB) and (1 ms, 0 dB); the interior shape is a
/// gently convex decay tuned so that the standard microphone pairs land near
/// their published coverage angles.
const DEFAULT_LEFT_CURVE: [(f64, f64); 11] = [
    (0.0, 15.0),
    (0.1, 12.8),
    (0.2, 10.9),
    (0.3, 9.2),
    (0.4, 7.6),
    (0.5, 6.1),
    (0.6, 4.7),
    (0.7, 3.4),
    (0.8, 2.2),
    (0.9, 1.1),
    (1.0, 0.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilliamsFile {
    #[serde(default)]
    pub provenance: String,
    /// `[ictd_ms, icld_db]` control points of the left curve.
    pub left_curve: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsCurves {
    /// `(ICTD s, ICLD dB)`, ICTD strictly increasing from 0 to 1 ms.
    left: Vec<(f64, f64)>,
    provenance: String,
}

impl Default for WilliamsCurves {
    fn default() -> Self {
        Self {
            left: DEFAULT_LEFT_CURVE.iter().map(|&(t, l)| (t * 1e-3, l)).collect(),
            provenance: "built-in approximate digitisation, 0.1 ms control points".into(),
        }
    }
}

impl WilliamsCurves {
    /// Builds curves from `(ICTD ms, ICLD dB)` control points of the left curve.
    pub fn from_points_ms(points: &[[f64; 2]], provenance: impl Into<String>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("need at least two control points".into()));
        }
        if points[0][0] != 0.0 || (points[points.len() - 1][0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "control points must span 0 to 1 ms".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[1][0] > w[0][0]) {
                return Err(Error::InvalidParameter("ICTD control points must increase".into()));
            }
            if w[1][1] > w[0][1] {
                return Err(Error::InvalidParameter("ICLD must be non-increasing".into()));
            }
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite control point".into()));
        }
        Ok(Self {
            left: points.iter().map(|p| (p[0] * 1e-3, p[1])).collect(),
            provenance: provenance.into(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingResource(path.to_path_buf()))
            }
            Err(e) => return Err(e.into()),
        };
        let file: WilliamsFile = serde_json::from_str(&text)?;
        let provenance = if file.provenance.is_empty() {
            path.display().to_string()
        } else {
            file.provenance
        };
        Self::from_points_ms(&file.left_curve, provenance)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn control_points(&self) -> &[(f64, f64)] {
        &self.left
    }

    /// Left curve. Held at its zero-ICTD level for negative ICTD.
    pub fn left(&self, ictd: f64) -> Result<f64> {
        check_regime(ictd)?;
        if ictd <= 0.0 {
            return Ok(self.left[0].1);
        }
        let k = self.left.partition_point(|p| p.0 <= ictd).min(self.left.len() - 1);
        let (t0, l0) = self.left[k - 1];
        let (t1, l1) = self.left[k];
        Ok(l0 + (ictd - t0) / (t1 - t0) * (l1 - l0))
    }

    /// Right curve, the mirror image `W_R(t) = -W_L(-t)`.
    pub fn right(&self, ictd: f64) -> Result<f64> {
        Ok(-self.left(-ictd)?)
    }

    /// ICLD on the curve of the loudspeaker the ICTD favours.
    pub fn icld(&self, ictd: f64) -> Result<f64> {
        if ictd >= 0.0 {
            self.left(ictd)
        } else {
            self.right(ictd)
        }
    }

    /// Whether a pair lies between the two curves (inclusive) within the
    /// summing regime.
    pub fn contains(&self, ictd: f64, icld: f64) -> bool {
        match (self.right(ictd), self.left(ictd)) {
            (Ok(lo), Ok(hi)) => icld >= lo - CURVE_TOLERANCE_DB && icld <= hi + CURVE_TOLERANCE_DB,
            _ => false,
        }
    }
}

fn check_regime(ictd: f64) -> Result<()> {
    if !(ictd.abs() <= MAX_SUMMING_ICTD * (1.0 + 1e-12)) {
        return Err(Error::BeyondSummingRegime { ictd_ms: ictd * 1e3 });
    }
    Ok(())
}

/// Signed ICLD on the Williams curves at `ictd` (left curve for positive
/// ICTD, right curve for negative).
pub fn williams_icld(ictd: f64, curves: &WilliamsCurves) -> Result<f64> {
    curves.icld(ictd)
}
