//! Panning laws and recording geometries: PSR design, standard microphone
//! pairs and their coverage angles.

mod williams;

pub use williams::{
    williams_icld, WilliamsCurves, WilliamsFile, CURVE_TOLERANCE_DB, MAX_SUMMING_ICTD,
};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PanningPoint, SPEED_OF_SOUND};

/// Angular step of the coverage scan, degrees.
pub const COVERAGE_STEP_DEG: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsrDesign {
    /// Inter-microphone distance, metres.
    pub d: f64,
    /// Loudspeaker base angle, radians.
    pub phi0: f64,
    /// ICTD at the loudspeaker direction, seconds.
    pub ictd_max: f64,
    /// ICLD at the loudspeaker direction, dB.
    pub icld_w: f64,
    pub beta: f64,
    pub speed_of_sound: f64,
}

/// ICLD of the generalised tangent law at `theta_s`.
fn tangent_law_icld(phi0: f64, beta: f64, theta_s: f64) -> f64 {
    let a = 0.5 * phi0 + beta;
    20.0 * ((a + theta_s).sin() / (a - theta_s).sin()).log10()
}

/// `beta` such that `sin(phi0 + beta) / sin(beta) = 10^(icld_w / 20)`, by
/// bisection over `(0, min(pi/2, pi - phi0))`.
pub fn solve_beta(phi0: f64, icld_w: f64) -> Result<f64> {
    if !(phi0 > 0.0 && phi0 < std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!("base angle {phi0} outside (0, pi)")));
    }
    let residual = |b: f64| tangent_law_icld(phi0, b, 0.5 * phi0) - icld_w;
    let mut lo = 1e-12;
    let mut hi = FRAC_PI_2.min(std::f64::consts::PI - phi0 - 1e-12);
    if !(residual(lo) > 0.0) || residual(hi) > 0.0 {
        return Err(Error::Numerical(format!(
            "no tangent-law solution for ICLD_W = {icld_w} dB at base angle {} deg",
            phi0.to_degrees()
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form counterpart of [`solve_beta`].
pub fn beta_closed_form(phi0: f64, icld_w: f64) -> f64 {
    let r = 10f64.powf(icld_w / 20.0);
    phi0.sin().atan2(r - phi0.cos())
}

/// The arctangent expression as usually printed, `atan(r sin(phi0) / (1 - r cos(phi0)))`.
/// Its tangent-law ICLD at the loudspeaker has the opposite sign; kept for
/// comparison only.
pub fn beta_printed_form(phi0: f64, icld_w: f64) -> f64 {
    let r = 10f64.powf(icld_w / 20.0);
    (r * phi0.sin() / (1.0 - r * phi0.cos())).atan()
}

/// PSR design for inter-microphone distance `d` and base angle `phi0`.
pub fn psr_design(d: f64, phi0: f64, curves: &WilliamsCurves, speed_of_sound: f64) -> Result<PsrDesign> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("d must be >= 0, got {d}")));
    }
    if !(speed_of_sound > 0.0) {
        return Err(Error::InvalidParameter("speed of sound must be positive".into()));
    }
    let ictd_max = d / speed_of_sound * (0.5 * phi0).sin();
    let icld_w = curves.left(ictd_max)?;
    let beta = solve_beta(phi0, icld_w)?;
    Ok(PsrDesign {
        d,
        phi0,
        ictd_max,
        icld_w,
        beta,
        speed_of_sound,
    })
}

/// ICTD/ICLD produced by a PSR design for a source at `theta_s`.
pub fn psr_curve(design: &PsrDesign, theta_s: f64) -> Result<PanningPoint> {
    let half = 0.5 * design.phi0;
    if !(theta_s.abs() <= half * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "source angle {} deg outside +-{} deg",
            theta_s.to_degrees(),
            half.to_degrees()
        )));
    }
    Ok(PanningPoint::new(
        design.d / design.speed_of_sound * theta_s.sin(),
        tangent_law_icld(design.phi0, design.beta, theta_s),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Directivity {
    Omni,
    Cardioid,
    Figure8,
    PsrCustom,
}

impl Directivity {
    /// Signed pattern value for a microphone aimed at `aim`.
    pub fn gain(self, theta: f64, aim: f64) -> f64 {
        match self {
            Directivity::Omni | Directivity::PsrCustom => 1.0,
            Directivity::Cardioid => 0.5 + 0.5 * (theta - aim).cos(),
            Directivity::Figure8 => (theta - aim).cos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicArrangement {
    pub name: String,
    /// Inter-microphone distance, metres.
    pub d: f64,
    /// Angle between the microphone axes, radians.
    pub base_angle: f64,
    pub directivity: Directivity,
    /// Present for PSR arrangements only.
    pub psr: Option<PsrDesign>,
    pub speed_of_sound: f64,
}

/// Names of the built-in arrangements.
pub const PRESET_NAMES: [&str; 5] = ["blumlein", "xy", "ortf", "din", "nos"];

impl MicArrangement {
    pub fn new(name: impl Into<String>, d: f64, base_angle: f64, directivity: Directivity) -> Result<Self> {
        if directivity == Directivity::PsrCustom {
            return Err(Error::InvalidParameter(
                "PSR arrangements are built from a design, see MicArrangement::psr".into(),
            ));
        }
        let arr = Self {
            name: name.into(),
            d,
            base_angle,
            directivity,
            psr: None,
            speed_of_sound: SPEED_OF_SOUND,
        };
        arr.validate()?;
        Ok(arr)
    }

    pub fn psr(design: PsrDesign) -> Self {
        Self {
            name: format!("psr-d{:.1}cm", design.d * 100.0),
            d: design.d,
            base_angle: design.phi0,
            directivity: Directivity::PsrCustom,
            psr: Some(design),
            speed_of_sound: design.speed_of_sound,
        }
    }

    /// Built-in pair by (case-insensitive) name.
    pub fn preset(name: &str) -> Result<Self> {
        let deg = f64::to_radians;
        match name.to_ascii_lowercase().as_str() {
            "blumlein" => Self::new("blumlein", 0.0, deg(90.0), Directivity::Figure8),
            "xy" | "90-deg-xy" => Self::new("xy", 0.0, deg(90.0), Directivity::Cardioid),
            "ortf" => Self::new("ortf", 0.17, deg(110.0), Directivity::Cardioid),
            "din" => Self::new("din", 0.20, deg(90.0), Directivity::Cardioid),
            "nos" => Self::new("nos", 0.30, deg(90.0), Directivity::Cardioid),
            other => Err(Error::InvalidParameter(format!(
                "unknown arrangement '{other}' (expected one of {})",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d >= 0.0 && self.d.is_finite()) {
            return Err(Error::InvalidParameter(format!("d must be >= 0, got {}", self.d)));
        }
        if !(self.base_angle > 0.0 && self.base_angle < 2.0 * std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "microphone base angle must lie in (0, 2 pi), got {}",
                self.base_angle
            )));
        }
        Ok(())
    }

    /// True when the two capsules pick up `theta_s` with opposite polarity.
    pub fn polarity_inverted(&self, theta_s: f64) -> bool {
        let half = 0.5 * self.base_angle;
        let l = self.directivity.gain(theta_s, half);
        let r = self.directivity.gain(theta_s, -half);
        l * r < 0.0
    }
}

/// ICTD/ICLD recorded by `arr` for a plane wave from `theta_s`.
pub fn arrangement_curve(arr: &MicArrangement, theta_s: f64) -> Result<PanningPoint> {
    if let Some(design) = &arr.psr {
        return psr_curve(design, theta_s);
    }
    let half = 0.5 * arr.base_angle;
    let gl = arr.directivity.gain(theta_s, half).abs();
    let gr = arr.directivity.gain(theta_s, -half).abs();
    const NULL: f64 = 1e-12;
    if gl < NULL || gr < NULL {
        return Err(Error::PatternNull {
            theta_deg: theta_s.to_degrees(),
        });
    }
    Ok(PanningPoint::new(
        arr.d / arr.speed_of_sound * theta_s.sin(),
        20.0 * (gl / gr).log10(),
    ))
}

fn covered(arr: &MicArrangement, curves: &WilliamsCurves, theta_s: f64) -> bool {
    if arr.polarity_inverted(theta_s) {
        return false;
    }
    match arrangement_curve(arr, theta_s) {
        Ok(p) => curves.contains(p.ictd, p.icld),
        Err(_) => false,
    }
}

/// Width of the largest symmetric interval of source angles, scanned in
/// [`COVERAGE_STEP_DEG`] steps, whose pairs all lie inside the Williams
/// curves. Zero when even the frontal direction fails.
pub fn coverage_angle(arr: &MicArrangement, curves: &WilliamsCurves) -> f64 {
    let mut last_ok: Option<f64> = None;
    let steps = (180.0 / COVERAGE_STEP_DEG) as usize;
    for k in 0..=steps {
        let theta = (k as f64 * COVERAGE_STEP_DEG).to_radians();
        if covered(arr, curves, theta) && covered(arr, curves, -theta) {
            last_ok = Some(theta);
        } else {
            break;
        }
    }
    last_ok.map_or(0.0, |t| 2.0 * t)
}
