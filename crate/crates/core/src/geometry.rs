//! Coordinate, path-length, delay and attenuation mathematics for a
//! two-loudspeaker setup and a spherical-head listener.
//!
//! Conventions used throughout the crate:
//!
//! * The origin is the centre of the sweet spot. `+x` points to the
//!   listener's right, `+y` towards the loudspeakers.
//! * Azimuths are measured from the look direction (parallel to `+y`) and
//!   are **positive to the left**, so that a positive ICLD (left louder) and
//!   a positive ICTD (left earlier) both pull a phantom source towards
//!   positive azimuths.
//! * ICTD is `tau_R - tau_L` and ICLD is `20 log10(g_L / g_R)`.
//! * The head is a sphere of radius `head_radius` centred on the listener
//!   position, with the ears at azimuths `+ear_angle` (left) and
//!   `-ear_angle` (right).

use std::f64::consts::{FRAC_PI_2, LN_10};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of sound in dry air at 20 degrees C, m/s.
pub const SPEED_OF_SOUND: f64 = 343.0;
pub const DEFAULT_HEAD_RADIUS: f64 = 0.09;
pub const DEFAULT_EAR_ANGLE_DEG: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StereoSetup {
    /// Full angle between the two loudspeakers, radians.
    pub base_angle: f64,
    /// Distance from the sweet-spot centre to each loudspeaker, metres.
    pub loudspeaker_distance: f64,
    pub speed_of_sound: f64,
}

impl StereoSetup {
    pub fn new(base_angle: f64, loudspeaker_distance: f64) -> Result<Self> {
        Self::with_speed_of_sound(base_angle, loudspeaker_distance, SPEED_OF_SOUND)
    }

    pub fn with_speed_of_sound(
        base_angle: f64,
        loudspeaker_distance: f64,
        speed_of_sound: f64,
    ) -> Result<Self> {
        let setup = Self {
            base_angle,
            loudspeaker_distance,
            speed_of_sound,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_angle > 0.0 && self.base_angle < std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "base angle must lie in (0, pi), got {}",
                self.base_angle
            )));
        }
        if !(self.loudspeaker_distance > 0.0 && self.loudspeaker_distance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "loudspeaker distance must be positive, got {}",
                self.loudspeaker_distance
            )));
        }
        if !(self.speed_of_sound > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "speed of sound must be positive, got {}",
                self.speed_of_sound
            )));
        }
        Ok(())
    }

    pub fn half_angle(&self) -> f64 {
        0.5 * self.base_angle
    }
}

impl Default for StereoSetup {
    /// 60 degree base angle, loudspeakers at 2 m.
    fn default() -> Self {
        Self {
            base_angle: 60f64.to_radians(),
            loudspeaker_distance: 2.0,
            speed_of_sound: SPEED_OF_SOUND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ListenerPose {
    pub x: f64,
    pub y: f64,
    pub head_radius: f64,
    /// Angle between the look direction and each ear, radians.
    pub ear_angle: f64,
}

impl ListenerPose {
    pub fn new(x: f64, y: f64, head_radius: f64, ear_angle: f64) -> Result<Self> {
        let pose = Self {
            x,
            y,
            head_radius,
            ear_angle,
        };
        pose.validate()?;
        Ok(pose)
    }

    /// Default head at `(x, y)`.
    pub fn at(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.head_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "head radius must be positive, got {}",
                self.head_radius
            )));
        }
        if !(self.ear_angle >= FRAC_PI_2 - 1e-12 && self.ear_angle <= std::f64::consts::PI + 1e-12)
        {
            return Err(Error::InvalidParameter(format!(
                "ear angle must lie in [pi/2, pi], got {}",
                self.ear_angle
            )));
        }
        Ok(())
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

impl Default for ListenerPose {
    fn default() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            head_radius: DEFAULT_HEAD_RADIUS,
            ear_angle: DEFAULT_EAR_ANGLE_DEG.to_radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A source as seen from the listener: azimuth (positive left) and distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourcePlacement {
    pub azimuth: f64,
    pub distance: f64,
}

impl SourcePlacement {
    pub fn new(azimuth: f64, distance: f64) -> Result<Self> {
        if !(distance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "source distance must be positive, got {distance}"
            )));
        }
        if !(-std::f64::consts::PI - 1e-12..=std::f64::consts::PI + 1e-12).contains(&azimuth) {
            return Err(Error::InvalidParameter(format!(
                "azimuth must lie in [-pi, pi], got {azimuth}"
            )));
        }
        Ok(Self { azimuth, distance })
    }
}

/// Inter-channel time and level difference pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PanningPoint {
    /// `tau_R - tau_L`, seconds.
    pub ictd: f64,
    /// `20 log10(g_L / g_R)`, dB.
    pub icld: f64,
}

impl PanningPoint {
    pub const fn new(ictd: f64, icld: f64) -> Self {
        Self { ictd, icld }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelativeMethod {
    /// First-order closed forms, evaluated verbatim.
    PrintedApproximation,
    /// Exact Euclidean listener-to-loudspeaker distances.
    ExactPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativePanningPoint {
    pub rictd: f64,
    pub ricld: f64,
    pub method: RelativeMethod,
}

/// Left and right loudspeaker positions.
pub fn loudspeaker_positions(setup: &StereoSetup) -> (Point2, Point2) {
    let (s, c) = setup.half_angle().sin_cos();
    let r = setup.loudspeaker_distance;
    (Point2::new(-r * s, r * c), Point2::new(r * s, r * c))
}

/// Placement of a loudspeaker in the frame of a listener looking along `+y`.
pub fn source_relative_to_listener(speaker: Point2, pose: &ListenerPose) -> Result<SourcePlacement> {
    let dx = speaker.x - pose.x;
    let dy = speaker.y - pose.y;
    let distance = dx.hypot(dy);
    if distance == 0.0 {
        return Err(Error::ZeroDistance);
    }
    Ok(SourcePlacement {
        azimuth: (-dx).atan2(dy),
        distance,
    })
}

/// Closed-form ICTD at which both loudspeaker signals coincide at the left
/// ear. The right-ear coincidence occurs at the negated value.
pub fn tau_overlap(head_radius: f64, ear_angle: f64, base_angle: f64, speed_of_sound: f64) -> f64 {
    head_radius / speed_of_sound * overlap_bracket(ear_angle, base_angle)
}

fn overlap_bracket(ear_angle: f64, base_angle: f64) -> f64 {
    let half = 0.5 * base_angle;
    (ear_angle - half).cos() + half + ear_angle - FRAC_PI_2
}

/// Exact counterpart of [`tau_overlap`]: `(d_RL - d_LL) / c` with both
/// paths from [`exact_ear_paths`] for a listener at the sweet-spot centre.
pub fn tau_overlap_exact(setup: &StereoSetup, head_radius: f64, ear_angle: f64) -> Result<f64> {
    let pose = ListenerPose {
        head_radius,
        ear_angle,
        ..ListenerPose::default()
    };
    let (left, right) = loudspeaker_positions(setup);
    let (d_ll, _) = exact_ear_paths(left, &pose)?;
    let (d_rl, _) = exact_ear_paths(right, &pose)?;
    Ok((d_rl - d_ll) / setup.speed_of_sound)
}

/// Path length from a point source at `distance` from the head centre to an
/// ear point on the sphere, where `incidence` is the angle (radians, in
/// `[0, pi]`) between the source direction and the ear direction.
///
/// Below the tangential-incidence angle `acos(r_h / r)` the ear is directly
/// visible and the straight-line distance applies; beyond it the path is the
/// tangent segment plus the arc wrapped around the sphere.
pub fn ear_path_length(distance: f64, head_radius: f64, incidence: f64) -> Result<f64> {
    if distance <= head_radius {
        return Err(Error::InsideHead {
            distance,
            head_radius,
        });
    }
    if head_radius == 0.0 {
        return Ok(distance);
    }
    let incidence = incidence.abs();
    let tangential = (head_radius / distance).acos();
    if incidence < tangential {
        Ok((distance * distance + head_radius * head_radius
            - 2.0 * distance * head_radius * incidence.cos())
        .sqrt())
    } else {
        let tangent = ((distance - head_radius) * (distance + head_radius)).sqrt();
        Ok(tangent + head_radius * (incidence - tangential))
    }
}

/// Unit vector pointing towards azimuth `azimuth` (positive left).
pub(crate) fn direction(azimuth: f64) -> (f64, f64) {
    (-azimuth.sin(), azimuth.cos())
}

pub(crate) fn angle_between(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 * b.0 + a.1 * b.1).clamp(-1.0, 1.0).acos()
}

/// Incidence angles of a source at `azimuth` on the left and right ears.
pub fn ear_incidence_angles(azimuth: f64, ear_angle: f64) -> (f64, f64) {
    let src = direction(azimuth);
    (
        angle_between(src, direction(ear_angle)),
        angle_between(src, direction(-ear_angle)),
    )
}

/// Exact path lengths `(to left ear, to right ear)` from `speaker` to the
/// ears of a spherical head centred on the listener position.
pub fn exact_ear_paths(speaker: Point2, pose: &ListenerPose) -> Result<(f64, f64)> {
    let placement = source_relative_to_listener(speaker, pose)?;
    let (inc_l, inc_r) = ear_incidence_angles(placement.azimuth, pose.ear_angle);
    Ok((
        ear_path_length(placement.distance, pose.head_radius, inc_l)?,
        ear_path_length(placement.distance, pose.head_radius, inc_r)?,
    ))
}

/// ICTD/ICLD as effectively observed at the listener position.
pub fn relative_panning(
    point: PanningPoint,
    pose: &ListenerPose,
    setup: &StereoSetup,
    method: RelativeMethod,
) -> RelativePanningPoint {
    let (rictd, ricld) = match method {
        RelativeMethod::PrintedApproximation => {
            let s = setup.half_angle().sin();
            (
                point.ictd - pose.x * 2.0 / setup.speed_of_sound * s,
                point.icld - pose.x / setup.loudspeaker_distance * 20.0 * s / LN_10,
            )
        }
        RelativeMethod::ExactPath => {
            let (left, right) = loudspeaker_positions(setup);
            let here = pose.position();
            let d_l = here.distance_to(&left);
            let d_r = here.distance_to(&right);
            (
                point.ictd + (d_r - d_l) / setup.speed_of_sound,
                point.icld + 20.0 * (d_r / d_l).log10(),
            )
        }
    };
    RelativePanningPoint {
        rictd,
        ricld,
        method,
    }
}

/// Lateral displacement at which the relative ICTD has moved by 1 ms.
pub fn x_for_full_shift(setup: &StereoSetup) -> f64 {
    0.001 * setup.speed_of_sound / (2.0 * setup.half_angle().sin())
}

/// Inter-microphone distance whose largest ICTD equals the overlap ICTD.
pub fn psr_distance_for_tau_overlap(head_radius: f64, ear_angle: f64, base_angle: f64) -> f64 {
    head_radius * overlap_bracket(ear_angle, base_angle) / (0.5 * base_angle).sin()
}

/// Array radius of two microphones `d` apart on a circle, separated by `mic_base_angle`.
pub fn mic_radius_from_d(d: f64, mic_base_angle: f64) -> f64 {
    d / (2.0 * (0.5 * mic_base_angle).sin())
}

pub fn d_from_mic_radius(radius: f64, mic_base_angle: f64) -> f64 {
    2.0 * radius * (0.5 * mic_base_angle).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn deg(v: f64) -> f64 {
        v.to_radians()
    }

    #[test]
    fn loudspeakers_at_sixty_degrees() {
        let setup = StereoSetup::new(deg(60.0), 2.0).unwrap();
        let (l, r) = loudspeaker_positions(&setup);
        assert_abs_diff_eq!(l.x, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.y, 1.7320508, epsilon = 1e-6);
        assert_abs_diff_eq!(r.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.y, l.y, epsilon = 0.0);
    }

    #[test]
    fn lateral_loudspeakers() {
        let setup = StereoSetup::new(deg(179.999_999_9), 1.0).unwrap();
        let (l, r) = loudspeaker_positions(&setup);
        assert_abs_diff_eq!(l.x, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.y, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn setup_rejects_invalid_values() {
        assert!(StereoSetup::new(deg(60.0), 0.0).is_err());
        assert!(StereoSetup::new(0.0, 2.0).is_err());
        assert!(StereoSetup::with_speed_of_sound(deg(60.0), 2.0, -1.0).is_err());
        assert!(ListenerPose::new(0.0, 0.0, 0.0, deg(100.0)).is_err());
        assert!(ListenerPose::new(0.0, 0.0, 0.09, deg(80.0)).is_err());
    }

    #[test]
    fn off_centre_loudspeaker_azimuths() {
        let right = Point2::new(1.0, 1.732);
        let left = Point2::new(-1.0, 1.732);
        let pose = ListenerPose::at(0.2, 0.0);
        let r = source_relative_to_listener(right, &pose).unwrap();
        let l = source_relative_to_listener(left, &pose).unwrap();
        assert_abs_diff_eq!(r.azimuth.to_degrees(), -24.79, epsilon = 0.01);
        assert_abs_diff_eq!(l.azimuth.to_degrees(), 34.72, epsilon = 0.01);
        assert_eq!(r.azimuth.to_degrees().round(), -25.0);
        assert_eq!(l.azimuth.to_degrees().round(), 35.0);
        // brute force: sqrt(0.8^2 + 1.732^2)
        let brute = (0.8f64 * 0.8 + 1.732 * 1.732).sqrt();
        assert_abs_diff_eq!(r.distance, brute, epsilon = 1e-12);
        assert_abs_diff_eq!(r.distance, 1.9079, epsilon = 1e-4);
    }

    #[test]
    fn coincident_listener_is_an_error() {
        let pose = ListenerPose::at(1.0, 1.0);
        assert!(matches!(
            source_relative_to_listener(Point2::new(1.0, 1.0), &pose),
            Err(Error::ZeroDistance)
        ));
    }

    #[test]
    fn tau_overlap_reference_values() {
        let t = tau_overlap(0.09, deg(100.0), deg(60.0), SPEED_OF_SOUND);
        assert_abs_diff_eq!(t * 1e3, 0.273, epsilon = 0.001);
        assert_eq!(tau_overlap(0.0, deg(100.0), deg(60.0), SPEED_OF_SOUND), 0.0);
    }

    #[test]
    fn tau_overlap_matches_exact_paths() {
        let setup = StereoSetup::default();
        let exact = tau_overlap_exact(&setup, 0.09, deg(100.0)).unwrap();
        let approx = tau_overlap(0.09, deg(100.0), deg(60.0), SPEED_OF_SOUND);
        assert!(((exact - approx) / exact).abs() < 0.03, "{exact} vs {approx}");
    }

    #[test]
    fn direct_path_first_order_form() {
        let exact = ear_path_length(2.0, 0.09, deg(70.0)).unwrap();
        let first_order = 2.0 - 0.09 * deg(70.0).cos();
        assert_abs_diff_eq!(first_order, 1.96922, epsilon = 1e-5);
        assert!(((exact - first_order) / exact).abs() < 1e-3);
    }

    #[test]
    fn point_head_paths_equal_distance() {
        let pose = ListenerPose {
            head_radius: 0.0,
            ..ListenerPose::default()
        };
        let (l, r) = exact_ear_paths(Point2::new(-1.0, 1.0), &pose).unwrap();
        assert_abs_diff_eq!(l, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn ear_paths_continuous_at_tangential_incidence() {
        for &(r, rh) in &[(2.0f64, 0.09f64), (0.5, 0.1), (10.0, 0.0875)] {
            let theta0 = (rh / r).acos();
            let below = ear_path_length(r, rh, theta0 - 1e-12).unwrap();
            let at = ear_path_length(r, rh, theta0).unwrap();
            assert!((below - at).abs() < 1e-9, "{below} vs {at}");
        }
    }

    #[test]
    fn speaker_inside_head_is_rejected() {
        assert!(matches!(
            ear_path_length(0.05, 0.09, 0.3),
            Err(Error::InsideHead { .. })
        ));
    }

    #[test]
    fn printed_relative_worked_example() {
        let setup = StereoSetup::default();
        let rel = relative_panning(
            PanningPoint::new(0.0, 5.0),
            &ListenerPose::at(0.10, 0.0),
            &setup,
            RelativeMethod::PrintedApproximation,
        );
        assert_abs_diff_eq!(rel.rictd * 1e3, -0.2915, epsilon = 5e-5);
        assert_abs_diff_eq!(rel.ricld, 4.7829, epsilon = 5e-5);
    }

    #[test]
    fn exact_relative_values() {
        let setup = StereoSetup::default();
        let rel = relative_panning(
            PanningPoint::new(0.0, 5.0),
            &ListenerPose::at(0.10, 0.0),
            &setup,
            RelativeMethod::ExactPath,
        );
        assert_abs_diff_eq!(rel.rictd * 1e3, -0.2913, epsilon = 5e-5);
        let rel = relative_panning(
            PanningPoint::default(),
            &ListenerPose::at(0.343, 0.0),
            &setup,
            RelativeMethod::ExactPath,
        );
        // 20 log10(hypot(0.657, sqrt 3) / hypot(1.343, sqrt 3))
        assert_abs_diff_eq!(rel.ricld, -1.4607, epsilon = 2e-4);
    }

    #[test]
    fn central_listener_sees_unchanged_point() {
        let setup = StereoSetup::default();
        let p = PanningPoint::new(0.4e-3, -7.0);
        for method in [RelativeMethod::PrintedApproximation, RelativeMethod::ExactPath] {
            let rel = relative_panning(p, &ListenerPose::default(), &setup, method);
            assert_abs_diff_eq!(rel.rictd, p.ictd, epsilon = 1e-15);
            assert_abs_diff_eq!(rel.ricld, p.icld, epsilon = 1e-12);
        }
    }

    #[test]
    fn full_shift_distance() {
        assert_abs_diff_eq!(x_for_full_shift(&StereoSetup::default()), 0.343, epsilon = 1e-9);
        let wide = StereoSetup {
            base_angle: std::f64::consts::PI,
            ..StereoSetup::default()
        };
        assert_abs_diff_eq!(x_for_full_shift(&wide), 0.1715, epsilon = 1e-9);
        let fast = StereoSetup {
            speed_of_sound: f64::INFINITY,
            ..StereoSetup::default()
        };
        assert!(x_for_full_shift(&fast).is_infinite());
    }

    #[test]
    fn psr_distance_and_radius() {
        let d = psr_distance_for_tau_overlap(0.09, deg(100.0), deg(60.0));
        assert_abs_diff_eq!(d, 0.187, epsilon = 5e-4);
        let d72 = psr_distance_for_tau_overlap(0.09, deg(100.0), deg(72.0));
        assert_abs_diff_eq!(d72, 0.1901, epsilon = 1e-4);
        assert_abs_diff_eq!(mic_radius_from_d(d72, deg(72.0)), 0.162, epsilon = 5e-4);
        assert_eq!(mic_radius_from_d(0.0, deg(72.0)), 0.0);
        assert_eq!(d_from_mic_radius(0.0, deg(72.0)), 0.0);
    }

    #[test]
    fn central_pose_recovers_loudspeaker_frame() {
        let setup = StereoSetup::new(deg(60.0), 2.0).unwrap();
        let (l, r) = loudspeaker_positions(&setup);
        let pose = ListenerPose::default();
        let pl = source_relative_to_listener(l, &pose).unwrap();
        let pr = source_relative_to_listener(r, &pose).unwrap();
        assert_abs_diff_eq!(pl.azimuth, deg(30.0), epsilon = 1e-15);
        assert_abs_diff_eq!(pr.azimuth, -deg(30.0), epsilon = 1e-15);
        assert_abs_diff_eq!(pl.distance, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pr.distance, 2.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn relative_deltas_are_odd_in_x(x in -0.5f64..0.5, ictd in -1e-3f64..1e-3, icld in -20f64..20.0) {
            let setup = StereoSetup::default();
            let p = PanningPoint::new(ictd, icld);
            for method in [RelativeMethod::PrintedApproximation, RelativeMethod::ExactPath] {
                let a = relative_panning(p, &ListenerPose::at(x, 0.0), &setup, method);
                let b = relative_panning(p, &ListenerPose::at(-x, 0.0), &setup, method);
                prop_assert!(((a.rictd - ictd) + (b.rictd - ictd)).abs() < 1e-15);
                prop_assert!(((a.ricld - icld) + (b.ricld - icld)).abs() < 1e-10);
            }
        }

        #[test]
        fn exact_and_printed_rictd_agree_near_centre(x in -0.3f64..0.3) {
            let setup = StereoSetup::default();
            let pose = ListenerPose::at(x, 0.0);
            let a = relative_panning(PanningPoint::default(), &pose, &setup, RelativeMethod::PrintedApproximation);
            let b = relative_panning(PanningPoint::default(), &pose, &setup, RelativeMethod::ExactPath);
            if x.abs() > 1e-6 {
                prop_assert!(((a.rictd - b.rictd) / a.rictd).abs() < 0.01);
            }
        }

        #[test]
        fn tau_overlap_linear_in_head_radius(rh in 0.01f64..0.2) {
            let a = tau_overlap(rh, deg(100.0), deg(60.0), SPEED_OF_SOUND);
            let b = tau_overlap(2.0 * rh, deg(100.0), deg(60.0), SPEED_OF_SOUND);
            prop_assert!((b - 2.0 * a).abs() < 1e-18);
        }
    }
}
