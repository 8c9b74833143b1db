//! Binaural rendering of point sources through an HRIR set.

mod delay;
mod hrir;

pub use delay::{convolve, delay_impulse, DelayImpulse, DelayMode, KERNEL_HALF, KERNEL_TAPS};
pub use hrir::{
    default_analytic_set, full_circle_grid, load_hrir_set, spherical_head_hrirs, HrirEntry,
    HrirSet, SphericalHead, ANALYTIC_IR_LEN,
};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    loudspeaker_positions, source_relative_to_listener, ListenerPose, PanningPoint,
    SourcePlacement, StereoSetup, SPEED_OF_SOUND,
};

/// Largest |ICTD| accepted when building a loudspeaker pair, seconds.
pub const MAX_PAIR_ICTD: f64 = 2e-3;

/// One point source feeding the renderer.
#[derive(Debug, Clone, Copy)]
pub struct RenderSource<'a> {
    pub signal: &'a [f64],
    /// Linear amplitude.
    pub gain: f64,
    /// Extra feed delay in seconds, on top of propagation.
    pub delay: f64,
    pub placement: SourcePlacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub sample_rate: f64,
    pub speed_of_sound: f64,
    pub delay_mode: DelayMode,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            sample_rate: crate::stimuli::DEFAULT_SAMPLE_RATE,
            speed_of_sound: SPEED_OF_SOUND,
            delay_mode: DelayMode::WindowedSinc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EarSignals {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub sample_rate: f64,
    /// Samples of pre-ringing prepended ahead of the earliest arrival.
    pub latency: usize,
}

impl EarSignals {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Same signals with the ears exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
            ..*self
        }
    }

    pub fn write_wav(&self, path: &Path) -> Result<()> {
        crate::stimuli::write_wav_f32(path, &[&self.left, &self.right], self.sample_rate)
    }
}

/// Renders `sources` to the two ears.
///
/// Each source is scaled by `gain / distance` (unity at 1 m), delayed by its
/// feed delay plus its propagation time, and convolved with the HRIR pair
/// nearest to its azimuth. The propagation time common to all sources (the
/// shortest one) is dropped so that output length does not grow with
/// loudspeaker distance; only relative arrival times matter downstream.
pub fn render(sources: &[RenderSource<'_>], hrirs: &HrirSet, opts: &RenderOptions) -> Result<EarSignals> {
    if sources.is_empty() {
        return Err(Error::InvalidParameter("render needs at least one source".into()));
    }
    if (hrirs.sample_rate() - opts.sample_rate).abs() > 1e-9 {
        return Err(Error::SampleRateMismatch {
            expected: opts.sample_rate,
            found: hrirs.sample_rate(),
        });
    }
    for s in sources {
        if !(s.delay >= 0.0 && s.delay.is_finite()) {
            return Err(Error::InvalidParameter(format!("source delay must be >= 0, got {}", s.delay)));
        }
        if !(s.placement.distance > 0.0) {
            return Err(Error::ZeroDistance);
        }
        if !s.gain.is_finite() {
            return Err(Error::InvalidParameter("source gain must be finite".into()));
        }
    }
    let bulk = sources
        .iter()
        .map(|s| s.placement.distance / opts.speed_of_sound)
        .fold(f64::INFINITY, f64::min);

    struct Prepared<'a> {
        signal: &'a [f64],
        left: Vec<f64>,
        right: Vec<f64>,
        start: isize,
    }

    let mut prepared = Vec::with_capacity(sources.len());
    for s in sources {
        let entry = hrirs.nearest(s.placement.azimuth)?;
        let delay_samples =
            (s.delay + s.placement.distance / opts.speed_of_sound - bulk) * opts.sample_rate;
        let imp = delay_impulse(delay_samples.max(0.0), opts.delay_mode);
        let amp = s.gain / s.placement.distance;
        let taps: Vec<f64> = imp.taps.iter().map(|t| t * amp).collect();
        prepared.push(Prepared {
            signal: s.signal,
            left: convolve(&taps, &entry.left),
            right: convolve(&taps, &entry.right),
            start: imp.start,
        });
    }

    let latency = prepared.iter().map(|p| (-p.start).max(0)).max().unwrap_or(0) as usize;
    let len = prepared
        .iter()
        .map(|p| {
            if p.signal.is_empty() {
                0
            } else {
                (p.start + latency as isize) as usize + p.signal.len() + p.left.len() - 1
            }
        })
        .max()
        .unwrap_or(0);
    let mut left = vec![0.0; len];
    let mut right = vec![0.0; len];
    for p in &prepared {
        if p.signal.is_empty() {
            continue;
        }
        let offset = (p.start + latency as isize) as usize;
        delay::accumulate_convolution(&mut left, offset, p.signal, &p.left);
        delay::accumulate_convolution(&mut right, offset, p.signal, &p.right);
    }
    Ok(EarSignals {
        left,
        right,
        sample_rate: opts.sample_rate,
        latency,
    })
}

/// Loudspeaker feeds `(g, tau)` for a panning point: `g_L / g_R = 10^(icld/20)`
/// with `g_L^2 + g_R^2 = 1`, and `tau_R - tau_L = ictd` with the earlier
/// channel undelayed.
pub fn pair_gains_and_delays(point: PanningPoint) -> Result<((f64, f64), (f64, f64))> {
    if !point.ictd.is_finite() || point.ictd.abs() > MAX_PAIR_ICTD {
        return Err(Error::InvalidParameter(format!(
            "|ICTD| must not exceed {} ms, got {} ms",
            MAX_PAIR_ICTD * 1e3,
            point.ictd * 1e3
        )));
    }
    if !point.icld.is_finite() {
        return Err(Error::InvalidParameter("ICLD must be finite".into()));
    }
    let ratio = 10f64.powf(point.icld / 20.0);
    let g_r = 1.0 / (1.0 + ratio * ratio).sqrt();
    let g_l = ratio * g_r;
    let tau_l = (-point.ictd).max(0.0);
    let tau_r = point.ictd.max(0.0);
    Ok(((g_l, g_r), (tau_l, tau_r)))
}

/// The two loudspeaker sources (left first) reproducing `point` for a
/// listener at `pose`, both fed with `signal`.
pub fn stereo_pair_sources<'a>(
    signal: &'a [f64],
    point: PanningPoint,
    setup: &StereoSetup,
    pose: &ListenerPose,
) -> Result<[RenderSource<'a>; 2]> {
    let ((g_l, g_r), (tau_l, tau_r)) = pair_gains_and_delays(point)?;
    let (spk_l, spk_r) = loudspeaker_positions(setup);
    Ok([
        RenderSource {
            signal,
            gain: g_l,
            delay: tau_l,
            placement: source_relative_to_listener(spk_l, pose)?,
        },
        RenderSource {
            signal,
            gain: g_r,
            delay: tau_r,
            placement: source_relative_to_listener(spk_r, pose)?,
        },
    ])
}

/// A single source at `placement` with unit gain and no feed delay.
pub fn free_field_source(signal: &[f64], placement: SourcePlacement) -> RenderSource<'_> {
    RenderSource {
        signal,
        gain: 1.0,
        delay: 0.0,
        placement,
    }
}
