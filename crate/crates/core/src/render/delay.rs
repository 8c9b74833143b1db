//! Fractional delay by windowed-sinc interpolation.

use serde::{Deserialize, Serialize};

/// Number of taps of the interpolation kernel.
pub const KERNEL_TAPS: usize = 31;
/// Taps on each side of the kernel centre.
pub const KERNEL_HALF: usize = KERNEL_TAPS / 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayMode {
    /// 31-tap Blackman-windowed sinc, normalised to unit DC gain.
    #[default]
    WindowedSinc,
    /// Round to the nearest whole sample (debugging aid).
    NearestSample,
}

/// Sparse impulse response of a pure delay: `taps[k]` sits at sample
/// `start + k`. `start` may be negative for small fractional delays (the
/// kernel's pre-ringing precedes the nominal arrival).
#[derive(Debug, Clone, PartialEq)]
pub struct DelayImpulse {
    pub start: isize,
    pub taps: Vec<f64>,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

fn blackman(u: f64) -> f64 {
    let m = (KERNEL_HALF + 1) as f64;
    if u.abs() >= m {
        return 0.0;
    }
    let a = std::f64::consts::PI * u / m;
    0.42 + 0.5 * a.cos() + 0.08 * (2.0 * a).cos()
}

/// Delay of `delay` samples (must be finite and `>= 0`).
pub fn delay_impulse(delay: f64, mode: DelayMode) -> DelayImpulse {
    debug_assert!(delay.is_finite() && delay >= 0.0);
    if mode == DelayMode::NearestSample {
        return DelayImpulse {
            start: delay.round() as isize,
            taps: vec![1.0],
        };
    }
    let whole = delay.floor();
    let frac = delay - whole;
    const SNAP: f64 = 1e-9;
    if !(SNAP..=1.0 - SNAP).contains(&frac) {
        return DelayImpulse {
            start: delay.round() as isize,
            taps: vec![1.0],
        };
    }
    let half = KERNEL_HALF as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|t| {
            let u = t as f64 - frac;
            sinc(u) * blackman(u)
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    DelayImpulse {
        start: whole as isize - half,
        taps,
    }
}

/// Full linear convolution.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    accumulate_convolution(&mut out, 0, a, b);
    out
}

/// Adds `a * b` (full convolution) into `out` starting at `offset`.
pub(crate) fn accumulate_convolution(out: &mut [f64], offset: usize, a: &[f64], b: &[f64]) {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    for (k, &h) in short.iter().enumerate() {
        if h == 0.0 {
            continue;
        }
        let dst = &mut out[offset + k..offset + k + long.len()];
        for (o, &x) in dst.iter_mut().zip(long) {
            *o += h * x;
        }
    }
}
