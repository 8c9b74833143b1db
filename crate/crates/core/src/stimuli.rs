//! Deterministic test signals.
//!
//! Noise is drawn from ChaCha8 (RFC 7539 block function, 8 rounds) seeded
//! with the 64-bit seed in little-endian order in the first eight key bytes
//! and zeros elsewhere. Each normal deviate pair comes from the Box-Muller
//! transform of two consecutive 64-bit outputs `a`, `b`:
//! `u1 = ((a >> 11) + 1) * 2^-53`, `u2 = (b >> 11) * 2^-53`,
//! `z0 = sqrt(-2 ln u1) cos(2 pi u2)`, `z1 = sqrt(-2 ln u1) sin(2 pi u2)`.
//! Any implementation of those two pieces reproduces the buffers exactly up
//! to libm rounding.

use std::f64::consts::PI;
use std::path::Path;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE: f64 = 44_100.0;
pub const DEFAULT_TAPER: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StimulusKind {
    WhiteNoise,
    PinkNoise,
    Impulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Stimulus {
    pub kind: StimulusKind,
    /// Seconds. For impulses this only fixes the buffer length.
    pub duration: f64,
    pub taper_fraction: f64,
    pub seed: u64,
    pub sample_rate: f64,
}

impl Stimulus {
    pub fn white(duration: f64, seed: u64) -> Self {
        Self {
            kind: StimulusKind::WhiteNoise,
            duration,
            taper_fraction: DEFAULT_TAPER,
            seed,
            sample_rate: DEFAULT_SAMPLE_RATE,
        }
    }

    pub fn pink(duration: f64, seed: u64) -> Self {
        Self {
            kind: StimulusKind::PinkNoise,
            ..Self::white(duration, seed)
        }
    }

    pub fn impulse(duration: f64) -> Self {
        Self {
            kind: StimulusKind::Impulse,
            taper_fraction: 0.0,
            ..Self::white(duration, 0)
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn sample_count(&self) -> usize {
        (self.duration * self.sample_rate).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "stimulus duration must be positive, got {}",
                self.duration
            )));
        }
        if !(self.sample_rate > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {}",
                self.sample_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.taper_fraction) {
            return Err(Error::InvalidParameter(format!(
                "taper fraction must lie in [0, 1], got {}",
                self.taper_fraction
            )));
        }
        if self.sample_count() < 2 {
            return Err(Error::InvalidParameter(
                "stimulus shorter than two samples".into(),
            ));
        }
        Ok(())
    }
}

impl Default for Stimulus {
    /// 50 ms white noise burst.
    fn default() -> Self {
        Self::white(0.05, 1)
    }
}

/// Seedable standard-normal generator (see module docs for the algorithm).
pub struct GaussianNoise {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianNoise {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Self {
            rng: ChaCha8Rng::from_seed(key),
            spare: None,
        }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let u2 = (self.rng.next_u64() >> 11) as f64 * SCALE;
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }

    pub fn fill(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_normal()).collect()
    }
}

/// Cosine-tapered rectangular window; `taper = 1` is a Hann window and
/// `taper = 0` is rectangular.
pub fn tukey_window(n: usize, taper: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "window length must be at least 2, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&taper) {
        return Err(Error::InvalidParameter(format!(
            "taper must lie in [0, 1], got {taper}"
        )));
    }
    if taper == 0.0 {
        return Ok(vec![1.0; n]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            // fold onto the first half so the window is exactly symmetric
            let x = (i.min(n - 1 - i)) as f64 / last;
            if x < 0.5 * taper {
                0.5 * (1.0 - (2.0 * PI * x / taper).cos())
            } else {
                1.0
            }
        })
        .collect())
}

pub fn generate(stimulus: &Stimulus) -> Result<Vec<f64>> {
    stimulus.validate()?;
    let n = stimulus.sample_count();
    let mut buf = match stimulus.kind {
        StimulusKind::Impulse => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            return Ok(v);
        }
        StimulusKind::WhiteNoise => GaussianNoise::new(stimulus.seed).fill(n),
        StimulusKind::PinkNoise => pink_noise(n, stimulus.seed),
    };
    let window = tukey_window(n, stimulus.taper_fraction)?;
    buf.iter_mut().zip(&window).for_each(|(s, w)| *s *= w);
    Ok(buf)
}

/// White noise shaped by `1/sqrt(f)` in the frequency domain (DC removed),
/// rescaled to unit variance.
fn pink_noise(n: usize, seed: u64) -> Vec<f64> {
    let white = GaussianNoise::new(seed).fill(n);
    let mut spec: Vec<Complex64> = white.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut spec);
    spec[0] = Complex64::new(0.0, 0.0);
    for (k, bin) in spec.iter_mut().enumerate().skip(1) {
        // bin k and its mirror n-k share the same |f|
        let freq_index = k.min(n - k) as f64;
        *bin /= freq_index.sqrt();
    }
    planner.plan_fft_inverse(n).process(&mut spec);
    let mut out: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let mean = out.iter().sum::<f64>() / n as f64;
    let var = out.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    let scale = if var > 0.0 { 1.0 / var.sqrt() } else { 0.0 };
    out.iter_mut().for_each(|x| *x = (*x - mean) * scale);
    out
}

/// Writes little-endian IEEE float32 WAV with one channel per slice.
pub fn write_wav_f32(path: &Path, channels: &[&[f64]], sample_rate: f64) -> Result<()> {
    if channels.is_empty() {
        return Err(Error::InvalidParameter("no channels to write".into()));
    }
    let frames = channels[0].len();
    if channels.iter().any(|c| c.len() != frames) {
        return Err(Error::InvalidParameter(
            "WAV channels must have equal length".into(),
        ));
    }
    let n_channels = channels.len() as u16;
    let rate = sample_rate.round() as u32;
    let block_align = 4 * n_channels;
    let data_len = frames as u32 * block_align as u32;

    let mut bytes = Vec::with_capacity(44 + data_len as usize);
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36 + data_len).to_le_bytes());
    bytes.extend_from_slice(b"WAVEfmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes());
    bytes.extend_from_slice(&3u16.to_le_bytes()); // IEEE float
    bytes.extend_from_slice(&n_channels.to_le_bytes());
    bytes.extend_from_slice(&rate.to_le_bytes());
    bytes.extend_from_slice(&(rate * block_align as u32).to_le_bytes());
    bytes.extend_from_slice(&block_align.to_le_bytes());
    bytes.extend_from_slice(&32u16.to_le_bytes());
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&data_len.to_le_bytes());
    for i in 0..frames {
        for ch in channels {
            bytes.extend_from_slice(&(ch[i] as f32).to_le_bytes());
        }
    }
    crate::io::write_atomic(path, &bytes)
}
