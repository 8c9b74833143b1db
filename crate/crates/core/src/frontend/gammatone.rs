//! Fourth-order gammatone filters realised as four cascaded biquads
//! (Slaney's efficient implementation), plus the ERB frequency scale.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

const EAR_Q: f64 = 9.26449;
const MIN_BW: f64 = 24.7;

/// ERB-number (Cams) of a frequency in hertz.
pub fn erb_number(f: f64) -> f64 {
    21.4 * (1.0 + 0.00437 * f).log10()
}

/// Inverse of [`erb_number`].
pub fn erb_number_to_hz(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) / 0.00437
}

/// Equivalent rectangular bandwidth at `f`, hertz.
pub fn erb_bandwidth(f: f64) -> f64 {
    f / EAR_Q + MIN_BW
}

/// `n` centre frequencies equally spaced in ERB-number between the edges.
pub fn erb_space(f_low: f64, f_high: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (erb_number(f_low), erb_number(f_high));
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| match k {
            0 => f_low,
            k if k == n - 1 => f_high,
            k => erb_number_to_hz(lo + step * k as f64),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Biquad {
    b: [f64; 3],
    a1: f64,
    a2: f64,
}

impl Biquad {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let num = self.b[0] + z_inv * (self.b[1] + z_inv * self.b[2]);
        let den = 1.0 + z_inv * (self.a1 + z_inv * self.a2);
        num / den
    }

    fn run(&self, x: &mut [f64]) {
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        for v in x.iter_mut() {
            let y = self.b[0] * *v + self.b[1] * x1 + self.b[2] * x2 - self.a1 * y1 - self.a2 * y2;
            x2 = x1;
            x1 = *v;
            y2 = y1;
            y1 = y;
            *v = y;
        }
    }
}

/// One gammatone channel with unity gain at its centre frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Gammatone {
    center_hz: f64,
    sections: [Biquad; 4],
}

impl Gammatone {
    pub fn new(center_hz: f64, sample_rate: f64) -> Result<Self> {
        if !(center_hz > 0.0 && center_hz < 0.5 * sample_rate) {
            return Err(Error::InvalidParameter(format!(
                "centre frequency {center_hz} Hz must lie in (0, {}) Hz",
                0.5 * sample_rate
            )));
        }
        let t = 1.0 / sample_rate;
        let bw = 1.019 * 2.0 * PI * erb_bandwidth(center_hz);
        let arg = 2.0 * PI * center_hz * t;
        let (s, c) = arg.sin_cos();
        let decay = (bw * t).exp();
        let a1 = -2.0 * c / decay;
        let a2 = (-2.0 * bw * t).exp();
        let r_plus = (3.0 + 2f64.powf(1.5)).sqrt();
        let r_minus = (3.0 - 2f64.powf(1.5)).sqrt();
        let section = |sign: f64, r: f64| Biquad {
            b: [t, -(t * c + sign * r * t * s) / decay, 0.0],
            a1,
            a2,
        };
        let mut sections = [
            section(1.0, r_plus),
            section(-1.0, r_plus),
            section(1.0, r_minus),
            section(-1.0, r_minus),
        ];
        let z_inv = Complex64::from_polar(1.0, -arg);
        let gain: f64 = sections.iter().map(|q| q.response(z_inv).norm()).product();
        // spread the normalisation evenly over the cascade
        let per_section = gain.powf(0.25);
        for q in &mut sections {
            q.b.iter_mut().for_each(|b| *b /= per_section);
        }
        Ok(Self {
            center_hz,
            sections,
        })
    }

    pub fn center_hz(&self) -> f64 {
        self.center_hz
    }

    /// Magnitude response at `f` hertz.
    pub fn magnitude(&self, f: f64, sample_rate: f64) -> f64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * f / sample_rate);
        self.sections.iter().map(|q| q.response(z_inv).norm()).product()
    }

    pub fn filter(&self, signal: &[f64]) -> Vec<f64> {
        let mut out = signal.to_vec();
        for q in &self.sections {
            q.run(&mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const FS: f64 = 44100.0;

    fn tone_gain_db(g: &Gammatone, f: f64) -> f64 {
        let n = 8820;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * PI * f * i as f64 / FS).sin()).collect();
        let y = g.filter(&x);
        let tail = &y[n / 2..];
        let rms_out = (tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64).sqrt();
        20.0 * (rms_out * 2f64.sqrt()).log10()
    }

    #[test]
    fn erb_grid_endpoints_and_spacing() {
        let f = erb_space(60.0, 15000.0, 24);
        assert_eq!(f[0], 60.0);
        assert_eq!(f[23], 15000.0);
        let steps: Vec<f64> = f.windows(2).map(|w| erb_number(w[1]) - erb_number(w[0])).collect();
        for s in &steps {
            assert_abs_diff_eq!(*s, steps[0], epsilon = 1e-9);
        }
        assert!(f.iter().any(|&c| (c - 6070.0).abs() <= 400.0));
    }

    #[test]
    fn erb_number_inverse() {
        for f in [60.0, 440.0, 6070.0, 15000.0] {
            assert_abs_diff_eq!(erb_number_to_hz(erb_number(f)), f, epsilon = 1e-9);
        }
    }

    #[test]
    fn unity_gain_at_centre() {
        for cf in [60.0, 1000.0, 6200.0, 15000.0] {
            let g = Gammatone::new(cf, FS).unwrap();
            assert_abs_diff_eq!(g.magnitude(cf, FS), 1.0, epsilon = 1e-12);
            assert!(tone_gain_db(&g, cf).abs() < 0.5, "cf {cf}");
        }
    }

    #[test]
    fn octave_above_is_strongly_attenuated() {
        let g = Gammatone::new(1000.0, FS).unwrap();
        assert!(tone_gain_db(&g, 2000.0) < -20.0);
    }

    #[test]
    fn zero_in_zero_out_and_nyquist_guard() {
        let g = Gammatone::new(500.0, FS).unwrap();
        assert!(g.filter(&[0.0; 64]).iter().all(|&v| v == 0.0));
        assert!(Gammatone::new(22050.0, FS).is_err());
    }
}
