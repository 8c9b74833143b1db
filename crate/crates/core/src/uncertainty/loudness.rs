//! Loudness-based band weights from the ISO 226:2003 equal-loudness contours.

use crate::error::{Error, Result};

/// Default broadband level at the listener, dB SPL.
pub const DEFAULT_CALIBRATION_SPL: f64 = 70.0;

const FREQS: [f64; 29] = [
    20.0, 25.0, 31.5, 40.0, 50.0, 63.0, 80.0, 100.0, 125.0, 160.0, 200.0, 250.0, 315.0, 400.0,
    500.0, 630.0, 800.0, 1000.0, 1250.0, 1600.0, 2000.0, 2500.0, 3150.0, 4000.0, 5000.0, 6300.0,
    8000.0, 10000.0, 12500.0,
];
const ALPHA_F: [f64; 29] = [
    0.532, 0.506, 0.480, 0.455, 0.432, 0.409, 0.387, 0.367, 0.349, 0.330, 0.315, 0.301, 0.288,
    0.276, 0.267, 0.259, 0.253, 0.250, 0.246, 0.244, 0.243, 0.243, 0.243, 0.242, 0.242, 0.245,
    0.254, 0.271, 0.301,
];
const L_U: [f64; 29] = [
    -31.6, -27.2, -23.0, -19.1, -15.9, -13.0, -10.3, -8.1, -6.2, -4.5, -3.1, -2.0, -1.1, -0.4,
    0.0, 0.3, 0.5, 0.0, -2.7, -4.1, -1.0, 1.7, 2.5, 1.2, -2.1, -7.1, -11.2, -10.7, -3.1,
];
const T_F: [f64; 29] = [
    78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9, 14.4, 11.4, 8.6, 6.2, 4.4, 3.0,
    2.2, 2.4, 3.5, 1.7, -1.3, -4.2, -6.0, -5.4, -1.5, 6.0, 12.6, 13.9, 12.3,
];

/// Contour parameters `(alpha_f, L_U, T_f)` at `f`, interpolated linearly in
/// log-frequency and held constant outside the tabulated range.
fn contour_parameters(f: f64) -> (f64, f64, f64) {
    if f <= FREQS[0] {
        return (ALPHA_F[0], L_U[0], T_F[0]);
    }
    let last = FREQS.len() - 1;
    if f >= FREQS[last] {
        return (ALPHA_F[last], L_U[last], T_F[last]);
    }
    let k = FREQS.partition_point(|&x| x <= f) - 1;
    let t = (f / FREQS[k]).ln() / (FREQS[k + 1] / FREQS[k]).ln();
    let lerp = |a: &[f64; 29]| a[k] + t * (a[k + 1] - a[k]);
    (lerp(&ALPHA_F), lerp(&L_U), lerp(&T_F))
}

/// Loudness level in phon of a pure tone at `f` hertz and `spl` dB SPL.
/// Returns `None` below the hearing threshold.
pub fn phon_from_spl(f: f64, spl: f64) -> Option<f64> {
    let (af, lu, tf) = contour_parameters(f);
    let b = (0.4 * 10f64.powf((spl + lu) / 10.0 - 9.0)).powf(af)
        - (0.4 * 10f64.powf((tf + lu) / 10.0 - 9.0)).powf(af)
        + 0.005135;
    if b <= 0.0 {
        return None;
    }
    let phon = 40.0 * b.log10() + 94.0;
    (phon >= 0.0).then_some(phon)
}

/// `w_i = 2^((phon_i - max phon) / 10)`; `None` entries get weight 0.
pub fn weights_from_phons(phons: &[Option<f64>]) -> Result<Vec<f64>> {
    let loudest = phons
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !loudest.is_finite() {
        return Err(Error::SilentInput);
    }
    Ok(phons
        .iter()
        .map(|p| p.map_or(0.0, |p| 2f64.powf((p - loudest) / 10.0)))
        .collect())
}

/// Band weights from band energies. The total energy is mapped to
/// `calibration_spl`; each band's SPL follows from its energy fraction.
/// Bands with `None` energy (silent or excluded) get weight 0.
pub fn loudness_weights(
    energies: &[Option<f64>],
    center_hz: &[f64],
    calibration_spl: f64,
) -> Result<Vec<f64>> {
    if energies.len() != center_hz.len() {
        return Err(Error::InvalidParameter("energy and frequency lists differ in length".into()));
    }
    if energies.iter().flatten().any(|&e| !(e >= 0.0) || !e.is_finite()) {
        return Err(Error::InvalidParameter("band energies must be finite and >= 0".into()));
    }
    let total: f64 = energies.iter().flatten().sum();
    if !(total > 0.0) {
        return Err(Error::SilentInput);
    }
    let phons: Vec<Option<f64>> = energies
        .iter()
        .zip(center_hz)
        .map(|(e, &f)| {
            e.filter(|&e| e > 0.0)
                .and_then(|e| phon_from_spl(f, calibration_spl + 10.0 * (e / total).log10()))
        })
        .collect();
    weights_from_phons(&phons)
}
