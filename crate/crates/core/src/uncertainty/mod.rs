//! Localization-uncertainty model: cue normalisation, per-direction
//! distance, likelihood over azimuth and its circular variance.

mod dictionary;
mod loudness;

pub use dictionary::{
    build_dictionary, default_theta_grid_deg, self_scores, DictionaryBand, DictionaryConfig,
    FreeFieldDictionary, Provenance, DICTIONARY_VERSION,
};
pub use loudness::{
    loudness_weights, phon_from_spl, weights_from_phons, DEFAULT_CALIBRATION_SPL,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontend::{binaural_cues, CueSet, Filterbank};
use crate::render::EarSignals;

/// Default distance exponent.
pub const DEFAULT_P: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelOptions {
    pub p: f64,
    pub calibration_spl: f64,
    /// When false every valid band gets weight 1.
    pub loudness_weighting: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            p: DEFAULT_P,
            calibration_spl: DEFAULT_CALIBRATION_SPL,
            loudness_weighting: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedCues {
    pub itd_bar: Vec<f64>,
    pub ild_bar: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodFunction {
    pub theta_grid_deg: Vec<f64>,
    pub values: Vec<f64>,
}

impl LikelihoodFunction {
    /// Grid angle of the largest value (first one on ties).
    pub fn argmax_deg(&self) -> f64 {
        let k = self
            .values
            .iter()
            .enumerate()
            .fold(0, |best, (k, &v)| if v > self.values[best] { k } else { best });
        self.theta_grid_deg[k]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyResult {
    pub h: f64,
    pub h_bar: f64,
    pub likelihood: LikelihoodFunction,
    pub p_used: f64,
}

fn check_bands(cues: &CueSet, dict: &FreeFieldDictionary) -> Result<()> {
    if cues.len() != dict.bands.len() {
        return Err(Error::DictionaryMismatch(format!(
            "{} cue bands vs {} dictionary bands",
            cues.len(),
            dict.bands.len()
        )));
    }
    for (c, d) in cues.bands.iter().zip(&dict.bands) {
        if (c.center_hz - d.center_hz).abs() > 1e-6 * d.center_hz {
            return Err(Error::DictionaryMismatch(format!(
                "band centre {} Hz vs dictionary {} Hz",
                c.center_hz, d.center_hz
            )));
        }
    }
    Ok(())
}

/// Divides cues by the dictionary's per-band maxima (no clamping) and
/// attaches band weights.
pub fn normalize_cues(cues: &CueSet, dict: &FreeFieldDictionary, opts: &ModelOptions) -> Result<NormalizedCues> {
    check_bands(cues, dict)?;
    for (i, d) in dict.bands.iter().enumerate() {
        if !(d.max_abs_fitd > 0.0 && d.max_abs_fild > 0.0) {
            return Err(Error::DegenerateDictionaryBand {
                band: i,
                center_hz: d.center_hz,
            });
        }
    }
    let weights = if opts.loudness_weighting {
        let energies: Vec<Option<f64>> =
            cues.bands.iter().map(|b| b.valid.then_some(b.energy)).collect();
        loudness_weights(&energies, &dict.center_frequencies(), opts.calibration_spl)?
    } else {
        cues.bands.iter().map(|b| if b.valid { 1.0 } else { 0.0 }).collect()
    };
    if !(weights.iter().sum::<f64>() > 0.0) {
        return Err(Error::SilentInput);
    }
    Ok(NormalizedCues {
        itd_bar: cues.bands.iter().zip(&dict.bands).map(|(c, d)| c.itd / d.max_abs_fitd).collect(),
        ild_bar: cues.bands.iter().zip(&dict.bands).map(|(c, d)| c.ild / d.max_abs_fild).collect(),
        weights,
    })
}

/// `|a|^p + |b|^p`.
pub fn xi(d_itd: f64, d_ild: f64, p: f64) -> f64 {
    d_itd.abs().powf(p) + d_ild.abs().powf(p)
}

/// Per-band distances to the dictionary entry at grid index `k`.
pub fn xi_distance(nc: &NormalizedCues, dict: &FreeFieldDictionary, k: usize, p: f64) -> Vec<f64> {
    dict.bands
        .iter()
        .enumerate()
        .map(|(i, b)| {
            xi(
                nc.itd_bar[i] - b.fitd_s[k] / b.max_abs_fitd,
                nc.ild_bar[i] - b.fild_db[k] / b.max_abs_fild,
                p,
            )
        })
        .collect()
}

/// Unit-mass likelihood from normalised cues and normalised dictionary
/// tables (`fitd[i][k]`: band `i`, grid index `k`).
pub fn likelihood_from_arrays(
    itd_bar: &[f64],
    ild_bar: &[f64],
    weights: &[f64],
    fitd: &[Vec<f64>],
    fild: &[Vec<f64>],
    p: f64,
) -> Vec<f64> {
    let n_theta = fitd.first().map_or(0, Vec::len);
    let mut f = vec![0.0; n_theta];
    for i in 0..itd_bar.len() {
        if weights[i] == 0.0 {
            continue;
        }
        for (k, v) in f.iter_mut().enumerate() {
            *v += weights[i] * (-xi(itd_bar[i] - fitd[i][k], ild_bar[i] - fild[i][k], p)).exp();
        }
    }
    let total: f64 = f.iter().sum();
    if total > 0.0 {
        f.iter_mut().for_each(|v| *v /= total);
    }
    f
}

pub fn likelihood(nc: &NormalizedCues, dict: &FreeFieldDictionary, p: f64) -> Result<LikelihoodFunction> {
    let fitd: Vec<Vec<f64>> = dict.bands.iter().map(DictionaryBand::normalized_fitd).collect();
    let fild: Vec<Vec<f64>> = dict.bands.iter().map(DictionaryBand::normalized_fild).collect();
    let values = likelihood_from_arrays(&nc.itd_bar, &nc.ild_bar, &nc.weights, &fitd, &fild, p);
    let total: f64 = values.iter().sum();
    if !((total - 1.0).abs() < 1e-9) {
        return Err(Error::Numerical("likelihood has no mass".into()));
    }
    Ok(LikelihoodFunction {
        theta_grid_deg: dict.theta_grid_deg.clone(),
        values,
    })
}

/// `1 - |sum_k f_k exp(2 j theta_k)|` for unit-mass `f` on `theta` (radians).
pub fn circular_variance(f: &[f64], theta: &[f64]) -> f64 {
    let (mut c, mut s) = (0.0, 0.0);
    for (&v, &t) in f.iter().zip(theta) {
        let (sn, cs) = (2.0 * t).sin_cos();
        c += v * cs;
        s += v * sn;
    }
    (1.0 - c.hypot(s)).clamp(0.0, 1.0)
}

/// Normalised uncertainty `(h - h_min) / (1 - h_min)`.
pub fn normalized_uncertainty(h: f64, h_min: f64) -> f64 {
    (h - h_min) / (1.0 - h_min)
}

/// Scores a cue set against the dictionary.
pub fn score_cues(cues: &CueSet, dict: &FreeFieldDictionary, opts: &ModelOptions) -> Result<UncertaintyResult> {
    if (opts.p - dict.p).abs() > 1e-12 {
        return Err(Error::DictionaryMismatch(format!(
            "model exponent p = {} differs from the dictionary's p = {}",
            opts.p, dict.p
        )));
    }
    let nc = normalize_cues(cues, dict, opts)?;
    let f = likelihood(&nc, dict, opts.p)?;
    let h = circular_variance(&f.values, &dict.theta_grid());
    Ok(UncertaintyResult {
        h,
        h_bar: normalized_uncertainty(h, dict.h_min),
        likelihood: f,
        p_used: opts.p,
    })
}

/// Full pipeline from ear signals to the normalised uncertainty.
pub fn localization_uncertainty(
    ears: &EarSignals,
    dict: &FreeFieldDictionary,
    bank: &Filterbank,
    opts: &ModelOptions,
) -> Result<UncertaintyResult> {
    let cues = binaural_cues(ears, bank)?;
    score_cues(&cues, dict, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Vec<f64> {
        default_theta_grid_deg().iter().map(|d| d.to_radians()).collect()
    }

    #[test]
    fn xi_arithmetic() {
        assert_abs_diff_eq!(xi(0.3, -0.4, 2.0), 0.25, epsilon = 1e-15);
        assert_eq!(xi(0.0, 0.0, 0.7), 0.0);
    }

    #[test]
    fn point_mass_has_zero_variance() {
        let mut f = vec![0.0; 37];
        f[11] = 1.0;
        assert_abs_diff_eq!(circular_variance(&f, &grid()), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_mass_is_near_one() {
        let f = vec![1.0 / 37.0; 37];
        let h = circular_variance(&f, &grid());
        // both grid ends double onto the same point; closed form 1 - 1/37
        assert_abs_diff_eq!(h, 1.0 - 1.0 / 37.0, epsilon = 1e-12);
    }

    #[test]
    fn opposite_masses_cancel() {
        let mut f = vec![0.0; 37];
        f[9] = 0.5; // -45
        f[27] = 0.5; // +45
        assert_abs_diff_eq!(circular_variance(&f, &grid()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_distance_gives_uniform_likelihood() {
        let flat = vec![vec![0.2; 37]];
        let f = likelihood_from_arrays(&[0.2], &[0.2], &[1.0], &flat, &flat, 0.7);
        for v in f {
            assert_abs_diff_eq!(v, 1.0 / 37.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn normalized_uncertainty_is_affine() {
        assert_eq!(normalized_uncertainty(0.5, 0.5), 0.0);
        assert_eq!(normalized_uncertainty(1.0, 0.5), 1.0);
    }
}
