//! Peripheral hearing: gammatone analysis, hair-cell transduction and
//! per-band interaural cue extraction.

mod gammatone;

pub use gammatone::{erb_bandwidth, erb_number, erb_number_to_hz, erb_space, Gammatone};

use std::cell::RefCell;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::EarSignals;

/// Bands at or above this centre frequency are envelope-detected.
pub const ENVELOPE_CUTOFF_HZ: f64 = 1500.0;
/// Half-width of the interaural cross-correlation window, seconds.
pub const MAX_ITD: f64 = 0.7e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterbankSpec {
    pub n_bands: usize,
    pub f_low: f64,
    pub f_high: f64,
    pub order: usize,
    pub sample_rate: f64,
    /// Sub-sample ITD by parabolic interpolation of the correlation peak.
    pub parabolic_itd: bool,
}

impl Default for FilterbankSpec {
    fn default() -> Self {
        Self {
            n_bands: 24,
            f_low: 60.0,
            f_high: 15000.0,
            order: 4,
            sample_rate: crate::stimuli::DEFAULT_SAMPLE_RATE,
            parabolic_itd: false,
        }
    }
}

impl FilterbankSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_bands < 2 {
            return Err(Error::InvalidParameter("filterbank needs at least two bands".into()));
        }
        if !(self.f_low > 0.0 && self.f_low < self.f_high && self.f_high < 0.5 * self.sample_rate) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < f_low < f_high < fs/2, got {} / {} / {}",
                self.f_low, self.f_high, self.sample_rate
            )));
        }
        if self.order != 4 {
            return Err(Error::InvalidParameter(format!(
                "only fourth-order gammatone filters are implemented, got order {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Correlation half-window in whole samples (window edge included).
    pub fn max_lag(&self) -> usize {
        (MAX_ITD * self.sample_rate - 1e-9).ceil() as usize
    }
}

/// Centre frequencies of the filterbank described by `spec`.
pub fn erb_center_frequencies(spec: &FilterbankSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    Ok(erb_space(spec.f_low, spec.f_high, spec.n_bands))
}

/// Ready-to-run filterbank (coefficients computed once).
#[derive(Debug, Clone)]
pub struct Filterbank {
    spec: FilterbankSpec,
    channels: Vec<Gammatone>,
}

impl Filterbank {
    pub fn new(spec: FilterbankSpec) -> Result<Self> {
        let channels = erb_center_frequencies(&spec)?
            .into_iter()
            .map(|cf| Gammatone::new(cf, spec.sample_rate))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, channels })
    }

    pub fn spec(&self) -> &FilterbankSpec {
        &self.spec
    }

    pub fn channels(&self) -> &[Gammatone] {
        &self.channels
    }

    pub fn center_frequencies(&self) -> Vec<f64> {
        self.channels.iter().map(Gammatone::center_hz).collect()
    }
}

/// Stand-alone gammatone filtering of one signal.
pub fn gammatone_filter(signal: &[f64], center_hz: f64, spec: &FilterbankSpec) -> Result<Vec<f64>> {
    Ok(Gammatone::new(center_hz, spec.sample_rate)?.filter(signal))
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Magnitude of the analytic signal (discrete Hilbert transform via FFT).
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let (fwd, inv) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    });
    fwd.process(&mut buf);
    let half = n / 2;
    for (k, v) in buf.iter_mut().enumerate() {
        let scale = if k == 0 || (n.is_multiple_of(2) && k == half) {
            1.0
        } else if k <= (n - 1) / 2 {
            2.0
        } else {
            0.0
        };
        *v *= scale;
    }
    inv.process(&mut buf);
    let norm = 1.0 / n as f64;
    buf.iter().map(|v| v.norm() * norm).collect()
}

/// Hair-cell stage: half-wave rectification below [`ENVELOPE_CUTOFF_HZ`],
/// Hilbert envelope at and above it.
pub fn hair_cell(band: &[f64], center_hz: f64) -> Vec<f64> {
    if center_hz < ENVELOPE_CUTOFF_HZ {
        band.iter().map(|&v| v.max(0.0)).collect()
    } else {
        hilbert_envelope(band)
    }
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `sum_n left[n] * right[n + lag]`.
fn cross_correlation(left: &[f64], right: &[f64], lag: isize) -> f64 {
    let n = left.len().min(right.len()) as isize;
    let (lo, hi) = ((-lag).max(0), (n - lag).min(n));
    if lo >= hi {
        return 0.0;
    }
    let l = &left[lo as usize..hi as usize];
    let r = &right[(lo + lag) as usize..(hi + lag) as usize];
    l.iter().zip(r).map(|(a, b)| a * b).sum()
}

/// Lag (in samples) of the cross-correlation maximum within `+-max_lag`;
/// positive when the left signal leads. Ties prefer the smaller |lag|, then
/// the negative one.
pub fn best_lag(left: &[f64], right: &[f64], max_lag: usize) -> (isize, [f64; 3]) {
    let m = max_lag as isize;
    let corr: Vec<f64> = (-m..=m).map(|l| cross_correlation(left, right, l)).collect();
    let at = |l: isize| corr[(l + m) as usize];
    let mut best = 0isize;
    for k in 1..=m {
        for lag in [-k, k] {
            if at(lag) > at(best) {
                best = lag;
            }
        }
    }
    let neighbour = |l: isize| if l.abs() <= m { at(l) } else { f64::NAN };
    (best, [neighbour(best - 1), at(best), neighbour(best + 1)])
}

/// Interaural time difference in seconds (positive: left ear leads).
pub fn extract_itd(left: &[f64], right: &[f64], spec: &FilterbankSpec) -> Result<f64> {
    if energy(left) == 0.0 || energy(right) == 0.0 {
        return Err(Error::SilentBand);
    }
    let (lag, [ym, y0, yp]) = best_lag(left, right, spec.max_lag());
    let mut shift = 0.0;
    if spec.parabolic_itd && ym.is_finite() && yp.is_finite() {
        let den = ym - 2.0 * y0 + yp;
        if den < 0.0 {
            shift = (0.5 * (ym - yp) / den).clamp(-0.5, 0.5);
        }
    }
    Ok((lag as f64 + shift) / spec.sample_rate)
}

/// Interaural level difference `10 log10(E_L / E_R)` in dB.
pub fn extract_ild(left: &[f64], right: &[f64]) -> Result<f64> {
    let (el, er) = (energy(left), energy(right));
    if el == 0.0 || er == 0.0 {
        return Err(Error::SilentBand);
    }
    Ok(10.0 * (el / er).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCue {
    pub center_hz: f64,
    /// Seconds; zero when the band is silent.
    pub itd: f64,
    /// dB; zero when the band is silent.
    pub ild: f64,
    /// Mean of the left and right band energies before transduction.
    pub energy: f64,
    /// False for silent bands, which must carry zero weight.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CueSet {
    pub bands: Vec<BandCue>,
}

impl CueSet {
    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }
}

/// Relative energy below which a band counts as silent.
const SILENT_BAND_RATIO: f64 = 1e-24;

/// Per-band ITD/ILD of a pair of ear signals.
pub fn binaural_cues(ears: &EarSignals, bank: &Filterbank) -> Result<CueSet> {
    let spec = bank.spec();
    if (ears.sample_rate - spec.sample_rate).abs() > 1e-9 {
        return Err(Error::SampleRateMismatch {
            expected: spec.sample_rate,
            found: ears.sample_rate,
        });
    }
    if ears.left.len() != ears.right.len() {
        return Err(Error::InvalidParameter("ear signals differ in length".into()));
    }
    if energy(&ears.left) == 0.0 && energy(&ears.right) == 0.0 {
        return Err(Error::SilentInput);
    }
    // (centre, left envelope, right envelope, left energy, right energy)
    type RawBand = (f64, Vec<f64>, Vec<f64>, f64, f64);
    let raw: Vec<RawBand> = bank
        .channels()
        .par_iter()
        .map(|g| {
            let l = g.filter(&ears.left);
            let r = g.filter(&ears.right);
            let (el, er) = (energy(&l), energy(&r));
            let cf = g.center_hz();
            (cf, hair_cell(&l, cf), hair_cell(&r, cf), el, er)
        })
        .collect();
    let loudest = raw.iter().map(|b| b.3.max(b.4)).fold(0.0, f64::max);
    let floor = loudest * SILENT_BAND_RATIO;
    let bands = raw
        .par_iter()
        .map(|(cf, l, r, el, er)| {
            let energy = 0.5 * (el + er);
            let silent = *el <= floor || *er <= floor;
            let cues = if silent {
                None
            } else {
                match (extract_itd(l, r, spec), extract_ild(l, r)) {
                    (Ok(itd), Ok(ild)) => Some((itd, ild)),
                    _ => None,
                }
            };
            BandCue {
                center_hz: *cf,
                itd: cues.map_or(0.0, |c| c.0),
                ild: cues.map_or(0.0, |c| c.1),
                energy,
                valid: cues.is_some(),
            }
        })
        .collect();
    Ok(CueSet { bands })
}
