use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("listener coincides with source position")]
    ZeroDistance,

    #[error("source lies inside the head sphere (distance {distance} m <= head radius {head_radius} m)")]
    InsideHead { distance: f64, head_radius: f64 },

    #[error("silent band")]
    SilentBand,

    #[error("silent input")]
    SilentInput,

    #[error("azimuth {azimuth_deg:.3} deg outside HRIR coverage [{min_deg:.1}, {max_deg:.1}] deg")]
    CoverageGap {
        azimuth_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },

    #[error("sample rate mismatch: expected {expected} Hz, found {found} Hz")]
    SampleRateMismatch { expected: f64, found: f64 },

    #[error("malformed HRIR file: {0}")]
    MalformedHrir(String),

    #[error("unsorted/duplicate azimuths in HRIR set near {azimuth_deg} deg")]
    UnsortedAzimuths { azimuth_deg: f64 },

    #[error("inconsistent IR lengths in HRIR set: expected {expected}, found {found}")]
    InconsistentIrLength { expected: usize, found: usize },

    #[error("empty HRIR set")]
    EmptyHrirSet,

    #[error("degenerate dictionary band {band} ({center_hz:.1} Hz): zero cue maximum")]
    DegenerateDictionaryBand { band: usize, center_hz: f64 },

    #[error("dictionary mismatch: {0}")]
    DictionaryMismatch(String),

    #[error("ICTD {ictd_ms:.4} ms beyond summing-localization regime (|ICTD| <= 1 ms)")]
    BeyondSummingRegime { ictd_ms: f64 },

    #[error("pattern null at source angle {theta_deg:.2} deg")]
    PatternNull { theta_deg: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing resource: {}", .0.display())]
    MissingResource(PathBuf),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MissingResource(_) | Error::Io(_) => 2,
            Error::Numerical(_)
            | Error::SilentBand
            | Error::SilentInput
            | Error::DegenerateDictionaryBand { .. } => 3,
            _ => 1,
        }
    }
}
