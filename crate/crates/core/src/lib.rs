//! Localization-uncertainty modelling for two-loudspeaker stereophony.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frontend;
pub mod geometry;
pub mod panning;
pub(crate) mod io;
pub mod reference;
pub mod render;
pub mod stimuli;
pub mod sweep;
pub mod uncertainty;

pub use error::{Error, Result};
