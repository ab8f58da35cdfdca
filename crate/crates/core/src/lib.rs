//! Reflectance-oriented probabilistic equalization (ROPE).
//!
//! Global contrast enhancement driven by a 2D intensity co-occurrence
//! histogram whose entries are weighted by local differences in log-domain
//! reflectance. The 1D histogram used for equalization is obtained by
//! marginalizing the 2D histogram, with per-intensity significance factors
//! refined over a few iterations.
//!
//! The crate is organised as:
//!
//! * [`raster`] - color/gray containers, max-RGB grayscale, color recombination, codecs.
//! * [`retinex`] - RTV illumination estimation and log reflectance.
//! * [`equalizer`] - 2D histograms, marginalization, voting baselines, mappings and
//!   the end-to-end [`enhance`](equalizer::enhance) pipeline.
//! * [`metrics`] - DE, EME, PD and LOE.

pub mod equalizer;
mod error;
pub mod metrics;
pub mod raster;
pub mod retinex;

pub use error::{Error, Result};

/// Default number of intensity levels.
pub const DEFAULT_LEVELS: usize = 256;

pub(crate) fn check_levels(levels: usize) -> Result<()> {
    if (2..=256).contains(&levels) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "levels must be in 2..=256, got {levels}"
        )))
    }
}
