//! Histogram construction, marginalization, voting baselines, intensity
//! mappings and the end-to-end enhancement pipeline.

mod histogram;
mod mapping;
mod marginal;
mod pipeline;
mod voting;

pub use histogram::{
    build_2d_histogram_cvc, build_2d_histogram_rope, frequency_histogram, CoOccurrenceHistogram, Histogram1D,
    SignificanceVector,
};
pub use mapping::{apply_mapping, build_mapping, MappingFunction};
pub use marginal::{conditional, iterate_histogram, marginalize, marginalize_naive};
pub use pipeline::{enhance, enhance_detailed, Enhancement, Method, RopeParams};
pub use voting::{vote_cache, vote_cvc};
