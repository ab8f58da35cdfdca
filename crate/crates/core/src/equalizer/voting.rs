//! Baseline voting schemes that hand a pair's mass to its endpoints only.

use super::histogram::{CoOccurrenceHistogram, Histogram1D};

/// Each pair votes its whole mass into the bin of the larger intensity.
pub fn vote_cvc(h2: &CoOccurrenceHistogram) -> Histogram1D {
    let mut out = vec![0.0; h2.levels()];
    for (_, j, p) in h2.pairs() {
        out[j] += p;
    }
    Histogram1D::normalized(out)
}

/// Each pair votes half its mass into each endpoint bin.
pub fn vote_cache(h2: &CoOccurrenceHistogram) -> Histogram1D {
    let mut out = vec![0.0; h2.levels()];
    for (i, j, p) in h2.pairs() {
        out[i] += p / 2.0;
        out[j] += p / 2.0;
    }
    Histogram1D::normalized(out)
}
