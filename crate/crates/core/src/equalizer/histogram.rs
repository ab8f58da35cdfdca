use serde::Serialize;

use crate::raster::GrayImage;
use crate::retinex::ReflectanceMap;
use crate::{Error, Result};

/// Normalized co-occurrence density over unordered intensity pairs `i < j`.
///
/// Only the strict upper triangle is stored; `get(i, j) == get(j, i)` and the
/// diagonal is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoOccurrenceHistogram {
    levels: usize,
    values: Vec<f64>,
}

fn tri_len(levels: usize) -> usize {
    levels * (levels - 1) / 2
}

fn tri_index(levels: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < levels);
    i * (2 * levels - i - 1) / 2 + (j - i - 1)
}

impl CoOccurrenceHistogram {
    /// Normalizes raw non-negative pair weights, packed as the upper triangle
    /// in row-major order. Returns `None` when the total weight is zero.
    pub fn from_weights(levels: usize, mut weights: Vec<f64>) -> Result<Option<Self>> {
        crate::check_levels(levels)?;
        if weights.len() != tri_len(levels) {
            return Err(Error::InvalidParameter(format!(
                "{levels} levels need {} pair weights, got {}",
                tri_len(levels),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("pair weights must be finite and >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Ok(None);
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Some(Self {
            levels,
            values: weights,
        }))
    }

    /// Builds a histogram from `(i, j, weight)` entries; order within a pair
    /// does not matter and equal-intensity entries are dropped.
    pub fn from_entries(levels: usize, entries: &[(usize, usize, f64)]) -> Result<Option<Self>> {
        crate::check_levels(levels)?;
        let mut weights = vec![0.0; tri_len(levels)];
        for &(i, j, w) in entries {
            if i >= levels || j >= levels {
                return Err(Error::InvalidParameter(format!(
                    "pair ({i}, {j}) outside {levels} levels"
                )));
            }
            if i != j {
                weights[tri_index(levels, i.min(j), i.max(j))] += w;
            }
        }
        Self::from_weights(levels, weights)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.values[tri_index(self.levels, i, j)],
            std::cmp::Ordering::Greater => self.values[tri_index(self.levels, j, i)],
        }
    }

    /// All stored pairs `(i, j, p)` with `i < j`, zero entries included.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let k = self.levels;
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j, self.values[tri_index(k, i, j)])))
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Probability density over `K` intensity bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram1D {
    values: Vec<f64>,
}

impl Histogram1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        crate::check_levels(values.len())?;
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter(
                "histogram values must be finite and >= 0".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Divides by the total so the bins sum to one. An all-zero input stays zero.
    pub(crate) fn normalized(mut values: Vec<f64>) -> Self {
        let total: f64 = values.iter().sum();
        if total > 0.0 {
            values.iter_mut().for_each(|v| *v /= total);
        }
        Self { values }
    }

    pub fn levels(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Per-intensity significance factors `s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceVector {
    values: Vec<f64>,
}

impl SignificanceVector {
    pub fn uniform(levels: usize) -> Self {
        Self {
            values: vec![1.0 / levels as f64; levels],
        }
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter(
                "significance factors must be finite and >= 0".into(),
            ));
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter("significance factors are all zero".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn levels(&self) -> usize {
        self.values.len()
    }
}

impl From<&Histogram1D> for SignificanceVector {
    fn from(h: &Histogram1D) -> Self {
        Self {
            values: h.values.clone(),
        }
    }
}

fn check_window(window: usize) -> Result<()> {
    if window >= 3 && window % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "window must be odd and >= 3, got {window}"
        )))
    }
}

/// Visits every unordered pair of distinct in-frame pixels that lie within
/// each other's `window x window` neighbourhood. Out-of-frame neighbours are
/// skipped rather than padded.
fn accumulate_pairs(
    a_in: &GrayImage,
    window: usize,
    levels: usize,
    mut weight: impl FnMut(usize, usize) -> f64,
) -> Result<Option<CoOccurrenceHistogram>> {
    check_window(window)?;
    a_in.check_levels(levels)?;
    let (width, height) = a_in.dimensions();
    let radius = (window / 2) as isize;
    let offsets: Vec<(isize, isize)> = (0..=radius)
        .flat_map(|dy| (-radius..=radius).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| dy > 0 || dx > 0)
        .collect();

    let px = a_in.pixels();
    let mut weights = vec![0.0; tri_len(levels)];
    for y in 0..height {
        for x in 0..width {
            let q = y * width + x;
            let ai = px[q] as usize;
            for &(dx, dy) in &offsets {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx < 0 || nx >= width as isize || ny >= height as isize {
                    continue;
                }
                let q2 = ny as usize * width + nx as usize;
                let aj = px[q2] as usize;
                if ai == aj {
                    continue;
                }
                let w = weight(q, q2);
                weights[tri_index(levels, ai.min(aj), ai.max(aj))] += w;
            }
        }
    }
    CoOccurrenceHistogram::from_weights(levels, weights)
}

/// Co-occurrence density weighted by reflectance differences `|r(q) - r(q')|`.
///
/// Pairs of equal intensity are excluded from both numerator and
/// normalizer. `Ok(None)` means there is no usable weight at all.
pub fn build_2d_histogram_rope(
    a_in: &GrayImage,
    refl: &ReflectanceMap,
    window: usize,
    levels: usize,
) -> Result<Option<CoOccurrenceHistogram>> {
    if a_in.dimensions() != refl.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a_in.dimensions(),
            found: refl.dimensions(),
        });
    }
    let r = refl.values();
    accumulate_pairs(a_in, window, levels, |q, q2| (r[q] - r[q2]).abs())
}

/// Co-occurrence density weighted by the intensity gap `|a(q) - a(q')|`.
pub fn build_2d_histogram_cvc(a_in: &GrayImage, window: usize, levels: usize) -> Result<Option<CoOccurrenceHistogram>> {
    let px = a_in.pixels();
    accumulate_pairs(a_in, window, levels, |q, q2| f64::from(px[q].abs_diff(px[q2])))
}

/// Plain intensity frequencies.
pub fn frequency_histogram(a_in: &GrayImage, levels: usize) -> Result<Histogram1D> {
    let counts = a_in.counts(levels)?;
    let n = a_in.len() as f64;
    Ok(Histogram1D {
        values: counts.into_iter().map(|c| c as f64 / n).collect(),
    })
}
