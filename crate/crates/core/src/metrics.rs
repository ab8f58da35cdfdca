//! No-reference contrast metrics (DE, EME, PD) and the full-reference
//! lightness order error (LOE). All operate on the max-RGB gray channel.

use serde::Serialize;

use crate::raster::{to_grayscale, ColorImage, GrayImage};
use crate::{Error, Result};

pub const DEFAULT_EME_BLOCK: usize = 8;
pub const DEFAULT_LOE_GRID: usize = 50;
/// Guard for EME tiles whose minimum is zero, on the 0..=255 scale.
pub const EME_EPSILON: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    /// Discrete entropy in bits.
    pub de: f64,
    pub eme: f64,
    /// Mean absolute intensity difference over all pixel pairs.
    pub pd: f64,
    /// Only available when a reference image is supplied.
    pub loe: Option<f64>,
}

impl MetricsReport {
    /// DE, EME and PD of `img`; LOE against `original` if given.
    pub fn evaluate(img: &ColorImage, original: Option<&ColorImage>) -> Result<Self> {
        let gray = to_grayscale(img);
        let loe = original
            .map(|o| loe(&to_grayscale(o), &gray, DEFAULT_LOE_GRID))
            .transpose()?;
        Ok(Self {
            de: discrete_entropy(&gray),
            eme: eme(&gray, DEFAULT_EME_BLOCK)?,
            pd: pixel_distance(&gray),
            loe,
        })
    }
}

fn counts256(img: &GrayImage) -> [u64; 256] {
    let mut c = [0u64; 256];
    for &v in img.pixels() {
        c[v as usize] += 1;
    }
    c
}

/// Shannon entropy of the intensity frequencies, in bits.
pub fn discrete_entropy(img: &GrayImage) -> f64 {
    let n = img.len() as f64;
    let h: f64 = counts256(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / n;
            f * f.log2()
        })
        .sum();
    // -0.0 for single-symbol sources
    (-h).max(0.0)
}

/// Mean over `block x block` tiles of `20 log10(max / min)`. Edge tiles may
/// be smaller. Tiles with a zero minimum use `(max + eps) / eps`.
pub fn eme(img: &GrayImage, block: usize) -> Result<f64> {
    if block < 2 {
        return Err(Error::InvalidParameter(format!("EME block must be >= 2, got {block}")));
    }
    let (w, h) = img.dimensions();
    let mut sum = 0.0;
    let mut tiles = 0usize;
    for ty in (0..h).step_by(block) {
        for tx in (0..w).step_by(block) {
            let (mut lo, mut hi) = (u8::MAX, u8::MIN);
            for y in ty..(ty + block).min(h) {
                for x in tx..(tx + block).min(w) {
                    let v = img.get(x, y);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            let ratio = if lo == 0 {
                (f64::from(hi) + EME_EPSILON) / EME_EPSILON
            } else {
                f64::from(hi) / f64::from(lo)
            };
            sum += 20.0 * ratio.log10();
            tiles += 1;
        }
    }
    Ok(sum / tiles as f64)
}

/// `sum_i sum_j f_i f_j |i - j|`, evaluated exactly in integer counts.
pub fn pixel_distance(img: &GrayImage) -> f64 {
    let counts = counts256(img);
    let occupied: Vec<(u64, u64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i as u64, c))
        .collect();
    let mut total: u128 = 0;
    for (a, &(i, ci)) in occupied.iter().enumerate() {
        for &(j, cj) in &occupied[a + 1..] {
            total += 2 * u128::from(ci) * u128::from(cj) * u128::from(j - i);
        }
    }
    let n = img.len() as f64;
    total as f64 / (n * n)
}

/// Lattice coordinates: all indices when `grid >= len`.
fn lattice(len: usize, grid: usize) -> impl Iterator<Item = usize> {
    let g = grid.min(len);
    (0..g).map(move |i| i * len / g)
}

/// Lightness order error between an input and its enhancement.
///
/// Samples a `grid x grid` lattice (every pixel when the image is smaller)
/// and averages, per sampled pixel, the number of sampled pixels whose
/// `>=` relation to it differs between the two images.
pub fn loe(a_in: &GrayImage, a_out: &GrayImage, grid: usize) -> Result<f64> {
    if a_in.dimensions() != a_out.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a_in.dimensions(),
            found: a_out.dimensions(),
        });
    }
    if grid < 2 {
        return Err(Error::InvalidParameter(format!("LOE grid must be >= 2, got {grid}")));
    }
    let (w, h) = a_in.dimensions();
    let xs: Vec<usize> = lattice(w, grid).collect();
    let samples: Vec<(u8, u8)> = lattice(h, grid)
        .flat_map(|y| xs.iter().map(move |&x| (x, y)))
        .map(|(x, y)| (a_in.get(x, y), a_out.get(x, y)))
        .collect();
    let mut disagreements = 0u64;
    for &(pin, pout) in &samples {
        for &(qin, qout) in &samples {
            if (pin >= qin) != (pout >= qout) {
                disagreements += 1;
            }
        }
    }
    Ok(disagreements as f64 / samples.len() as f64)
}
