//! Raster containers, max-RGB grayscale extraction and color recombination.

mod io;

pub use io::{load_image, save_image, write_pfm, write_pgm};

use crate::{Error, Result};

/// 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    data: Vec<[u8; 3]>,
}

/// Single-channel intensity raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "image must be at least 1x1, got {width}x{height}"
        )));
    }
    match width.checked_mul(height) {
        Some(n) if n == len => Ok(()),
        _ => Err(Error::InvalidParameter(format!(
            "{width}x{height} image needs {} pixels, got {len}",
            width.saturating_mul(height)
        ))),
    }
}

impl ColorImage {
    pub fn new(width: usize, height: usize, data: Vec<[u8; 3]>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image must be at least 1x1");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Self::from_fn(width, height, |_, _| rgb)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }

    /// Interleaved RGB bytes.
    pub fn as_bytes(&self) -> Vec<u8> {
        self.data.iter().flatten().copied().collect()
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image must be at least 1x1");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn max_value(&self) -> u8 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    /// Fails if any intensity is `>= levels`.
    pub fn check_levels(&self, levels: usize) -> Result<()> {
        crate::check_levels(levels)?;
        match self.data.iter().find(|&&v| v as usize >= levels) {
            Some(&value) => Err(Error::IntensityOutOfRange { value, levels }),
            None => Ok(()),
        }
    }

    /// Per-intensity pixel counts over `levels` bins.
    pub fn counts(&self, levels: usize) -> Result<Vec<u64>> {
        self.check_levels(levels)?;
        let mut counts = vec![0u64; levels];
        for &v in &self.data {
            counts[v as usize] += 1;
        }
        Ok(counts)
    }
}

/// Max of the RGB components, i.e. the HSV value channel.
pub fn to_grayscale(img: &ColorImage) -> GrayImage {
    GrayImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&[r, g, b]| r.max(g).max(b)).collect(),
    }
}

/// Rescales every channel by `a_out / a_in`, keeping channel ratios.
///
/// Black input pixels (`a_in == 0`) have no hue to preserve and become the
/// neutral gray `(a_out, a_out, a_out)`.
pub fn recombine_color(c_in: &ColorImage, a_in: &GrayImage, a_out: &GrayImage) -> Result<ColorImage> {
    for g in [a_in, a_out] {
        if g.dimensions() != c_in.dimensions() {
            return Err(Error::DimensionMismatch {
                expected: c_in.dimensions(),
                found: g.dimensions(),
            });
        }
    }
    let data = c_in
        .data
        .iter()
        .zip(&a_in.data)
        .zip(&a_out.data)
        .map(|((rgb, &ai), &ao)| {
            if ai == 0 {
                return [ao; 3];
            }
            let target = f64::from(ao);
            let ratio_scale = |c: u8| -> u8 {
                let v = (f64::from(c) / f64::from(ai) * target).round();
                v.clamp(0.0, target) as u8
            };
            [ratio_scale(rgb[0]), ratio_scale(rgb[1]), ratio_scale(rgb[2])]
        })
        .collect();
    Ok(ColorImage {
        width: c_in.width,
        height: c_in.height,
        data,
    })
}
