use serde::Serialize;

use super::histogram::Histogram1D;
use crate::raster::GrayImage;
use crate::{Error, Result};

/// Monotone intensity lookup table with one entry per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingFunction {
    table: Vec<u8>,
}

impl MappingFunction {
    /// Fails unless the table is nondecreasing with entries `< table.len()`.
    pub fn new(table: Vec<u8>) -> Result<Self> {
        crate::check_levels(table.len())?;
        if table.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("mapping must be nondecreasing".into()));
        }
        if let Some(&value) = table.iter().find(|&&v| v as usize >= table.len()) {
            return Err(Error::IntensityOutOfRange {
                value,
                levels: table.len(),
            });
        }
        Ok(Self { table })
    }

    pub fn identity(levels: usize) -> Self {
        Self {
            table: (0..levels).map(|k| k as u8).collect(),
        }
    }

    pub fn levels(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    /// True when distinct occupied inputs map to distinct outputs.
    pub fn is_strictly_increasing_on(&self, img: &GrayImage) -> bool {
        let mut present = vec![false; self.levels()];
        for &v in img.pixels() {
            present[v as usize] = true;
        }
        let mapped: Vec<u8> = (0..self.levels())
            .filter(|&k| present[k])
            .map(|k| self.table[k])
            .collect();
        mapped.windows(2).all(|w| w[0] < w[1])
    }
}

/// `T(k) = clamp(round(K * P(k) - 1), 0, K - 1)` with `P` the running CDF.
pub fn build_mapping(h1: &Histogram1D) -> MappingFunction {
    let levels = h1.levels();
    let top = (levels - 1) as f64;
    let mut cdf = 0.0;
    let table = h1
        .values()
        .iter()
        .map(|&p| {
            cdf += p;
            (levels as f64 * cdf - 1.0).round().clamp(0.0, top) as u8
        })
        .collect();
    MappingFunction { table }
}

pub fn apply_mapping(a_in: &GrayImage, t: &MappingFunction) -> Result<GrayImage> {
    a_in.check_levels(t.levels())?;
    let data = a_in.pixels().iter().map(|&v| t.table[v as usize]).collect();
    GrayImage::new(a_in.width(), a_in.height(), data)
}
