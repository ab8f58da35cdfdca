use std::fmt;
use std::str::FromStr;

use super::histogram::{build_2d_histogram_cvc, build_2d_histogram_rope, frequency_histogram};
use super::{apply_mapping, build_mapping, iterate_histogram, vote_cache, vote_cvc};
use super::{CoOccurrenceHistogram, Histogram1D, MappingFunction};
use crate::raster::{recombine_color, to_grayscale, ColorImage, GrayImage};
use crate::retinex::{compute_reflectance, estimate_illumination, IlluminationMap, ReflectanceMap, RtvParams};
use crate::{Error, Result};

/// Which histogram drives the equalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Reflectance-weighted 2D histogram, marginalized.
    Rope,
    /// Intensity-gap 2D histogram, marginalized.
    Pe,
    /// Intensity-gap 2D histogram, mass voted to the larger intensity.
    Cvc,
    /// Intensity-gap 2D histogram, mass split between both intensities.
    Cache,
    /// Plain frequency histogram.
    He,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Rope, Method::Pe, Method::Cvc, Method::Cache, Method::He];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rope => "rope",
            Method::Pe => "pe",
            Method::Cvc => "cvc",
            Method::Cache => "cache",
            Method::He => "he",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameter(format!("unknown method {s:?} (expected rope, pe, cvc, cache or he)"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RopeParams {
    /// Odd side length of the co-occurrence window.
    pub window: usize,
    /// Number of marginalization passes.
    pub tau: usize,
    pub levels: usize,
    pub retinex: RtvParams,
    pub eps_ref: f64,
}

impl Default for RopeParams {
    fn default() -> Self {
        Self {
            window: 7,
            tau: 2,
            levels: crate::DEFAULT_LEVELS,
            retinex: RtvParams::default(),
            eps_ref: 1e-3,
        }
    }
}

impl RopeParams {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if self.tau == 0 {
            return Err(Error::InvalidParameter("tau must be >= 1".into()));
        }
        if !(self.eps_ref > 0.0 && self.eps_ref.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eps_ref must be positive, got {}",
                self.eps_ref
            )));
        }
        crate::check_levels(self.levels)?;
        self.retinex.validate()
    }
}

/// Result of [`enhance_detailed`] with every intermediate the method produced.
#[derive(Debug, Clone)]
pub struct Enhancement {
    pub output: ColorImage,
    pub gray_in: GrayImage,
    pub gray_out: GrayImage,
    pub mapping: MappingFunction,
    /// `None` when the input carried no contrast information.
    pub histogram: Option<Histogram1D>,
    pub co_occurrence: Option<CoOccurrenceHistogram>,
    pub illumination: Option<IlluminationMap>,
    pub reflectance: Option<ReflectanceMap>,
}

pub fn enhance(c_in: &ColorImage, params: &RopeParams, method: Method) -> Result<ColorImage> {
    enhance_detailed(c_in, params, method).map(|e| e.output)
}

pub fn enhance_detailed(c_in: &ColorImage, params: &RopeParams, method: Method) -> Result<Enhancement> {
    params.validate()?;
    let levels = params.levels;
    let gray_in = to_grayscale(c_in);
    gray_in.check_levels(levels)?;

    let mut illumination = None;
    let mut reflectance = None;
    let co_occurrence = match method {
        Method::Rope => {
            let illum = estimate_illumination(&gray_in, &params.retinex, levels)?;
            let refl = compute_reflectance(&gray_in, &illum, params.eps_ref, levels)?;
            let h2 = build_2d_histogram_rope(&gray_in, &refl, params.window, levels)?;
            illumination = Some(illum);
            reflectance = Some(refl);
            h2
        }
        Method::Pe | Method::Cvc | Method::Cache => build_2d_histogram_cvc(&gray_in, params.window, levels)?,
        Method::He => None,
    };

    let histogram = match (method, &co_occurrence) {
        (Method::Rope | Method::Pe, Some(h2)) => Some(iterate_histogram(h2, params.tau)?),
        (Method::Cvc, Some(h2)) => Some(vote_cvc(h2)),
        (Method::Cache, Some(h2)) => Some(vote_cache(h2)),
        (Method::He, _) => {
            let h = frequency_histogram(&gray_in, levels)?;
            // a single occupied level carries no contrast to redistribute
            (h.values().iter().filter(|&&p| p > 0.0).count() > 1).then_some(h)
        }
        (_, None) => None,
    };

    let mapping = histogram
        .as_ref()
        .map(build_mapping)
        .unwrap_or_else(|| MappingFunction::identity(levels));
    let gray_out = apply_mapping(&gray_in, &mapping)?;
    let output = recombine_color(c_in, &gray_in, &gray_out)?;
    Ok(Enhancement {
        output,
        gray_in,
        gray_out,
        mapping,
        histogram,
        co_occurrence,
        illumination,
        reflectance,
    })
}
