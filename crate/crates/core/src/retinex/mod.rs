//! Retinex decomposition: RTV-smoothed illumination and log reflectance.

mod filter;
pub mod solver;

use crate::raster::GrayImage;
use crate::{Error, Result};
use solver::SmoothingOperator;
pub use solver::{Preconditioner, SolveReport};

/// Smoothed illumination on the normalized `[1/(K-1), 1]` scale.
#[derive(Debug, Clone, PartialEq)]
pub struct IlluminationMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

/// Log-domain reflectance, finite everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectanceMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

macro_rules! field_accessors {
    ($t:ty) => {
        impl $t {
            pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
                if width == 0 || height == 0 || width.checked_mul(height) != Some(data.len()) {
                    return Err(Error::InvalidParameter(format!(
                        "{width}x{height} field with {} values",
                        data.len()
                    )));
                }
                Ok(Self { width, height, data })
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

            pub fn values(&self) -> &[f64] {
                &self.data
            }

            pub fn get(&self, x: usize, y: usize) -> f64 {
                self.data[y * self.width + x]
            }
        }
    };
}

field_accessors!(IlluminationMap);
field_accessors!(ReflectanceMap);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtvParams {
    /// Smoothing strength.
    pub lambda: f64,
    /// Scale of the Gaussian applied to local variations, in pixels.
    pub sigma: f64,
    pub eps_rtv: f64,
    /// Outer reweighting iterations.
    pub iterations: usize,
    pub solver_tol: f64,
    pub solver_max_steps: usize,
    pub preconditioner: Preconditioner,
}

impl Default for RtvParams {
    fn default() -> Self {
        Self {
            lambda: 0.01,
            sigma: 3.0,
            eps_rtv: 1e-3,
            iterations: 4,
            solver_tol: 1e-5,
            solver_max_steps: 2000,
            preconditioner: Preconditioner::Jacobi,
        }
    }
}

impl RtvParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        positive("lambda", self.lambda)?;
        positive("sigma", self.sigma)?;
        positive("eps_rtv", self.eps_rtv)?;
        positive("solver_tol", self.solver_tol)?;
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("RTV iterations must be >= 1".into()));
        }
        Ok(())
    }
}

/// Illumination plus the outcome of every linear solve that produced it.
#[derive(Debug, Clone)]
pub struct IlluminationEstimate {
    pub illumination: IlluminationMap,
    pub solves: Vec<SolveReport>,
}

pub fn estimate_illumination(a_in: &GrayImage, params: &RtvParams, levels: usize) -> Result<IlluminationMap> {
    estimate_illumination_with_report(a_in, params, levels).map(|e| e.illumination)
}

/// RTV smoothing of the normalized gray image.
///
/// Each outer iteration derives per-edge weights from the current estimate
/// `S`, `w = 1/(|G_sigma * dS| + eps) * 1/(|dS| + eps)`, and solves
/// `(Id + lambda * L_w) S = A` against the original input. The result is
/// clamped to `[1/(K-1), 1]` so that it can be divided by.
pub fn estimate_illumination_with_report(
    a_in: &GrayImage,
    params: &RtvParams,
    levels: usize,
) -> Result<IlluminationEstimate> {
    params.validate()?;
    a_in.check_levels(levels)?;
    let (width, height) = a_in.dimensions();
    let scale = (levels - 1) as f64;
    let input: Vec<f64> = a_in.pixels().iter().map(|&v| f64::from(v) / scale).collect();
    let floor = 1.0 / scale;

    let mut solves = Vec::with_capacity(params.iterations);
    let mut smooth = input.clone();
    if width * height > 1 {
        for _ in 0..params.iterations {
            let (dx, dy) = filter::forward_differences(&smooth, width, height);
            let weights = |d: &[f64]| -> Vec<f64> {
                let local = filter::gaussian_blur(d, width, height, params.sigma);
                d.iter()
                    .zip(&local)
                    .map(|(g, l)| 1.0 / (l.abs() + params.eps_rtv) / (g.abs() + params.eps_rtv))
                    .collect()
            };
            let op = SmoothingOperator::new(width, height, params.lambda, weights(&dx), weights(&dy));
            solves.push(op.solve_with(
                &input,
                &mut smooth,
                params.solver_tol,
                params.solver_max_steps,
                params.preconditioner,
            )?);
        }
    }

    let data = smooth.into_iter().map(|v| v.clamp(floor, 1.0)).collect();
    Ok(IlluminationEstimate {
        illumination: IlluminationMap { width, height, data },
        solves,
    })
}

/// `r(q) = ln((a(q)/(K-1) + eps) / (I(q) + eps))`.
pub fn compute_reflectance(
    a_in: &GrayImage,
    illum: &IlluminationMap,
    eps_ref: f64,
    levels: usize,
) -> Result<ReflectanceMap> {
    if a_in.dimensions() != illum.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a_in.dimensions(),
            found: illum.dimensions(),
        });
    }
    if !(eps_ref > 0.0 && eps_ref.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps_ref must be positive, got {eps_ref}"
        )));
    }
    a_in.check_levels(levels)?;
    let scale = (levels - 1) as f64;
    let data = a_in
        .pixels()
        .iter()
        .zip(&illum.data)
        .map(|(&a, &i)| ((f64::from(a) / scale + eps_ref) / (i + eps_ref)).ln())
        .collect();
    Ok(ReflectanceMap {
        width: illum.width,
        height: illum.height,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn constant_image_is_fixed_point() {
        let img = GrayImage::from_fn(20, 15, |_, _| 128);
        let est = estimate_illumination_with_report(&img, &RtvParams::default(), 256).unwrap();
        let c = 128.0 / 255.0;
        for &v in est.illumination.values() {
            assert!((v - c).abs() < 1e-9);
        }
    }

    #[test]
    fn single_pixel_is_returned_unchanged() {
        let img = GrayImage::new(1, 1, vec![51]).unwrap();
        let i = estimate_illumination(&img, &RtvParams::default(), 256).unwrap();
        assert_eq!(i.values(), &[51.0 / 255.0]);
    }

    fn normalized(img: &GrayImage) -> Vec<f64> {
        img.pixels()
            .iter()
            .map(|&v| (f64::from(v) / 255.0).clamp(1.0 / 255.0, 1.0))
            .collect()
    }

    #[test]
    fn vanishing_lambda_is_identity() {
        let img = GrayImage::from_fn(48, 40, |x, y| {
            (128.0 + 80.0 * (x as f64 / 7.0).sin() * (y as f64 / 5.0).cos()) as u8
        });
        let params = RtvParams {
            lambda: 1e-8,
            ..RtvParams::default()
        };
        let est = estimate_illumination_with_report(&img, &params, 256).unwrap();
        assert!(max_abs_diff(est.illumination.values(), &normalized(&img)) < 1e-6);
        assert!(est.solves.iter().all(|s| s.relative_residual <= 1e-5));
    }

    #[test]
    fn deviation_bounded_by_maximum_principle() {
        // Id + lambda L_w is an M-matrix with unit row sums, so
        // |I - A|_inf <= |lambda L_w A|_inf < 4 lambda / eps_rtv.
        let img = GrayImage::from_fn(24, 18, |x, y| ((x * 37 + y * 91) % 256) as u8);
        for lambda in [1e-8, 1e-6, 1e-4] {
            let params = RtvParams {
                lambda,
                solver_tol: 1e-10,
                ..RtvParams::default()
            };
            let i = estimate_illumination(&img, &params, 256).unwrap();
            let bound = 4.0 * lambda / params.eps_rtv;
            assert!(max_abs_diff(i.values(), &normalized(&img)) <= bound * (1.0 + 1e-3));
        }
    }

    #[test]
    fn illumination_is_clamped_positive() {
        let img = GrayImage::from_fn(10, 10, |x, _| if x < 5 { 0 } else { 255 });
        let i = estimate_illumination(&img, &RtvParams::default(), 256).unwrap();
        assert!(i.values().iter().all(|&v| (1.0 / 255.0..=1.0).contains(&v)));
    }

    #[test]
    fn rejects_bad_params() {
        let img = GrayImage::from_fn(4, 4, |_, _| 1);
        for p in [
            RtvParams {
                lambda: 0.0,
                ..RtvParams::default()
            },
            RtvParams {
                sigma: -1.0,
                ..RtvParams::default()
            },
            RtvParams {
                eps_rtv: 0.0,
                ..RtvParams::default()
            },
            RtvParams {
                iterations: 0,
                ..RtvParams::default()
            },
        ] {
            assert!(matches!(
                estimate_illumination(&img, &p, 256),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn reflectance_examples() {
        let img = GrayImage::new(3, 1, vec![0, 51, 255]).unwrap();
        let matched = IlluminationMap::new(3, 1, vec![0.0, 0.2, 1.0]).unwrap();
        let r = compute_reflectance(&img, &matched, 1e-3, 256).unwrap();
        assert!(r.values().iter().all(|v| v.abs() < 1e-15));

        // a/(K-1) = 0.5 with K = 3
        let half = GrayImage::new(1, 1, vec![1]).unwrap();
        let quarter = IlluminationMap::new(1, 1, vec![0.25]).unwrap();
        let r = compute_reflectance(&half, &quarter, 1e-3, 3).unwrap();
        // ln(0.501 / 0.251) from 30-digit arithmetic
        assert!((r.values()[0] - 0.691_153_161_953_080_9).abs() < 1e-12);
    }

    #[test]
    fn reflectance_dimension_mismatch() {
        let img = GrayImage::new(2, 1, vec![0, 0]).unwrap();
        let illum = IlluminationMap::new(1, 2, vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            compute_reflectance(&img, &illum, 1e-3, 256),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
