#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rope_core::equalizer::{CoOccurrenceHistogram, SignificanceVector};
use rope_core::raster::{ColorImage, GrayImage};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normalized pair density; roughly a third of instances are sparse.
pub fn random_h2(rng: &mut impl Rng, levels: usize) -> CoOccurrenceHistogram {
    let sparse = rng.gen_bool(0.3);
    let mut entries = Vec::new();
    for i in 0..levels {
        for j in i + 1..levels {
            if sparse && rng.gen_bool(0.8) {
                continue;
            }
            entries.push((i, j, rng.gen_range(0.0..1.0)));
        }
    }
    let (i, j) = (rng.gen_range(0..levels - 1), levels - 1);
    entries.push((i, j, 0.5));
    CoOccurrenceHistogram::from_entries(levels, &entries).unwrap().unwrap()
}

/// Random significance factors; some instances contain zero runs.
pub fn random_significance(rng: &mut impl Rng, levels: usize) -> SignificanceVector {
    let with_zeros = rng.gen_bool(0.2);
    loop {
        let v: Vec<f64> = (0..levels)
            .map(|_| {
                if with_zeros && rng.gen_bool(0.4) {
                    0.0
                } else {
                    rng.gen_range(1e-3..1.0)
                }
            })
            .collect();
        if let Ok(s) = SignificanceVector::new(v) {
            return s;
        }
    }
}

pub fn random_gray(rng: &mut impl Rng, width: usize, height: usize, levels: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |_, _| rng.gen_range(0..levels) as u8)
}

pub fn random_color(rng: &mut impl Rng, width: usize, height: usize) -> ColorImage {
    ColorImage::from_fn(width, height, |_, _| rng.gen())
}

/// Dark scene with a few brighter textured objects, lit from the left.
pub fn dark_objects(width: usize, height: usize, seed: u64) -> ColorImage {
    let mut rng = rng(seed);
    ColorImage::from_fn(width, height, |x, y| {
        let light = 0.25 + 0.5 * x as f64 / width as f64;
        let (fx, fy) = (x as f64 / width as f64, y as f64 / height as f64);
        let in_disc = (fx - 0.35).powi(2) + (fy - 0.5).powi(2) < 0.04;
        let in_box = (0.6..0.85).contains(&fx) && (0.2..0.7).contains(&fy);
        let base = if in_disc {
            0.55 + 0.25 * ((x / 3 + y / 3) % 2) as f64
        } else if in_box {
            0.4 + 0.3 * (fx * 40.0).sin().abs()
        } else {
            0.12
        };
        let v = (light * base * 255.0 + rng.gen_range(-3.0..3.0)).clamp(0.0, 255.0);
        [v as u8, (v * 0.85) as u8, (v * 0.7) as u8]
    })
}

/// Twenty deterministic images with distinct structure.
pub fn structured_images() -> Vec<(String, ColorImage)> {
    let mut out: Vec<(String, ColorImage)> = Vec::new();
    let gray = |v: u8| [v, v, v];
    out.push((
        "horizontal-ramp".into(),
        ColorImage::from_fn(32, 24, |x, _| gray((x * 8) as u8)),
    ));
    out.push((
        "vertical-ramp".into(),
        ColorImage::from_fn(24, 32, |_, y| gray((y * 4 + 20) as u8)),
    ));
    out.push((
        "diagonal-ramp".into(),
        ColorImage::from_fn(30, 30, |x, y| gray(((x + y) * 3) as u8)),
    ));
    out.push((
        "dark-ramp".into(),
        ColorImage::from_fn(32, 16, |x, _| gray((x / 2) as u8)),
    ));
    out.push((
        "bright-ramp".into(),
        ColorImage::from_fn(32, 16, |x, _| gray(200 + x as u8)),
    ));
    out.push((
        "step-edge".into(),
        ColorImage::from_fn(32, 32, |x, _| gray(if x < 16 { 51 } else { 204 })),
    ));
    out.push((
        "checkerboard".into(),
        ColorImage::from_fn(16, 16, |x, y| gray(if (x + y) % 2 == 0 { 60 } else { 70 })),
    ));
    out.push((
        "coarse-checker".into(),
        ColorImage::from_fn(32, 32, |x, y| gray(if (x / 8 + y / 8) % 2 == 0 { 30 } else { 220 })),
    ));
    out.push((
        "three-bands".into(),
        ColorImage::from_fn(30, 12, |x, _| gray([10, 128, 250][x / 10])),
    ));
    out.push((
        "rings".into(),
        ColorImage::from_fn(33, 33, |x, y| {
            let r = ((x as f64 - 16.0).powi(2) + (y as f64 - 16.0).powi(2)).sqrt();
            gray((r * 7.0) as u8)
        }),
    ));
    out.push((
        "sinusoid".into(),
        ColorImage::from_fn(40, 20, |x, y| {
            gray((128.0 + 100.0 * (x as f64 / 4.0).sin() * (y as f64 / 6.0).cos()) as u8)
        }),
    ));
    out.push(("dark-objects".into(), dark_objects(40, 30, 1)));
    out.push(("dark-objects-large".into(), dark_objects(48, 48, 2)));
    out.push((
        "colour-bars".into(),
        ColorImage::from_fn(35, 10, |x, _| {
            [
                [255, 0, 0],
                [0, 255, 0],
                [0, 0, 255],
                [255, 255, 0],
                [40, 40, 40],
                [0, 0, 0],
                [90, 10, 200],
            ][x / 5]
        }),
    ));
    out.push((
        "colour-gradient".into(),
        ColorImage::from_fn(32, 32, |x, y| [(x * 8) as u8, (y * 8) as u8, 64]),
    ));
    out.push((
        "single-spot".into(),
        ColorImage::from_fn(15, 15, |x, y| gray(if x == 7 && y == 7 { 255 } else { 5 })),
    ));
    out.push((
        "two-pixel-wide".into(),
        ColorImage::from_fn(2, 20, |x, y| gray((x * 100 + y * 5) as u8)),
    ));
    out.push((
        "single-row".into(),
        ColorImage::from_fn(40, 1, |x, _| gray((x * 6) as u8)),
    ));
    out.push((
        "black-and-white".into(),
        ColorImage::from_fn(20, 20, |x, _| gray(if x % 5 == 0 { 255 } else { 0 })),
    ));
    out.push(("low-contrast-noise".into(), {
        let mut r = rng(99);
        ColorImage::from_fn(24, 24, |_, _| gray(r.gen_range(100..110)))
    }));
    assert_eq!(out.len(), 20);
    out
}
