//! Separable Gaussian blur and forward differences, both with replicate
//! boundary handling.

pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

pub(crate) fn gaussian_blur(data: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let clamp = |i: isize, n: usize| i.clamp(0, n as isize - 1) as usize;

    let mut tmp = vec![0.0; data.len()];
    for y in 0..height {
        let row = &data[y * width..(y + 1) * width];
        for x in 0..width {
            tmp[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * row[clamp(x as isize + i as isize - radius, width)])
                .sum();
        }
    }
    let mut out = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width {
            out[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * tmp[clamp(y as isize + i as isize - radius, height) * width + x])
                .sum();
        }
    }
    out
}

/// Forward differences `(d/dx, d/dy)`; zero on the last column / row.
pub(crate) fn forward_differences(data: &[f64], width: usize, height: usize) -> (Vec<f64>, Vec<f64>) {
    let mut dx = vec![0.0; data.len()];
    let mut dy = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width {
            let q = y * width + x;
            if x + 1 < width {
                dx[q] = data[q + 1] - data[q];
            }
            if y + 1 < height {
                dy[q] = data[q + width] - data[q];
            }
        }
    }
    (dx, dy)
}
