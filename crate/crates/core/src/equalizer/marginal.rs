use super::histogram::{CoOccurrenceHistogram, Histogram1D, SignificanceVector};
use crate::{Error, Result};

fn check_sizes(h2: &CoOccurrenceHistogram, s: &SignificanceVector) -> Result<()> {
    if h2.levels() != s.levels() {
        return Err(Error::InvalidParameter(format!(
            "histogram has {} levels but significance vector has {}",
            h2.levels(),
            s.levels()
        )));
    }
    Ok(())
}

/// Conditional weight of intensity `k` given the pair `(i, j)`, `i < j`:
/// `s_k / sum_{k' in (i, j]} s_k'` on `(i, j]` and zero elsewhere. A pair
/// whose range carries no significance is spread uniformly.
pub fn conditional(s: &SignificanceVector, i: usize, j: usize, k: usize) -> f64 {
    assert!(i < j && j < s.levels());
    let range: f64 = s.values()[i + 1..=j].iter().sum();
    conditional_given_range(s.values(), range, i, j, k)
}

fn conditional_given_range(s: &[f64], range: f64, i: usize, j: usize, k: usize) -> f64 {
    if k <= i || k > j {
        0.0
    } else if range > 0.0 {
        s[k] / range
    } else {
        1.0 / (j - i) as f64
    }
}

/// 1D density obtained by marginalizing the pair density over intensity
/// occurrence, in `O(K^2)`.
///
/// Each pair adds `p(i, j) / S(i, j)` on the interval `(i, j]` through a
/// difference array; the prefix sum is then scaled by `s_k`. Pairs with a
/// zero range sum go to a second, unscaled difference array.
pub fn marginalize(h2: &CoOccurrenceHistogram, s: &SignificanceVector) -> Result<Histogram1D> {
    check_sizes(h2, s)?;
    let k = h2.levels();
    let sig = s.values();
    let mut scaled = vec![0.0; k + 1];
    let mut flat = vec![0.0; k + 1];
    // open-interval counts, so cancelled sums snap back to exact zero
    let mut open_scaled = vec![0i64; k + 1];
    let mut open_flat = vec![0i64; k + 1];
    for i in 0..k - 1 {
        let mut range = 0.0;
        for j in i + 1..k {
            range += sig[j];
            let p = h2.get(i, j);
            if p == 0.0 {
                continue;
            }
            let (diff, open, w) = if range > 0.0 {
                (&mut scaled, &mut open_scaled, p / range)
            } else {
                (&mut flat, &mut open_flat, p / (j - i) as f64)
            };
            diff[i + 1] += w;
            diff[j + 1] -= w;
            open[i + 1] += 1;
            open[j + 1] -= 1;
        }
    }
    let mut out = Vec::with_capacity(k);
    let (mut acc_scaled, mut acc_flat) = (0.0, 0.0);
    let (mut n_scaled, mut n_flat) = (0i64, 0i64);
    for idx in 0..k {
        n_scaled += open_scaled[idx];
        n_flat += open_flat[idx];
        acc_scaled = if n_scaled == 0 { 0.0 } else { acc_scaled + scaled[idx] };
        acc_flat = if n_flat == 0 { 0.0 } else { acc_flat + flat[idx] };
        out.push((acc_scaled * sig[idx] + acc_flat).max(0.0));
    }
    Ok(Histogram1D::normalized(out))
}

/// Direct evaluation of `p(o_k) = sum_{i<j} p(o_k | c_ij) p(c_ij)` over every
/// `(i, j, k)`, `O(K^3)`. Reference for [`marginalize`].
pub fn marginalize_naive(h2: &CoOccurrenceHistogram, s: &SignificanceVector) -> Result<Histogram1D> {
    check_sizes(h2, s)?;
    let levels = h2.levels();
    let sig = s.values();
    let mut out = vec![0.0; levels];
    for i in 0..levels - 1 {
        for j in i + 1..levels {
            let p = h2.get(i, j);
            let range: f64 = sig[i + 1..=j].iter().sum();
            for (k, o) in out.iter_mut().enumerate() {
                *o += conditional_given_range(sig, range, i, j, k) * p;
            }
        }
    }
    Ok(Histogram1D::normalized(out))
}

/// Runs `tau` marginalization passes. The first uses uniform significance;
/// each later pass uses the previous density as its significance.
pub fn iterate_histogram(h2: &CoOccurrenceHistogram, tau: usize) -> Result<Histogram1D> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be >= 1".into()));
    }
    let mut s = SignificanceVector::uniform(h2.levels());
    let mut p = marginalize(h2, &s)?;
    for _ in 1..tau {
        s = SignificanceVector::from(&p);
        p = marginalize(h2, &s)?;
    }
    Ok(p)
}
