//! Jacobi-preconditioned conjugate gradient for the RTV smoothing system
//! `(Id + lambda * L_w) x = b`, where `L_w` is the 4-neighbour weighted
//! graph Laplacian of the pixel grid.

use crate::{Error, Result};

/// Sparse SPD operator `Id + lambda * L_w` on a `width x height` grid.
///
/// Edge weights are given per pixel: `wx[q]` for the edge from `q` to its
/// right neighbour and `wy[q]` for the edge to the pixel below. Edges leaving
/// the frame carry no weight.
#[derive(Debug, Clone)]
pub struct SmoothingOperator {
    width: usize,
    height: usize,
    /// lambda-scaled couplings to the right / lower neighbour.
    right: Vec<f64>,
    down: Vec<f64>,
    diag: Vec<f64>,
}

/// Preconditioner for [`SmoothingOperator::solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    /// Diagonal scaling.
    #[default]
    Jacobi,
    /// Modified incomplete Cholesky with zero fill-in.
    IncompleteCholesky,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub steps: usize,
    /// `||A x - b|| / ||b||` at exit (0 when `b` is zero).
    pub relative_residual: f64,
}

impl SmoothingOperator {
    pub fn new(width: usize, height: usize, lambda: f64, wx: Vec<f64>, wy: Vec<f64>) -> Self {
        let n = width * height;
        assert_eq!(wx.len(), n);
        assert_eq!(wy.len(), n);
        let mut right: Vec<f64> = wx.into_iter().map(|w| lambda * w).collect();
        let mut down: Vec<f64> = wy.into_iter().map(|w| lambda * w).collect();
        for y in 0..height {
            right[y * width + width - 1] = 0.0;
        }
        for w in &mut down[(height - 1) * width..] {
            *w = 0.0;
        }
        let mut diag = vec![1.0; n];
        for q in 0..n {
            diag[q] += right[q] + down[q];
            if q % width > 0 {
                diag[q] += right[q - 1];
            }
            if q >= width {
                diag[q] += down[q - width];
            }
        }
        Self {
            width,
            height,
            right,
            down,
            diag,
        }
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let w = self.width;
        for y in 0..self.height {
            let base = y * w;
            let o = &mut out[base..base + w];
            let xr = &x[base..base + w];
            let right = &self.right[base..base + w - 1];
            for ((o, d), x) in o.iter_mut().zip(&self.diag[base..base + w]).zip(xr) {
                *o = d * x;
            }
            for ((o, c), x) in o[..w - 1].iter_mut().zip(right).zip(&xr[1..]) {
                *o -= c * x;
            }
            for ((o, c), x) in o[1..].iter_mut().zip(right).zip(&xr[..w - 1]) {
                *o -= c * x;
            }
            if y + 1 < self.height {
                let down = &self.down[base..base + w];
                for ((o, c), x) in o.iter_mut().zip(down).zip(&x[base + w..base + 2 * w]) {
                    *o -= c * x;
                }
            }
            if y > 0 {
                let up = &self.down[base - w..base];
                for ((o, c), x) in o.iter_mut().zip(up).zip(&x[base - w..base]) {
                    *o -= c * x;
                }
            }
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `||A x - b|| / ||b||`.
    pub fn relative_residual(&self, x: &[f64], b: &[f64]) -> f64 {
        let b_norm = norm(b);
        if b_norm == 0.0 {
            return norm(x);
        }
        let mut ax = vec![0.0; self.len()];
        self.apply(x, &mut ax);
        ax.iter_mut().zip(b).for_each(|(a, b)| *a -= b);
        norm(&ax) / b_norm
    }

    /// Solves `A x = b` in place starting from the contents of `x`.
    pub fn solve(&self, b: &[f64], x: &mut [f64], tol: f64, max_steps: usize) -> Result<SolveReport> {
        self.solve_with(b, x, tol, max_steps, Preconditioner::Jacobi)
    }

    pub fn solve_with(
        &self,
        b: &[f64],
        x: &mut [f64],
        tol: f64,
        max_steps: usize,
        preconditioner: Preconditioner,
    ) -> Result<SolveReport> {
        let n = self.len();
        assert_eq!(b.len(), n);
        assert_eq!(x.len(), n);
        let b_norm = norm(b);
        if b_norm == 0.0 {
            x.iter_mut().for_each(|v| *v = 0.0);
            return Ok(SolveReport {
                steps: 0,
                relative_residual: 0.0,
            });
        }
        let precond = match preconditioner {
            Preconditioner::Jacobi => Precond::Jacobi(self.diag.iter().map(|d| 1.0 / d).collect()),
            Preconditioner::IncompleteCholesky => Precond::Mic(self.mic_factor()),
        };

        let mut r = vec![0.0; n];
        self.apply(x, &mut r);
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        let mut z = vec![0.0; n];
        self.precondition(&precond, &r, &mut z);
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        let mut residual = norm(&r) / b_norm;

        let mut steps = 0;
        while residual > tol {
            if steps == max_steps {
                return Err(Error::SolverDidNotConverge { steps, residual });
            }
            self.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            x.iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
            r.iter_mut().zip(&ap).for_each(|(r, ap)| *r -= alpha * ap);
            steps += 1;
            residual = norm(&r) / b_norm;
            if residual <= tol {
                break;
            }
            self.precondition(&precond, &r, &mut z);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
        }

        // The recursive residual drifts from the true one; report the true value.
        let relative_residual = self.relative_residual(x, b);
        if relative_residual > tol {
            return Err(Error::SolverDidNotConverge {
                steps,
                residual: relative_residual,
            });
        }
        Ok(SolveReport {
            steps,
            relative_residual,
        })
    }

    /// Inverse pivots of the MIC(0) factor (Bridson's tuning: 0.97
    /// compensation, pivots below a quarter of the diagonal are reset).
    fn mic_factor(&self) -> Vec<f64> {
        const TAU: f64 = 0.97;
        const SIGMA: f64 = 0.25;
        let w = self.width;
        let mut inv_pivot = vec![0.0; self.len()];
        for q in 0..self.len() {
            let mut e = self.diag[q];
            if q % w > 0 {
                let p = inv_pivot[q - 1];
                let left = self.right[q - 1];
                e -= (left * p).powi(2) + TAU * left * self.down[q - 1] * p * p;
            }
            if q >= w {
                let p = inv_pivot[q - w];
                let up = self.down[q - w];
                e -= (up * p).powi(2) + TAU * up * self.right[q - w] * p * p;
            }
            if e < SIGMA * self.diag[q] {
                e = self.diag[q];
            }
            inv_pivot[q] = 1.0 / e.sqrt();
        }
        inv_pivot
    }

    fn precondition(&self, precond: &Precond, r: &[f64], z: &mut [f64]) {
        match precond {
            Precond::Jacobi(inv_diag) => {
                z.iter_mut().zip(r).zip(inv_diag).for_each(|((z, r), d)| *z = r * d);
            }
            Precond::Mic(inv_pivot) => {
                let w = self.width;
                // L y = r; off-diagonal entries of A are -right / -down
                for y in 0..self.height {
                    for cx in 0..w {
                        let q = y * w + cx;
                        let mut t = r[q];
                        if cx > 0 {
                            t += self.right[q - 1] * inv_pivot[q - 1] * z[q - 1];
                        }
                        if y > 0 {
                            t += self.down[q - w] * inv_pivot[q - w] * z[q - w];
                        }
                        z[q] = t * inv_pivot[q];
                    }
                }
                // L^T z = y
                for y in (0..self.height).rev() {
                    for cx in (0..w).rev() {
                        let q = y * w + cx;
                        let mut t = z[q];
                        if cx + 1 < w {
                            t += self.right[q] * inv_pivot[q] * z[q + 1];
                        }
                        if y + 1 < self.height {
                            t += self.down[q] * inv_pivot[q] * z[q + w];
                        }
                        z[q] = t * inv_pivot[q];
                    }
                }
            }
        }
    }
}

enum Precond {
    Jacobi(Vec<f64>),
    Mic(Vec<f64>),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
