//! Dense complex matrices: a small row-major implementation with exactly
//! the pieces the crate needs — products, adjoints, LU solves, and a
//! power-iteration operator-norm estimate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::SplitMix64;

/// Hard cap on dense dimensions; beyond this the structured
/// representations must be used instead.
pub const DENSE_DIM_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a square matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::validation("matrix needs at least one row"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::validation("all matrix rows must have the same length"));
        }
        let data = rows.into_iter().flatten().collect();
        Ok(CMatrix { rows: n, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// A^n by repeated squaring (square matrices only).
    pub fn pow(&self, n: u64) -> CMatrix {
        assert!(self.is_square());
        let mut acc = CMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Solves A x = b by LU with partial pivoting. Errors on a
    /// (numerically) singular pivot.
    pub fn lu_solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        assert!(self.is_square());
        let n = self.rows;
        assert_eq!(b.len(), n);
        let mut a = self.data.clone();
        let mut x: Vec<Complex64> = b.to_vec();
        let scale = self.frobenius_norm().max(1e-300);
        for col in 0..n {
            // Pivot.
            let mut p = col;
            let mut best = a[col * n + col].norm();
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= 1e-14 * scale {
                return Err(Error::Domain(format!(
                    "matrix is singular to working precision (pivot {best:.3e} at column {col})"
                )));
            }
            if p != col {
                for j in 0..n {
                    a.swap(col * n + j, p * n + j);
                }
                x.swap(col, p);
            }
            let piv = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / piv;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                a[r * n + col] = Complex64::new(0.0, 0.0);
                for j in col + 1..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
                let xc = x[col];
                x[r] -= f * xc;
            }
        }
        // Back substitution.
        for col in (0..n).rev() {
            let mut s = x[col];
            for j in col + 1..n {
                s -= a[col * n + j] * x[j];
            }
            x[col] = s / a[col * n + col];
        }
        Ok(x)
    }

    /// A⁻¹ column by column via `lu_solve`.
    pub fn invert(&self) -> Result<CMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.lu_solve(&e)?;
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

const OPNORM_MAX_ITERS: usize = 20_000;
const OPNORM_RESTARTS: u64 = 3;

/// Operator (spectral) norm estimate by power iteration on T*T, restarted
/// from a few deterministic pseudo-random vectors. Hits `NoConvergence`
/// with the best estimate when the Rayleigh quotient fails to settle.
pub fn operator_norm_estimate(a: &CMatrix) -> Result<f64> {
    let n = a.ncols();
    if n == 0 || a.frobenius_norm() == 0.0 {
        return Ok(0.0);
    }
    // Gram matrix B = A* A is Hermitian PSD; its top eigenvalue is σ₁².
    let b = a.adjoint().mul(a);
    let mut best = 0.0f64;
    let mut worst_residual = f64::INFINITY;
    let mut converged = false;
    for restart in 0..OPNORM_RESTARTS {
        let mut rng = SplitMix64::new(0x5eed_0000 + restart);
        let mut v: Vec<Complex64> = (0..n).map(|_| rng.next_complex()).collect();
        normalize(&mut v);
        let mut lambda = 0.0f64;
        let mut settled = 0;
        for _ in 0..OPNORM_MAX_ITERS {
            let w = b.apply(&v);
            // Rayleigh quotient of the Hermitian B is real.
            let ray: f64 = w.iter().zip(&v).map(|(wi, vi)| (wi * vi.conj()).re).sum();
            let wn = norm(&w);
            if wn == 0.0 {
                lambda = 0.0;
                settled = 5;
                break;
            }
            let rel = (ray - lambda).abs() / ray.abs().max(1e-300);
            lambda = ray;
            v = w;
            normalize(&mut v);
            if rel < 1e-14 {
                settled += 1;
                if settled >= 5 {
                    break;
                }
            } else {
                settled = 0;
            }
        }
        let w = b.apply(&v);
        let residual = norm(
            &w.iter()
                .zip(&v)
                .map(|(wi, vi)| wi - lambda * vi)
                .collect::<Vec<_>>(),
        );
        best = best.max(lambda.max(0.0).sqrt());
        worst_residual = worst_residual.min(residual);
        if settled >= 5 || residual <= 1e-10 * lambda.abs().max(1.0) {
            converged = true;
        }
    }
    if converged {
        Ok(best)
    } else {
        Err(Error::NoConvergence {
            what: "operator norm power iteration".into(),
            iterations: OPNORM_MAX_ITERS,
            estimate: best,
            residual: worst_residual,
        })
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}
