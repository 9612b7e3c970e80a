//! Dense eigensolver: unitary reduction to Hessenberg form, explicit
//! single-shift QR with accumulated Schur vectors, then triangular
//! back-substitution for eigenvectors.
//!
//! Eigenvalues within `CLUSTER_TOL` of each other are treated as one
//! cluster and their vectors jointly orthonormalized; when that fails
//! (defective blocks have no second eigenvector) the plain back-substituted
//! vector is kept, so every returned pair still satisfies the residual
//! bound even if the cluster is not fully orthonormal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{CMatrix, DENSE_DIM_CAP};

const EPS: f64 = f64::EPSILON;
/// Eigenvalues closer than this are clustered for joint orthonormalization.
pub const CLUSTER_TOL: f64 = 1e-8;
/// QR sweep budget per matrix dimension.
pub const SWEEPS_PER_DIM: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Sorted by argument (in [0, 2π)), then modulus.
    pub pairs: Vec<EigenPair>,
    /// False when the QR iteration hit its sweep cap; the pairs are then a
    /// flagged partial result.
    pub converged: bool,
    pub sweeps: usize,
}

pub fn dense_eigen(a: &CMatrix) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::validation("eigensolver needs a square matrix"));
    }
    let n = a.nrows();
    if n == 0 {
        return Err(Error::validation("eigensolver needs dimension at least 1"));
    }
    if n > DENSE_DIM_CAP {
        return Err(Error::Capacity(format!(
            "dimension {n} exceeds the dense cap {DENSE_DIM_CAP}"
        )));
    }
    if n == 1 {
        return Ok(EigenResult {
            pairs: vec![EigenPair { value: a[(0, 0)], vector: vec![Complex64::new(1.0, 0.0)] }],
            converged: true,
            sweeps: 0,
        });
    }

    let (mut t, mut z) = hessenberg(a);
    let (converged, sweeps) = qr_schur(&mut t, &mut z, SWEEPS_PER_DIM * n);

    // Eigenvectors by back-substitution on the (quasi-)triangular T.
    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|i| {
            let y = triangular_eigenvector(&t, i);
            let mut v = apply_columns(&z, &y);
            normalize(&mut v);
            EigenPair { value: t[(i, i)], vector: v }
        })
        .collect();

    orthonormalize_clusters(a, &mut pairs);

    pairs.sort_by(|p, q| {
        let ka = (p.value.arg().rem_euclid(std::f64::consts::TAU), p.value.norm());
        let kb = (q.value.arg().rem_euclid(std::f64::consts::TAU), q.value.norm());
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });

    Ok(EigenResult { pairs, converged, sweeps })
}

/// Unitary reduction A = Q H Q* with H upper Hessenberg, by Householder
/// reflections from the left and right.
fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm < EPS * h.frobenius_norm() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let tau = 2.0 / vv;

        // H ← P H (rows k+1.., columns k..): s_j = τ v*·H[·,j].
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= tau;
            for i in 0..m {
                h[(k + 1 + i, j)] -= s * v[i];
            }
        }
        // H ← H P (all rows, columns k+1..): s_i = τ H[i,·]·v.
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += h[(i, k + 1 + j)] * v[j];
            }
            s *= tau;
            for j in 0..m {
                h[(i, k + 1 + j)] -= s * v[j].conj();
            }
        }
        // Q ← Q P.
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += q[(i, k + 1 + j)] * v[j];
            }
            s *= tau;
            for j in 0..m {
                q[(i, k + 1 + j)] -= s * v[j].conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Explicit single-shift QR on a Hessenberg matrix, accumulating the
/// product of rotations into `z`. Returns (converged, sweeps).
fn qr_schur(h: &mut CMatrix, z: &mut CMatrix, max_sweeps: usize) -> (bool, usize) {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let fnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut stall = 0usize;
    loop {
        // Zero negligible subdiagonals.
        for k in 1..=hi {
            if h[(k, k - 1)] == zero {
                continue;
            }
            let local = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            let thresh = if local > 0.0 { EPS * local } else { EPS * fnorm };
            if h[(k, k - 1)].norm() <= thresh {
                h[(k, k - 1)] = zero;
            }
        }
        // Deflate converged trailing 1×1 blocks.
        while hi > 0 && h[(hi, hi - 1)] == zero {
            hi -= 1;
            stall = 0;
        }
        if hi == 0 {
            return (true, sweeps);
        }
        if sweeps >= max_sweeps {
            return (false, sweeps);
        }
        // Active block [lo, hi]: walk up while the subdiagonal is nonzero.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)] != zero {
            lo -= 1;
        }

        sweeps += 1;
        stall += 1;
        let sigma = if stall % 15 == 0 {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        for d in lo..=hi {
            h[(d, d)] -= sigma;
        }
        // Left rotations: zero the subdiagonal of the shifted block.
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + c * y;
            }
            rots.push((c, s));
        }
        // Right rotations: H ← R G*_lo … G*_{hi−1}, Z ← Z G*.
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for i in 0..=(k + 1).min(n - 1) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = c * x + y * s.conj();
                h[(i, k + 1)] = -s * x + c * y;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = c * x + y * s.conj();
                z[(i, k + 1)] = -s * x + c * y;
            }
        }
        for d in lo..=hi {
            h[(d, d)] += sigma;
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closer to the corner entry.
fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Givens rotation [[c, s], [−s̄, c]] (c real ≥ 0) sending
/// (a, b) ↦ (r, 0).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let d = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / d;
    let s = (a / a.norm()) * b.conj() / d;
    (c, s)
}

/// Solves (T − λ_i) y = 0 by back-substitution with guarded divisors;
/// y_i = 1, components above filled in, below zero.
fn triangular_eigenvector(t: &CMatrix, i: usize) -> Vec<Complex64> {
    let n = t.nrows();
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[i] = Complex64::new(1.0, 0.0);
    let smin = (EPS * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let li = t[(i, i)];
    for j in (0..i).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for k in j + 1..=i {
            s += t[(j, k)] * y[k];
        }
        let mut d = t[(j, j)] - li;
        if d.norm() < smin {
            d = Complex64::new(smin, 0.0);
        }
        y[j] = -s / d;
    }
    y
}

fn apply_columns(z: &CMatrix, y: &[Complex64]) -> Vec<Complex64> {
    let n = z.nrows();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, &c) in y.iter().enumerate() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += z[(i, j)] * c;
        }
    }
    out
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// Within each cluster of nearby eigenvalues, orthonormalize the vectors;
/// a vector that projects to (numerically) nothing keeps its original
/// back-substituted form instead.
fn orthonormalize_clusters(a: &CMatrix, pairs: &mut [EigenPair]) {
    let n = pairs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| {
        (pairs[p].value.re, pairs[p].value.im)
            .partial_cmp(&(pairs[q].value.re, pairs[q].value.im))
            .unwrap()
    });
    let mut cluster: Vec<usize> = Vec::new();
    let flush = |cluster: &mut Vec<usize>, pairs: &mut [EigenPair]| {
        if cluster.len() > 1 {
            let mut basis: Vec<Vec<Complex64>> = Vec::new();
            for &idx in cluster.iter() {
                let mut v = pairs[idx].vector.clone();
                for q in &basis {
                    let c: Complex64 =
                        v.iter().zip(q).map(|(vi, qi)| vi * qi.conj()).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
                let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if nv > 1e-8 {
                    for z in v.iter_mut() {
                        *z /= nv;
                    }
                    // Accept only if the orthonormalized vector is still an
                    // eigenvector of A (defective clusters fail here).
                    if residual(a, pairs[idx].value, &v) <= 1e-8 * a.frobenius_norm().max(1.0) {
                        pairs[idx].vector = v.clone();
                        basis.push(v);
                    }
                }
            }
        }
        cluster.clear();
    };
    for &idx in order.clone().iter() {
        match cluster.last() {
            Some(&prev) if (pairs[prev].value - pairs[idx].value).norm() <= CLUSTER_TOL => {
                cluster.push(idx);
            }
            Some(_) => {
                flush(&mut cluster, pairs);
                cluster.push(idx);
            }
            None => cluster.push(idx),
        }
    }
    flush(&mut cluster, pairs);
}

/// ‖A v − λ v‖ for a unit vector v.
pub fn residual(a: &CMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let av = a.apply(v);
    av.iter()
        .zip(v)
        .map(|(x, y)| (x - lambda * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
