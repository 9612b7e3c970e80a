//! Structured operators on lazily infinite Hilbert spaces.
//!
//! The crate builds around a composite index space H = ⊕_b ℓ²(ℕ): sparse
//! complex vectors and interval step functions are the exact citizens,
//! operators are structured representations (diagonal, shift, cyclic mix,
//! dense block, spectral-measure unitary, direct sum) rather than matrices.
//! On top of that sit spectral decompositions (reversible/stable splitting,
//! Wold), periodic and almost-weakly-stable approximation procedures,
//! correlation sequences with density and Cesàro statistics, the three
//! operator metrics (strong*, strong, weak), and the category-set
//! membership predicates used by the stability experiments.

pub mod error;
pub mod space;
pub mod operator;
pub mod spectral;
pub mod approximants;
pub mod stability;
pub mod textio;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// e^{2πi x}, with the argument reduced to [0,1) before scaling so that
/// quarter-turn angles come out bit-exact (1, i, −1, −i).
pub fn e2pi(x: f64) -> Complex64 {
    let r = x - x.floor();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if r == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if r == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else if r == 0.75 {
        Complex64::new(0.0, -1.0)
    } else {
        let t = std::f64::consts::TAU * r;
        Complex64::new(t.cos(), t.sin())
    }
}

/// Deterministic 64-bit mixer used wherever the library needs arbitrary
/// but reproducible start vectors (power iteration, probe generation).
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn next_complex(&mut self) -> Complex64 {
        Complex64::new(2.0 * self.next_f64() - 1.0, 2.0 * self.next_f64() - 1.0)
    }
}

/// FNV-1a over bytes; stable content hash for provenance records.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
