//! Scalar entries of diagonal operators.
//!
//! A scalar is either a plain complex number or a tagged root of unity
//! e^{2πi p/q}. The tag keeps powers exact: raising a root of unity to any
//! power stays on the rational circle, so period certificates and
//! fixed-point checks need no floating-point tolerance.

use num_complex::Complex64;

use crate::e2pi;
use crate::error::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    (a / x).checked_mul(b)
}

/// A fraction p/q in lowest terms with 0 ≤ p < q, denoting the angle
/// 2π p/q (equivalently the point e^{2πi p/q} on the unit circle).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    p: u64,
    q: u64,
}

impl RationalAngle {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::validation("rational angle needs a nonzero denominator"));
        }
        let p = p % q;
        let g = gcd(p, q).max(1);
        Ok(RationalAngle { p: p / g, q: q / g })
    }

    pub fn zero() -> Self {
        RationalAngle { p: 0, q: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The angle as a fraction of a full turn, in [0, 1).
    pub fn turns(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn value(&self) -> Complex64 {
        e2pi(self.turns())
    }

    /// The angle multiplied by n, reduced mod 1 — exact.
    pub fn times(&self, n: u64) -> RationalAngle {
        // (p * n) mod q cannot overflow in u128.
        let pn = (self.p as u128 * n as u128 % self.q as u128) as u64;
        RationalAngle::new(pn, self.q).unwrap()
    }

    /// Sum of two rational angles mod 1 — exact, errors if the common
    /// denominator overflows.
    pub fn add(&self, other: &RationalAngle) -> Result<RationalAngle> {
        let q = lcm_u128(self.q as u128, other.q as u128)
            .filter(|&q| q <= u64::MAX as u128)
            .ok_or_else(|| Error::Capacity("rational angle denominator overflow".into()))?;
        let q = q as u64;
        let a = self.p as u128 * (q / self.q) as u128;
        let b = other.p as u128 * (q / other.q) as u128;
        let p = ((a + b) % q as u128) as u64;
        RationalAngle::new(p, q)
    }

    pub fn negate(&self) -> RationalAngle {
        if self.p == 0 {
            *self
        } else {
            RationalAngle { p: self.q - self.p, q: self.q }
        }
    }

    /// Exact comparison with another fraction (as angles in [0,1)).
    pub fn cmp_exact(&self, other: &RationalAngle) -> std::cmp::Ordering {
        let lhs = self.p as u128 * other.q as u128;
        let rhs = other.p as u128 * self.q as u128;
        lhs.cmp(&rhs)
    }
}

/// A diagonal coefficient: a free complex number, or a root of unity kept
/// in exact rational form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Complex(Complex64),
    Root(RationalAngle),
}

impl Scalar {
    pub fn one() -> Self {
        Scalar::Root(RationalAngle::zero())
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Complex(Complex64::new(re, im))
    }

    pub fn root(p: u64, q: u64) -> Result<Self> {
        Ok(Scalar::Root(RationalAngle::new(p, q)?))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Complex(z) => *z,
            Scalar::Root(r) => r.value(),
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            Scalar::Complex(z) => z.norm(),
            Scalar::Root(_) => 1.0,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Complex(z) => Scalar::Complex(z.conj()),
            Scalar::Root(r) => Scalar::Root(r.negate()),
        }
    }

    /// n-th power; exact for roots of unity, repeated squaring otherwise.
    pub fn powu(&self, n: u64) -> Scalar {
        match self {
            Scalar::Root(r) => Scalar::Root(r.times(n)),
            Scalar::Complex(z) => {
                if n == 0 {
                    return Scalar::Complex(Complex64::new(1.0, 0.0));
                }
                let mut base = *z;
                let mut acc = Complex64::new(1.0, 0.0);
                let mut k = n;
                while k > 0 {
                    if k & 1 == 1 {
                        acc *= base;
                    }
                    base *= base;
                    k >>= 1;
                }
                Scalar::Complex(acc)
            }
        }
    }

    /// Multiplicative period if this scalar is a root of unity: the least
    /// P ≥ 1 with s^P = 1. Exact for tagged roots; for free complex values
    /// the smallest P ≤ cap with |z^P − 1| ≤ tol, if any.
    pub fn period(&self, cap: u64, tol: f64) -> Option<u64> {
        match self {
            Scalar::Root(r) => Some(r.q),
            Scalar::Complex(z) => {
                if (z.norm() - 1.0).abs() > tol {
                    return None;
                }
                let mut w = *z;
                for k in 1..=cap {
                    if (w - Complex64::new(1.0, 0.0)).norm() <= tol {
                        return Some(k);
                    }
                    w *= z;
                }
                None
            }
        }
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.abs() - 1.0).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_angle_reduces() {
        let r = RationalAngle::new(4, 6).unwrap();
        assert_eq!((r.p(), r.q()), (2, 3));
        let r = RationalAngle::new(7, 7).unwrap();
        assert_eq!((r.p(), r.q()), (0, 1));
        assert!(RationalAngle::new(1, 0).is_err());
    }

    #[test]
    fn root_powers_are_exact() {
        let s = Scalar::root(1, 7).unwrap();
        let s7 = s.powu(7);
        assert_eq!(s7.to_c64(), Complex64::new(1.0, 0.0));
        match s7 {
            Scalar::Root(r) => assert_eq!((r.p(), r.q()), (0, 1)),
            _ => panic!("power of a root must stay a root"),
        }
    }

    #[test]
    fn root_period_is_denominator() {
        assert_eq!(Scalar::root(3, 7).unwrap().period(100, 1e-9), Some(7));
        assert_eq!(Scalar::one().period(100, 1e-9), Some(1));
    }

    #[test]
    fn complex_period_detection() {
        let z = Scalar::Complex(e2pi(1.0 / 5.0));
        assert_eq!(z.period(10, 1e-9), Some(5));
        let nz = Scalar::Complex(Complex64::new(0.5, 0.0));
        assert_eq!(nz.period(10, 1e-9), None);
    }

    #[test]
    fn conj_negates_angle() {
        let s = Scalar::root(2, 5).unwrap();
        let c = s.conj();
        assert!((c.to_c64() - s.to_c64().conj()).norm() < 1e-15);
        match c {
            Scalar::Root(r) => assert_eq!((r.p(), r.q()), (3, 5)),
            _ => panic!(),
        }
    }

    #[test]
    fn complex_pow_matches_naive() {
        let z = Complex64::new(0.3, -0.4);
        let mut naive = Complex64::new(1.0, 0.0);
        for n in 0..20u64 {
            let fast = Scalar::Complex(z).powu(n).to_c64();
            assert!((fast - naive).norm() < 1e-12, "n = {n}");
            naive *= z;
        }
    }

    #[test]
    fn angle_arithmetic() {
        let a = RationalAngle::new(1, 6).unwrap();
        let b = RationalAngle::new(1, 3).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!((s.p(), s.q()), (1, 2));
        assert_eq!(a.times(9), RationalAngle::new(1, 2).unwrap());
        assert_eq!(
            a.cmp_exact(&b),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn lcm_checked() {
        assert_eq!(lcm_u128(6, 10), Some(30));
        assert_eq!(lcm_u128(0, 10), Some(0));
        assert!(lcm_u128(u128::MAX, u128::MAX - 1).is_none());
    }
}
