//! Tail rules for diagonal operators: the entry at every slot beyond the
//! explicitly stored ones.

use crate::error::{Error, Result};

use super::scalar::{lcm_u128, RationalAngle, Scalar};

/// Cap on the joint period two tails may need for an exact sup — beyond
/// this the comparison is refused rather than sampled.
pub const TAIL_PERIOD_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// Entry 1 at every tail slot.
    Identity,
    /// The same scalar at every tail slot.
    Constant(Scalar),
    /// Slot-indexed rational rotation: entry e^{2πi p s / q} at slot s.
    Rotation(RationalAngle),
    /// Entries repeat the given scalars cyclically in slot index.
    Cycle(Vec<Scalar>),
}

impl Tail {
    /// The entry this rule assigns to slot s.
    pub fn entry(&self, slot: u64) -> Scalar {
        match self {
            Tail::Identity => Scalar::one(),
            Tail::Constant(s) => *s,
            Tail::Rotation(r) => Scalar::Root(r.times(slot)),
            Tail::Cycle(v) => v[(slot % v.len() as u64) as usize],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Tail::Cycle(v) if v.is_empty() => {
                Err(Error::validation("cycle tail needs at least one entry"))
            }
            _ => Ok(()),
        }
    }

    /// Period of the slot-indexed entry *sequence* (not of the operator):
    /// the least P with entry(s + P) = entry(s) for all s.
    pub fn sequence_period(&self) -> u128 {
        match self {
            Tail::Identity | Tail::Constant(_) => 1,
            Tail::Rotation(r) => r.q() as u128,
            Tail::Cycle(v) => v.len() as u128,
        }
    }

    /// Joint sequence period of two tails, refused beyond the cap.
    pub fn joint_period(&self, other: &Tail) -> Result<u128> {
        let p = lcm_u128(self.sequence_period(), other.sequence_period())
            .filter(|&p| p <= TAIL_PERIOD_CAP)
            .ok_or_else(|| {
                Error::TailIncomparable(format!(
                    "joint tail period exceeds cap {TAIL_PERIOD_CAP}"
                ))
            })?;
        Ok(p)
    }

    /// Largest |entry| over the tail (1 unless a constant/cycle scalar is
    /// strictly inside the disk).
    pub fn sup_abs(&self) -> f64 {
        match self {
            Tail::Identity | Tail::Rotation(_) => 1.0,
            Tail::Constant(s) => s.abs(),
            Tail::Cycle(v) => v.iter().map(|s| s.abs()).fold(0.0, f64::max),
        }
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        match self {
            Tail::Identity | Tail::Rotation(_) => true,
            Tail::Constant(s) => s.is_unimodular(tol),
            Tail::Cycle(v) => v.iter().all(|s| s.is_unimodular(tol)),
        }
    }

    /// Least P ≥ 1 with entry(s)^P = 1 for every s, if one exists within
    /// the cap (the operator-power period of the tail part).
    pub fn power_period(&self, cap: u64, tol: f64) -> Option<u128> {
        match self {
            Tail::Identity => Some(1),
            Tail::Constant(s) => s.period(cap, tol).map(|p| p as u128),
            // entry(s)^P = e^{2πi p s P / q} = 1 for all s iff q | pP,
            // i.e. P a multiple of q (p, q coprime).
            Tail::Rotation(r) => {
                if r.p() == 0 {
                    Some(1)
                } else {
                    Some(r.q() as u128)
                }
            }
            Tail::Cycle(v) => {
                let mut acc: u128 = 1;
                for s in v {
                    let p = s.period(cap, tol)? as u128;
                    acc = lcm_u128(acc, p)?;
                }
                Some(acc)
            }
        }
    }

    pub fn conj(&self) -> Tail {
        match self {
            Tail::Identity => Tail::Identity,
            Tail::Constant(s) => Tail::Constant(s.conj()),
            Tail::Rotation(r) => Tail::Rotation(r.negate()),
            Tail::Cycle(v) => Tail::Cycle(v.iter().map(Scalar::conj).collect()),
        }
    }

    /// Tail rule for the n-th power of the operator.
    pub fn pow(&self, n: u64) -> Tail {
        match self {
            Tail::Identity => Tail::Identity,
            Tail::Constant(s) => Tail::Constant(s.powu(n)),
            // entry(s)^n = e^{2πi (pn) s / q}
            Tail::Rotation(r) => {
                let pn = (r.p() as u128 * n as u128 % r.q() as u128) as u64;
                Tail::Rotation(RationalAngle::new(pn, r.q()).unwrap())
            }
            Tail::Cycle(v) => Tail::Cycle(v.iter().map(|s| s.powu(n)).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e2pi;

    #[test]
    fn rotation_tail_entries() {
        let t = Tail::Rotation(RationalAngle::new(1, 4).unwrap());
        assert_eq!(t.entry(0).to_c64(), e2pi(0.0));
        assert_eq!(t.entry(1).to_c64(), e2pi(0.25));
        assert_eq!(t.entry(2).to_c64(), e2pi(0.5));
        assert_eq!(t.entry(5).to_c64(), e2pi(0.25));
    }

    #[test]
    fn cycle_tail_wraps() {
        let t = Tail::Cycle(vec![Scalar::one(), Scalar::complex(-1.0, 0.0)]);
        assert_eq!(t.entry(0).to_c64().re, 1.0);
        assert_eq!(t.entry(1).to_c64().re, -1.0);
        assert_eq!(t.entry(7).to_c64().re, -1.0);
        assert_eq!(t.sequence_period(), 2);
    }

    #[test]
    fn empty_cycle_rejected() {
        assert!(Tail::Cycle(vec![]).validate().is_err());
    }

    #[test]
    fn power_period_of_rotation_is_denominator() {
        let t = Tail::Rotation(RationalAngle::new(2, 7).unwrap());
        assert_eq!(t.power_period(100, 1e-9), Some(7));
        let id_rot = Tail::Rotation(RationalAngle::zero());
        assert_eq!(id_rot.power_period(100, 1e-9), Some(1));
    }

    #[test]
    fn joint_period_respects_cap() {
        let a = Tail::Rotation(RationalAngle::new(1, (1 << 13) - 1).unwrap());
        let b = Tail::Rotation(RationalAngle::new(1, (1 << 13) + 1).unwrap());
        // lcm of 8191 and 8193 is ~6.7e7, above the 2^24 cap.
        assert!(a.joint_period(&b).is_err());
        assert_eq!(a.joint_period(&a).unwrap(), (1 << 13) - 1);
    }

    #[test]
    fn pow_matches_entrywise_power() {
        let t = Tail::Rotation(RationalAngle::new(3, 8).unwrap());
        let t2 = t.pow(5);
        for s in 0..20 {
            let direct = t.entry(s).powu(5).to_c64();
            let ruled = t2.entry(s).to_c64();
            assert!((direct - ruled).norm() < 1e-14, "slot {s}");
        }
    }
}
