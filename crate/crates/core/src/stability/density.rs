//! Density profiles of correlation sequences: how often |c_n| dips below a
//! threshold, as a running fraction D(N), plus the Cesàro energy averages
//! A(N) = (1/N) Σ |c_n|².
//!
//! Decay along a density-one set of exponents (D(N) → 1 for every ε) is the
//! almost-weak-stability signature; A(N) tends to the total squared atomic
//! weight of the spectral measure, so A(N) → 0 detects a purely continuous
//! spectrum from the sequence alone.

use crate::error::{Error, Result};

use super::correlation::CorrelationSeries;

/// Prefix-counted small-value profile of a series at a fixed threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    eps: f64,
    /// counts[n] = #{1 ≤ m ≤ n : |c_m| < eps}; counts[0] = 0.
    counts: Vec<u64>,
}

impl DensityProfile {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest N the profile covers.
    pub fn horizon(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// #{1 ≤ m ≤ n : |c_m| < ε}.
    pub fn count(&self, n: u64) -> Option<u64> {
        self.counts.get(n as usize).copied()
    }

    /// D(n) = count(n)/n, the fraction of exponents up to n with small
    /// correlation. Defined for 1 ≤ n ≤ horizon.
    pub fn density(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        self.count(n).map(|c| c as f64 / n as f64)
    }

    /// #{lo < m ≤ hi : |c_m| ≥ ε}, the exceedances in a window.
    pub fn exceedances(&self, lo: u64, hi: u64) -> Option<u64> {
        if lo > hi {
            return Some(0);
        }
        let (a, b) = (self.count(lo)?, self.count(hi)?);
        Some((hi - lo) - (b - a))
    }

    /// A conservative stand-in for the lower density: the worst D(n) over
    /// the back half of the horizon, where the running fraction has settled.
    pub fn lower_density_estimate(&self) -> Option<f64> {
        let horizon = self.horizon();
        if horizon == 0 {
            return None;
        }
        let lo = (horizon / 2).max(1);
        (lo..=horizon)
            .filter_map(|n| self.density(n))
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// Profile of the series at threshold ε > 0.
pub fn density_profile(series: &CorrelationSeries, eps: f64) -> Result<DensityProfile> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!(
            "density threshold must be positive, got {eps}"
        )));
    }
    let values = series.values();
    let mut counts = Vec::with_capacity(values.len());
    counts.push(0u64);
    let mut acc = 0u64;
    for v in &values[1..] {
        if v.norm() < eps {
            acc += 1;
        }
        counts.push(acc);
    }
    Ok(DensityProfile { eps, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{
        Angle, Atom, OperatorRep, RationalAngle, SelfSimilarPart, SpectralMeasure,
    };
    use crate::space::{CompositeIndex, SparseVector, StepFunction, Vector};
    use crate::stability::correlation_sequence;
    use num_complex::Complex64;

    fn basis(slot: u64) -> Vector {
        Vector::Sparse(SparseVector::basis(CompositeIndex::new(0, slot)))
    }

    fn unit_constant() -> Vector {
        Vector::Step { branch: 0, f: StepFunction::constant(Complex64::new(1.0, 0.0)) }
    }

    fn cantor() -> SpectralMeasure {
        SpectralMeasure {
            atoms: vec![],
            density: None,
            self_similar: Some(SelfSimilarPart {
                ratio: 1.0 / 3.0,
                digits: vec![0.0, 2.0 / 3.0],
                weight: 1.0,
            }),
        }
    }

    #[test]
    fn vanishing_tails_push_the_density_to_one() {
        let op = OperatorRep::RightShift { branches: 1 };
        let s = correlation_sequence(&op, &basis(0), &basis(4), 1000).unwrap();
        let d = density_profile(&s, 0.5).unwrap();
        // only n = 4 exceeds: D(N) = (N − 1)/N from there on
        assert_eq!(d.count(3), Some(3));
        assert_eq!(d.count(4), Some(3));
        assert_eq!(d.density(1000), Some(0.999));
        assert_eq!(d.exceedances(0, 1000), Some(1));
        assert_eq!(d.exceedances(500, 1000), Some(0));
        assert!(d.lower_density_estimate().unwrap() >= 0.99);
    }

    #[test]
    fn constant_correlations_have_zero_density() {
        let op = OperatorRep::identity();
        let s = correlation_sequence(&op, &basis(0), &basis(0), 200).unwrap();
        let d = density_profile(&s, 0.5).unwrap();
        for n in 1..=200 {
            assert_eq!(d.density(n), Some(0.0));
        }
        assert_eq!(d.lower_density_estimate(), Some(0.0));
        assert_eq!(d.exceedances(100, 200), Some(100));
    }

    #[test]
    fn threshold_must_be_positive() {
        let s = correlation_sequence(&OperatorRep::identity(), &basis(0), &basis(0), 4).unwrap();
        assert!(density_profile(&s, 0.0).is_err());
        assert!(density_profile(&s, -0.1).is_err());
        assert!(density_profile(&s, f64::NAN).is_err());
    }

    #[test]
    fn cantor_profile_matches_the_frozen_census() {
        let op = OperatorRep::SpectralUnitary(cantor());
        let one = unit_constant();
        let s = correlation_sequence(&op, &one, &one, 10_000).unwrap();
        let d = density_profile(&s, 0.1).unwrap();
        assert_eq!(d.count(10_000), Some(9772));
        assert_eq!(d.density(10_000), Some(0.9772));
        assert_eq!(d.exceedances(5_000, 10_000), Some(56));
        // the 3-adic spikes never decay: |c_{3^k}| = |c_1| ≈ 0.3714
        for k in 0..=8u32 {
            let n = 3u64.pow(k);
            assert!(s.value(n).unwrap().norm() > 0.3, "spike at n = {n}");
        }
        assert!(s.tail_sup(5_001).unwrap() > 0.3);
    }

    #[test]
    fn two_equal_atoms_split_the_wiener_limit() {
        let mu = SpectralMeasure {
            atoms: vec![
                Atom { location: Angle::Turns(0.0), weight: 0.5 },
                Atom { location: Angle::Turns(std::f64::consts::FRAC_1_SQRT_2), weight: 0.5 },
            ],
            density: None,
            self_similar: None,
        };
        let op = OperatorRep::SpectralUnitary(mu);
        let one = unit_constant();
        let s = correlation_sequence(&op, &one, &one, 100_000).unwrap();
        let a = s.wiener(100_000).unwrap();
        assert!((a - 0.5).abs() < 0.01, "A(1e5) = {a}");
    }

    #[test]
    fn lebesgue_wiener_averages_vanish_exactly() {
        let op = OperatorRep::SpectralUnitary(SpectralMeasure::lebesgue());
        let one = unit_constant();
        let s = correlation_sequence(&op, &one, &one, 5_000).unwrap();
        for n in 1..=5_000u64 {
            assert_eq!(s.wiener(n), Some(0.0), "A({n})");
        }
    }

    #[test]
    fn a_single_atom_keeps_all_the_energy() {
        let mu = SpectralMeasure {
            atoms: vec![Atom {
                location: Angle::Rational(RationalAngle::new(1, 4).unwrap()),
                weight: 1.0,
            }],
            density: None,
            self_similar: None,
        };
        let op = OperatorRep::SpectralUnitary(mu);
        let one = unit_constant();
        let s = correlation_sequence(&op, &one, &one, 1_000).unwrap();
        for n in 1..=1_000u64 {
            assert_eq!(s.wiener(n), Some(1.0), "A({n})");
        }
    }
}
