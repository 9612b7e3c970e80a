//! Spectral measures on the circle, parametrized by [0, 1) (the angle as a
//! fraction of a full turn).
//!
//! A measure is a sum of three parts, any of which may be absent:
//! finitely many atoms, an absolutely continuous part with step-function
//! density, and a self-similar singular part (the invariant measure of an
//! equal-ratio, equal-weight iterated function system, scaled by a total
//! weight).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::StepFunction;

use super::scalar::RationalAngle;

/// An angle in [0, 1) turns, optionally carrying an exact rational tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Turns(f64),
    Rational(RationalAngle),
}

impl Angle {
    pub fn turns(&self) -> f64 {
        match self {
            Angle::Turns(t) => *t,
            Angle::Rational(r) => r.turns(),
        }
    }

    pub fn rational(&self) -> Option<RationalAngle> {
        match self {
            Angle::Turns(_) => None,
            Angle::Rational(r) => Some(*r),
        }
    }

    pub fn value(&self) -> Complex64 {
        crate::e2pi(self.turns())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub location: Angle,
    pub weight: f64,
}

/// Invariant measure of the IFS {s ↦ r s + d : d ∈ digits} with equal
/// branch weights, scaled by `weight`. With ratio 1/3 and digits {0, 2/3}
/// this is the Cantor–Lebesgue measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimilarPart {
    pub ratio: f64,
    pub digits: Vec<f64>,
    pub weight: f64,
}

impl SelfSimilarPart {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::validation(format!(
                "self-similar ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.digits.len() < 2 {
            return Err(Error::validation(
                "self-similar part needs at least two digits (one digit gives an atom)",
            ));
        }
        for w in self.digits.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::validation("digits must be strictly increasing"));
            }
        }
        let max = *self.digits.last().unwrap();
        if self.digits[0] < 0.0 || max / (1.0 - self.ratio) > 1.0 + 1e-9 {
            return Err(Error::validation(
                "self-similar attractor must stay inside [0, 1]",
            ));
        }
        if !(self.weight > 0.0 && self.weight.is_finite()) {
            return Err(Error::validation("self-similar weight must be positive"));
        }
        Ok(())
    }

    /// Upper end of the attractor, max digit / (1 − r).
    pub fn sup_support(&self) -> f64 {
        self.digits.last().unwrap() / (1.0 - self.ratio)
    }

    /// Lower end of the attractor, min digit / (1 − r).
    pub fn inf_support(&self) -> f64 {
        self.digits[0] / (1.0 - self.ratio)
    }

    /// Distribution function of the normalized invariant measure:
    /// ν([0, x]) for the unit-mass ν, ignoring `weight`.
    ///
    /// Uses the self-similarity ν = (1/m) Σ_d ν ∘ f_d⁻¹ recursively; when
    /// the maps have disjoint images (the usual Cantor-like case) at most
    /// one branch recurses per level, so the walk is linear in the depth.
    /// Beyond the depth cap the remaining interval carries at most
    /// (1/m)^depth of mass per open branch, which is below f64 resolution
    /// long before the cap.
    pub fn cdf(&self, x: f64) -> f64 {
        fn go(part: &SelfSimilarPart, x: f64, depth: u32) -> f64 {
            if x < part.inf_support() {
                return 0.0;
            }
            if x >= part.sup_support() {
                return 1.0;
            }
            if depth == 0 {
                return 0.5;
            }
            let m = part.digits.len() as f64;
            let mut total = 0.0;
            for &d in &part.digits {
                total += go(part, (x - d) / part.ratio, depth - 1) / m;
            }
            total
        }
        go(self, x, 96)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralMeasure {
    pub atoms: Vec<Atom>,
    pub density: Option<StepFunction>,
    pub self_similar: Option<SelfSimilarPart>,
}

impl SpectralMeasure {
    pub fn point_mass(location: Angle, weight: f64) -> Self {
        SpectralMeasure {
            atoms: vec![Atom { location, weight }],
            density: None,
            self_similar: None,
        }
    }

    /// Normalized Lebesgue measure on the circle.
    pub fn lebesgue() -> Self {
        SpectralMeasure {
            atoms: vec![],
            density: Some(StepFunction::constant(Complex64::new(1.0, 0.0))),
            self_similar: None,
        }
    }

    pub fn from_density(density: StepFunction) -> Self {
        SpectralMeasure {
            atoms: vec![],
            density: Some(density),
            self_similar: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            let t = a.location.turns();
            if !(0.0..1.0).contains(&t) {
                return Err(Error::validation(format!(
                    "atom location must lie in [0, 1), got {t}"
                )));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(Error::validation("atom weights must be positive"));
            }
        }
        let mut locs: Vec<f64> = self.atoms.iter().map(|a| a.location.turns()).collect();
        locs.sort_by(f64::total_cmp);
        for w in locs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::validation(format!(
                    "duplicate atom location {}",
                    w[0]
                )));
            }
        }
        if let Some(d) = &self.density {
            if !d.is_real_nonnegative() {
                return Err(Error::validation("density must be real and nonnegative"));
            }
            let (lo, hi) = d.support();
            if lo < -1e-12 || hi > 1.0 + 1e-12 {
                return Err(Error::validation(
                    "density support must stay inside [0, 1]",
                ));
            }
        }
        if let Some(ss) = &self.self_similar {
            ss.validate()?;
        }
        Ok(())
    }

    pub fn atomic_mass(&self) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc + a.weight)
    }

    pub fn continuous_mass(&self) -> f64 {
        let ac = self
            .density
            .as_ref()
            .map(|d| d.integral().re)
            .unwrap_or(0.0);
        let ss = self.self_similar.as_ref().map(|s| s.weight).unwrap_or(0.0);
        ac + ss
    }

    pub fn total_mass(&self) -> f64 {
        self.atomic_mass() + self.continuous_mass()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.density.is_none() && self.self_similar.is_none()
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    /// Splits into (atomic part, continuous part). Either side may be the
    /// zero measure.
    pub fn split_atomic_continuous(&self) -> (SpectralMeasure, SpectralMeasure) {
        let atomic = SpectralMeasure {
            atoms: self.atoms.clone(),
            density: None,
            self_similar: None,
        };
        let continuous = SpectralMeasure {
            atoms: vec![],
            density: self.density.clone(),
            self_similar: self.self_similar.clone(),
        };
        (atomic, continuous)
    }

    /// Mass of the half-open interval [a, b) ⊆ [0, 1).  Endpoint handling
    /// only matters for atoms; the continuous parts give the same mass
    /// either way.
    pub fn mass_of(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut m = 0.0;
        for atom in &self.atoms {
            let t = atom.location.turns();
            if t >= a && t < b {
                m += atom.weight;
            }
        }
        if let Some(d) = &self.density {
            let breaks = d.breaks();
            let values = d.values();
            for i in 0..values.len() {
                let lo = breaks[i].max(a);
                let hi = breaks[i + 1].min(b);
                if hi > lo {
                    m += (hi - lo) * values[i].re;
                }
            }
        }
        if let Some(ss) = &self.self_similar {
            m += ss.weight * (ss.cdf(b) - ss.cdf(a));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_has_unit_mass() {
        let m = SpectralMeasure::lebesgue();
        m.validate().unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(m.atomic_mass(), 0.0);
    }

    #[test]
    fn cantor_part_validates() {
        let m = SpectralMeasure {
            atoms: vec![],
            density: None,
            self_similar: Some(SelfSimilarPart {
                ratio: 1.0 / 3.0,
                digits: vec![0.0, 2.0 / 3.0],
                weight: 1.0,
            }),
        };
        m.validate().unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_single_digit_ifs() {
        let ss = SelfSimilarPart {
            ratio: 0.5,
            digits: vec![0.25],
            weight: 1.0,
        };
        assert!(ss.validate().is_err());
    }

    #[test]
    fn rejects_duplicate_atoms() {
        let m = SpectralMeasure {
            atoms: vec![
                Atom { location: Angle::Turns(0.25), weight: 0.5 },
                Atom { location: Angle::Rational(RationalAngle::new(1, 4).unwrap()), weight: 0.5 },
            ],
            density: None,
            self_similar: None,
        };
        assert!(m.validate().is_err());
    }

    #[test]
    fn rejects_escaping_attractor() {
        let ss = SelfSimilarPart {
            ratio: 0.5,
            digits: vec![0.0, 0.9],
            weight: 1.0,
        };
        assert!(ss.validate().is_err(), "0.9 / 0.5 = 1.8 escapes [0,1]");
    }

    #[test]
    fn split_separates_parts() {
        let m = SpectralMeasure {
            atoms: vec![Atom { location: Angle::Turns(0.5), weight: 0.3 }],
            density: Some(StepFunction::constant(Complex64::new(0.7, 0.0))),
            self_similar: None,
        };
        let (a, c) = m.split_atomic_continuous();
        assert!((a.total_mass() - 0.3).abs() < 1e-15);
        assert!((c.total_mass() - 0.7).abs() < 1e-15);
        assert!(a.density.is_none());
        assert!(c.atoms.is_empty());
    }

    fn cantor() -> SelfSimilarPart {
        SelfSimilarPart {
            ratio: 1.0 / 3.0,
            digits: vec![0.0, 2.0 / 3.0],
            weight: 1.0,
        }
    }

    #[test]
    fn cantor_cdf_matches_known_values() {
        let ss = cantor();
        // The left third carries half the mass, the left ninth a quarter.
        assert!((ss.cdf(1.0 / 3.0) - 0.5).abs() < 1e-12);
        assert!((ss.cdf(1.0 / 9.0) - 0.25).abs() < 1e-12);
        // The middle-third gap is a plateau at 1/2.
        assert!((ss.cdf(0.4) - 0.5).abs() < 1e-12);
        assert!((ss.cdf(0.5) - 0.5).abs() < 1e-12);
        assert!((ss.cdf(0.6) - 0.5).abs() < 1e-12);
        assert_eq!(ss.cdf(-0.1), 0.0);
        assert_eq!(ss.cdf(1.1), 1.0);
        // Monotone along a grid.
        let mut prev = 0.0;
        for i in 0..=100 {
            let f = ss.cdf(i as f64 / 100.0);
            assert!(f >= prev - 1e-15, "cdf dipped at {i}/100");
            prev = f;
        }
    }

    #[test]
    fn interval_mass_combines_all_parts() {
        // Half Cantor, a quarter atom at 1/2, a quarter Lebesgue: each third
        // of the circle then carries exactly one third of the mass.
        let m = SpectralMeasure {
            atoms: vec![Atom { location: Angle::Turns(0.5), weight: 0.25 }],
            density: Some(StepFunction::constant(Complex64::new(0.25, 0.0))),
            self_similar: Some(SelfSimilarPart { weight: 0.5, ..cantor() }),
        };
        m.validate().unwrap();
        assert!((m.mass_of(0.0, 1.0) - 1.0).abs() < 1e-12);
        for (a, b) in [(0.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0), (2.0 / 3.0, 1.0)] {
            assert!(
                (m.mass_of(a, b) - 1.0 / 3.0).abs() < 1e-12,
                "[{a}, {b}) mass {}",
                m.mass_of(a, b)
            );
        }
        // Half-open convention: the atom sits in [0.5, 0.6), not [0.4, 0.5).
        assert!((m.mass_of(0.5, 0.6) - (0.25 + 0.025)).abs() < 1e-12);
        assert!((m.mass_of(0.4, 0.5) - 0.025).abs() < 1e-12);
        assert_eq!(m.mass_of(0.7, 0.2), 0.0);
    }
}
