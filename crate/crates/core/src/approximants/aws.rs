//! Almost weakly stable approximation of the identity.
//!
//! The approximant is multiplication by e^{i q(s)/n} on L²[0, 1] for a
//! strictly increasing map q with values in [0, 1].  Its distance from the
//! identity is sup_s |e^{i q(s)/n} − 1| ≤ |e^{i/n} − 1| = 2·sin(1/(2n)),
//! while its spectral measure — the pushforward of Lebesgue measure under
//! s ↦ q(s)/(2πn) — is absolutely continuous, so the operator has no
//! unimodular eigenvalues at all.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{OperatorRep, SpectralMeasure};
use crate::space::StepFunction;

use super::report::{ApproxReport, Certificate};

/// A strictly increasing piecewise-linear map q : [0, 1] → [0, 1], stored
/// as its knots (s, q(s)).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearMap {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinearMap {
    /// The identity map s ↦ s.
    pub fn identity() -> Self {
        PiecewiseLinearMap { knots: vec![(0.0, 0.0), (1.0, 1.0)] }
    }

    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("a piecewise-linear map needs at least two knots"));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if first.0 != 0.0 || last.0 != 1.0 {
            return Err(Error::domain("the map's domain must be exactly [0, 1]"));
        }
        if !(0.0..=1.0).contains(&first.1) || !(0.0..=1.0).contains(&last.1) {
            return Err(Error::domain("the map's values must stay inside [0, 1]"));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                return Err(Error::domain("the map must be strictly increasing"));
            }
        }
        Ok(PiecewiseLinearMap { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let i = self
            .knots
            .partition_point(|&(x, _)| x <= s)
            .saturating_sub(1)
            .min(self.knots.len() - 2);
        let (x0, y0) = self.knots[i];
        let (x1, y1) = self.knots[i + 1];
        y0 + (s - x0) * (y1 - y0) / (x1 - x0)
    }

    /// Largest value the map attains.
    pub fn top(&self) -> f64 {
        self.knots[self.knots.len() - 1].1
    }
}

/// The a-priori distance bound |e^{i/n} − 1| = 2·sin(1/(2n)).
pub fn aws_bound(n: u64) -> f64 {
    2.0 * (0.5 / n as f64).sin()
}

pub fn aws_approx_identity(
    n: u64,
    q: &PiecewiseLinearMap,
) -> Result<(OperatorRep, ApproxReport)> {
    if n < 1 {
        return Err(Error::domain("the perturbation order n must be at least 1"));
    }
    let tau_n = 2.0 * std::f64::consts::PI * n as f64;

    // Pushforward of Lebesgue under θ(s) = q(s)/(2πn): on each linear piece
    // the density is the reciprocal slope ds/dθ, constant per cell.
    let knots = q.knots();
    let mut breaks = Vec::with_capacity(knots.len());
    let mut values = Vec::with_capacity(knots.len() - 1);
    for (s, t) in knots {
        let _ = s;
        breaks.push(t / tau_n);
    }
    for w in knots.windows(2) {
        let ds = w[1].0 - w[0].0;
        let dtheta = (w[1].1 - w[0].1) / tau_n;
        values.push(Complex64::new(ds / dtheta, 0.0));
    }
    let density = StepFunction::new(breaks, values)?;
    let measure = SpectralMeasure::from_density(density);
    measure.validate()?;
    let op = OperatorRep::SpectralUnitary(measure);

    // sup_s |e^{i q(s)/n} − 1| is attained at the top value of q.
    let achieved = 2.0 * (q.top() / (2.0 * n as f64)).sin();
    let mut report = ApproxReport {
        requested_eps: None,
        achieved: Some(achieved),
        bound: Some(aws_bound(n)),
        certificate: Some(Certificate::AtomFree { branch_count: 1 }),
        ..ApproxReport::default()
    };
    report.note(format!(
        "multiplication by e^{{i q(s)/{n}}}; absolutely continuous spectrum on an arc of width {:.3e} turns",
        (q.top() - q.knots[0].1) / tau_n
    ));
    Ok((op, report))
}
