//! Interval step functions: piecewise-constant complex functions with
//! finitely many breakpoints, identically zero outside their support.
//!
//! These are the concrete vectors of the L² branches. The plain inner
//! product here is the Lebesgue one; measure-weighted pairings are formed
//! where the measure is in scope (correlation and approximation code) by
//! refining against the measure's own breakpoints.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    /// Strictly increasing, length = values.len() + 1.
    breaks: Vec<f64>,
    /// values[i] holds on [breaks[i], breaks[i+1]).
    values: Vec<Complex64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 {
            return Err(Error::validation(format!(
                "step function needs one more breakpoint than values (got {} breakpoints, {} values)",
                breaks.len(),
                values.len()
            )));
        }
        if values.is_empty() {
            return Err(Error::validation("step function needs at least one cell"));
        }
        for w in breaks.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::validation(format!(
                    "breakpoints must be strictly increasing and finite (found {} then {})",
                    w[0], w[1]
                )));
            }
        }
        if !breaks.iter().all(|b| b.is_finite()) {
            return Err(Error::validation("breakpoints must be finite"));
        }
        Ok(StepFunction { breaks, values })
    }

    /// The constant function c on [0, 1).
    pub fn constant(c: Complex64) -> Self {
        StepFunction {
            breaks: vec![0.0, 1.0],
            values: vec![c],
        }
    }

    /// Indicator of [a, b) scaled by c.
    pub fn indicator(a: f64, b: f64, c: Complex64) -> Result<Self> {
        StepFunction::new(vec![a, b], vec![c])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    /// Point evaluation; cells are right-open, anything outside is 0.
    pub fn eval(&self, t: f64) -> Complex64 {
        if t < self.breaks[0] || t >= *self.breaks.last().unwrap() {
            return Complex64::new(0.0, 0.0);
        }
        let i = self.breaks.partition_point(|&b| b <= t) - 1;
        self.values[i]
    }

    /// Merged breakpoint grid of both functions (union of supports).
    pub fn refined_grid(&self, other: &Self) -> Vec<f64> {
        let mut grid: Vec<f64> = Vec::with_capacity(self.breaks.len() + other.breaks.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breaks.len() || j < other.breaks.len() {
            let next = match (self.breaks.get(i), other.breaks.get(j)) {
                (Some(&a), Some(&b)) => {
                    if a < b {
                        i += 1;
                        a
                    } else if b < a {
                        j += 1;
                        b
                    } else {
                        i += 1;
                        j += 1;
                        a
                    }
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => break,
            };
            if grid.last() != Some(&next) {
                grid.push(next);
            }
        }
        grid
    }

    /// Applies `op` cell-by-cell over the common refinement of the two
    /// functions, producing a step function on the merged grid.
    pub fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Self {
        let grid = self.refined_grid(other);
        let mut values = Vec::with_capacity(grid.len() - 1);
        for w in grid.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            values.push(op(self.eval(mid), other.eval(mid)));
        }
        StepFunction { breaks: grid, values }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise f · conj(g) on the common refinement.
    pub fn product_conj(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Lebesgue inner product ⟨f, g⟩ = ∫ f ḡ dt.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let grid = self.refined_grid(other);
        let mut acc = Complex64::new(0.0, 0.0);
        for w in grid.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let (a, b) = (self.eval(mid), other.eval(mid));
            if (a.re != 0.0 || a.im != 0.0) && (b.re != 0.0 || b.im != 0.0) {
                acc += (w[1] - w[0]) * a * b.conj();
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[1] - w[0]) * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Lebesgue integral ∫ f dt over the support.
    pub fn integral(&self) -> Complex64 {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[1] - w[0]) * v)
            .sum()
    }

    /// True when every value is real and ≥ 0 (used by measure densities).
    pub fn is_real_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }

    /// Drops zero-valued boundary cells and merges adjacent equal values;
    /// canonical form for serialization.
    pub fn compact(&self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(self.values.len());
        for (i, &v) in self.values.iter().enumerate() {
            match values.last() {
                Some(&last) if last == v => {
                    // extend the previous cell
                }
                _ => {
                    breaks.push(self.breaks[i]);
                    values.push(v);
                }
            }
        }
        breaks.push(*self.breaks.last().unwrap());
        // Trim leading/trailing zero cells unless that would empty the function.
        while values.len() > 1 && values[0] == Complex64::new(0.0, 0.0) {
            values.remove(0);
            breaks.remove(0);
        }
        while values.len() > 1 && *values.last().unwrap() == Complex64::new(0.0, 0.0) {
            values.pop();
            breaks.pop();
        }
        StepFunction { breaks, values }
    }
}
