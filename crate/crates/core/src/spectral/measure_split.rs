//! Splitting a spectral measure into atomic and continuous parts.

use crate::error::Result;
use crate::operator::SpectralMeasure;

/// Returns (atomic part, continuous part); masses add up to the original
/// exactly since the parts are moved, not recomputed.
pub fn measure_split(mu: &SpectralMeasure) -> Result<(SpectralMeasure, SpectralMeasure)> {
    mu.validate()?;
    Ok(mu.split_atomic_continuous())
}
