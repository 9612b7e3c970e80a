//! Named operator constructions, addressable as `preset:NAME` wherever a
//! spec file is accepted.

use opstab_core::operator::{
    Angle, Atom, DiagonalOp, OperatorRep, Scalar, SelfSimilarPart, SpectralMeasure,
};
use opstab_core::space::StepFunction;
use opstab_core::{Complex64, Error, Result};

pub const PRESET_NAMES: &[&str] = &[
    "identity",
    "minus-identity",
    "shift",
    "rotation-1-7",
    "rotation-3-7",
    "cyclic-7",
    "cantor",
    "lebesgue",
    "two-atoms",
    "mixed",
];

/// Resolve a preset name to its operator.
pub fn preset(name: &str) -> Result<OperatorRep> {
    let op = match name {
        "identity" => OperatorRep::identity(),
        "minus-identity" => constant_rotation(1, 2)?,
        "shift" => OperatorRep::RightShift { branches: 1 },
        "rotation-1-7" => constant_rotation(1, 7)?,
        "rotation-3-7" => constant_rotation(3, 7)?,
        "cyclic-7" => OperatorRep::CyclicMix { period: 7, branches: 1 },
        "cantor" => OperatorRep::SpectralUnitary(SpectralMeasure {
            atoms: vec![],
            density: None,
            self_similar: Some(SelfSimilarPart {
                ratio: 1.0 / 3.0,
                digits: vec![0.0, 2.0 / 3.0],
                weight: 1.0,
            }),
        }),
        "lebesgue" => OperatorRep::SpectralUnitary(SpectralMeasure::from_density(
            StepFunction::constant(Complex64::new(1.0, 0.0)),
        )),
        "two-atoms" => OperatorRep::SpectralUnitary(SpectralMeasure {
            atoms: vec![
                Atom { location: Angle::Turns(0.0), weight: 0.5 },
                Atom { location: Angle::Turns(std::f64::consts::FRAC_1_SQRT_2), weight: 0.5 },
            ],
            density: None,
            self_similar: None,
        }),
        "mixed" => OperatorRep::DirectSum(vec![
            constant_rotation(1, 5)?,
            OperatorRep::RightShift { branches: 1 },
        ]),
        other => {
            return Err(Error::domain(format!(
                "unknown preset '{other}'; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    op.validate()?;
    Ok(op)
}

fn constant_rotation(p: u64, q: u64) -> Result<OperatorRep> {
    Ok(OperatorRep::Diagonal(DiagonalOp::constant(Scalar::root(p, q)?)?))
}
