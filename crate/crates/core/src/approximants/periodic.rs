//! Periodic approximation of unitary operators.
//!
//! Every eigenvalue angle is snapped down onto a certified rational-rotation
//! mesh whose denominators all exceed the requested floor N, so the output
//! is periodic with period lcm(denominators) > N while staying within ε in
//! operator norm.  For diagonal inputs the achieved distance is the exact
//! sup over entries; for spectral inputs the measure is pushed forward onto
//! the mesh, arc by arc, which turns it purely atomic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::operator::{
    diagonal_distance, lcm_u128, Angle, Atom, DiagonalOp, OperatorRep, RationalAngle, Scalar,
    SpectralMeasure, Tail, CLASSIFY_TOL,
};

use super::mesh::{certify_mesh, chord, snap_down, snap_down_rational, two_prime_mesh};
use super::report::{ApproxReport, Certificate};

/// Largest rotation-tail period we are willing to expand into an explicit
/// cycle while snapping.
const CYCLE_MATERIALIZE_CAP: u64 = 1 << 16;

fn snap_scalar(s: &Scalar, n_floor: u64, q_max: u64) -> Result<RationalAngle> {
    match s {
        Scalar::Root(r) => snap_down_rational(*r, n_floor, q_max),
        Scalar::Complex(z) => {
            snap_down(z.arg() / (2.0 * std::f64::consts::PI), n_floor, q_max)
        }
    }
}

pub fn periodic_approx_unitary(
    u: &OperatorRep,
    n_floor: u64,
    eps: f64,
) -> Result<(OperatorRep, ApproxReport)> {
    if n_floor < 1 {
        return Err(Error::domain("period floor N must be at least 1"));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain("tolerance must be a positive finite number"));
    }
    match u {
        OperatorRep::Diagonal(d) => diagonal_path(d, n_floor, eps),
        OperatorRep::SpectralUnitary(mu) => spectral_path(mu, n_floor, eps),
        other => Err(Error::kind_mismatch(format!(
            "periodic approximation expects a diagonal or spectral unitary, got {other:?}"
        ))),
    }
}

fn diagonal_path(d: &DiagonalOp, n_floor: u64, eps: f64) -> Result<(OperatorRep, ApproxReport)> {
    if !d.is_unimodular(CLASSIFY_TOL) {
        return Err(Error::ClassMismatch(
            "periodic approximation needs a unitary input; a diagonal entry is off the circle"
                .into(),
        ));
    }
    let cert = certify_mesh(n_floor, eps)?;
    let mut period: u128 = 1;
    let mut bump_period = |q: u64| -> Result<()> {
        period = lcm_u128(period, q as u128)
            .ok_or_else(|| Error::Capacity("certified period overflows u128".into()))?;
        Ok(())
    };

    let mut entries: BTreeMap<u64, Scalar> = BTreeMap::new();
    for (&slot, s) in d.explicit_entries() {
        let snapped = snap_scalar(s, cert.n_floor, cert.q_max)?;
        bump_period(snapped.q())?;
        entries.insert(slot, Scalar::Root(snapped));
    }

    let tail = match d.tail() {
        Tail::Identity => {
            let snapped = snap_scalar(&Scalar::one(), cert.n_floor, cert.q_max)?;
            bump_period(snapped.q())?;
            Tail::Constant(Scalar::Root(snapped))
        }
        Tail::Constant(s) => {
            let snapped = snap_scalar(s, cert.n_floor, cert.q_max)?;
            bump_period(snapped.q())?;
            Tail::Constant(Scalar::Root(snapped))
        }
        Tail::Rotation(r) => {
            // The residue sequence r·s cycles with period q; snap one full
            // cycle.  When every residue is already a mesh point the tail is
            // left in rotation form, preserving the fixed-point property.
            let q = r.q();
            if q > CYCLE_MATERIALIZE_CAP {
                return Err(Error::Capacity(format!(
                    "rotation tail period {q} exceeds the cycle expansion cap {CYCLE_MATERIALIZE_CAP}"
                )));
            }
            let mut cycle = Vec::with_capacity(q as usize);
            let mut unchanged = true;
            for s in 0..q {
                let residue = r.times(s);
                let snapped = snap_down_rational(residue, cert.n_floor, cert.q_max)?;
                if snapped != residue {
                    unchanged = false;
                }
                cycle.push(Scalar::Root(snapped));
            }
            if unchanged {
                bump_period(q)?;
                Tail::Rotation(*r)
            } else {
                for s in &cycle {
                    if let Scalar::Root(r) = s {
                        bump_period(r.q())?;
                    }
                }
                Tail::Cycle(cycle)
            }
        }
        Tail::Cycle(v) => {
            let mut cycle = Vec::with_capacity(v.len());
            for s in v {
                let snapped = snap_scalar(s, cert.n_floor, cert.q_max)?;
                bump_period(snapped.q())?;
                cycle.push(Scalar::Root(snapped));
            }
            Tail::Cycle(cycle)
        }
    };

    let p = DiagonalOp::new(entries, tail)?;
    let achieved = diagonal_distance(d, &p)?;
    if achieved > eps {
        return Err(Error::CertificateFailure(format!(
            "snapped diagonal sits at distance {achieved:.3e}, above the requested {eps:.3e}"
        )));
    }

    let mut report = ApproxReport {
        requested_eps: Some(eps),
        achieved: Some(achieved),
        bound: Some(2.0 * (std::f64::consts::PI * cert.max_gap_turns).sin()),
        certificate: Some(Certificate::Periodic { period }),
        ..ApproxReport::default()
    };
    report.note(format!(
        "mesh order ({}, {}] certified by primes {} and {}",
        cert.n_floor, cert.q_max, cert.p1, cert.p2
    ));
    Ok((OperatorRep::Diagonal(p), report))
}

fn spectral_path(
    mu: &SpectralMeasure,
    n_floor: u64,
    eps: f64,
) -> Result<(OperatorRep, ApproxReport)> {
    mu.validate()?;
    let cert = certify_mesh(n_floor, eps)?;
    let (atomic, continuous) = mu.split_atomic_continuous();

    // Exact location -> accumulated weight; keys are reduced fractions.
    let mut out: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut worst = 0.0f64;
    let mut bump = |key: RationalAngle, mass: f64, displacement_chord: f64, worst: &mut f64| {
        if mass > 0.0 {
            *out.entry((key.p(), key.q())).or_insert(0.0) += mass;
            if displacement_chord > *worst {
                *worst = displacement_chord;
            }
        }
    };

    // Atoms snap individually on the full mesh band, so an atom already on
    // the mesh stays exactly put.
    for atom in &atomic.atoms {
        let snapped = match atom.location {
            Angle::Rational(r) => snap_down_rational(r, cert.n_floor, cert.q_max)?,
            Angle::Turns(t) => snap_down(t, cert.n_floor, cert.q_max)?,
        };
        let c = chord(atom.location.turns(), snapped.turns());
        bump(snapped, atom.weight, c, &mut worst);
    }

    // The continuous part is pushed arc by arc onto the two-prime grid; the
    // last grid point also receives the wrap arc across angle 0.
    let grid = two_prime_mesh(cert.p1, cert.p2);
    let last = *grid.last().expect("two-prime grid is nonempty");
    for j in 0..grid.len() - 1 {
        let (a, b) = (grid[j].turns(), grid[j + 1].turns());
        let mass = continuous.mass_of(a, b);
        bump(grid[j], mass, chord(a, b), &mut worst);
    }
    let wrap_mass = continuous.mass_of(last.turns(), 1.0) + continuous.mass_of(0.0, grid[0].turns());
    let wrap_width = 1.0 - last.turns() + grid[0].turns();
    bump(
        last,
        wrap_mass,
        2.0 * (std::f64::consts::PI * wrap_width.min(0.5)).sin(),
        &mut worst,
    );

    let mut period: u128 = 1;
    let mut atoms = Vec::with_capacity(out.len());
    let mut pairs: Vec<(RationalAngle, f64)> = out
        .into_iter()
        .map(|((p, q), w)| (RationalAngle::new(p, q).expect("stored reduced"), w))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp_exact(&b.0));
    for (loc, w) in pairs {
        period = lcm_u128(period, loc.q() as u128)
            .ok_or_else(|| Error::Capacity("certified period overflows u128".into()))?;
        atoms.push(Atom { location: Angle::Rational(loc), weight: w });
    }

    let snapped = SpectralMeasure { atoms, density: None, self_similar: None };
    snapped.validate()?;
    let mass_drift = (snapped.total_mass() - mu.total_mass()).abs();
    if mass_drift > 1e-9 * mu.total_mass().max(1.0) {
        return Err(Error::CertificateFailure(format!(
            "pushforward lost {mass_drift:.3e} of the measure's mass"
        )));
    }
    if worst > eps {
        return Err(Error::CertificateFailure(format!(
            "support displacement {worst:.3e} exceeds the requested {eps:.3e}"
        )));
    }

    let mut report = ApproxReport {
        requested_eps: Some(eps),
        achieved: Some(worst),
        bound: Some(2.0 * (std::f64::consts::PI * cert.max_gap_turns).sin()),
        certificate: Some(Certificate::Periodic { period }),
        ..ApproxReport::default()
    };
    report.note(format!(
        "measure pushed onto {} mesh atoms; mass drift {mass_drift:.3e}",
        snapped.atoms.len()
    ));
    Ok((OperatorRep::SpectralUnitary(snapped), report))
}
