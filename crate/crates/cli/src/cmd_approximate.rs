//! `opstab approximate`: run one of the approximation constructions and
//! report its certificate, achieved distance, and per-probe errors.

use std::path::Path;

use opstab_core::approximants::{
    aws_approx_identity, aws_approx_periodic, periodic_approx_shift, periodic_approx_unitary,
    ApproxReport, Certificate, PiecewiseLinearMap,
};
use opstab_core::operator::OperatorRep;
use opstab_core::textio::{operator_to_string, Node};
use opstab_core::{Error, Result};

use crate::output::{emit_report, float_atom, float_leaf, key, leaf, write_atomic};
use crate::probes::{parse_probe_list, sparse_probes};
use crate::sources::resolve_operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ApproxMode {
    /// Periodic unitary within ε of the input, with period above the floor.
    Periodic,
    /// Atom-free unitary agreeing with a periodic input on the probes.
    AwsPeriodic,
    /// Atom-free unitary within 2·sin(1/(2n)) of the identity.
    AwsIdentity,
    /// n-cycle approximating the right shift on the probes.
    Shift,
}

impl ApproxMode {
    fn name(self) -> &'static str {
        match self {
            ApproxMode::Periodic => "periodic",
            ApproxMode::AwsPeriodic => "aws-periodic",
            ApproxMode::AwsIdentity => "aws-identity",
            ApproxMode::Shift => "shift",
        }
    }
}

pub fn run(
    spec: Option<&str>,
    mode: ApproxMode,
    period_min: u64,
    eps: f64,
    probe_args: &[String],
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let (approx, report) = match mode {
        ApproxMode::Periodic => {
            let op = require_spec(spec, mode)?;
            periodic_approx_unitary(&op, period_min, eps)?
        }
        ApproxMode::AwsPeriodic => {
            let op = require_spec(spec, mode)?;
            let xs = sparse_probes(&parse_probe_list(probe_args, seed, &op)?)?;
            aws_approx_periodic(&op, &xs, eps)?
        }
        ApproxMode::AwsIdentity => {
            reject_spec(spec, mode)?;
            aws_approx_identity(period_min, &PiecewiseLinearMap::identity())?
        }
        ApproxMode::Shift => {
            reject_spec(spec, mode)?;
            let target = OperatorRep::RightShift { branches: 1 };
            let xs = sparse_probes(&parse_probe_list(probe_args, seed, &target)?)?;
            periodic_approx_shift(period_min, 1, &xs)?
        }
    };

    let mut items = vec![leaf("mode", mode.name())];
    if let Some(s) = spec {
        items.push(leaf("source", s));
    }
    items.extend(report_items(&report));
    if let Some(path) = out {
        write_atomic(path, operator_to_string(&approx).as_bytes())?;
        items.push(leaf("out", path.display()));
    }
    emit_report(None, &key("approximation-report", items))
}

fn require_spec(spec: Option<&str>, mode: ApproxMode) -> Result<OperatorRep> {
    match spec {
        Some(s) => resolve_operator(s),
        None => Err(Error::domain(format!("mode {} needs --spec", mode.name()))),
    }
}

fn reject_spec(spec: Option<&str>, mode: ApproxMode) -> Result<()> {
    match spec {
        None => Ok(()),
        Some(_) => Err(Error::domain(format!(
            "mode {} constructs its own operator and takes no --spec",
            mode.name()
        ))),
    }
}

pub fn report_items(report: &ApproxReport) -> Vec<Node> {
    let mut items = Vec::new();
    if let Some(eps) = report.requested_eps {
        items.push(float_leaf("requested-eps", eps));
    }
    if let Some(a) = report.achieved {
        items.push(float_leaf("achieved", a));
    }
    if let Some(b) = report.bound {
        items.push(float_leaf("bound", b));
    }
    match &report.certificate {
        Some(Certificate::Periodic { period }) => {
            items.push(key("certificate", [key("periodic", [leaf("period", period)])]));
        }
        Some(Certificate::AtomFree { branch_count }) => {
            items.push(key(
                "certificate",
                [key("atom-free", [leaf("branch-count", branch_count)])],
            ));
        }
        None => {}
    }
    if !report.probe_errors.is_empty() {
        items.push(key(
            "probe-errors",
            report.probe_errors.iter().map(|p| {
                let mut entry = vec![float_leaf("forward", p.forward)];
                if let Some(adj) = p.adjoint {
                    entry.push(float_leaf("adjoint", adj));
                }
                Node::List(entry)
            }),
        ));
    }
    if !report.embeddings.is_empty() {
        items.push(key(
            "embeddings",
            report.embeddings.iter().map(|e| {
                key(
                    "embedding",
                    [
                        key(
                            "eigenvalue",
                            [float_atom(e.eigenvalue.re), float_atom(e.eigenvalue.im)],
                        ),
                        leaf("branch", e.branch),
                        key(
                            "sources",
                            e.sources.iter().map(|(idx, level)| {
                                Node::list([
                                    Node::atom(idx.branch.to_string()),
                                    Node::atom(idx.slot.to_string()),
                                    Node::atom(level.to_string()),
                                ])
                            }),
                        ),
                    ],
                )
            }),
        ));
    }
    if !report.notes.is_empty() {
        items.push(key("notes", report.notes.iter().map(Node::atom)));
    }
    items
}
