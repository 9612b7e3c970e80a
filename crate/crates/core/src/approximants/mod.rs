//! Approximation procedures: rational-rotation meshes, periodic
//! approximants, almost weakly stable approximants, shift windows, polar
//! factors.

mod aws;
mod aws_periodic;
mod isometry;
mod mesh;
mod periodic;
mod polar;
mod report;
mod shift;

pub use aws::{aws_approx_identity, aws_bound, PiecewiseLinearMap};
pub use aws_periodic::{aws_approx_periodic, detect_period};
pub use isometry::{approx_isometry, IsometryTarget};
pub use mesh::{
    certify_mesh, chord, is_prime, next_prime, snap_down, snap_down_rational, two_prime_mesh,
    MeshCertificate, MESH_Q_CAP,
};
pub use periodic::periodic_approx_unitary;
pub use polar::unitary_polar_factor;
pub use report::{ApproxReport, Certificate, EigenGroupEmbedding, ProbeError};
pub use shift::{periodic_approx_shift, shift_error_sq};
