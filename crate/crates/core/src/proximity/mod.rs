//! Proximity and flatness checks: slice statistics, unique-optimum
//! reduction, spindle-walk certificates and exact bound reports.

mod certificate;
mod integer;
mod slice;
mod theorems;
mod volume;

pub use certificate::{lemma_factor, spindle_certificate, split_dim, CertificateStep, WalkCertificate};
pub use integer::{
    pi_on_box, proximity_exact, reduce_unique_ip, search_radius, PiEstimate, ProximityResult, ReducedIp,
};
pub use slice::{prox_d_value, prox_value, slice_transform, ProxQuery, ProxValue, Slice, SliceFamily, SliceTransform};
pub use theorems::{check_theorem, minors_in_two_levels, CheckOptions};
pub use volume::volume_inequality_check;

use crate::linalg::LinalgError;
use crate::plane::PlaneError;
use crate::polyhedra::PolyhedronError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProximityError {
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("{0}")]
    Argument(String),
    #[error("direction vanishes on every candidate slice")]
    DegenerateDirection,
    #[error("no slice of dimension {0}")]
    NoSliceOfDimension(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("integer program is infeasible")]
    EmptyIntegerSet,
    #[error("reduction did not reach a unique integer point")]
    ReductionIncomplete,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<LinalgError> for ProximityError {
    fn from(e: LinalgError) -> Self {
        ProximityError::Polyhedron(e.into())
    }
}
