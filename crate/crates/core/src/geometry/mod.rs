//! Phase-space geometry of Gaussian states and the three bijections
//! Fermi ellipsoid / quantum blob / microlocal pair <-> state.

mod blob;
mod ellipsoid;
mod micro;

pub use blob::{
    blob_from_state, blob_inside_fermi, state_from_blob, InclusionCertificate, QuantumBlob,
};
pub use ellipsoid::{fermi_from_state, state_from_fermi, Ellipsoid};
pub use micro::{
    john_ellipsoid_of_pair, lagrangian_polar_dual, micro_from_state, oblique_projection_shapes,
    polar_dual, state_from_micro, CarriedEllipsoid, LagrangianFrame, MicrolocalPair, Side,
};
