//! Gaussian coherent states as phase-space geometry: Fermi ellipsoids,
//! quantum blobs and microlocal pairs, with symplectic capacities and
//! uncertainty checks.

pub mod capacity;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod schema;
pub mod symplectic;
pub mod tol;

pub use capacity::{
    eh_capacities, ellipsoid_capacity, fermi_capacity, quantum_condition, CapacityReport, EhEntry,
    QuantumConditionReport,
};
pub use error::{Error, Result};
pub use gaussian::{wigner_covariance, wigner_eval, GaussianState};
pub use geometry::{
    blob_from_state, fermi_from_state, micro_from_state, state_from_blob, state_from_fermi,
    state_from_micro, Ellipsoid, MicrolocalPair, QuantumBlob,
};
pub use matrix::{Matrix, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
pub use symplectic::{pre_iwasawa, symplectic_eigenvalues, SymplecticMatrix};
