//! Numerical tolerances. All are relative to the norm of the quantity
//! being compared unless noted.

/// Default relative tolerance for identities that are exact in exact arithmetic.
pub const DEFAULT_REL: f64 = 1e-10;

/// Largest accepted asymmetry of an input matrix before it is rejected.
pub const MAX_ASYMMETRY: f64 = 1e-8;

/// A matrix is positive definite when `min eig > PD_RATIO * max eig`.
pub const PD_RATIO: f64 = 1e-10;

/// Symplecticity defect accepted for internally built matrices.
pub const SYMPLECTIC: f64 = 1e-9;

/// Symplecticity defect accepted when loading a matrix from a file.
pub const SYMPLECTIC_LOAD: f64 = 1e-8;

/// Acceptance band for recognising a Fermi ellipsoid.
pub const FERMI_RECOGNITION: f64 = 1e-8;

/// `|det L|` below this is treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Tolerance for the positive-semidefinite and capacity checks of the
/// quantum condition.
pub const QUANTUM_CONDITION: f64 = 1e-9;

/// Nesting tolerance for `lambda_max >= 1`.
pub const NESTING: f64 = 1e-10;
