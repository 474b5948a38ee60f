//! Numerical toolkit for the facial geometry of compact spectrahedra.
//!
//! Given a symmetric matrix pencil `Q(z) = A0 + sum z_i A_i` and its
//! spectrahedron `K = {z : Q(z) >= 0}`, the crate provides:
//!
//! - pencil evaluation, membership, Hermitian-to-real doubling, and
//!   affine-hull reduction ([`pencil`]);
//! - boundary stratification by kernel dimension with locally-closed
//!   witnesses ([`strata`]);
//! - facial analysis and extreme-point tests, cross-validated by a
//!   geometric segment-probing oracle ([`faces`]);
//! - Perron eigenpairs with verified quantitative entry bounds ([`perron`]);
//! - continuous kernel sections on stratum pieces and their positive
//!   semidefinite Gram kernels ([`sections`]);
//! - spectral splits, Hadamard inverses, and the one-positive-eigenvalue
//!   PSD criterion ([`hadamard`]);
//! - end-to-end separation certificates built from all of the above
//!   ([`certify`]);
//! - the finite separation principle for PVM/POVM pairs ([`povm`]).
//!
//! Every randomized probe takes an explicit seed; all operations are pure
//! functions of immutable inputs and safe to share across threads.

pub mod certify;
pub mod error;
pub mod faces;
pub mod hadamard;
pub mod library;
pub mod linalg;
pub mod pencil;
pub mod perron;
pub mod povm;
pub mod sampling;
pub mod sections;
pub mod strata;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
