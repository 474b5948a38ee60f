//! Bundled example pencils.
//!
//! These exercise every module and every error path: a full-dimensional
//! smooth body (disk), a polytope (interval, square), a Hermitian pencil
//! (ball3), a flat set (segment), and a single point (singleton).

use nalgebra::{dmatrix, DMatrix};

use crate::pencil::{HermitianPencil, PencilFile, SymmetricPencil};

/// `diag(1 + z, 1 - z)` on R: K = [-1, 1].
pub fn interval() -> SymmetricPencil {
    SymmetricPencil::new(DMatrix::identity(2, 2), vec![dmatrix![1.0, 0.0; 0.0, -1.0]])
        .expect("static pencil")
}

/// `I + z1 diag(1,-1) + z2 antidiag(1,1)`: K is the closed unit disk.
pub fn disk() -> SymmetricPencil {
    SymmetricPencil::new(
        DMatrix::identity(2, 2),
        vec![dmatrix![1.0, 0.0; 0.0, -1.0], dmatrix![0.0, 1.0; 1.0, 0.0]],
    )
    .expect("static pencil")
}

/// `diag(1+z1, 1-z1, 1+z2, 1-z2)`: K = [-1,1]^2.
pub fn square() -> SymmetricPencil {
    let e = |entries: [f64; 4]| {
        DMatrix::from_diagonal(&nalgebra::dvector![
            entries[0], entries[1], entries[2], entries[3]
        ])
    };
    SymmetricPencil::new(
        DMatrix::identity(4, 4),
        vec![e([1.0, -1.0, 0.0, 0.0]), e([0.0, 0.0, 1.0, -1.0])],
    )
    .expect("static pencil")
}

/// Hermitian pencil whose spectrahedron is the closed unit ball in R^3:
/// `Q(z) = [[1+z1, z2+iz3], [z2-iz3, 1-z1]]`.
pub fn ball3() -> HermitianPencil {
    HermitianPencil::new(
        DMatrix::identity(2, 2),
        DMatrix::zeros(2, 2),
        vec![
            dmatrix![1.0, 0.0; 0.0, -1.0],
            dmatrix![0.0, 1.0; 1.0, 0.0],
            DMatrix::zeros(2, 2),
        ],
        vec![
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 2),
            dmatrix![0.0, 1.0; -1.0, 0.0],
        ],
    )
    .expect("static pencil")
}

/// `diag(1+z1, 1-z1, z2, -z2)`: K = [-1,1] x {0}, a flat segment in R^2.
pub fn segment() -> SymmetricPencil {
    let e = |entries: [f64; 4]| {
        DMatrix::from_diagonal(&nalgebra::dvector![
            entries[0], entries[1], entries[2], entries[3]
        ])
    };
    SymmetricPencil::new(
        DMatrix::from_diagonal(&nalgebra::dvector![1.0, 1.0, 0.0, 0.0]),
        vec![e([1.0, -1.0, 0.0, 0.0]), e([0.0, 0.0, 1.0, -1.0])],
    )
    .expect("static pencil")
}

/// `diag(z1, -z1, z2, -z2)`: K = {(0,0)}.
pub fn singleton() -> SymmetricPencil {
    let e = |entries: [f64; 4]| {
        DMatrix::from_diagonal(&nalgebra::dvector![
            entries[0], entries[1], entries[2], entries[3]
        ])
    };
    SymmetricPencil::new(
        DMatrix::zeros(4, 4),
        vec![e([1.0, -1.0, 0.0, 0.0]), e([0.0, 0.0, 1.0, -1.0])],
    )
    .expect("static pencil")
}

/// Names and file payloads for every bundled pencil.
pub fn bundled_files() -> Vec<(&'static str, PencilFile)> {
    vec![
        ("interval", PencilFile::from_symmetric(&interval())),
        ("disk", PencilFile::from_symmetric(&disk())),
        ("square", PencilFile::from_symmetric(&square())),
        ("ball3", PencilFile::from_hermitian(&ball3())),
        ("segment", PencilFile::from_symmetric(&segment())),
        ("singleton", PencilFile::from_symmetric(&singleton())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::MembershipClass;
    use crate::tol::Tolerances;

    #[test]
    fn bundle_membership_smoke() {
        let t = Tolerances::default();
        assert_eq!(
            interval().membership(&[0.5], &t).unwrap().class,
            MembershipClass::Interior
        );
        assert_eq!(
            square().membership(&[1.0, 1.0], &t).unwrap().class,
            MembershipClass::Boundary
        );
        assert_eq!(
            segment().membership(&[0.0, 0.1], &t).unwrap().class,
            MembershipClass::Outside
        );
        assert_eq!(
            singleton().membership(&[0.0, 0.0], &t).unwrap().class,
            MembershipClass::Boundary
        );
    }

    #[test]
    fn ball3_doubles_to_unit_ball() {
        let t = Tolerances::default();
        let s = ball3().symmetrize().unwrap();
        assert_eq!(
            s.membership(&[0.3, 0.4, 0.5], &t).unwrap().class,
            MembershipClass::Interior
        );
        assert_eq!(
            s.membership(&[0.6, 0.0, 0.8], &t).unwrap().class,
            MembershipClass::Boundary
        );
        assert_eq!(
            s.membership(&[1.0, 1.0, 0.0], &t).unwrap().class,
            MembershipClass::Outside
        );
    }
}
