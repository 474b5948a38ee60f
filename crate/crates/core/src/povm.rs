//! Finite separation principle for projection- and positive-operator-valued
//! measures.
//!
//! On a finite discrete space the atoms are their own disjoint open
//! neighborhoods, so the separation hypothesis collapses to
//! `P_i E_j P_i = 0` for `i != j`. Together with `E_j >= 0` this forces
//! `E_j P_i = 0`, then `E_j <= P_j`, and summing against `sum E = sum P = I`
//! yields `E_j = P_j`. With a hypothesis tolerance `tau`, equality holds
//! within `N * h * tau`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::sampling::SplitMix64;
use crate::tol::Tolerances;

/// Projection-valued measure on `R^h` with `N` atoms: orthogonal
/// projections, pairwise orthogonal, summing to the identity.
#[derive(Debug, Clone)]
pub struct FinitePvm {
    pub space_dim: usize,
    pub atoms: Vec<DMatrix<f64>>,
}

/// Positive-operator-valued measure: PSD operators summing to the identity.
#[derive(Debug, Clone)]
pub struct FinitePovm {
    pub space_dim: usize,
    pub atoms: Vec<DMatrix<f64>>,
}

fn check_shapes(atoms: &[DMatrix<f64>], h: usize) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::InvalidMeasureSystem {
            reason: "no atoms".into(),
        });
    }
    for (i, a) in atoms.iter().enumerate() {
        if a.nrows() != h || a.ncols() != h {
            return Err(Error::InvalidMeasureSystem {
                reason: format!("atom {i} is not {h}x{h}"),
            });
        }
    }
    Ok(())
}

impl FinitePvm {
    pub fn new(space_dim: usize, atoms: Vec<DMatrix<f64>>) -> Result<Self> {
        check_shapes(&atoms, space_dim)?;
        Ok(FinitePvm { space_dim, atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Check all PVM invariants within tolerance: idempotent symmetric
    /// atoms, pairwise orthogonal, summing to the identity.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let h = self.space_dim;
        let band = tol.rel(1.0);
        for (i, p) in self.atoms.iter().enumerate() {
            if linalg::asymmetry(p) > band {
                return Err(Error::InvalidMeasureSystem {
                    reason: format!("atom {i} is not symmetric"),
                });
            }
            let idem = linalg::max_abs_entry(&(p * p - p));
            if idem > band {
                return Err(Error::InvalidMeasureSystem {
                    reason: format!("atom {i} is not idempotent (|P^2-P| = {idem:e})"),
                });
            }
        }
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                let prod = linalg::max_abs_entry(&(&self.atoms[i] * &self.atoms[j]));
                if prod > band {
                    return Err(Error::InvalidMeasureSystem {
                        reason: format!("atoms {i} and {j} are not orthogonal (|PiPj| = {prod:e})"),
                    });
                }
            }
        }
        let mut sum = DMatrix::zeros(h, h);
        for p in &self.atoms {
            sum += p;
        }
        let dev = linalg::max_abs_entry(&(sum - DMatrix::identity(h, h)));
        if dev > (self.atoms.len() as f64) * band {
            return Err(Error::InvalidMeasureSystem {
                reason: format!("atoms do not sum to the identity (deviation {dev:e})"),
            });
        }
        Ok(())
    }

    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.validate(tol).is_ok()
    }
}

impl FinitePovm {
    pub fn new(space_dim: usize, atoms: Vec<DMatrix<f64>>) -> Result<Self> {
        check_shapes(&atoms, space_dim)?;
        Ok(FinitePovm { space_dim, atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Check POVM invariants within tolerance: symmetric PSD atoms summing
    /// to the identity.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let h = self.space_dim;
        let band = tol.rel(1.0);
        for (i, e) in self.atoms.iter().enumerate() {
            if linalg::asymmetry(e) > band {
                return Err(Error::InvalidMeasureSystem {
                    reason: format!("atom {i} is not symmetric"),
                });
            }
            let min_eig = linalg::min_eigenvalue(&linalg::symmetrize(e));
            if min_eig < -(h as f64) * band {
                return Err(Error::InvalidMeasureSystem {
                    reason: format!("atom {i} is not PSD (min eigenvalue {min_eig:e})"),
                });
            }
        }
        let mut sum = DMatrix::zeros(h, h);
        for e in &self.atoms {
            sum += e;
        }
        let dev = linalg::max_abs_entry(&(sum - DMatrix::identity(h, h)));
        if dev > (self.atoms.len() as f64) * band {
            return Err(Error::InvalidMeasureSystem {
                reason: format!("atoms do not sum to the identity (deviation {dev:e})"),
            });
        }
        Ok(())
    }

    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.validate(tol).is_ok()
    }
}

/// Result of the pairwise separation hypothesis check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub holds: bool,
    /// Worst `||P_i E_j P_i||` over `i != j` and where it occurred.
    pub worst_norm: f64,
    pub witness: Option<(usize, usize)>,
}

/// Check `||P_i E_j P_i|| <= tau` for all `i != j`.
pub fn hypothesis_holds(
    pvm: &FinitePvm,
    povm: &FinitePovm,
    tol: &Tolerances,
) -> Result<HypothesisReport> {
    if pvm.space_dim != povm.space_dim || pvm.len() != povm.len() {
        return Err(Error::DimensionMismatch {
            expected: pvm.len(),
            got: povm.len(),
        });
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    for (i, p) in pvm.atoms.iter().enumerate() {
        for (j, e) in povm.atoms.iter().enumerate() {
            if i == j {
                continue;
            }
            let compressed = linalg::symmetrize(&(p * e * p));
            let norm = linalg::spectral_norm_sym(&compressed);
            if norm > worst {
                worst = norm;
                witness = Some((i, j));
            }
        }
    }
    let holds = worst <= tol.abs;
    Ok(HypothesisReport {
        holds,
        worst_norm: worst,
        witness: if holds { None } else { witness },
    })
}

/// Verify the conclusion `E_j = P_j` within the derived bound `N * h * tau`.
///
/// The hypothesis is re-checked first; when it fails the operation refuses
/// with `HypothesisNotVerified` rather than assessing equality. A hypothesis
/// that holds while equality fails beyond the bound is a solver bug.
pub fn conclude_equality_check(
    pvm: &FinitePvm,
    povm: &FinitePovm,
    tol: &Tolerances,
) -> Result<bool> {
    let hyp = hypothesis_holds(pvm, povm, tol)?;
    if !hyp.holds {
        let (i, j) = hyp.witness.unwrap_or((0, 0));
        return Err(Error::HypothesisNotVerified {
            i,
            j,
            norm: hyp.worst_norm,
        });
    }
    let n = pvm.len() as f64;
    let h = pvm.space_dim as f64;
    let bound = n * h * tol.abs;
    for (j, (e, p)) in povm.atoms.iter().zip(&pvm.atoms).enumerate() {
        let dev = linalg::spectral_norm_sym(&linalg::symmetrize(&(e - p)));
        if dev > bound {
            return Err(Error::EqualityBoundExceeded {
                atom: j,
                deviation: dev,
                bound,
            });
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Instance generation for sweeps
// ---------------------------------------------------------------------------

/// Random orthogonal matrix via Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal(h: usize, rng: &mut SplitMix64) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(h, h);
    for col in 0..h {
        loop {
            let mut v: Vec<f64> = (0..h).map(|_| rng.next_gaussian()).collect();
            for prev in 0..col {
                let mut dot = 0.0;
                for r in 0..h {
                    dot += q[(r, prev)] * v[r];
                }
                for (r, vr) in v.iter_mut().enumerate() {
                    *vr -= dot * q[(r, prev)];
                }
            }
            let norm = crate::sampling::norm(&v);
            if norm > 1e-6 {
                for (r, vr) in v.iter().enumerate() {
                    q[(r, col)] = vr / norm;
                }
                break;
            }
        }
    }
    q
}

/// Random PVM: rotate the coordinate projections of a random partition of
/// the `h` coordinates into `n` nonempty groups.
pub fn random_pvm(h: usize, n: usize, rng: &mut SplitMix64) -> FinitePvm {
    assert!(n >= 1 && n <= h);
    let o = random_orthogonal(h, rng);
    // partition coordinates: each group gets one coordinate, the rest spread
    let mut assignment: Vec<usize> = (0..h).map(|i| i % n).collect();
    // shuffle
    for i in (1..h).rev() {
        let j = rng.next_usize(i + 1);
        assignment.swap(i, j);
    }
    let mut atoms = Vec::with_capacity(n);
    for g in 0..n {
        let mut d = DMatrix::zeros(h, h);
        for (coord, &grp) in assignment.iter().enumerate() {
            if grp == g {
                d[(coord, coord)] = 1.0;
            }
        }
        let p = linalg::symmetrize(&(&o * d * o.transpose()));
        atoms.push(p);
    }
    FinitePvm {
        space_dim: h,
        atoms,
    }
}

/// Perturb a PVM into a POVM at scale `eta`, keeping atoms PSD by spectral
/// clipping and restoring the sum-to-identity constraint.
pub fn perturbed_povm(pvm: &FinitePvm, eta: f64, rng: &mut SplitMix64) -> FinitePovm {
    let h = pvm.space_dim;
    let n = pvm.len();
    let mut atoms: Vec<DMatrix<f64>> = Vec::with_capacity(n);
    for p in &pvm.atoms {
        let mut noise = DMatrix::zeros(h, h);
        for i in 0..h {
            for j in i..h {
                let v = rng.next_gaussian();
                noise[(i, j)] = v;
                noise[(j, i)] = v;
            }
        }
        let scale = linalg::spectral_norm_sym(&noise).max(1e-12);
        atoms.push(p + noise * (eta / scale));
    }
    // restore the sum
    let mut sum = DMatrix::zeros(h, h);
    for a in &atoms {
        sum += a;
    }
    let correction = (DMatrix::identity(h, h) - sum) / n as f64;
    for a in atoms.iter_mut() {
        *a += &correction;
        // clip tiny negative eigenvalues
        let eig = sym_eigen(a);
        if eig.values[0] < 0.0 {
            let mut rebuilt = DMatrix::zeros(h, h);
            for (idx, &l) in eig.values.iter().enumerate() {
                if l > 0.0 {
                    let v: nalgebra::DVector<f64> = eig.vectors.column(idx).into_owned();
                    rebuilt += linalg::outer(&v) * l;
                }
            }
            *a = rebuilt;
        }
    }
    FinitePovm {
        space_dim: h,
        atoms,
    }
}

/// A rotated copy of the PVM: a valid POVM that violates the hypothesis and
/// differs from the PVM (the tightness probe of the implication). The
/// rotation plane is spanned by range vectors of the first two atoms, so for
/// `N >= 2` the hypothesis breaks by `~sin^2(angle)`.
pub fn rotated_povm(pvm: &FinitePvm, angle: f64) -> FinitePovm {
    let h = pvm.space_dim;
    if pvm.len() < 2 {
        return FinitePovm {
            space_dim: h,
            atoms: pvm.atoms.clone(),
        };
    }
    let top_vec = |p: &DMatrix<f64>| -> nalgebra::DVector<f64> {
        let eig = sym_eigen(p);
        eig.vectors.column(h - 1).into_owned()
    };
    let u = top_vec(&pvm.atoms[0]);
    let v_raw = top_vec(&pvm.atoms[1]);
    // orthonormalize v against u
    let v = &v_raw - &u * u.dot(&v_raw);
    let v = &v / v.norm();
    let rot = DMatrix::identity(h, h)
        + (linalg::outer(&u) + linalg::outer(&v)) * (angle.cos() - 1.0)
        + (&u * v.transpose() - &v * u.transpose()) * angle.sin();
    let atoms = pvm
        .atoms
        .iter()
        .map(|p| linalg::symmetrize(&(&rot * p * rot.transpose())))
        .collect();
    FinitePovm {
        space_dim: h,
        atoms,
    }
}

/// Instance JSON schema.
#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureInstanceFile {
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Vec<f64>>>,
}

impl MeasureInstanceFile {
    pub fn build(&self) -> Result<(FinitePvm, FinitePovm)> {
        if self.p.len() != self.n || self.e.len() != self.n {
            return Err(Error::Parse(format!(
                "expected {} atoms, found P: {}, E: {}",
                self.n,
                self.p.len(),
                self.e.len()
            )));
        }
        let pvm = FinitePvm::new(
            self.h,
            self.p.iter().map(|r| linalg::matrix_from_rows(r)).collect(),
        )?;
        let povm = FinitePovm::new(
            self.h,
            self.e.iter().map(|r| linalg::matrix_from_rows(r)).collect(),
        )?;
        Ok((pvm, povm))
    }

    pub fn from_pair(pvm: &FinitePvm, povm: &FinitePovm) -> Self {
        MeasureInstanceFile {
            h: pvm.space_dim,
            n: pvm.len(),
            p: pvm.atoms.iter().map(linalg::matrix_to_rows).collect(),
            e: povm.atoms.iter().map(linalg::matrix_to_rows).collect(),
        }
    }
}
