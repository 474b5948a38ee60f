//! Perron eigenpairs of symmetric positive-entry matrices and the
//! quantitative entry bounds they satisfy.
//!
//! For a symmetric matrix with entries in `[c, b]`, `0 < c <= b`, the Perron
//! eigenvalue `lambda` and unit eigenvector `x > 0` obey
//!
//! ```text
//!   c/(b sqrt(n)) <= x_i <= b/(c sqrt(n)),
//!   n c <= lambda,
//!   lambda x_i x_j >= c^3 / b^2.
//! ```
//!
//! These are theorems, so `verify_perron_bounds` failing loudly indicates an
//! eigensolver bug, not bad input.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::tol::Tolerances;

/// Perron eigenpair with the entry bounds of its matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerronData {
    /// Perron eigenvalue (spectral radius; `= ||A||` for symmetric `A`).
    pub lambda: f64,
    /// Unit eigenvector with strictly positive entries.
    pub eigenvector: Vec<f64>,
    /// Smallest entry `c` of the matrix.
    pub entry_min: f64,
    /// Largest entry `b` of the matrix.
    pub entry_max: f64,
    pub size: usize,
}

/// Compute the Perron eigenpair by full symmetric eigendecomposition.
///
/// Requires strictly positive entries and symmetry (within the ingest
/// threshold). The eigenvector sign is fixed so its largest-magnitude entry
/// is positive; Perron-Frobenius then forces every entry positive.
pub fn perron_eigenpair(a: &DMatrix<f64>, tol: &Tolerances) -> Result<PerronData> {
    let n = a.nrows();
    if n == 0 || n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n.max(1),
            got: a.ncols(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let positive = a[(i, j)] > 0.0;
            if !positive {
                return Err(Error::NonPositiveEntry {
                    row: i,
                    col: j,
                    value: a[(i, j)],
                });
            }
        }
    }
    let asym = linalg::asymmetry(a);
    if asym > crate::pencil::INGEST_ASYMMETRY_LIMIT {
        return Err(Error::AsymmetryTooLarge {
            index: 0,
            magnitude: asym,
        });
    }
    let a = linalg::symmetrize(a);
    let eig = sym_eigen(&a);
    let lambda = eig.values[n - 1];
    let mut x: DVector<f64> = eig.vectors.column(n - 1).into_owned();
    // sign normalization: largest-magnitude entry positive
    let mut lead = 0;
    for i in 1..n {
        if x[i].abs() > x[lead].abs() {
            lead = i;
        }
    }
    if x[lead] < 0.0 {
        x = -x;
    }
    for i in 0..n {
        let positive = x[i] > 0.0;
        if !positive {
            return Err(Error::NonPositiveEntry {
                row: i,
                col: 0,
                value: x[i],
            });
        }
    }
    let norm_a = lambda.max(eig.values[0].abs());
    let residual = (&a * &x - &x * lambda).norm();
    let bound = tol.rel(norm_a) * norm_a.max(1.0);
    if residual > bound {
        return Err(Error::ResidualTooLarge { residual, bound });
    }
    let mut c = f64::INFINITY;
    let mut b = f64::NEG_INFINITY;
    for v in a.iter() {
        c = c.min(*v);
        b = b.max(*v);
    }
    Ok(PerronData {
        lambda,
        eigenvector: x.iter().cloned().collect(),
        entry_min: c,
        entry_max: b,
        size: n,
    })
}

/// Power iteration, kept as an internal cross-check for the dense solver.
#[cfg(test)]
pub(crate) fn power_iteration(a: &DMatrix<f64>, iters: usize) -> (f64, DVector<f64>) {
    let n = a.nrows();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = a * &v;
        lambda = w.norm();
        if lambda == 0.0 {
            break;
        }
        v = w / lambda;
    }
    (lambda, v)
}

/// Slack report for one bound family.
#[derive(Debug, Clone, Serialize)]
pub struct BoundFamily {
    pub name: &'static str,
    /// Smallest measured `lhs - rhs` over the family (>= 0 up to tolerance).
    pub min_slack: f64,
    pub worst_index: (usize, usize),
}

/// Full report: all three families with their worst slack.
#[derive(Debug, Clone, Serialize)]
pub struct PerronBoundReport {
    pub families: Vec<BoundFamily>,
}

/// Check every inequality of the entry-bound lemma with slack at least
/// `-tau_rel`; returns the per-family worst slacks.
pub fn verify_perron_bounds(pd: &PerronData, tol: &Tolerances) -> Result<PerronBoundReport> {
    let n = pd.size;
    let c = pd.entry_min;
    let b = pd.entry_max;
    let sqrt_n = (n as f64).sqrt();
    let band = tol.rel(pd.lambda.abs().max(b));

    let mut families = Vec::with_capacity(3);

    // family 1: c/(b sqrt n) <= x_i <= b/(c sqrt n)
    let lo = c / (b * sqrt_n);
    let hi = b / (c * sqrt_n);
    let mut min_slack = f64::INFINITY;
    let mut worst = (0, 0);
    for (i, xi) in pd.eigenvector.iter().enumerate() {
        let s = (xi - lo).min(hi - xi);
        if s < min_slack {
            min_slack = s;
            worst = (i, i);
        }
    }
    if min_slack < -band {
        return Err(Error::BoundViolation {
            family: "entry range of the Perron vector",
            i: worst.0,
            j: worst.1,
            slack: min_slack,
        });
    }
    families.push(BoundFamily {
        name: "entry range of the Perron vector",
        min_slack,
        worst_index: worst,
    });

    // family 2: n c <= lambda
    let s2 = pd.lambda - n as f64 * c;
    if s2 < -band {
        return Err(Error::BoundViolation {
            family: "eigenvalue lower bound",
            i: 0,
            j: 0,
            slack: s2,
        });
    }
    families.push(BoundFamily {
        name: "eigenvalue lower bound",
        min_slack: s2,
        worst_index: (0, 0),
    });

    // family 3: lambda x_i x_j >= c^3 / b^2
    let floor = c * c * c / (b * b);
    let mut min_slack = f64::INFINITY;
    let mut worst = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let s = pd.lambda * pd.eigenvector[i] * pd.eigenvector[j] - floor;
            if s < min_slack {
                min_slack = s;
                worst = (i, j);
            }
        }
    }
    if min_slack < -band {
        return Err(Error::BoundViolation {
            family: "rank-one entry floor",
            i: worst.0,
            j: worst.1,
            slack: min_slack,
        });
    }
    families.push(BoundFamily {
        name: "rank-one entry floor",
        min_slack,
        worst_index: worst,
    });

    Ok(PerronBoundReport { families })
}

/// Random symmetric matrix with entries uniform in `[lo, hi]` (used by the
/// verification sweeps and the CLI).
pub fn random_positive_symmetric(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut crate::sampling::SplitMix64,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.next_range(lo, hi);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}
