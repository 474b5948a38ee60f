//! Spectral splits, the alpha constant, Hadamard (entrywise) inverses, and
//! the one-positive-eigenvalue PSD criterion.
//!
//! A symmetric matrix with strictly positive entries and exactly one
//! strictly positive eigenvalue has a positive semidefinite Hadamard
//! inverse. `hadamard_inverse_psd_criterion` treats that statement as an executable oracle:
//! whenever the premise holds, the conclusion is hard-asserted.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::sections::{gram_from_gammas, KernelSection};
use crate::tol::Tolerances;

/// Spectral split of a pencil value and of the induced Gram matrices.
///
/// `x_neg` and `y_pos` are the negative and positive spectral parts of
/// `Q(z)`; `a_minus` and `a_plus` are their compressions through the node
/// kernel vectors, computed entrywise as `gamma(t_j)^T X gamma(t_i)` without
/// materializing any Kronecker product.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub x_neg: DMatrix<f64>,
    pub y_pos: DMatrix<f64>,
    pub a_minus: DMatrix<f64>,
    pub a_plus: DMatrix<f64>,
}

/// Split a symmetric matrix into its negative and positive spectral parts.
/// Eigenvalues inside the `tau_rel` band count as zero and join neither part.
pub fn split_symmetric(q: &DMatrix<f64>, tol: &Tolerances) -> (DMatrix<f64>, DMatrix<f64>) {
    let eig = sym_eigen(q);
    let scale = linalg::spectral_norm_sym(q);
    let band = tol.rel(scale);
    let m = q.nrows();
    let mut x_neg = DMatrix::zeros(m, m);
    let mut y_pos = DMatrix::zeros(m, m);
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() <= band {
            continue;
        }
        let v: DVector<f64> = eig.vectors.column(idx).into_owned();
        let proj = linalg::outer(&v) * lambda;
        if lambda < 0.0 {
            x_neg += proj;
        } else {
            y_pos += proj;
        }
    }
    (x_neg, y_pos)
}

/// Spectral split of `Q(z)` compressed onto section nodes.
pub fn spectral_split(
    ks: &KernelSection,
    z: &[f64],
    nodes: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<SpectralSplit> {
    let q = ks.pencil().evaluate(z)?;
    let (x_neg, y_pos) = split_symmetric(&q, tol);
    let gammas: Vec<DVector<f64>> = nodes
        .iter()
        .map(|t| ks.gamma(t, tol))
        .collect::<Result<_>>()?;
    let a_minus = gram_from_gammas(&x_neg, &gammas);
    let a_plus = gram_from_gammas(&y_pos, &gammas);
    Ok(SpectralSplit {
        x_neg,
        y_pos,
        a_minus,
        a_plus,
    })
}

/// The alpha constant `c^3 / (16 (b+c)^2)` derived from kernel entry bounds,
/// together with `c~ = (c-alpha)^3 / (b+alpha)^2`. Both proved facts
/// `alpha <= c/2` and `c~ >= 2 alpha` are asserted numerically.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaConstant {
    pub c: f64,
    pub b: f64,
    pub alpha: f64,
    pub c_tilde: f64,
}

pub fn alpha_constant(c: f64, b: f64) -> Result<AlphaConstant> {
    if !(c > 0.0 && c <= b) || !c.is_finite() || !b.is_finite() {
        return Err(Error::InvalidBounds { c, b });
    }
    let alpha = c.powi(3) / (16.0 * (b + c).powi(2));
    let c_tilde = (c - alpha).powi(3) / (b + alpha).powi(2);
    debug_assert!(alpha <= c / 2.0 + 1e-15);
    debug_assert!(c_tilde >= 2.0 * alpha - 1e-15);
    if alpha > c / 2.0 || c_tilde < 2.0 * alpha * (1.0 - 1e-12) {
        // Both inequalities are theorems for 0 < c <= b.
        return Err(Error::InvalidBounds { c, b });
    }
    Ok(AlphaConstant {
        c,
        b,
        alpha,
        c_tilde,
    })
}

/// Entrywise reciprocal. Every entry must clear the zero band `|m_ij| > tau`.
pub fn hadamard_inverse(m: &DMatrix<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].abs() <= tol.abs {
                return Err(Error::ZeroEntry { row: i, col: j });
            }
            out[(i, j)] = 1.0 / m[(i, j)];
        }
    }
    Ok(out)
}

/// Outcome of the one-positive-eigenvalue criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HadamardCriterionReport {
    /// Entries strictly positive and exactly one eigenvalue above the band.
    pub satisfies_criterion: bool,
    /// Min eigenvalue of the Hadamard inverse when it exists.
    pub hadamard_inverse_min_eig: Option<f64>,
    /// Whether the Hadamard inverse is PSD within `n * tau_rel`.
    pub hadamard_inverse_psd: Option<bool>,
    pub positive_eigenvalues: usize,
    pub min_entry: f64,
}

/// Check the criterion and, when it holds, hard-assert the conclusion that
/// the Hadamard inverse is PSD. A violation is a solver bug, surfaced as
/// `HadamardCriterionViolated`.
pub fn hadamard_inverse_psd_criterion(
    m: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<HadamardCriterionReport> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    let min_entry = m.iter().cloned().fold(f64::INFINITY, f64::min);
    let eig = sym_eigen(m);
    let scale = linalg::spectral_norm_sym(m);
    let band = tol.rel(scale);
    let positive = eig.values.iter().filter(|&&l| l > band).count();
    let satisfies = min_entry > tol.abs && positive == 1;

    let (inv_min, inv_psd) = match hadamard_inverse(m, tol) {
        Ok(inv) => {
            let min_eig = linalg::min_eigenvalue(&inv);
            let inv_scale = linalg::spectral_norm_sym(&inv);
            let psd = min_eig >= -(n as f64) * tol.rel(inv_scale);
            (Some(min_eig), Some(psd))
        }
        Err(_) => (None, None),
    };
    if satisfies && inv_psd != Some(true) {
        return Err(Error::HadamardCriterionViolated {
            min_eig: inv_min.unwrap_or(f64::NAN),
        });
    }
    Ok(HadamardCriterionReport {
        satisfies_criterion: satisfies,
        hadamard_inverse_min_eig: inv_min,
        hadamard_inverse_psd: inv_psd,
        positive_eigenvalues: positive,
        min_entry,
    })
}

/// Construct `lambda p p^T + N` with `N <= 0` scaled so all entries stay
/// strictly positive: the canonical input family for `hadamard_inverse_psd_criterion`.
pub fn random_read_instance(n: usize, rng: &mut crate::sampling::SplitMix64) -> DMatrix<f64> {
    let p: Vec<f64> = (0..n).map(|_| rng.next_range(0.2, 1.0)).collect();
    let norm = crate::sampling::norm(&p);
    let p = DVector::from_vec(p) / norm;
    let lambda = rng.next_range(0.5, 4.0);
    let rank1 = linalg::outer(&p) * lambda;
    // random negative semidefinite part
    let mut neg = DMatrix::zeros(n, n);
    for _ in 0..n {
        let v: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
        let v = DVector::from_vec(v);
        let w = rng.next_range(0.0, 1.0);
        neg -= linalg::outer(&v) * w;
    }
    // scale the negative part to keep every entry of the sum positive
    let mut limit = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if neg[(i, j)] < 0.0 {
                limit = limit.min(rank1[(i, j)] / (-neg[(i, j)]));
            }
        }
    }
    let s = if limit.is_finite() { 0.5 * limit } else { 1.0 };
    rank1 + neg * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::pencil::MembershipClass;
    use crate::sampling::SplitMix64;
    use crate::sections::{build_gamma, SectionConfig};
    use nalgebra::dmatrix;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn split_diagonal_example() {
        let (x, y) = split_symmetric(&dmatrix![1.0, 0.0; 0.0, -1.0], &tols());
        assert!(linalg::max_abs_entry(&(x - dmatrix![0.0, 0.0; 0.0, -1.0])) < 1e-12);
        assert!(linalg::max_abs_entry(&(y - dmatrix![1.0, 0.0; 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn split_inside_k_has_no_negative_part() {
        let t = tols();
        let d = library::disk();
        let ks = build_gamma(&d, &[1.0, 0.0], &[-1.0, 0.0], &t, &SectionConfig::default()).unwrap();
        let nodes: Vec<Vec<f64>> = ks.grid().iter().take(4).cloned().collect();
        let split = spectral_split(&ks, &[0.2, 0.1], &nodes, &t).unwrap();
        assert!(linalg::max_abs_entry(&split.x_neg) < 1e-9);
        assert!(linalg::max_abs_entry(&split.a_minus) < 1e-9);
        let a = ks.gram_matrix(&[0.2, 0.1], &nodes, &t).unwrap();
        assert!(linalg::max_abs_entry(&(&split.a_plus + &split.a_minus - &a)) < 1e-9);
    }

    #[test]
    fn split_just_outside_disk() {
        // Outside along (1,0) the eigenvalues are 1 +- r with r > 1, so the
        // negative part has norm r - 1.
        let t = tols();
        let d = library::disk();
        let r: f64 = 1.25;
        let q = d.evaluate(&[r, 0.0]).unwrap();
        let (x, y) = split_symmetric(&q, &t);
        assert!((linalg::spectral_norm_sym(&x) - (r - 1.0)).abs() < 1e-12);
        assert!((linalg::spectral_norm_sym(&y) - (r + 1.0)).abs() < 1e-12);
        // with no eigenvalues in the zero band, the split is exact
        let dev = linalg::max_abs_entry(&(&x + &y - &q));
        assert!(dev <= t.rel(linalg::spectral_norm_sym(&q)));
    }

    #[test]
    fn split_two_routes_agree() {
        // a_plus computed entrywise must match the explicit Kronecker
        // contraction Gamma^T [(1) (x) Y] Gamma.
        let t = tols();
        let d = library::disk();
        let ks = build_gamma(&d, &[1.0, 0.0], &[-1.0, 0.0], &t, &SectionConfig::default()).unwrap();
        let nodes: Vec<Vec<f64>> = ks.grid().iter().take(5).cloned().collect();
        let z = [-1.05, 0.0];
        let split = spectral_split(&ks, &z, &nodes, &t).unwrap();

        let m = d.size();
        let n = nodes.len();
        let gammas: Vec<_> = nodes.iter().map(|p| ks.gamma(p, &t).unwrap()).collect();
        // Gamma_n: mn x n isometry stacking the node gammas
        let mut big_gamma = DMatrix::zeros(m * n, n);
        for (i, g) in gammas.iter().enumerate() {
            for r in 0..m {
                big_gamma[(i * m + r, i)] = g[r];
            }
        }
        // (1) (x) Y: every m x m block equals Y
        let mut block = DMatrix::zeros(m * n, m * n);
        for bi in 0..n {
            for bj in 0..n {
                for r in 0..m {
                    for c in 0..m {
                        block[(bi * m + r, bj * m + c)] = split.y_pos[(r, c)];
                    }
                }
            }
        }
        let explicit = big_gamma.transpose() * block * &big_gamma;
        let denom = linalg::max_abs_entry(&split.a_plus).max(1e-300);
        assert!(
            linalg::max_abs_entry(&(&explicit - &split.a_plus)) / denom < 1e-12,
            "tensor route disagrees with the entrywise route"
        );
    }

    #[test]
    fn alpha_examples() {
        let a = alpha_constant(1.0, 1.0).unwrap();
        assert!((a.alpha - 1.0 / 64.0).abs() < 1e-15);
        // c~ = (63/64)^3 / (65/64)^2 = 1024192512/1107558400
        let expect = 1024192512.0 / 1107558400.0;
        assert!((a.c_tilde - expect).abs() < 1e-12);
        assert!(a.c_tilde >= 2.0 * a.alpha);

        let a = alpha_constant(1.0, 2.0).unwrap();
        assert!((a.alpha - 1.0 / 144.0).abs() < 1e-15);

        let a = alpha_constant(2.0, 2.0).unwrap();
        assert!((a.alpha - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_rejects_bad_bounds() {
        assert!(matches!(
            alpha_constant(0.0, 1.0),
            Err(Error::InvalidBounds { .. })
        ));
        assert!(matches!(
            alpha_constant(2.0, 1.0),
            Err(Error::InvalidBounds { .. })
        ));
    }

    #[test]
    fn alpha_invariants_random() {
        let mut rng = SplitMix64::new(15);
        for _ in 0..2000 {
            let c = rng.next_range(1e-3, 5.0);
            let b = c + rng.next_range(0.0, 5.0);
            let a = alpha_constant(c, b).unwrap();
            assert!(a.alpha <= c / 2.0);
            assert!(a.c_tilde >= 2.0 * a.alpha);
        }
    }

    #[test]
    fn hadamard_inverse_examples() {
        let t = tols();
        let inv = hadamard_inverse(&dmatrix![1.0, 2.0; 2.0, 1.0], &t).unwrap();
        assert_eq!(inv, dmatrix![1.0, 0.5; 0.5, 1.0]);
        let ones = DMatrix::from_element(3, 3, 1.0);
        assert_eq!(hadamard_inverse(&ones, &t).unwrap(), ones);
        let scalar = DMatrix::from_element(1, 1, 4.0);
        assert_eq!(hadamard_inverse(&scalar, &t).unwrap()[(0, 0)], 0.25);
        assert!(matches!(
            hadamard_inverse(&dmatrix![1.0, 0.0; 0.0, 1.0], &t),
            Err(Error::ZeroEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn read_check_examples() {
        let t = tols();
        // eigenvalues {3, -1}: criterion holds, inverse has eigs {1.5, 0.5}
        let r = hadamard_inverse_psd_criterion(&dmatrix![1.0, 2.0; 2.0, 1.0], &t).unwrap();
        assert!(r.satisfies_criterion);
        assert_eq!(r.positive_eigenvalues, 1);
        assert_eq!(r.hadamard_inverse_psd, Some(true));
        let inv = hadamard_inverse(&dmatrix![1.0, 2.0; 2.0, 1.0], &t).unwrap();
        let eig = sym_eigen(&inv);
        assert!((eig.values[0] - 0.5).abs() < 1e-12);
        assert!((eig.values[1] - 1.5).abs() < 1e-12);

        // identity fails the entry condition
        let r = hadamard_inverse_psd_criterion(&DMatrix::identity(2, 2), &t).unwrap();
        assert!(!r.satisfies_criterion);
    }

    #[test]
    fn read_implication_sweep() {
        // lambda p p^T + N with N negative semidefinite and positive total
        // entries: the implication must hold every time.
        let t = tols();
        let mut rng = SplitMix64::new(99);
        for _ in 0..1000 {
            let n = 1 + rng.next_usize(10);
            let m = random_read_instance(n, &mut rng);
            let r = hadamard_inverse_psd_criterion(&m, &t).expect("implication intact");
            assert!(r.satisfies_criterion, "construction guarantees the premise");
        }
    }

    #[test]
    fn spectral_split_entry_bounds_near_target() {
        // Entries of A+ stay within [c - alpha, b + alpha] at a point just
        // outside K near the target once the negative part is small.
        let t = tols();
        let d = library::disk();
        let ks = build_gamma(&d, &[1.0, 0.0], &[-1.0, 0.0], &t, &SectionConfig::default()).unwrap();
        let nodes: Vec<Vec<f64>> = ks.grid().to_vec();
        let c0 = ks.inf_bound();
        let b0 = ks.sup_bound();
        let ac = alpha_constant(0.9 * c0, 1.1 * b0).unwrap();
        // pick z outside K so close to y that ||X(z)|| < alpha
        let z = [-1.0 - 0.5 * ac.alpha, 0.0];
        assert_eq!(
            d.membership(&z, &t).unwrap().class,
            MembershipClass::Outside
        );
        let split = spectral_split(&ks, &z, &nodes, &t).unwrap();
        assert!(linalg::spectral_norm_sym(&split.x_neg) < ac.alpha);
        for v in split.a_plus.iter() {
            assert!(*v >= ac.c - ac.alpha - 1e-9, "entry {v}");
            assert!(*v <= ac.b + ac.alpha + 1e-9, "entry {v}");
        }
    }
}
