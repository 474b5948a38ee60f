//! Continuous kernel sections on compact pieces of a boundary stratum.
//!
//! Near an extreme point `x` of stratum `i`, the rank-`i` spectral projection
//! `P(z)` onto the near-zero eigenspace of `Q(z)` varies continuously, so
//! `gamma(z) = P(z) v / ||P(z) v||` with a fixed seed vector `v in ker Q(x)`
//! is a continuous unit kernel section. Pairing against a target `y != x`
//! gives the kernel `k_z(w1, w2) = gamma(w2)^T Q(z) gamma(w1)`, positive
//! semidefinite for `z` in `K` and uniformly positive at `z = y` on a small
//! enough compact piece `F`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::pencil::{MembershipClass, SymmetricPencil};
use crate::sampling;
use crate::strata::{self, kernel_dimension};
use crate::tol::Tolerances;

/// Width factor of the forbidden band around the spectral contour.
const CONTOUR_GUARD: f64 = 10.0;

/// Configuration for section construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SectionConfig {
    /// Number of boundary samples aimed at the piece per radius attempt.
    pub grid_target: usize,
    /// Radius halvings before giving up.
    pub max_halvings: usize,
    /// Seed for the interior-point search.
    pub seed: u64,
}

impl Default for SectionConfig {
    fn default() -> Self {
        SectionConfig {
            grid_target: 64,
            max_halvings: 24,
            seed: 0x5ec7,
        }
    }
}

/// Grid diagnostics; the Hoelder ratio is reported, never asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridStats {
    pub points: usize,
    /// Largest nearest-neighbor gap.
    pub max_spacing: f64,
    /// max ||gamma(z) - gamma(z')|| / ||z - z'||^(1/2) over neighbor pairs.
    pub holder_ratio: f64,
}

/// A verified kernel section on `F = closed-ball(base, radius) ∩ E_i`.
#[derive(Debug, Clone)]
pub struct KernelSection {
    pencil: SymmetricPencil,
    stratum: usize,
    base: Vec<f64>,
    target: Vec<f64>,
    /// Spectral contour radius for the Riesz projection.
    epsilon: f64,
    seed_vector: DVector<f64>,
    radius: f64,
    grid: Vec<Vec<f64>>,
    gammas: Vec<DVector<f64>>,
    /// Measured infimum of the target kernel over grid pairs.
    inf_bound: f64,
    /// Measured supremum of the target kernel over grid pairs.
    sup_bound: f64,
    stats: GridStats,
}

/// Spectral projection onto the part of the spectrum inside the circle of
/// radius `epsilon`, realized by eigendecomposition. The contour must be
/// separated from the spectrum by `CONTOUR_GUARD * tau_rel`.
pub fn riesz_projection(
    p: &SymmetricPencil,
    z: &[f64],
    epsilon: f64,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let q = p.evaluate(z)?;
    riesz_projection_of(&q, epsilon, tol)
}

/// Same, for an already-evaluated symmetric matrix.
pub fn riesz_projection_of(
    q: &DMatrix<f64>,
    epsilon: f64,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let eig = sym_eigen(q);
    let scale = linalg::spectral_norm_sym(q);
    let gap = CONTOUR_GUARD * tol.rel(scale);
    let m = q.nrows();
    let mut proj = DMatrix::zeros(m, m);
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if (lambda.abs() - epsilon).abs() <= gap {
            return Err(Error::SpectralGapViolation {
                eigenvalue: lambda,
                contour: epsilon,
            });
        }
        if lambda.abs() < epsilon {
            let v: DVector<f64> = eig.vectors.column(idx).into_owned();
            proj += linalg::outer(&v);
        }
    }
    Ok(proj)
}

/// Build the kernel section at an extreme boundary point `x` against a
/// target `y`. Backtracks the piece radius until the spectral-gap condition
/// and the uniform positivity of the target kernel hold on the sampled grid.
pub fn build_gamma(
    p: &SymmetricPencil,
    x: &[f64],
    y: &[f64],
    tol: &Tolerances,
    cfg: &SectionConfig,
) -> Result<KernelSection> {
    let stratum = kernel_dimension(p, x, tol)?.0;
    let m = p.size();
    if stratum == m {
        return Err(Error::InvalidPair {
            reason: "base point has full kernel; the spectrahedron is that single point".into(),
        });
    }
    let qx = p.evaluate(x)?;
    let eig_x = sym_eigen(&qx);
    let lambda_next = eig_x.values[stratum];
    let epsilon = 0.45 * lambda_next;

    // Seed vector: maximize <Q(y) v, v> over unit v in ker Q(x). The
    // maximizer is the top eigenvector of the compressed matrix V^T Q(y) V.
    let qy = p.evaluate(y)?;
    let kernel_basis = eig_x.vectors.columns(0, stratum).into_owned();
    let compressed = linalg::symmetrize(&(kernel_basis.transpose() * &qy * &kernel_basis));
    let eig_c = sym_eigen(&compressed);
    let best = eig_c.values[stratum - 1];
    if best <= tol.rel(linalg::spectral_norm_sym(&qy)) {
        return Err(Error::SeedVectorNotFound { best });
    }
    let w: DVector<f64> = eig_c.vectors.column(stratum - 1).into_owned();
    let seed_vector: DVector<f64> = &kernel_basis * w;

    let witness = strata::locally_closed_witness(p, x, tol)?;
    let (interior, depth) = p.find_deepest_point(tol, cfg.seed)?;
    if depth <= tol.rel(1.0) {
        return Err(Error::InteriorPointNotFound);
    }

    let qy_norm = linalg::spectral_norm_sym(&qy);
    let mut radius = witness.ball_radius;
    for _ in 0..=cfg.max_halvings {
        match try_piece(
            p,
            x,
            stratum,
            epsilon,
            &seed_vector,
            &interior,
            radius,
            qy_norm,
            &qy,
            tol,
            cfg,
        )? {
            Some(section_data) => {
                let (grid, gammas, inf_bound, sup_bound) = section_data;
                let stats = grid_stats(&grid, &gammas);
                return Ok(KernelSection {
                    pencil: p.clone(),
                    stratum,
                    base: x.to_vec(),
                    target: y.to_vec(),
                    epsilon,
                    seed_vector,
                    radius,
                    grid,
                    gammas,
                    inf_bound,
                    sup_bound,
                    stats,
                });
            }
            None => radius *= 0.5,
        }
    }
    Err(Error::NeighborhoodSearchFailed {
        stage: "section radius backtracking",
    })
}

type PieceData = (Vec<Vec<f64>>, Vec<DVector<f64>>, f64, f64);

/// One radius attempt: sample the piece, verify the gap condition and the
/// positivity of the target kernel on all grid pairs.
#[allow(clippy::too_many_arguments)]
fn try_piece(
    p: &SymmetricPencil,
    x: &[f64],
    stratum: usize,
    epsilon: f64,
    seed_vector: &DVector<f64>,
    interior: &[f64],
    radius: f64,
    qy_norm: f64,
    qy: &DMatrix<f64>,
    tol: &Tolerances,
    cfg: &SectionConfig,
) -> Result<Option<PieceData>> {
    let mut grid: Vec<Vec<f64>> = vec![x.to_vec()];
    let hits = strata::sample_boundary_near(p, interior, x, radius, cfg.grid_target, tol)?;
    for h in hits {
        match kernel_dimension(p, &h, tol) {
            Ok(l) if l.0 == stratum => {
                if grid.iter().all(|g| sampling::dist(g, &h) > 1e-9) {
                    grid.push(h);
                }
            }
            // Points of other strata or ambiguous points are not part of
            // E_i-cap-ball; they simply do not join the piece.
            Ok(_) | Err(Error::AmbiguousKernelDim { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let mut gammas: Vec<DVector<f64>> = Vec::with_capacity(grid.len());
    for z in &grid {
        let q = p.evaluate(z)?;
        let proj = match riesz_projection_of(&q, epsilon, tol) {
            Ok(pr) => pr,
            Err(Error::SpectralGapViolation { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        // The projection must carry exactly the kernel rank here.
        let rank = proj.trace().round() as usize;
        if rank != stratum {
            return Ok(None);
        }
        let g = &proj * seed_vector;
        let norm = g.norm();
        if norm < 1e-3 {
            return Ok(None);
        }
        let mut gamma = g / norm;
        if gamma.dot(seed_vector) < 0.0 {
            gamma = -gamma;
        }
        gammas.push(gamma);
    }

    // Uniform positivity of the target kernel over the sampled piece.
    let mut inf_bound = f64::INFINITY;
    let mut sup_bound = f64::NEG_INFINITY;
    for gi in &gammas {
        let qg = qy * gi;
        for gj in &gammas {
            let v = gj.dot(&qg);
            inf_bound = inf_bound.min(v);
            sup_bound = sup_bound.max(v);
        }
    }
    if inf_bound <= tol.rel(qy_norm) {
        return Ok(None);
    }
    Ok(Some((grid, gammas, inf_bound, sup_bound)))
}

fn grid_stats(grid: &[Vec<f64>], gammas: &[DVector<f64>]) -> GridStats {
    let n = grid.len();
    let mut max_spacing = 0.0f64;
    let mut holder = 0.0f64;
    for i in 0..n {
        let mut nearest = f64::INFINITY;
        let mut nearest_j = i;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = sampling::dist(&grid[i], &grid[j]);
            if d < nearest {
                nearest = d;
                nearest_j = j;
            }
        }
        if nearest.is_finite() {
            max_spacing = max_spacing.max(nearest);
            if nearest > 1e-12 {
                let dg = (&gammas[i] - &gammas[nearest_j]).norm();
                holder = holder.max(dg / nearest.sqrt());
            }
        }
    }
    GridStats {
        points: n,
        max_spacing,
        holder_ratio: holder,
    }
}

impl KernelSection {
    pub fn pencil(&self) -> &SymmetricPencil {
        &self.pencil
    }

    pub fn stratum(&self) -> usize {
        self.stratum
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed_vector(&self) -> &DVector<f64> {
        &self.seed_vector
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn gamma_at_grid(&self, idx: usize) -> &DVector<f64> {
        &self.gammas[idx]
    }

    /// Measured infimum `c` of the target kernel over the sampled piece.
    pub fn inf_bound(&self) -> f64 {
        self.inf_bound
    }

    /// Measured supremum `b` of the target kernel over the sampled piece.
    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn stats(&self) -> &GridStats {
        &self.stats
    }

    /// Whether `z` belongs to the verified piece `F`.
    pub fn contains(&self, z: &[f64], tol: &Tolerances) -> bool {
        if z.len() != self.base.len() {
            return false;
        }
        if sampling::dist(z, &self.base) > self.radius + 1e3 * tol.abs {
            return false;
        }
        matches!(
            kernel_dimension(&self.pencil, z, tol),
            Ok(l) if l.0 == self.stratum
        )
    }

    /// The unit kernel vector at `z in F`.
    pub fn gamma(&self, z: &[f64], tol: &Tolerances) -> Result<DVector<f64>> {
        if !self.contains(z, tol) {
            return Err(Error::PointOutsideSection);
        }
        let q = self.pencil.evaluate(z)?;
        let proj = riesz_projection_of(&q, self.epsilon, tol)?;
        let g = &proj * &self.seed_vector;
        let norm = g.norm();
        if norm < 1e-12 {
            return Err(Error::PointOutsideSection);
        }
        let mut gamma = g / norm;
        if gamma.dot(&self.seed_vector) < 0.0 {
            gamma = -gamma;
        }
        Ok(gamma)
    }

    /// `k_z(w1, w2) = gamma(w2)^T Q(z) gamma(w1)` for `z in K`.
    pub fn kernel_value(
        &self,
        z: &[f64],
        omega1: &[f64],
        omega2: &[f64],
        tol: &Tolerances,
    ) -> Result<f64> {
        if self.pencil.membership(z, tol)?.class == MembershipClass::Outside {
            return Err(Error::PointOutsideSection);
        }
        let g1 = self.gamma(omega1, tol)?;
        let g2 = self.gamma(omega2, tol)?;
        let q = self.pencil.evaluate(z)?;
        Ok(g2.dot(&(&q * &g1)))
    }

    /// Gram matrix `A(z)_{ij} = k_z(t_i, t_j)` over nodes in `F`. Defined for
    /// every `z` (PSD is only guaranteed on `K`); exactly symmetric.
    pub fn gram_matrix(
        &self,
        z: &[f64],
        nodes: &[Vec<f64>],
        tol: &Tolerances,
    ) -> Result<DMatrix<f64>> {
        let gammas: Vec<DVector<f64>> = nodes
            .iter()
            .map(|t| self.gamma(t, tol))
            .collect::<Result<_>>()?;
        let q = self.pencil.evaluate(z)?;
        Ok(gram_from_gammas(&q, &gammas))
    }
}

/// Gram matrix of a quadratic form over a family of vectors; upper triangle
/// mirrored so the output is exactly symmetric.
pub fn gram_from_gammas(q: &DMatrix<f64>, gammas: &[DVector<f64>]) -> DMatrix<f64> {
    let n = gammas.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let qi = q * &gammas[i];
        for j in i..n {
            let v = gammas[j].dot(&qi);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}
