//! Separation certificates.
//!
//! Given a verified kernel section on a piece `F` of a stratum and a target
//! extreme point `y` outside `F`, the pipeline constructs and verifies a
//! matrix-inequality certificate that a neighborhood `U` of `y` is separated
//! from `F`:
//!
//! 1. cover `F` by cells on which the diagonal kernel values stay below a
//!    chosen `epsilon`;
//! 2. encode the kernel on the cover nodes in the affine Gram map `A(z)`;
//! 3. bound the kernel entries on a neighborhood of `y`, fix
//!    `alpha = c^3/(16 (b+c)^2)`, and find the neighborhood where the
//!    negative spectral part of `Q` stays below `alpha`;
//! 4. write `y` as a convex combination of an interior point `omega_1` and
//!    an exterior point `omega_2`, which determines `U = ball(y, s*delta)`;
//! 5. take the Perron pair of `A+(omega_2)`, check the one-positive-
//!    eigenvalue criterion for `lambda p p^T + A-`, invert it entrywise,
//!    and verify the Loewner dominations
//!    `(1) <= B o A(omega_2)` and `(1-s)(1) <= B o A(x)` for sampled
//!    `x in U ∩ K`.
//!
//! Every inequality lands in the certificate's log with its measured slack,
//! and an independent audit pass recomputes everything from the pencil
//! alone. Sampled checks are labeled as such: a grid can witness failure
//! but can only ever give sampled confidence of success.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces;
use crate::hadamard::{self, alpha_constant, AlphaConstant};
use crate::linalg::{self, sym_eigen};
use crate::pencil::{MembershipClass, SymmetricPencil};
use crate::perron;
use crate::sampling::{self, halton_ball_point, halton_direction};
use crate::sections::{
    build_gamma, gram_from_gammas, riesz_projection_of, KernelSection, SectionConfig,
};
use crate::strata;
use crate::tol::Tolerances;

/// Configuration of a single separation run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Cover tolerance for the diagonal kernel values.
    pub epsilon: f64,
    /// Section grid budget.
    pub grid_target: usize,
    /// Number of quasi-random domination samples in `U ∩ K`.
    pub domination_samples: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            epsilon: 0.05,
            grid_target: 256,
            domination_samples: 512,
            seed: 7,
        }
    }
}

/// One checked inequality `lhs >= rhs`, with `slack = lhs - rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl InequalityRecord {
    fn check(name: impl Into<String>, lhs: f64, rhs: f64, band: f64) -> Self {
        let slack = lhs - rhs;
        InequalityRecord {
            name: name.into(),
            lhs,
            rhs,
            slack,
            passed: slack >= -band,
        }
    }
}

/// One cell of the epsilon-cover: the grid points claimed by `node`, with
/// the measured supremum of `k_z(node, node)` over the cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverCell {
    pub node: Vec<f64>,
    pub members: Vec<Vec<f64>>,
    pub sup_diag: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonCover {
    pub epsilon: f64,
    pub nodes: Vec<Vec<f64>>,
    pub cells: Vec<CoverCell>,
}

/// Greedy cover of the section grid: nodes are picked in deterministic grid
/// order; each claims the not-yet-covered points `z` with
/// `k_z(node, node) < epsilon`.
pub fn epsilon_cover(ks: &KernelSection, epsilon: f64) -> Result<EpsilonCover> {
    let grid = ks.grid();
    let n_grid = grid.len();
    let gammas: Vec<&DVector<f64>> = (0..n_grid).map(|i| ks.gamma_at_grid(i)).collect();
    let qs: Vec<DMatrix<f64>> = grid
        .iter()
        .map(|z| ks.pencil().evaluate(z))
        .collect::<Result<_>>()?;

    let diag_value = |node: usize, z: usize| -> f64 {
        let g = gammas[node];
        g.dot(&(&qs[z] * g))
    };

    let mut remaining: Vec<usize> = (0..n_grid).collect();
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    while let Some(&node) = remaining.first() {
        let own = diag_value(node, node);
        let covers_itself = own < epsilon;
        if !covers_itself {
            return Err(Error::CoverFailure {
                reason: format!(
                    "node cannot cover itself: k(x,x) = {own:e} with epsilon = {epsilon:e}"
                ),
            });
        }
        let (cell, rest): (Vec<usize>, Vec<usize>) = remaining
            .iter()
            .partition(|&&z| diag_value(node, z) < epsilon);
        let sup_diag = cell
            .iter()
            .map(|&z| diag_value(node, z))
            .fold(f64::NEG_INFINITY, f64::max);
        nodes.push(grid[node].clone());
        cells.push(CoverCell {
            node: grid[node].clone(),
            members: cell.iter().map(|&z| grid[z].clone()).collect(),
            sup_diag,
        });
        remaining = rest;
    }
    Ok(EpsilonCover {
        epsilon,
        nodes,
        cells,
    })
}

/// The alpha record carried by certificates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub c: f64,
    pub b: f64,
    pub alpha: f64,
    pub c_tilde: f64,
}

impl From<AlphaConstant> for AlphaRecord {
    fn from(a: AlphaConstant) -> Self {
        AlphaRecord {
            c: a.c,
            b: a.b,
            alpha: a.alpha,
            c_tilde: a.c_tilde,
        }
    }
}

/// The full separation artifact. Everything an independent audit needs to
/// recompute the construction from the pencil alone is stored explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationCertificate {
    // section identity
    pub base: Vec<f64>,
    pub target: Vec<f64>,
    pub stratum: usize,
    /// Riesz contour radius of the section.
    pub spectral_radius: f64,
    pub seed_vector: Vec<f64>,
    pub section_radius: f64,
    /// Measured kernel inf/sup over the section grid.
    pub kernel_inf: f64,
    pub kernel_sup: f64,
    // cover
    pub epsilon: f64,
    pub nodes: Vec<Vec<f64>>,
    pub cells: Vec<CoverCell>,
    // neighborhood bounds
    pub entry_lower: f64,
    pub entry_upper: f64,
    pub neighborhood_radius: f64,
    pub alpha: AlphaRecord,
    // convex-combination data
    pub omega_interior: Vec<f64>,
    pub omega_exterior: Vec<f64>,
    pub s: f64,
    pub delta: f64,
    /// Radius of `U = ball(target, s * delta)`.
    pub separation_radius: f64,
    // Perron / Hadamard data at omega_exterior
    pub perron_lambda: f64,
    pub perron_vector: Vec<f64>,
    pub hadamard_inverse: Vec<Vec<f64>>,
    // domination sampling
    pub domination_samples: usize,
    pub sample_offset: u64,
    /// `1 / (alpha (1 - s))`: the certified norm-bound constant,
    /// independent of epsilon.
    pub norm_bound_constant: f64,
    pub verified: bool,
    pub inequality_log: Vec<InequalityRecord>,
}

fn domination_offset(seed: u64) -> u64 {
    (seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 44) + 1
}

/// Shrink a radius by halving until `check` accepts it.
fn shrink_radius(
    start: f64,
    max_halvings: usize,
    stage: &'static str,
    mut check: impl FnMut(f64) -> Result<bool>,
) -> Result<f64> {
    let mut r = start;
    for _ in 0..=max_halvings {
        if check(r)? {
            return Ok(r);
        }
        r *= 0.5;
    }
    Err(Error::NeighborhoodSearchFailed { stage })
}

/// Negative spectral mass of `Q(z)`: `max(0, -lambda_min)`.
fn negative_part_norm(p: &SymmetricPencil, z: &[f64]) -> Result<f64> {
    Ok((-p.min_eig_at(z)?).max(0.0))
}

/// Run the five-step pipeline on a built section. `y` must be the section's
/// target.
pub fn certify_separation(
    ks: &KernelSection,
    y: &[f64],
    cfg: &CertifyConfig,
    tol: &Tolerances,
) -> Result<SeparationCertificate> {
    let p = ks.pencil().clone();
    if sampling::dist(y, ks.target()) > 1e-12 {
        return Err(Error::InvalidPair {
            reason: "target differs from the section's target".into(),
        });
    }
    if p.membership(y, tol)?.class != MembershipClass::Boundary {
        return Err(Error::InvalidPair {
            reason: "target must be a boundary point".into(),
        });
    }
    if sampling::dist(y, ks.base()) <= ks.radius() + 1e3 * tol.abs {
        return Err(Error::TargetInsideSection);
    }

    let mut log: Vec<InequalityRecord> = Vec::new();

    // Step 1: cover.
    let cover = epsilon_cover(ks, cfg.epsilon)?;
    for (i, cell) in cover.cells.iter().enumerate() {
        log.push(InequalityRecord::check(
            format!("cover: epsilon >= sup diag over cell {i}"),
            cover.epsilon,
            cell.sup_diag,
            tol.rel(cover.epsilon),
        ));
    }

    // Step 2: the Gram map over the cover nodes.
    let node_gammas: Vec<DVector<f64>> = cover
        .nodes
        .iter()
        .map(|t| ks.gamma(t, tol))
        .collect::<Result<_>>()?;
    let n = cover.nodes.len();
    let gram_at =
        |z: &[f64]| -> Result<DMatrix<f64>> { Ok(gram_from_gammas(&p.evaluate(z)?, &node_gammas)) };

    // Step 3: kernel entry bounds near the target, alpha, and the
    // neighborhood where the negative part stays under alpha.
    let c_bound = 0.9 * ks.inf_bound();
    let b_bound = 1.1 * ks.sup_bound();
    let alpha = alpha_constant(c_bound, b_bound)?;
    let grid_gammas: Vec<DVector<f64>> = (0..ks.grid().len())
        .map(|i| ks.gamma_at_grid(i).clone())
        .collect();
    let probe_count = 48;
    let r_v = shrink_radius(
        0.25 * (1.0 + sampling::norm(y)),
        48,
        "kernel entry bound neighborhood",
        |r| {
            for i in 0..probe_count {
                let z = halton_ball_point(i + 1, y, r);
                let g = gram_from_gammas(&p.evaluate(&z)?, &grid_gammas);
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for v in g.iter() {
                    lo = lo.min(*v);
                    hi = hi.max(*v);
                }
                if lo < c_bound || hi > b_bound {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    )?;
    let r_vt = shrink_radius(r_v, 48, "negative part neighborhood", |r| {
        for i in 0..probe_count {
            let z = halton_ball_point(i + 1, y, r);
            if negative_part_norm(&p, &z)? >= alpha.alpha {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let r_u = r_v.min(r_vt);
    log.push(InequalityRecord::check(
        "neighborhood radius positive (sampled)",
        r_u,
        0.0,
        0.0,
    ));

    // Step 4: interior point, exterior point, convex coefficient.
    let mut best_interior: Option<(Vec<f64>, f64)> = None;
    for i in 0..256u64 {
        let z = halton_ball_point(i + 1, y, r_u);
        let depth = p.min_eig_at(&z)?;
        if best_interior.as_ref().is_none_or(|(_, d)| depth > *d) {
            best_interior = Some((z, depth));
        }
    }
    let (omega1, depth1) = best_interior.expect("probe count is positive");
    if depth1 <= tol.rel(1.0) {
        return Err(Error::InteriorPointNotFound);
    }
    log.push(InequalityRecord::check(
        "omega1 interior depth",
        depth1,
        0.0,
        tol.rel(1.0),
    ));

    let sphere_probes = 2 * p.ambient_dim() + 32;
    let delta = shrink_radius(r_u * 0.99, 48, "interior ball radius", |r| {
        for i in 0..sphere_probes {
            let dir = halton_direction(i as u64 + 1, p.ambient_dim());
            let z = sampling::axpy(r, &dir, &omega1);
            if p.membership(&z, tol)?.class != MembershipClass::Interior {
                return Ok(false);
            }
        }
        Ok(true)
    })?;

    let a_dist = sampling::dist(y, &omega1);
    let mut u_dir: Vec<f64> = y.iter().zip(&omega1).map(|(yi, oi)| yi - oi).collect();
    for d in u_dir.iter_mut() {
        *d /= a_dist;
    }
    let r_ext = shrink_radius(r_u * 0.99, 48, "exterior point sweep", |r| {
        let omega2 = sampling::axpy(r, &u_dir, y);
        Ok(
            p.membership(&omega2, tol)?.class == MembershipClass::Outside
                && negative_part_norm(&p, &omega2)? < alpha.alpha,
        )
    })?;
    let omega2 = sampling::axpy(r_ext, &u_dir, y);
    let s = r_ext / (a_dist + r_ext);
    // y = s*omega1 + (1-s)*omega2 must hold to construction accuracy
    let recombined: Vec<f64> = omega1
        .iter()
        .zip(&omega2)
        .map(|(o1, o2)| s * o1 + (1.0 - s) * o2)
        .collect();
    let recomb_err = sampling::dist(&recombined, y);
    log.push(InequalityRecord::check(
        "convex recombination of target (1e-12 >= error)",
        1e-12 * (1.0 + sampling::norm(y)),
        recomb_err,
        0.0,
    ));
    let separation_radius = s * delta;

    // Step 5: split at omega2, Perron pair, Hadamard inverse, dominations.
    let q2 = p.evaluate(&omega2)?;
    let (x_neg, y_pos) = hadamard::split_symmetric(&q2, tol);
    let a_minus = gram_from_gammas(&x_neg, &node_gammas);
    let a_plus = gram_from_gammas(&y_pos, &node_gammas);
    let a_omega2 = gram_at(&omega2)?;

    log.push(InequalityRecord::check(
        "alpha > negative part at omega2",
        alpha.alpha,
        linalg::spectral_norm_sym(&x_neg),
        0.0,
    ));
    let split_dev = linalg::max_abs_entry(&(&a_plus + &a_minus - &a_omega2));
    log.push(InequalityRecord::check(
        "split consistency: n*tau >= |A+ + A- - A|",
        (n as f64) * tol.rel(linalg::spectral_norm_sym(&a_omega2)),
        split_dev,
        0.0,
    ));
    let mut plus_lo = f64::INFINITY;
    let mut plus_hi = f64::NEG_INFINITY;
    for v in a_plus.iter() {
        plus_lo = plus_lo.min(*v);
        plus_hi = plus_hi.max(*v);
    }
    let band_entries = tol.rel(b_bound);
    log.push(InequalityRecord::check(
        "A+ entries >= c - alpha",
        plus_lo,
        alpha.c - alpha.alpha,
        band_entries,
    ));
    log.push(InequalityRecord::check(
        "b + alpha >= A+ entries",
        alpha.b + alpha.alpha,
        plus_hi,
        band_entries,
    ));
    let entries_positive = plus_lo > 0.0;
    if !entries_positive {
        return Err(Error::HadamardCriterionFailed {
            reason: format!("A+ has a non-positive entry ({plus_lo:e})"),
        });
    }

    let pd = perron::perron_eigenpair(&a_plus, tol)?;
    perron::verify_perron_bounds(&pd, tol)?;
    let p_vec = DVector::from_vec(pd.eigenvector.clone());
    let rank1 = linalg::outer(&p_vec) * pd.lambda;
    let mut rank1_lo = f64::INFINITY;
    for v in rank1.iter() {
        rank1_lo = rank1_lo.min(*v);
    }
    log.push(InequalityRecord::check(
        "lambda p p^T entries >= c~",
        rank1_lo,
        alpha.c_tilde,
        band_entries,
    ));

    let criterion_matrix = &rank1 + &a_minus;
    let mut read_lo = f64::INFINITY;
    for v in criterion_matrix.iter() {
        read_lo = read_lo.min(*v);
    }
    log.push(InequalityRecord::check(
        "lambda p p^T + A- entries >= c~ - alpha",
        read_lo,
        alpha.c_tilde - alpha.alpha,
        band_entries,
    ));
    log.push(InequalityRecord::check(
        "c~ - alpha >= alpha",
        alpha.c_tilde - alpha.alpha,
        alpha.alpha,
        0.0,
    ));
    let crit = hadamard::hadamard_inverse_psd_criterion(&criterion_matrix, tol)?;
    if !crit.satisfies_criterion {
        return Err(Error::HadamardCriterionFailed {
            reason: format!(
                "positive eigenvalues: {}, min entry: {:e}",
                crit.positive_eigenvalues, crit.min_entry
            ),
        });
    }
    let b_inv = hadamard::hadamard_inverse(&criterion_matrix, tol)?;
    let b_min_eig = linalg::min_eigenvalue(&b_inv);
    let b_scale = linalg::spectral_norm_sym(&b_inv);
    log.push(InequalityRecord::check(
        "Hadamard inverse PSD",
        b_min_eig,
        0.0,
        (n as f64) * tol.rel(b_scale),
    ));

    // (1) <= B o A(omega2)
    let dom2 = linalg::hadamard_product(&b_inv, &a_omega2) - linalg::ones(n);
    let dom2_min = linalg::min_eigenvalue(&dom2);
    let dom_scale = linalg::spectral_norm_sym(&linalg::hadamard_product(&b_inv, &a_omega2));
    log.push(InequalityRecord::check(
        "Loewner: B o A(omega2) >= (1)",
        dom2_min,
        0.0,
        (n as f64) * tol.rel(dom_scale),
    ));

    // (1-s)(1) <= B o A(x) for sampled x in U ∩ K, plus deterministic
    // extremal probes of the ball.
    let offset = domination_offset(cfg.seed);
    let mut samples: Vec<Vec<f64>> = Vec::new();
    for i in 0..cfg.domination_samples as u64 {
        samples.push(halton_ball_point(offset + i, y, separation_radius));
    }
    push_ball_probes(&mut samples, y, separation_radius);
    let mut worst: Option<(Vec<f64>, f64, DVector<f64>)> = None;
    let mut in_k = 0usize;
    for x in &samples {
        if p.membership(x, tol)?.class == MembershipClass::Outside {
            continue;
        }
        in_k += 1;
        let dom = linalg::hadamard_product(&b_inv, &gram_at(x)?) - linalg::ones(n) * (1.0 - s);
        let eig = sym_eigen(&dom);
        let min_eig = eig.values[0];
        if worst.as_ref().is_none_or(|(_, w, _)| min_eig < *w) {
            worst = Some((x.clone(), min_eig, eig.vectors.column(0).into_owned()));
        }
    }
    let dom_band = (n as f64) * tol.rel(dom_scale);
    if let Some((witness, min_eig, vec)) = &worst {
        log.push(InequalityRecord::check(
            format!("Loewner: B o A(x) >= (1-s)(1) at {in_k} samples of U ∩ K (sampled)"),
            *min_eig,
            0.0,
            dom_band,
        ));
        if *min_eig < -dom_band {
            return Err(Error::DominationFailed {
                witness: witness.clone(),
                min_eig: *min_eig,
                eigenvector: vec.iter().cloned().collect(),
            });
        }
    }

    let norm_bound_constant = 1.0 / (alpha.alpha * (1.0 - s));
    log.push(InequalityRecord::check(
        "norm bound constant finite",
        f64::MAX,
        norm_bound_constant,
        0.0,
    ));

    let verified = log.iter().all(|r| r.passed);
    Ok(SeparationCertificate {
        base: ks.base().to_vec(),
        target: y.to_vec(),
        stratum: ks.stratum(),
        spectral_radius: ks.epsilon(),
        seed_vector: ks.seed_vector().iter().cloned().collect(),
        section_radius: ks.radius(),
        kernel_inf: ks.inf_bound(),
        kernel_sup: ks.sup_bound(),
        epsilon: cover.epsilon,
        nodes: cover.nodes,
        cells: cover.cells,
        entry_lower: c_bound,
        entry_upper: b_bound,
        neighborhood_radius: r_u,
        alpha: alpha.into(),
        omega_interior: omega1,
        omega_exterior: omega2,
        s,
        delta,
        separation_radius,
        perron_lambda: pd.lambda,
        perron_vector: pd.eigenvector,
        hadamard_inverse: linalg::matrix_to_rows(&b_inv),
        domination_samples: cfg.domination_samples,
        sample_offset: offset,
        norm_bound_constant,
        verified,
        inequality_log: log,
    })
}

/// Axis points and box corners of the ball, the deterministic probes added
/// to the quasi-random domination samples.
fn push_ball_probes(samples: &mut Vec<Vec<f64>>, center: &[f64], radius: f64) {
    let k = center.len();
    for i in 0..k {
        for sign in [1.0, -1.0] {
            let mut z = center.to_vec();
            z[i] += sign * radius;
            samples.push(z);
        }
    }
    if k <= 10 {
        for mask in 0..(1u32 << k) {
            let mut z = center.to_vec();
            for (i, zi) in z.iter_mut().enumerate() {
                let sign = if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
                *zi += sign * radius / (k as f64).sqrt();
            }
            samples.push(z);
        }
    }
}

// ---------------------------------------------------------------------------
// Independent audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<InequalityRecord>,
    pub all_passed: bool,
}

/// Recompute every certified inequality from the pencil and the
/// certificate's identifying data; no cached matrix is trusted. The
/// Hadamard inverse and Perron pair are derived fresh and compared against
/// the stored copies.
pub fn audit_certificate(
    p: &SymmetricPencil,
    cert: &SeparationCertificate,
    tol: &Tolerances,
) -> Result<AuditReport> {
    let mut checks: Vec<InequalityRecord> = Vec::new();
    let v = DVector::from_vec(cert.seed_vector.clone());
    let gamma_at = |z: &[f64]| -> Result<DVector<f64>> {
        let q = p.evaluate(z)?;
        let proj = riesz_projection_of(&q, cert.spectral_radius, tol)?;
        let g = &proj * &v;
        let norm = g.norm();
        if norm < 1e-12 {
            return Err(Error::PointOutsideSection);
        }
        let mut gamma = g / norm;
        if gamma.dot(&v) < 0.0 {
            gamma = -gamma;
        }
        Ok(gamma)
    };

    // cover cells
    for (i, cell) in cert.cells.iter().enumerate() {
        let g_node = gamma_at(&cell.node)?;
        let mut sup = f64::NEG_INFINITY;
        for z in &cell.members {
            let q = p.evaluate(z)?;
            sup = sup.max(g_node.dot(&(&q * &g_node)));
        }
        checks.push(InequalityRecord::check(
            format!("audit cover cell {i}: epsilon >= recomputed sup"),
            cert.epsilon,
            sup,
            tol.rel(cert.epsilon),
        ));
    }

    // recombination identity
    let recombined: Vec<f64> = cert
        .omega_interior
        .iter()
        .zip(&cert.omega_exterior)
        .map(|(o1, o2)| cert.s * o1 + (1.0 - cert.s) * o2)
        .collect();
    checks.push(InequalityRecord::check(
        "audit convex recombination",
        1e-12 * (1.0 + sampling::norm(&cert.target)),
        sampling::dist(&recombined, &cert.target),
        0.0,
    ));

    // omega classifications
    let om1 = p.membership(&cert.omega_interior, tol)?;
    checks.push(InequalityRecord::check(
        "audit omega1 interior",
        om1.min_eigenvalue,
        0.0,
        -om1.tolerance_used,
    ));
    let om2 = p.membership(&cert.omega_exterior, tol)?;
    checks.push(InequalityRecord::check(
        "audit omega2 outside",
        -om2.min_eigenvalue,
        0.0,
        -om2.tolerance_used,
    ));

    // fresh gram/split/Perron/Hadamard at omega2
    let node_gammas: Vec<DVector<f64>> = cert
        .nodes
        .iter()
        .map(|t| gamma_at(t))
        .collect::<Result<_>>()?;
    let n = cert.nodes.len();
    let q2 = p.evaluate(&cert.omega_exterior)?;
    let (x_neg, y_pos) = hadamard::split_symmetric(&q2, tol);
    let a_minus = gram_from_gammas(&x_neg, &node_gammas);
    let a_plus = gram_from_gammas(&y_pos, &node_gammas);
    let a_omega2 = gram_from_gammas(&q2, &node_gammas);

    checks.push(InequalityRecord::check(
        "audit alpha > negative part at omega2",
        cert.alpha.alpha,
        linalg::spectral_norm_sym(&x_neg),
        0.0,
    ));
    let mut plus_lo = f64::INFINITY;
    let mut plus_hi = f64::NEG_INFINITY;
    for val in a_plus.iter() {
        plus_lo = plus_lo.min(*val);
        plus_hi = plus_hi.max(*val);
    }
    let band_entries = tol.rel(cert.entry_upper);
    checks.push(InequalityRecord::check(
        "audit A+ entries >= c - alpha",
        plus_lo,
        cert.alpha.c - cert.alpha.alpha,
        band_entries,
    ));
    checks.push(InequalityRecord::check(
        "audit b + alpha >= A+ entries",
        cert.alpha.b + cert.alpha.alpha,
        plus_hi,
        band_entries,
    ));

    let pd = perron::perron_eigenpair(&a_plus, tol)?;
    perron::verify_perron_bounds(&pd, tol)?;
    checks.push(InequalityRecord::check(
        "audit Perron eigenvalue matches certificate",
        tol.rel(pd.lambda),
        (pd.lambda - cert.perron_lambda).abs(),
        0.0,
    ));
    let p_dev = pd
        .eigenvector
        .iter()
        .zip(&cert.perron_vector)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    checks.push(InequalityRecord::check(
        "audit Perron vector matches certificate",
        1e-8,
        p_dev,
        0.0,
    ));

    let p_vec = DVector::from_vec(pd.eigenvector.clone());
    let criterion_matrix = linalg::outer(&p_vec) * pd.lambda + &a_minus;
    let crit = hadamard::hadamard_inverse_psd_criterion(&criterion_matrix, tol)?;
    checks.push(InequalityRecord::check(
        "audit criterion premise holds",
        if crit.satisfies_criterion { 1.0 } else { 0.0 },
        1.0,
        0.0,
    ));
    let b_fresh = hadamard::hadamard_inverse(&criterion_matrix, tol)?;
    let b_stored = linalg::matrix_from_rows(&cert.hadamard_inverse);
    let b_dev = linalg::max_abs_entry(&(&b_fresh - &b_stored));
    let b_scale = linalg::max_abs_entry(&b_fresh);
    checks.push(InequalityRecord::check(
        "audit Hadamard inverse matches certificate",
        tol.rel(b_scale),
        b_dev,
        0.0,
    ));
    checks.push(InequalityRecord::check(
        "audit Hadamard inverse PSD",
        linalg::min_eigenvalue(&b_fresh),
        0.0,
        (n as f64) * tol.rel(linalg::spectral_norm_sym(&b_fresh)),
    ));

    let dom_scale = linalg::spectral_norm_sym(&linalg::hadamard_product(&b_fresh, &a_omega2));
    let dom2 = linalg::hadamard_product(&b_fresh, &a_omega2) - linalg::ones(n);
    checks.push(InequalityRecord::check(
        "audit Loewner: B o A(omega2) >= (1)",
        linalg::min_eigenvalue(&dom2),
        0.0,
        (n as f64) * tol.rel(dom_scale),
    ));

    // regenerate the domination samples from the stored offset
    let mut worst = f64::INFINITY;
    let mut samples: Vec<Vec<f64>> = Vec::new();
    for i in 0..cert.domination_samples as u64 {
        samples.push(halton_ball_point(
            cert.sample_offset + i,
            &cert.target,
            cert.separation_radius,
        ));
    }
    push_ball_probes(&mut samples, &cert.target, cert.separation_radius);
    for x in &samples {
        if p.membership(x, tol)?.class == MembershipClass::Outside {
            continue;
        }
        let a_x = gram_from_gammas(&p.evaluate(x)?, &node_gammas);
        let dom = linalg::hadamard_product(&b_fresh, &a_x) - linalg::ones(n) * (1.0 - cert.s);
        worst = worst.min(linalg::min_eigenvalue(&dom));
    }
    checks.push(InequalityRecord::check(
        "audit Loewner: B o A(x) >= (1-s)(1) over regenerated samples (sampled)",
        worst,
        0.0,
        (n as f64) * tol.rel(dom_scale),
    ));

    let norm_const = 1.0 / (cert.alpha.alpha * (1.0 - cert.s));
    checks.push(InequalityRecord::check(
        "audit norm bound constant matches",
        tol.rel(norm_const),
        (norm_const - cert.norm_bound_constant).abs(),
        0.0,
    ));

    let all_passed = checks.iter().all(|r| r.passed);
    Ok(AuditReport { checks, all_passed })
}

// ---------------------------------------------------------------------------
// Pair certificates
// ---------------------------------------------------------------------------

/// Configuration of a pair run; the inner certification runs at reduced
/// budgets since many sub-certificates are built.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairConfig {
    pub epsilon: f64,
    pub grid_target: usize,
    pub domination_samples: usize,
    /// Boundary samples collected around each of the two points.
    pub base_samples: usize,
    pub target_samples: usize,
    pub seed: u64,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig {
            epsilon: 0.05,
            grid_target: 48,
            domination_samples: 64,
            base_samples: 6,
            target_samples: 4,
            seed: 7,
        }
    }
}

/// A ball probed to contain no extreme points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExclusionCell {
    pub point: Vec<f64>,
    pub radius: f64,
    pub reason: String,
}

/// Outcome for one sampled target point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TargetOutcome {
    Excluded(ExclusionCell),
    Certificate(Box<SeparationCertificate>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetCell {
    pub omega: Vec<f64>,
    pub outcome: TargetOutcome,
}

/// Outcome for one sampled base point of a stratum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BaseOutcome {
    /// The base point is not extreme; a ball around it avoids extreme
    /// points and needs no certificate.
    Excluded(ExclusionCell),
    /// One covering sub-certificate per sampled target point.
    Covered { cells: Vec<TargetCell> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseEntry {
    pub point: Vec<f64>,
    pub outcome: BaseOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumCoverage {
    pub stratum: usize,
    pub entries: Vec<BaseEntry>,
}

/// The glued artifact for a pair of extreme points: disjoint neighborhoods
/// and per-stratum covering sub-certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairCertificate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u_radius: f64,
    pub v_radius: f64,
    /// Distance between the closed neighborhoods; positive means disjoint.
    pub separation_gap: f64,
    pub strata: Vec<StratumCoverage>,
    pub verified: bool,
}

/// Largest ball around a non-extreme boundary point that stays clear of its
/// face endpoints (the nearest extreme candidates along the face).
fn exclusion_radius(p: &SymmetricPencil, z: &[f64], cap: f64, tol: &Tolerances) -> Result<f64> {
    let desc = faces::face_direction_space(p, z, tol)?;
    let mut nearest = cap;
    for j in 0..desc.direction_space.ncols() {
        let d: Vec<f64> = desc.direction_space.column(j).iter().cloned().collect();
        for sign in [1.0, -1.0] {
            let dd: Vec<f64> = d.iter().map(|v| sign * v).collect();
            let t = p.reach_along(z, &dd, tol)?;
            if t > 0.0 {
                nearest = nearest.min(t);
            }
        }
    }
    Ok(0.5 * nearest)
}

/// Certify a pair of distinct extreme points: disjoint neighborhoods `U` of
/// `x` and `V` of `y`, and for every sampled boundary point of `U` in every
/// stratum either an exclusion cell (non-extreme) or separation certificates
/// against the sampled points of `V`.
pub fn certify_pair(
    p: &SymmetricPencil,
    x: &[f64],
    y: &[f64],
    cfg: &PairConfig,
    tol: &Tolerances,
) -> Result<PairCertificate> {
    if sampling::dist(x, y) <= 1e3 * tol.abs {
        return Err(Error::InvalidPair {
            reason: "points coincide".into(),
        });
    }
    if !faces::is_extreme(p, x, tol)? {
        return Err(Error::InvalidPair {
            reason: "first point is not extreme".into(),
        });
    }
    if !faces::is_extreme(p, y, tol)? {
        return Err(Error::InvalidPair {
            reason: "second point is not extreme".into(),
        });
    }
    let r = sampling::dist(x, y) / 3.0;
    let separation_gap = sampling::dist(x, y) - 2.0 * r;

    let (interior, depth) = p.find_deepest_point(tol, cfg.seed)?;
    if depth <= tol.rel(1.0) {
        return Err(Error::InteriorPointNotFound);
    }

    // Sample the two neighborhoods: steered boundary hits plus face-walk
    // vertex candidates plus the centers themselves.
    let collect = |center: &[f64], count: usize| -> Result<Vec<Vec<f64>>> {
        let mut pts = vec![center.to_vec()];
        let hits = strata::sample_boundary_near(p, &interior, center, r, count, tol)?;
        let cands = faces::discover_extreme_candidates(p, &hits, tol, cfg.seed)?;
        for z in hits.into_iter().chain(cands) {
            if sampling::dist(&z, center) <= r && pts.iter().all(|q| sampling::dist(q, &z) > 1e-6) {
                pts.push(z);
            }
        }
        Ok(pts)
    };
    let base_points = collect(x, cfg.base_samples)?;
    let target_points = collect(y, cfg.target_samples)?;

    let sub_cfg = CertifyConfig {
        epsilon: cfg.epsilon,
        grid_target: cfg.grid_target,
        domination_samples: cfg.domination_samples,
        seed: cfg.seed,
    };
    let section_cfg = SectionConfig {
        grid_target: cfg.grid_target,
        ..SectionConfig::default()
    };

    let mut by_stratum: std::collections::BTreeMap<usize, Vec<BaseEntry>> =
        std::collections::BTreeMap::new();
    let mut verified = true;

    for z in &base_points {
        let stratum = match strata::kernel_dimension(p, z, tol) {
            Ok(l) => l.0,
            Err(Error::AmbiguousKernelDim { .. }) => continue,
            Err(e) => return Err(e),
        };
        let entry = if !faces::is_extreme(p, z, tol)? {
            BaseEntry {
                point: z.clone(),
                outcome: BaseOutcome::Excluded(ExclusionCell {
                    point: z.clone(),
                    radius: exclusion_radius(p, z, r, tol)?,
                    reason: "base point not extreme; ball clear of face endpoints".into(),
                }),
            }
        } else {
            let mut cells = Vec::new();
            for omega in &target_points {
                let outcome = match p.membership(omega, tol)?.class {
                    MembershipClass::Interior => {
                        let dist_to_boundary = nearest_boundary_distance(p, omega, tol)?;
                        TargetOutcome::Excluded(ExclusionCell {
                            point: omega.clone(),
                            radius: 0.5 * dist_to_boundary,
                            reason: "interior point; ball avoids the boundary".into(),
                        })
                    }
                    MembershipClass::Outside => {
                        let dist_to_k = distance_to_set(p, omega, &interior, tol)?;
                        TargetOutcome::Excluded(ExclusionCell {
                            point: omega.clone(),
                            radius: 0.5 * dist_to_k,
                            reason: "exterior point; ball avoids the set".into(),
                        })
                    }
                    MembershipClass::Boundary => {
                        if !faces::is_extreme(p, omega, tol)? {
                            TargetOutcome::Excluded(ExclusionCell {
                                point: omega.clone(),
                                radius: exclusion_radius(p, omega, r, tol)?,
                                reason: "target point not extreme; ball clear of face endpoints"
                                    .into(),
                            })
                        } else {
                            let ks = build_gamma(p, z, omega, tol, &section_cfg)?;
                            let cert = certify_separation(&ks, omega, &sub_cfg, tol)?;
                            verified &= cert.verified;
                            TargetOutcome::Certificate(Box::new(cert))
                        }
                    }
                };
                cells.push(TargetCell {
                    omega: omega.clone(),
                    outcome,
                });
            }
            BaseEntry {
                point: z.clone(),
                outcome: BaseOutcome::Covered { cells },
            }
        };
        by_stratum.entry(stratum).or_default().push(entry);
    }

    let strata_out: Vec<StratumCoverage> = by_stratum
        .into_iter()
        .map(|(stratum, entries)| StratumCoverage { stratum, entries })
        .collect();
    verified &= separation_gap > 0.0;
    Ok(PairCertificate {
        x: x.to_vec(),
        y: y.to_vec(),
        u_radius: r,
        v_radius: r,
        separation_gap,
        strata: strata_out,
        verified,
    })
}

/// Distance from an interior point to the boundary, probed along
/// quasi-random directions.
fn nearest_boundary_distance(p: &SymmetricPencil, z: &[f64], tol: &Tolerances) -> Result<f64> {
    let k = p.ambient_dim();
    let mut best = f64::INFINITY;
    for i in 0..(2 * k + 16) {
        let dir = halton_direction(i as u64 + 1, k);
        best = best.min(p.reach_along(z, &dir, tol)?);
    }
    Ok(best)
}

/// Distance from an exterior point to `K`, probed along the segment toward
/// an interior point.
fn distance_to_set(
    p: &SymmetricPencil,
    z: &[f64],
    interior: &[f64],
    tol: &Tolerances,
) -> Result<f64> {
    let dir: Vec<f64> = interior.iter().zip(z).map(|(a, b)| a - b).collect();
    let len = sampling::norm(&dir);
    let unit: Vec<f64> = dir.iter().map(|v| v / len).collect();
    // boundary crossing along the segment from outside toward inside
    let mut lo = 0.0;
    let mut hi = len;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let q = sampling::axpy(mid, &unit, z);
        match p.membership(&q, tol)?.class {
            MembershipClass::Outside => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(lo)
}
