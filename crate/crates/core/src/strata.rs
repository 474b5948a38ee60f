//! Boundary stratification by kernel dimension.
//!
//! The boundary of `K` splits into strata `K_i` of points where
//! `dim ker Q(z) = i`; the tail unions `E_j` (kernel dimension at least `j`)
//! are closed, which makes each stratum locally closed. This module labels
//! boundary points, produces locally-closed witnesses, and detects the
//! degenerate case where the whole set collapses to a single point.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::pencil::{MembershipClass, SymmetricPencil};
use crate::sampling::{self, halton_ball_point, halton_direction};
use crate::tol::Tolerances;

/// Spectral-gap factor: the eigenvalue right above the kernel band must
/// exceed `GAP_GUARD * tau_rel`, otherwise the dimension is ambiguous.
pub const GAP_GUARD: f64 = 10.0;

/// Kernel dimension of a boundary point, `1..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumLabel(pub usize);

/// One row of a stratification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumSample {
    pub point: Vec<f64>,
    pub stratum: usize,
    pub min_eig: f64,
    /// Smallest eigenvalue above the kernel band (`+inf` shown as `m`-way
    /// degenerate when the kernel is full).
    pub gap: f64,
}

/// Kernel dimension of `Q(z)` at a boundary point.
///
/// Counts eigenvalues inside the band `|lambda| <= tau_rel` and insists on a
/// clear spectral gap above the band; without the gap the count is not
/// trustworthy and `AmbiguousKernelDim` is returned instead of a guess.
pub fn kernel_dimension(p: &SymmetricPencil, z: &[f64], tol: &Tolerances) -> Result<StratumLabel> {
    let verdict = p.membership(z, tol)?;
    if verdict.class != MembershipClass::Boundary {
        return Err(Error::NotOnBoundary {
            index: None,
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let q = p.evaluate(z)?;
    let eig = sym_eigen(&q);
    let band = tol.rel(linalg::spectral_norm_sym(&q));
    let dim = eig.values.iter().filter(|&&l| l.abs() <= band).count();
    debug_assert!(dim >= 1);
    if dim < p.size() {
        let next = eig.values[dim];
        if next <= GAP_GUARD * band {
            return Err(Error::AmbiguousKernelDim {
                next,
                threshold: GAP_GUARD * band,
            });
        }
    }
    Ok(StratumLabel(dim))
}

/// Label a batch of boundary points; a failure carries the offending index.
pub fn stratify_samples(
    p: &SymmetricPencil,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<Vec<StratumSample>> {
    let mut out = Vec::with_capacity(points.len());
    for (idx, z) in points.iter().enumerate() {
        let label = kernel_dimension(p, z, tol).map_err(|e| match e {
            Error::NotOnBoundary { min_eigenvalue, .. } => Error::NotOnBoundary {
                index: Some(idx),
                min_eigenvalue,
            },
            other => other,
        })?;
        let q = p.evaluate(z)?;
        let eig = sym_eigen(&q);
        let gap = if label.0 < p.size() {
            eig.values[label.0]
        } else {
            0.0
        };
        out.push(StratumSample {
            point: z.clone(),
            stratum: label.0,
            min_eig: eig.values[0],
            gap,
        });
    }
    Ok(out)
}

/// Shoot `count` quasi-random rays from an interior point and bisect each to
/// the boundary. Returns the hit points.
pub fn sample_boundary(
    p: &SymmetricPencil,
    interior: &[f64],
    count: usize,
    tol: &Tolerances,
) -> Result<Vec<Vec<f64>>> {
    let k = p.ambient_dim();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let dir = halton_direction(i as u64 + 1, k);
        out.push(ray_to_boundary(p, interior, &dir, tol)?);
    }
    Ok(out)
}

/// Bisect along `base + t*dir` until the membership verdict is Boundary.
/// `base` must not be outside `K`.
pub fn ray_to_boundary(
    p: &SymmetricPencil,
    base: &[f64],
    dir: &[f64],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let at = |t: f64| sampling::axpy(t, dir, base);
    let class_at = |t: f64| -> Result<MembershipClass> { Ok(p.membership(&at(t), tol)?.class) };
    match class_at(0.0)? {
        MembershipClass::Boundary => return Ok(base.to_vec()),
        MembershipClass::Outside => {
            let v = p.membership(base, tol)?;
            return Err(Error::NotOnBoundary {
                index: None,
                min_eigenvalue: v.min_eigenvalue,
            });
        }
        MembershipClass::Interior => {}
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    loop {
        match class_at(hi)? {
            MembershipClass::Boundary => return Ok(at(hi)),
            MembershipClass::Interior => {
                lo = hi;
                hi *= 2.0;
                if hi > crate::pencil::UNBOUNDED_REACH {
                    return Err(Error::Unbounded { reach: hi });
                }
            }
            MembershipClass::Outside => break,
        }
    }
    // The membership band has positive width, so bisection lands in it.
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        match class_at(mid)? {
            MembershipClass::Boundary => return Ok(at(mid)),
            MembershipClass::Interior => lo = mid,
            MembershipClass::Outside => hi = mid,
        }
    }
    let v = p.membership(&at(0.5 * (lo + hi)), tol)?;
    Err(Error::NotOnBoundary {
        index: None,
        min_eigenvalue: v.min_eigenvalue,
    })
}

/// Boundary samples steered into the ball around `center`: rays are aimed at
/// quasi-random targets inside the ball so the hits concentrate there.
pub fn sample_boundary_near(
    p: &SymmetricPencil,
    interior: &[f64],
    center: &[f64],
    radius: f64,
    count: usize,
    tol: &Tolerances,
) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for i in 0..count {
        let target = halton_ball_point(i as u64 + 1, center, radius);
        let mut dir: Vec<f64> = target.iter().zip(interior).map(|(t, b)| t - b).collect();
        let n = sampling::norm(&dir);
        if n < tol.abs {
            continue;
        }
        for d in dir.iter_mut() {
            *d /= n;
        }
        let hit = ray_to_boundary(p, interior, &dir, tol)?;
        if sampling::dist(&hit, center) <= radius {
            out.push(hit);
        }
    }
    Ok(out)
}

/// A locally-closed witness: the piece
/// `F = E_i ∩ closed-ball(center, ball_radius)` sits inside the stratum, and
/// every stratum point within `neighborhood_radius` of the center lies in `F`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocallyClosedWitness {
    pub center: Vec<f64>,
    pub stratum: usize,
    /// Radius of the closed ball defining `F` (half the probed safe radius).
    pub ball_radius: f64,
    /// Radius of the neighborhood `U` with `U ∩ K_i ⊆ F`.
    pub neighborhood_radius: f64,
}

/// Probe for a radius `eps` whose ball around `x` avoids the next-higher
/// stratum `E_{i+1}`, sweeping `eps` through `1, 1/2, ..., 2^-20`.
///
/// The avoidance check samples the boundary inside the ball; strata of
/// higher index that have measure zero on the boundary can escape the probe,
/// which is the documented limitation of a sampled witness.
pub fn locally_closed_witness(
    p: &SymmetricPencil,
    x: &[f64],
    tol: &Tolerances,
) -> Result<LocallyClosedWitness> {
    let label = kernel_dimension(p, x, tol)?;
    let (interior, depth) = p.find_deepest_point(tol, 0x5eed)?;
    if depth <= tol.rel(1.0) {
        // Ray probing needs an interior base point; flat sets must be
        // reduced to their affine hull first.
        return Err(Error::InteriorPointNotFound);
    }
    let probes = 128;
    let mut eps = 1.0f64;
    for _ in 0..=20 {
        // Sample the boundary near x and look for higher strata in the
        // closed ball of radius eps.
        let mut ok = true;
        let hits = sample_boundary_near(p, &interior, x, eps, probes, tol)?;
        for h in &hits {
            match kernel_dimension(p, h, tol) {
                Ok(StratumLabel(d)) if d > label.0 => {
                    ok = false;
                    break;
                }
                Ok(_) => {}
                // Ambiguity this close to a stratum jump counts against
                // the candidate radius.
                Err(Error::AmbiguousKernelDim { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok {
            return Ok(LocallyClosedWitness {
                center: x.to_vec(),
                stratum: label.0,
                ball_radius: eps / 2.0,
                neighborhood_radius: eps / 2.0,
            });
        }
        eps /= 2.0;
    }
    Err(Error::WitnessSearchFailed)
}

/// Look for the degenerate stratum `K_m`: a point where `Q` vanishes
/// entirely, which forces `K` to be that single point. Solves the linear
/// system `sum z_i A_i = -A0` in least squares and accepts the solution when
/// the residual vanishes and the point is feasible.
pub fn detect_full_kernel_singleton(
    p: &SymmetricPencil,
    tol: &Tolerances,
) -> Result<Option<Vec<f64>>> {
    let m = p.size();
    let k = p.ambient_dim();
    if k == 0 {
        let scale = linalg::spectral_norm_sym(p.a0());
        return Ok(if scale <= tol.rel(scale) {
            Some(Vec::new())
        } else {
            None
        });
    }
    // vec() the symmetric matrices into columns.
    let rows = m * m;
    let mut sys = DMatrix::zeros(rows, k);
    for j in 0..k {
        let a = p.coeff(j);
        for r in 0..m {
            for c in 0..m {
                sys[(r * m + c, j)] = a[(r, c)];
            }
        }
    }
    let mut rhs = nalgebra::DVector::zeros(rows);
    for r in 0..m {
        for c in 0..m {
            rhs[r * m + c] = -p.a0()[(r, c)];
        }
    }
    let svd = sys.svd(true, true);
    let z = match svd.solve(&rhs, tol.abs) {
        Ok(sol) => sol,
        Err(_) => return Ok(None),
    };
    let zv: Vec<f64> = z.iter().cloned().collect();
    let q = p.evaluate(&zv)?;
    let scale = linalg::spectral_norm_sym(p.a0()).max(1.0);
    if linalg::spectral_norm_sym(&q) <= tol.rel(scale) {
        Ok(Some(zv))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn kernel_dimension_examples() {
        let t = tols();
        let d = library::disk();
        assert_eq!(
            kernel_dimension(&d, &[1.0, 0.0], &t).unwrap(),
            StratumLabel(1)
        );
        let s = library::square();
        assert_eq!(
            kernel_dimension(&s, &[1.0, 1.0], &t).unwrap(),
            StratumLabel(2)
        );
        assert_eq!(
            kernel_dimension(&s, &[1.0, 0.0], &t).unwrap(),
            StratumLabel(1)
        );
    }

    #[test]
    fn kernel_dimension_rejects_interior() {
        let d = library::disk();
        assert!(matches!(
            kernel_dimension(&d, &[0.0, 0.0], &tols()),
            Err(Error::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn stratify_circle_all_rank_one() {
        let d = library::disk();
        let t = tols();
        let pts: Vec<Vec<f64>> = (0..360)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / 360.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let labels = stratify_samples(&d, &pts, &t).unwrap();
        assert_eq!(labels.len(), 360);
        assert!(labels.iter().all(|s| s.stratum == 1));
    }

    #[test]
    fn stratify_square_corners_and_edges() {
        let s = library::square();
        let t = tols();
        let pts = vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let labels = stratify_samples(&s, &pts, &t).unwrap();
        for row in &labels[..4] {
            assert_eq!(row.stratum, 2, "corner {:?}", row.point);
        }
        for row in &labels[4..] {
            assert_eq!(row.stratum, 1, "midpoint {:?}", row.point);
        }
    }

    #[test]
    fn stratify_empty_is_empty() {
        let d = library::disk();
        assert!(stratify_samples(&d, &[], &tols()).unwrap().is_empty());
    }

    #[test]
    fn stratify_reports_offending_index() {
        let d = library::disk();
        let pts = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        match stratify_samples(&d, &pts, &tols()) {
            Err(Error::NotOnBoundary { index: Some(1), .. }) => {}
            other => panic!("expected NotOnBoundary at index 1, got {other:?}"),
        }
    }

    #[test]
    fn partition_property_on_boundary_samples() {
        // Every sampled boundary point gets exactly one label and the label
        // counts add up.
        let s = library::square();
        let t = tols();
        let samples = sample_boundary(&s, &[0.0, 0.0], 200, &t).unwrap();
        let labels = stratify_samples(&s, &samples, &t).unwrap();
        assert_eq!(labels.len(), 200);
        let count: usize = (1..=4)
            .map(|i| labels.iter().filter(|l| l.stratum == i).count())
            .sum();
        assert_eq!(count, 200);
    }

    #[test]
    fn chain_is_monotone_on_samples() {
        // E_{j+1} subset E_j holds trivially by definition of the label;
        // verify the sampled labels never exceed m and are at least 1.
        let s = library::square();
        let t = tols();
        let samples = sample_boundary(&s, &[0.0, 0.0], 100, &t).unwrap();
        for row in stratify_samples(&s, &samples, &t).unwrap() {
            assert!(row.stratum >= 1 && row.stratum <= 4);
        }
    }

    #[test]
    fn chain_closedness_probe() {
        // E_1 is closed: a sequence of edge points converging to a corner
        // has its limit labeled >= 1 (in fact 2). The re-test at the limit
        // keeps the chain membership.
        let s = library::square();
        let t = tols();
        let mut labels = Vec::new();
        for n in 1..=12 {
            let z = vec![1.0, 1.0 - 2.0f64.powi(-n)];
            labels.push(kernel_dimension(&s, &z, &t).unwrap().0);
        }
        assert!(labels.iter().all(|&l| l == 1), "edge labels {labels:?}");
        let limit_label = kernel_dimension(&s, &[1.0, 1.0], &t).unwrap().0;
        assert!(limit_label >= 1, "limit stays in E_1");
        assert_eq!(limit_label, 2, "the limit point is the corner stratum");
    }

    #[test]
    fn ambiguous_kernel_dimension_is_an_error() {
        // A boundary point with an eigenvalue inside the guard band above
        // the kernel band: the dimension is not trustworthy and the
        // operation must refuse rather than guess.
        let t = tols();
        let gap = 5.0 * t.rel(2.0); // inside (band, 10*band]
        let p = SymmetricPencil::new(
            DMatrix::from_diagonal(&nalgebra::dvector![1.0, 1.0, 1.0]),
            vec![DMatrix::from_diagonal(&nalgebra::dvector![
                1.0,
                -1.0,
                -1.0 + gap
            ])],
        )
        .unwrap();
        match kernel_dimension(&p, &[1.0], &t) {
            Err(Error::AmbiguousKernelDim { .. }) => {}
            other => panic!("expected AmbiguousKernelDim, got {other:?}"),
        }
    }

    #[test]
    fn witness_on_disk() {
        // E_2 is empty for the disk, so the first radius is accepted.
        let d = library::disk();
        let w = locally_closed_witness(&d, &[1.0, 0.0], &tols()).unwrap();
        assert_eq!(w.stratum, 1);
        assert!((w.ball_radius - 0.5).abs() < 1e-12);
    }

    #[test]
    fn witness_on_square_corner() {
        // E_3 is empty, so the corner witness accepts the initial radius and
        // its piece of K_2 is the corner alone.
        let s = library::square();
        let t = tols();
        let w = locally_closed_witness(&s, &[1.0, 1.0], &t).unwrap();
        assert_eq!(w.stratum, 2);
        assert!(w.ball_radius > 0.0);
    }

    #[test]
    fn witness_square_edge_respects_invariants() {
        let s = library::square();
        let t = tols();
        let x = vec![1.0, 0.0];
        let w = locally_closed_witness(&s, &x, &t).unwrap();
        assert_eq!(w.stratum, 1);
        // Sampled points of K_1 within the neighborhood radius must lie in
        // F, i.e. within ball_radius of the center.
        let hits =
            sample_boundary_near(&s, &[0.0, 0.0], &x, w.neighborhood_radius, 64, &t).unwrap();
        for h in hits {
            if kernel_dimension(&s, &h, &t).unwrap().0 == 1 {
                assert!(sampling::dist(&h, &x) <= w.ball_radius + 1e-9);
            }
        }
    }

    #[test]
    fn witness_refuses_flat_sets() {
        // The segment has no interior to shoot rays from; the witness
        // search refuses instead of claiming an unprobed radius.
        let p = library::segment();
        assert!(matches!(
            locally_closed_witness(&p, &[1.0, 0.0], &tols()),
            Err(Error::InteriorPointNotFound)
        ));
    }

    #[test]
    fn singleton_detection() {
        let t = tols();
        let z = detect_full_kernel_singleton(&library::singleton(), &t)
            .unwrap()
            .expect("singleton pencil collapses");
        assert!(sampling::norm(&z) < 1e-9);
        assert!(detect_full_kernel_singleton(&library::disk(), &t)
            .unwrap()
            .is_none());
        assert!(detect_full_kernel_singleton(&library::square(), &t)
            .unwrap()
            .is_none());
    }
}
