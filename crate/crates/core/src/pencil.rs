//! Symmetric matrix pencils `Q(z) = A0 + sum_i z_i A_i`, the spectrahedra
//! they cut out, Hermitian-to-real doubling, and affine-hull reduction.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eigen};
use crate::sampling::{self, halton_direction, SplitMix64};
use crate::tol::Tolerances;

/// Largest entrywise asymmetry accepted on ingest before a matrix is
/// rejected outright. Below this the matrix is silently symmetrized.
pub const INGEST_ASYMMETRY_LIMIT: f64 = 1e-12;

/// Reach beyond which the boundedness probe declares the set unbounded.
pub const UNBOUNDED_REACH: f64 = 1e6;

/// A symmetric matrix pencil. All coefficient matrices are exactly
/// symmetric after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPencil {
    size: usize,
    ambient_dim: usize,
    a0: DMatrix<f64>,
    coeffs: Vec<DMatrix<f64>>,
}

fn ingest_symmetric(m: DMatrix<f64>, index: usize) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let asym = linalg::asymmetry(&m);
    if asym > INGEST_ASYMMETRY_LIMIT {
        return Err(Error::AsymmetryTooLarge {
            index,
            magnitude: asym,
        });
    }
    Ok(linalg::symmetrize(&m))
}

impl SymmetricPencil {
    /// Build a pencil from `A0` and the coordinate coefficients `A_1..A_k`.
    /// Matrices with asymmetry at most `1e-12` are symmetrized; larger
    /// asymmetry is rejected.
    pub fn new(a0: DMatrix<f64>, coeffs: Vec<DMatrix<f64>>) -> Result<Self> {
        let m = a0.nrows();
        if m == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let a0 = ingest_symmetric(a0, 0)?;
        let mut sym_coeffs = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.into_iter().enumerate() {
            if c.nrows() != m || c.ncols() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: c.nrows(),
                });
            }
            sym_coeffs.push(ingest_symmetric(c, i + 1)?);
        }
        Ok(SymmetricPencil {
            size: m,
            ambient_dim: sym_coeffs.len(),
            a0,
            coeffs: sym_coeffs,
        })
    }

    /// Matrix size `m`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Ambient dimension `k`.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn a0(&self) -> &DMatrix<f64> {
        &self.a0
    }

    pub fn coeff(&self, i: usize) -> &DMatrix<f64> {
        &self.coeffs[i]
    }

    fn check_dim(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: z.len(),
            });
        }
        Ok(())
    }

    /// `Q(z) = A0 + sum_i z_i A_i`. Exactly symmetric.
    pub fn evaluate(&self, z: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(z)?;
        let mut q = self.a0.clone();
        for (zi, ai) in z.iter().zip(&self.coeffs) {
            q += ai * *zi;
        }
        Ok(q)
    }

    /// Homogeneous part `A(d) = sum_i d_i A_i` (A0 dropped).
    pub fn evaluate_homogeneous(&self, d: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(d)?;
        let mut q = DMatrix::zeros(self.size, self.size);
        for (di, ai) in d.iter().zip(&self.coeffs) {
            q += ai * *di;
        }
        Ok(q)
    }

    /// Classify `z` against the spectrahedron `K = {z : Q(z) >= 0}`.
    pub fn membership(&self, z: &[f64], tol: &Tolerances) -> Result<MembershipVerdict> {
        let q = self.evaluate(z)?;
        let eig = sym_eigen(&q);
        let min_eig = eig.values[0];
        let scale = eig.values[0].abs().max(eig.values[self.size - 1].abs());
        let band = tol.rel(scale);
        let class = if min_eig > band {
            MembershipClass::Interior
        } else if min_eig < -band {
            MembershipClass::Outside
        } else {
            MembershipClass::Boundary
        };
        Ok(MembershipVerdict {
            class,
            min_eigenvalue: min_eig,
            tolerance_used: band,
        })
    }

    /// Smallest eigenvalue of `Q(z)`; concave in `z`.
    pub fn min_eig_at(&self, z: &[f64]) -> Result<f64> {
        Ok(linalg::min_eigenvalue(&self.evaluate(z)?))
    }

    /// Search for a point maximizing the smallest eigenvalue of `Q`.
    ///
    /// Coordinate descent from the origin with ternary line searches (the
    /// objective is concave along lines), plus seeded random restarts.
    /// Returns the best point and its min-eigenvalue.
    pub fn find_deepest_point(&self, tol: &Tolerances, seed: u64) -> Result<(Vec<f64>, f64)> {
        let k = self.ambient_dim;
        if k == 0 {
            let v = linalg::min_eigenvalue(&self.a0);
            return Ok((Vec::new(), v));
        }
        let mut rng = SplitMix64::new(seed);
        let mut best = vec![0.0; k];
        let mut best_val = self.min_eig_at(&best)?;
        for restart in 0..6 {
            let mut z = if restart == 0 {
                vec![0.0; k]
            } else {
                (0..k).map(|_| rng.next_range(-1.0, 1.0)).collect()
            };
            let mut val = self.min_eig_at(&z)?;
            for _sweep in 0..30 {
                let before = val;
                for c in 0..k {
                    let line = |t: f64| {
                        let mut w = z.clone();
                        w[c] += t;
                        self.min_eig_at(&w).unwrap_or(f64::NEG_INFINITY)
                    };
                    let t = ternary_max(line, -8.0, 8.0, 80);
                    z[c] += t;
                    val = self.min_eig_at(&z)?;
                }
                if val - before < tol.abs {
                    break;
                }
            }
            if val > best_val {
                best_val = val;
                best = z;
            }
        }
        Ok((best, best_val))
    }

    /// How far `K` extends from `base` along `dir` (largest `t >= 0` with
    /// `base + t*dir` in `K`). Errors with `Unbounded` past the probe limit.
    pub fn reach_along(&self, base: &[f64], dir: &[f64], tol: &Tolerances) -> Result<f64> {
        debug_assert!(self.membership(base, tol)?.class != MembershipClass::Outside);
        let inside = |t: f64| -> Result<bool> {
            let z = sampling::axpy(t, dir, base);
            Ok(self.membership(&z, tol)?.class != MembershipClass::Outside)
        };
        let mut hi = 1.0;
        let mut lo = 0.0;
        while inside(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > UNBOUNDED_REACH {
                return Err(Error::Unbounded { reach: hi });
            }
        }
        for _ in 0..200 {
            if hi - lo <= tol.abs * (1.0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if inside(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Probe compactness: shoot `2k + 64` quasi-random directions from a
    /// feasible point and measure the reach of each. Returns the diameter
    /// estimate `2 * max reach`. This is a probe, not a proof.
    pub fn boundedness_probe(&self, base: &[f64], tol: &Tolerances) -> Result<f64> {
        let k = self.ambient_dim;
        if k == 0 {
            return Ok(0.0);
        }
        let mut max_reach = 0.0f64;
        for i in 0..(2 * k + 64) {
            let dir = halton_direction(i as u64 + 1, k);
            let r = self.reach_along(base, &dir, tol)?;
            max_reach = max_reach.max(r);
        }
        Ok(2.0 * max_reach)
    }

    /// Reduce to the affine hull of `K`. At a relative-interior point `z0`
    /// the hull directions are exactly the `d` with
    /// `ker Q(z0) ⊆ ker A(d)` (the two-sided feasible directions), so the
    /// hull is read off a stacked kernel system. Boundary-reach
    /// displacements are added to the span as a rescue in case `z0` sits on
    /// the relative boundary. The reduced spectrahedron is full-dimensional
    /// (or a point when `d = 0`).
    pub fn affine_hull_reduce(&self, tol: &Tolerances, seed: u64) -> Result<AffineReduction> {
        let k = self.ambient_dim;
        let m = self.size;
        let (z0, depth) = self.find_deepest_point(tol, seed)?;
        let q0 = self.evaluate(&z0)?;
        let scale = linalg::spectral_norm_sym(&q0);
        if depth < -tol.rel(scale) {
            return Err(Error::EmptySpectrahedron { best: depth });
        }
        // compactness probe; errors out on unbounded sets
        self.boundedness_probe(&z0, tol)?;

        let eig = sym_eigen(&q0);
        let band = tol.rel(scale);
        let kernel_dim = eig.values.iter().filter(|&&l| l.abs() <= band).count();

        let mut span_cols: Vec<Vec<f64>> = Vec::new();
        if kernel_dim == 0 {
            // interior point: the hull is everything
            for j in 0..k {
                let mut e = vec![0.0; k];
                e[j] = 1.0;
                span_cols.push(e);
            }
        } else {
            // null space of the stacked system {A(d) v = 0, v in ker Q(z0)}
            let kernel_basis = eig.vectors.columns(0, kernel_dim).into_owned();
            let mut sys = DMatrix::zeros(kernel_dim * m, k);
            for j in 0..kernel_dim {
                let v = kernel_basis.column(j).into_owned();
                for l in 0..k {
                    let col = &self.coeffs[l] * &v;
                    for r in 0..m {
                        sys[(j * m + r, l)] = col[r];
                    }
                }
            }
            let svd = sys.svd(false, true);
            let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
            let cut = tol.abs * (1.0 + sigma_max);
            let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
            let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
            for j in rank..k {
                span_cols.push((0..k).map(|i| v_t[(j, i)]).collect());
            }
            // rescue displacements in case z0 is not relative-interior
            for i in 0..(2 * k + 16) {
                let dir = halton_direction(i as u64 + 1, k);
                let fwd = self.reach_along(&z0, &dir, tol)?;
                let neg: Vec<f64> = dir.iter().map(|x| -x).collect();
                let bwd = self.reach_along(&z0, &neg, tol)?;
                span_cols.push(dir.iter().map(|x| x * fwd).collect());
                span_cols.push(dir.iter().map(|x| -x * bwd).collect());
            }
        }

        let (d, basis) = if span_cols.is_empty() {
            (0, DMatrix::zeros(k, 0))
        } else {
            let span = DMatrix::from_fn(k, span_cols.len(), |i, j| span_cols[j][i]);
            let svd = span.svd(true, false);
            let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
            // reach displacements in flat directions sit at the membership
            // band, so the rank threshold stays well above it
            let rank_cut = 1e3 * tol.abs * (1.0 + sigma_max);
            let d = svd
                .singular_values
                .iter()
                .filter(|&&s| s > rank_cut)
                .count();
            let u = svd.u.as_ref().expect("svd with u requested");
            (d, u.columns(0, d).into_owned())
        };

        if d == k {
            // Full-dimensional: identity embedding.
            return Ok(AffineReduction {
                reduced_dim: k,
                embed_matrix: linalg::matrix_to_rows(&DMatrix::identity(k, k)),
                embed_offset: vec![0.0; k],
                reduced: self.clone(),
            });
        }

        let a0_red = linalg::symmetrize(&q0);
        let mut coeffs_red = Vec::with_capacity(d);
        for j in 0..d {
            let col: Vec<f64> = (0..k).map(|i| basis[(i, j)]).collect();
            coeffs_red.push(self.evaluate_homogeneous(&col)?);
        }
        let reduced = SymmetricPencil::new(a0_red, coeffs_red)?;
        Ok(AffineReduction {
            reduced_dim: d,
            embed_matrix: linalg::matrix_to_rows(&basis),
            embed_offset: z0,
            reduced,
        })
    }
}

impl SymmetricPencil {
    /// Injectivity check of `z -> Q(z)`, assumed by the facial machinery
    /// and implied by compactness of `K`. Since `Q` is affine, a collision
    /// `Q(z1) = Q(z2)` is the same as a direction `d != 0` with `A(d) = 0`,
    /// so the probe ranks the stacked coefficient matrices and returns a
    /// constructed collision pair from any null direction. A sampled pair
    /// scan over feasible points corroborates the verdict.
    pub fn injectivity_probe(
        &self,
        samples: usize,
        tol: &Tolerances,
        seed: u64,
    ) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
        let k = self.ambient_dim;
        let m = self.size;
        let (z0, depth) = self.find_deepest_point(tol, seed)?;
        if depth < -tol.rel(1.0) {
            return Err(Error::EmptySpectrahedron { best: depth });
        }
        if k > 0 {
            let mut stack = DMatrix::zeros(m * m, k);
            for (j, a) in self.coeffs.iter().enumerate() {
                for r in 0..m {
                    for c in 0..m {
                        stack[(r * m + c, j)] = a[(r, c)];
                    }
                }
            }
            let svd = stack.svd(false, true);
            let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
            let cut = tol.abs * (1.0 + sigma_max);
            let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
            if rank < k {
                let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
                let d: Vec<f64> = (0..k).map(|i| v_t[(rank, i)]).collect();
                let z1 = sampling::axpy(1.0, &d, &z0);
                return Ok(Some((z0, z1)));
            }
        }
        // sampled corroboration over feasible pairs
        let mut rng = SplitMix64::new(seed);
        let mut feasible: Vec<Vec<f64>> = vec![z0.clone()];
        let mut attempts = 0usize;
        while feasible.len() < samples && attempts < 100 * samples {
            attempts += 1;
            let cand: Vec<f64> = (0..k).map(|i| z0[i] + rng.next_range(-2.0, 2.0)).collect();
            if self.membership(&cand, tol)?.class != MembershipClass::Outside {
                feasible.push(cand);
            }
        }
        for i in 0..feasible.len() {
            let qi = self.evaluate(&feasible[i])?;
            let scale = linalg::spectral_norm_sym(&qi);
            for j in (i + 1)..feasible.len() {
                if sampling::dist(&feasible[i], &feasible[j]) <= 1e3 * tol.abs {
                    continue;
                }
                let qj = self.evaluate(&feasible[j])?;
                if linalg::max_abs_entry(&(&qi - &qj)) <= tol.rel(scale) {
                    return Ok(Some((feasible[i].clone(), feasible[j].clone())));
                }
            }
        }
        Ok(None)
    }
}

/// Maximize a concave function on `[lo, hi]` by ternary search; returns the
/// argmax. Also expands the bracket when the maximum sits at an endpoint.
fn ternary_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    for _ in 0..iters {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(mid) > f(0.0) {
        mid
    } else {
        0.0
    }
}

/// Membership classification of a point against `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipClass {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub class: MembershipClass,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

/// A Hermitian pencil stored as real/imaginary part pairs. `X_i` must be
/// symmetric, `Y_i` antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPencil {
    size: usize,
    ambient_dim: usize,
    x0: DMatrix<f64>,
    y0: DMatrix<f64>,
    xs: Vec<DMatrix<f64>>,
    ys: Vec<DMatrix<f64>>,
}

fn check_antisymmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::MalformedHermitian {
            reason: format!("{what} is not square"),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if (m[(i, j)] + m[(j, i)]).abs() > INGEST_ASYMMETRY_LIMIT {
                return Err(Error::MalformedHermitian {
                    reason: format!("{what} is not antisymmetric at ({i},{j})"),
                });
            }
        }
    }
    Ok(())
}

impl HermitianPencil {
    pub fn new(
        x0: DMatrix<f64>,
        y0: DMatrix<f64>,
        xs: Vec<DMatrix<f64>>,
        ys: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::MalformedHermitian {
                reason: format!("{} real parts but {} imaginary parts", xs.len(), ys.len()),
            });
        }
        let m = x0.nrows();
        let x0 = ingest_symmetric(x0, 0)?;
        check_antisymmetric(&y0, "Y0")?;
        if y0.nrows() != m {
            return Err(Error::MalformedHermitian {
                reason: "Y0 size differs from X0".into(),
            });
        }
        let mut sxs = Vec::with_capacity(xs.len());
        for (i, x) in xs.into_iter().enumerate() {
            if x.nrows() != m {
                return Err(Error::MalformedHermitian {
                    reason: format!("X{} size differs from X0", i + 1),
                });
            }
            sxs.push(ingest_symmetric(x, i + 1)?);
        }
        for (i, y) in ys.iter().enumerate() {
            check_antisymmetric(y, &format!("Y{}", i + 1))?;
            if y.nrows() != m {
                return Err(Error::MalformedHermitian {
                    reason: format!("Y{} size differs from X0", i + 1),
                });
            }
        }
        Ok(HermitianPencil {
            size: m,
            ambient_dim: sxs.len(),
            x0,
            y0,
            xs: sxs,
            ys,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Real-symmetric doubling: each Hermitian coefficient `X + iY` becomes
    /// the `2m x 2m` block matrix `[[X, -Y], [Y, X]]`. Positivity of the
    /// pencil value is preserved and the spectrum doubles in multiplicity.
    pub fn symmetrize(&self) -> Result<SymmetricPencil> {
        let double = |x: &DMatrix<f64>, y: &DMatrix<f64>| -> DMatrix<f64> {
            let m = x.nrows();
            let mut out = DMatrix::zeros(2 * m, 2 * m);
            for i in 0..m {
                for j in 0..m {
                    out[(i, j)] = x[(i, j)];
                    out[(m + i, m + j)] = x[(i, j)];
                    out[(i, m + j)] = -y[(i, j)];
                    out[(m + i, j)] = y[(i, j)];
                }
            }
            out
        };
        let a0 = double(&self.x0, &self.y0);
        let coeffs = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| double(x, y))
            .collect();
        SymmetricPencil::new(a0, coeffs)
    }
}

/// Restriction of a pencil to the affine hull of its spectrahedron.
#[derive(Debug, Clone)]
pub struct AffineReduction {
    /// Dimension of the affine hull.
    pub reduced_dim: usize,
    /// `k x d` matrix of the embedding `w -> offset + M w` (row-major).
    pub embed_matrix: Vec<Vec<f64>>,
    pub embed_offset: Vec<f64>,
    pub reduced: SymmetricPencil,
}

impl AffineReduction {
    /// Map a reduced-space point back to the ambient space.
    pub fn embed(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.reduced_dim {
            return Err(Error::DimensionMismatch {
                expected: self.reduced_dim,
                got: w.len(),
            });
        }
        let k = self.embed_offset.len();
        let mut z = self.embed_offset.clone();
        for (i, zi) in z.iter_mut().enumerate().take(k) {
            for (j, wj) in w.iter().enumerate() {
                *zi += self.embed_matrix[i][j] * wj;
            }
        }
        Ok(z)
    }
}

// ---------------------------------------------------------------------------
// Pencil JSON format
// ---------------------------------------------------------------------------

/// On-disk pencil format. Row-major float arrays; the Hermitian variant
/// carries parallel `Y0`/`Y` arrays.
#[derive(Debug, Serialize, Deserialize)]
pub struct PencilFile {
    pub m: usize,
    pub k: usize,
    #[serde(rename = "A0")]
    pub a0: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "Y0", skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Y", skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<Vec<f64>>>>,
}

/// Result of parsing a pencil file: the Hermitian variant keeps both the
/// original and its real doubling.
#[derive(Debug, Clone)]
pub enum ParsedPencil {
    Symmetric(SymmetricPencil),
    Hermitian {
        original: HermitianPencil,
        doubled: SymmetricPencil,
    },
}

impl ParsedPencil {
    /// The real symmetric pencil to run computations on.
    pub fn symmetric(&self) -> &SymmetricPencil {
        match self {
            ParsedPencil::Symmetric(p) => p,
            ParsedPencil::Hermitian { doubled, .. } => doubled,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(self, ParsedPencil::Hermitian { .. })
    }
}

fn shape_check(rows: &[Vec<f64>], m: usize, what: &str) -> Result<()> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse(format!("{what} is not an {m}x{m} matrix")));
    }
    Ok(())
}

impl PencilFile {
    pub fn parse_str(text: &str) -> Result<ParsedPencil> {
        let file: PencilFile = serde_json::from_str(text)?;
        file.build()
    }

    pub fn build(&self) -> Result<ParsedPencil> {
        shape_check(&self.a0, self.m, "A0")?;
        if self.a.len() != self.k {
            return Err(Error::Parse(format!(
                "expected {} coefficient matrices, found {}",
                self.k,
                self.a.len()
            )));
        }
        for (i, rows) in self.a.iter().enumerate() {
            shape_check(rows, self.m, &format!("A[{i}]"))?;
        }
        let a0 = linalg::matrix_from_rows(&self.a0);
        let coeffs: Vec<DMatrix<f64>> =
            self.a.iter().map(|r| linalg::matrix_from_rows(r)).collect();
        match (&self.y0, &self.y) {
            (None, None) => Ok(ParsedPencil::Symmetric(SymmetricPencil::new(a0, coeffs)?)),
            (Some(y0), Some(y)) => {
                shape_check(y0, self.m, "Y0")?;
                if y.len() != self.k {
                    return Err(Error::Parse(format!(
                        "expected {} imaginary matrices, found {}",
                        self.k,
                        y.len()
                    )));
                }
                for (i, rows) in y.iter().enumerate() {
                    shape_check(rows, self.m, &format!("Y[{i}]"))?;
                }
                let y0m = linalg::matrix_from_rows(y0);
                let ys: Vec<DMatrix<f64>> = y.iter().map(|r| linalg::matrix_from_rows(r)).collect();
                let herm = HermitianPencil::new(a0, y0m, coeffs, ys)?;
                let doubled = herm.symmetrize()?;
                Ok(ParsedPencil::Hermitian {
                    original: herm,
                    doubled,
                })
            }
            _ => Err(Error::Parse(
                "Hermitian pencil needs both Y0 and Y arrays".into(),
            )),
        }
    }

    pub fn from_symmetric(p: &SymmetricPencil) -> Self {
        PencilFile {
            m: p.size(),
            k: p.ambient_dim(),
            a0: linalg::matrix_to_rows(p.a0()),
            a: (0..p.ambient_dim())
                .map(|i| linalg::matrix_to_rows(p.coeff(i)))
                .collect(),
            y0: None,
            y: None,
        }
    }

    pub fn from_hermitian(h: &HermitianPencil) -> Self {
        PencilFile {
            m: h.size,
            k: h.ambient_dim,
            a0: linalg::matrix_to_rows(&h.x0),
            a: h.xs.iter().map(linalg::matrix_to_rows).collect(),
            y0: Some(linalg::matrix_to_rows(&h.y0)),
            y: Some(h.ys.iter().map(linalg::matrix_to_rows).collect()),
        }
    }
}

/// Parse a pencil from a JSON file on disk.
pub fn parse_pencil_file(path: &std::path::Path) -> Result<ParsedPencil> {
    let text = std::fs::read_to_string(path)?;
    PencilFile::parse_str(&text)
}
