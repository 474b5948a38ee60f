//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong in the toolkit.
///
/// Variants are grouped roughly by the stage that raises them; the CLI maps
/// them onto its exit-code contract (input errors vs. honest verification
/// failures vs. internal invariant breaches).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "matrix {index} is asymmetric beyond the ingest threshold (max |M - M^T| = {magnitude:e})"
    )]
    AsymmetryTooLarge { index: usize, magnitude: f64 },

    #[error("malformed Hermitian pencil: {reason}")]
    MalformedHermitian { reason: String },

    #[error("point is not on the boundary (min eigenvalue {min_eigenvalue:e}){}", index.map(|i| format!(" at sample index {i}")).unwrap_or_default())]
    NotOnBoundary {
        index: Option<usize>,
        min_eigenvalue: f64,
    },

    #[error("kernel dimension is ambiguous: eigenvalue {next:e} sits inside the guard band above {threshold:e}")]
    AmbiguousKernelDim { next: f64, threshold: f64 },

    #[error(
        "no feasible point found; the spectrahedron appears empty (best min eigenvalue {best:e})"
    )]
    EmptySpectrahedron { best: f64 },

    #[error("boundedness probe failed: reach {reach:e} along a sampled direction")]
    Unbounded { reach: f64 },

    #[error("no locally-closed witness radius passed the probe sweep")]
    WitnessSearchFailed,

    #[error("eigenvalue {eigenvalue:e} sits on the spectral contour band at radius {contour:e}")]
    SpectralGapViolation { eigenvalue: f64, contour: f64 },

    #[error("no seed vector with positive target pairing exists (best value {best:e}); base may be non-extreme or target equals base")]
    SeedVectorNotFound { best: f64 },

    #[error("point lies outside the verified section piece")]
    PointOutsideSection,

    #[error("entry ({row},{col}) = {value:e} is not strictly positive")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("eigenpair residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("Perron bound family `{family}` violated at ({i},{j}) with slack {slack:e}")]
    BoundViolation {
        family: &'static str,
        i: usize,
        j: usize,
        slack: f64,
    },

    #[error("invalid entry bounds: require 0 < c <= b, got c={c}, b={b}")]
    InvalidBounds { c: f64, b: f64 },

    #[error("entry ({row},{col}) is zero within tolerance; Hadamard inverse undefined")]
    ZeroEntry { row: usize, col: usize },

    #[error("criterion premise holds but the Hadamard inverse is not PSD (min eigenvalue {min_eig:e}); this indicates a solver bug")]
    HadamardCriterionViolated { min_eig: f64 },

    #[error("cover construction failed: {reason}")]
    CoverFailure { reason: String },

    #[error("Hadamard-inverse criterion failed at certification stage: {reason}")]
    HadamardCriterionFailed { reason: String },

    #[error("Loewner domination failed at sample {witness:?} (min eigenvalue {min_eig:e})")]
    DominationFailed {
        witness: Vec<f64>,
        min_eig: f64,
        eigenvector: Vec<f64>,
    },

    #[error("no suitable neighborhood radius found during {stage}")]
    NeighborhoodSearchFailed { stage: &'static str },

    #[error("no interior point found inside the target neighborhood")]
    InteriorPointNotFound,

    #[error("target point lies inside the section piece; separation is vacuous")]
    TargetInsideSection,

    #[error("invalid pair: {reason}")]
    InvalidPair { reason: String },

    #[error("base point is not extreme; cannot build a kernel section")]
    BaseNotExtreme,

    #[error("separation hypothesis not verified: ||P_{i} E_{j} P_{i}|| = {norm:e}")]
    HypothesisNotVerified { i: usize, j: usize, norm: f64 },

    #[error("measure system invalid: {reason}")]
    InvalidMeasureSystem { reason: String },

    #[error("equality bound exceeded for atom {atom}: ||E - P|| = {deviation:e} > {bound:e}; this indicates a solver bug")]
    EqualityBoundExceeded {
        atom: usize,
        deviation: f64,
        bound: f64,
    },

    #[error("audit mismatch on `{check}`: recomputed {recomputed:e}, certificate {stored:e}")]
    AuditMismatch {
        check: &'static str,
        recomputed: f64,
        stored: f64,
    },

    #[error("invalid tolerance: {reason}")]
    InvalidTolerance { reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
