use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the geometry, mapping, field and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("obstacle reduced to a point")]
    DegenerateObstacle,

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("grid too coarse: h = {h} must be smaller than R = {radius}")]
    GridTooCoarse { h: f64, radius: f64 },

    #[error("grid unresolved: spacing {spacing:.4e} exceeds limit {limit:.4e}")]
    UnresolvedGrid { spacing: f64, limit: f64 },

    #[error("cutoffs overlap: 2*eps = {two_eps:.4e} is not below the obstacle separation {separation:.4e}")]
    CutoffsOverlap { two_eps: f64, separation: f64 },

    #[error("cutoff of obstacle {obstacle} does not cover its approximant (eps = {eps:.4e}, gap {gap:.4e})")]
    CutoffTooNarrow { obstacle: usize, eps: f64, gap: f64 },

    #[error("curve is not simple: edges {first} and {second} intersect")]
    NonSimpleCurve { first: usize, second: usize },

    #[error("curves {first} and {second} intersect or touch")]
    CurvesNotDisjoint { first: usize, second: usize },

    #[error("curve of obstacle {obstacle} does not enclose its sample points")]
    CurveDoesNotEnclose { obstacle: usize },

    #[error("ill-conditioned collocation system (condition estimate {condition:.3e}{})",
        separation.map(|s| format!(", obstacle separation {s:.3e}")).unwrap_or_default())]
    IllConditioned { condition: f64, separation: Option<f64> },

    #[error("conformal fit residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    FitResidual { residual: f64, tolerance: f64 },

    #[error("fitted map is not univalent: |T| = {modulus:.6} just outside boundary sample {sample}")]
    NotUnivalent { sample: usize, modulus: f64 },

    #[error("boundary image winds {turns:.6} times around the origin instead of once")]
    WindingMismatch { turns: f64 },

    #[error("Newton inversion did not converge after {iterations} iterations (last iterate {last}, mismatch {mismatch:.3e})")]
    NewtonDiverged { iterations: usize, last: Complex64, mismatch: f64 },

    #[error("inversion is undefined at the origin")]
    InversionAtOrigin,

    #[error("point ({x}, {y}) is not exterior to obstacle {obstacle}")]
    NotExterior { x: f64, y: f64, obstacle: usize },

    #[error("test set intersects the closed region of approximant n = {n}")]
    TestSetIntersects { n: usize },

    #[error("test function support intersects obstacle {obstacle}")]
    SupportIntersectsObstacle { obstacle: usize },

    #[error("blob-boundary collision: blob {blob} entered obstacle {obstacle}")]
    Collision { blob: usize, obstacle: usize },

    #[error("invalid scenario field `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unknown study `{name}`; available studies: {}", available.join(", "))]
    UnknownStudy { name: String, available: Vec<&'static str> },

    #[error("study `{study}` failed one or more checks")]
    StudyFailed { study: String },

    #[error("not enough records: need at least {needed}, got {got}")]
    NotEnoughRecords { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in the CLI error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateObstacle => "degenerate_obstacle",
            Error::EmptyPointSet => "empty_point_set",
            Error::InvalidArgument { .. } => "invalid_argument",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::UnresolvedGrid { .. } => "unresolved_grid",
            Error::CutoffsOverlap { .. } => "cutoffs_overlap",
            Error::CutoffTooNarrow { .. } => "cutoff_too_narrow",
            Error::NonSimpleCurve { .. } => "non_simple_curve",
            Error::CurvesNotDisjoint { .. } => "curves_not_disjoint",
            Error::CurveDoesNotEnclose { .. } => "curve_does_not_enclose",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::FitResidual { .. } => "fit_residual",
            Error::NotUnivalent { .. } => "not_univalent",
            Error::WindingMismatch { .. } => "winding_mismatch",
            Error::NewtonDiverged { .. } => "newton_diverged",
            Error::InversionAtOrigin => "inversion_at_origin",
            Error::NotExterior { .. } => "not_exterior",
            Error::TestSetIntersects { .. } => "test_set_intersects",
            Error::SupportIntersectsObstacle { .. } => "support_intersects_obstacle",
            Error::Collision { .. } => "collision",
            Error::Validation { .. } => "validation",
            Error::UnknownStudy { .. } => "unknown_study",
            Error::StudyFailed { .. } => "study_failed",
            Error::NotEnoughRecords { .. } => "not_enough_records",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
