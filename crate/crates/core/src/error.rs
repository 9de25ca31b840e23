use thiserror::Error;

pub type Result<T> = std::result::Result<T, GhmError>;

#[derive(Debug, Error)]
pub enum GhmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("geometry infeasible: image of branch {branch} exits the square (top edge reaches {top:.6})")]
    GeometryInfeasible { branch: usize, top: f64 },

    #[error("map is not hyperbolic: {0}")]
    NotHyperbolic(String),

    #[error("GHM1 violated: domains of branches {a} and {b} have overlapping interiors")]
    Ghm1 { a: usize, b: usize },

    #[error("GHM2 violated: branch domains leave uncovered area {area:.3e}")]
    Ghm2 { area: f64 },

    #[error("invalid branch {id}: {reason}")]
    InvalidBranch { id: usize, reason: String },

    #[error("slope bound violated on branch {id} ({which}): |slope| = {slope:.6} but k = {k:.6}")]
    SlopeBound {
        id: usize,
        which: &'static str,
        slope: f64,
        k: f64,
    },

    #[error("point ({x}, {y}) lies outside the unit square")]
    OutsideSquare { x: f64, y: f64 },

    #[error("point ({x}, {y}) lies on the singular set (a branch-domain boundary)")]
    Singular { x: f64, y: f64 },

    #[error("unknown symbol {0}")]
    UnknownSymbol(usize),

    #[error("empty word")]
    EmptyWord,

    #[error("refined strip for word {0:?} is empty")]
    EmptyStrip(Vec<usize>),

    #[error("orbit hits the singular set at step {step}")]
    OrbitHitsBoundary { step: usize },

    #[error("map has overlapping images; the straightening chart needs a non-overlapping map")]
    Overlapping,

    #[error("mass escaped the square from cell {cell}")]
    EscapedMass { cell: usize },

    #[error("row {row} of the transition matrix sums to {sum}")]
    RowSum { row: usize, sum: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("preimage tree of size {size} exceeds the budget {budget}")]
    TreeBudgetExceeded { size: f64, budget: f64 },

    #[error("degenerate observable: empirical variance {0:.3e}")]
    DegenerateObservable(f64),

    #[error("map-spec schema error: {0}")]
    Schema(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GhmError {
    /// Short machine-readable tag, used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            GhmError::InvalidParameter(_) => "invalid_parameter",
            GhmError::GeometryInfeasible { .. } => "geometry_infeasible",
            GhmError::NotHyperbolic(_) => "not_hyperbolic",
            GhmError::Ghm1 { .. } => "GHM1",
            GhmError::Ghm2 { .. } => "GHM2",
            GhmError::InvalidBranch { .. } => "invalid_branch",
            GhmError::SlopeBound { .. } => "slope_bound",
            GhmError::OutsideSquare { .. } => "outside_square",
            GhmError::Singular { .. } => "singular_point",
            GhmError::UnknownSymbol(_) => "unknown_symbol",
            GhmError::EmptyWord => "empty_word",
            GhmError::EmptyStrip(_) => "empty_strip",
            GhmError::OrbitHitsBoundary { .. } => "orbit_hits_boundary",
            GhmError::Overlapping => "overlapping",
            GhmError::EscapedMass { .. } => "escaped_mass",
            GhmError::RowSum { .. } => "row_sum",
            GhmError::NoConvergence { .. } => "no_convergence",
            GhmError::TreeBudgetExceeded { .. } => "tree_budget_exceeded",
            GhmError::DegenerateObservable(_) => "degenerate_observable",
            GhmError::Schema(_) => "schema",
            GhmError::Unsupported(_) => "unsupported",
            GhmError::Io(_) => "io",
            GhmError::Json(_) => "json",
        }
    }
}
