use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TnfError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("expected a square system, got {equations} equations in {nvars} variables")]
    NotSquare { equations: usize, nvars: usize },

    #[error("degree overflow: shift of degree {degree} exceeds the row support bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("requested {requested} random columns but the resultant map only has {available}")]
    TooManyColumns { requested: usize, available: usize },

    #[error("rank ambiguous: no singular value gap of at least {required:.1e} (best {found:.3e})")]
    RankAmbiguous { required: f64, found: f64 },

    #[error("rank hint {hint} incompatible with a {rows}x{cols} matrix")]
    BadRankHint { hint: usize, rows: usize, cols: usize },

    #[error("not covering: condition (c) fails, rank of N restricted to W is {rank} < {delta}")]
    NotCovering { rank: usize, delta: usize },

    #[error("singular basis: condition estimate {cond:.3e} exceeds {limit:.1e}")]
    SingularBasis { cond: f64, limit: f64 },

    #[error(
        "subspace conditions violated: increase rho (rank on W' is {rank_w}, rank on V' is {rank_v})"
    )]
    SubspaceConditions { rank_w: usize, rank_v: usize },

    #[error("pencil not regular: {0}")]
    PencilNotRegular(String),

    #[error("dimension guard: {dim} basis elements exceed the limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

impl TnfError {
    /// True for failures of the algebraic conditions that make a TNF or pencil well defined.
    pub fn is_condition_violation(&self) -> bool {
        matches!(
            self,
            TnfError::NotCovering { .. }
                | TnfError::SingularBasis { .. }
                | TnfError::SubspaceConditions { .. }
                | TnfError::PencilNotRegular(_)
        )
    }
}

impl From<std::io::Error> for TnfError {
    fn from(e: std::io::Error) -> Self {
        TnfError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TnfError>;
