use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("maximal independent set enumeration needs {n} vertices but the cap is {cap}; use the branch-and-bound solver")]
    EnumerationCap { n: usize, cap: usize },

    /// The branch-and-bound search ran out of nodes before proving optimality.
    #[error("node budget of {budget} exhausted (best known weight {best_known}, upper bound {upper_bound})")]
    NodeBudget {
        budget: u64,
        best_known: i64,
        upper_bound: i64,
    },

    #[error("more than {cap} optimal solutions")]
    SolutionCap { cap: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("no gadget in the library matches substructure {signature}")]
    LibraryMiss { signature: String },

    #[error("{atoms} atoms exceed the state-vector cap of {cap}")]
    SizeCap { atoms: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
