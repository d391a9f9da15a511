use thiserror::Error;

/// Errors shared by all graph and spectral operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown arc id `{0}`")]
    UnknownArc(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("weight for `{0}` must be positive, got {1}")]
    NonpositiveWeight(String, f64),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("operation requires a connected graph")]
    Disconnected,
    #[error("virtualizing all vertices leaves an empty active set")]
    EmptyActiveSet,
    #[error("vertex set is not a neighborhood of the arc set")]
    NotNeighborhood,
    #[error("matrix is not Hermitian: max asymmetry {0:.3e} exceeds tolerance")]
    NonHermitian(f64),
    #[error("eigensolver failed to converge on index {0}")]
    NoConvergence(usize),
    #[error("doubled-spectrum pairing gap {0:.3e} exceeds tolerance")]
    PairingGap(f64),
    #[error("spectral comparison needs len(lower) >= len(upper), got {0} < {1}")]
    SpectralOrderArity(usize, usize),
    #[error("bracketing sandwich violated at index {index}: {lower} > {upper}")]
    SandwichViolation { index: usize, lower: f64, upper: f64 },
    #[error("kappa refinement requires a bipartite graph with standard weights")]
    KappaNotApplicable,
    #[error("arc `{0}` is a loop; the virtualized set may not contain loops")]
    LoopInArcSet(String),
    #[error("arc `{arc}` is not incident to vertex `{vertex}`")]
    ArcNotIncident { arc: String, vertex: String },
    #[error("computation rejected by cost guard: {0}")]
    CostGuard(String),
    #[error("arc index vectors do not generate a rank-{0} lattice")]
    DegenerateIndexLattice(usize),
    #[error("operation only implemented for rank-1 periodicity, got rank {0}")]
    RankUnsupported(usize),
    #[error("trace identity discrepancy {0:.3e} exceeds 1e-9")]
    TraceIdentity(f64),
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
