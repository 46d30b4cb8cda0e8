use thiserror::Error;

/// Errors produced by graph parsing, construction, and the numeric pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Edge-list document could not be parsed; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A vertex id outside `1..=n` was supplied programmatically.
    #[error("vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { id: usize, n: usize },

    /// An edge with weight <= 0 was supplied programmatically.
    #[error("edge ({tail}, {head}) has non-positive weight")]
    NonPositiveWeight { tail: usize, head: usize },

    /// The same (tail, head) pair appeared twice.
    #[error("duplicate edge ({tail}, {head})")]
    DuplicateEdge { tail: usize, head: usize },

    /// Operation requires a weakly connected graph.
    #[error("graph is not weakly connected ({components} weak components)")]
    NotWeaklyConnected { components: usize },

    /// Generalized Laplacian with `e_plus[i] < e[i]`.
    #[error("diagonal dominance violated at vertex {vertex}: e_plus < e")]
    ViolatesDominance { vertex: usize },

    /// A cabal row has e_i <= 0, so the left-kernel scaling is undefined.
    #[error("vertex {vertex} has non-positive rate e_i; left kernel undefined")]
    NonPositiveRate { vertex: usize },

    /// The common-part block L_CC was numerically singular. This signals an
    /// internal inconsistency: the block is provably invertible.
    #[error("singular common block while solving reach {reach}")]
    SingularCommonBlock { reach: usize },

    /// Power iteration and the bordered solve both failed on a cabal.
    #[error("Perron iteration diverged on the cabal of reach {reach}")]
    PerronIterationDiverged { reach: usize },

    /// QR iteration hit the sweep cap; partial eigenvalues are unreliable.
    #[error("eigenvalue iteration did not converge: {found} of {expected} found")]
    NoConvergence {
        found: usize,
        expected: usize,
        partial: Vec<(f64, f64)>,
    },

    /// Fixed-step integration would need a step below 1e-12.
    #[error("integration step underflow: required step {step:e}")]
    StepUnderflow { step: f64 },

    /// The time-one map failed its stochasticity or support checks.
    #[error("time-one map check failed: {0}")]
    StochasticityViolation(String),

    /// The restricted hitting-time system was singular.
    #[error("hitting-time system is singular")]
    SingularSystem,

    /// Operation requires a specific Laplacian kind.
    #[error("operation requires the {expected} Laplacian")]
    WrongLaplacianKind { expected: &'static str },

    /// A vector had the wrong length for the graph.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A random walk exceeded the per-walk step cap without absorbing.
    #[error("random walk exceeded {cap} steps without reaching a cabal")]
    WalkStalled { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
