use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported Hadamard order {0}: only powers of two are constructed")]
    UnsupportedOrder(usize),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("SVD failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("singular matrix: pivot {pivot:e} below floor {floor:e}")]
    SingularMatrix { pivot: f64, floor: f64 },

    #[error("correlation undefined for a zero-norm response")]
    UndefinedCorrelation,

    #[error("invalid pilot: entry {0} has zero magnitude")]
    InvalidPilot(usize),

    #[error("infeasible subset: condition number {condition:e} exceeds {limit:e}")]
    InfeasibleSubset { condition: f64, limit: f64 },

    #[error("empty candidate list")]
    EmptyCandidates,

    #[error("no feasible selection: every candidate subset is singular")]
    NoFeasibleSelection,

    #[error("protocol violation: event `{event}` not allowed in phase {phase}")]
    ProtocolViolation { phase: String, event: String },

    #[error("synchronization timed out after {slots} slots")]
    SyncTimeout { slots: u64 },

    #[error("missing feedback from users {0:?}")]
    MissingFeedback(Vec<usize>),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("trial {trial} (seed {seed}): {source}")]
    Trial {
        trial: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Process exit code used by the CLI and the C interface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidDimension(_) | Error::UnsupportedOrder(_) => 2,
            Error::SyncTimeout { .. } => 4,
            Error::Io(_) => 1,
            Error::Trial { source, .. } => source.exit_code(),
            _ => 3,
        }
    }

    pub(crate) fn in_trial(self, trial: u64, seed: u64) -> Error {
        Error::Trial {
            trial,
            seed,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
