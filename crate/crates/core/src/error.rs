use std::fmt;

/// Identifies which agent produced a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agent {
    Robber,
    Cop(usize),
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agent::Robber => write!(f, "robber"),
            Agent::Cop(i) => write!(f, "cop {i}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension count {0}")]
    InvalidDimension(i64),

    #[error("invalid grid shape: {0}")]
    InvalidShape(String),

    #[error("invalid position: {0}")]
    InvalidPosition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cop {0} already occupies the robber's node")]
    AlreadyTerminated(usize),

    #[error("illegal move by {agent}: {reason}")]
    IllegalMove { agent: Agent, reason: String },

    #[error("parity evader inapplicable: {0}")]
    EvaderInapplicable(String),

    #[error("robber script exhausted at tick {tick} (length {len})")]
    ScriptExhausted { tick: u64, len: usize },

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("oracle infeasible: {0}")]
    OracleInfeasible(String),

    #[error("malformed trace: {0}")]
    TraceFormat(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("strategy configuration: {0}")]
    Strategy(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("trial {trial} (seed {seed}) failed: {source}")]
    TrialFailed {
        trial: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("game aborted by the interactive player")]
    Aborted,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
