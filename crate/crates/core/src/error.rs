use thiserror::Error;

use crate::engine::RoundTrace;

/// Which case of Brooks' theorem rules out a `delta`-coloring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrooksException {
    #[error("graph is complete on {0} vertices")]
    Complete(usize),
    #[error("graph is an odd cycle of length {0}")]
    OddCycle(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} has degree {degree} > {delta}")]
    DegreeExceeded { vertex: u64, degree: usize, delta: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("brooks precondition: {0}")]
    Brooks(#[from] BrooksException),
    #[error("round limit {limit} reached with {unhalted} vertices still running")]
    Timeout {
        limit: usize,
        unhalted: usize,
        trace: RoundTrace,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal assertion failed: {0}")]
    Assertion(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Input(_)
            | Error::Precondition(_)
            | Error::Brooks(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::Timeout { .. } | Error::Assertion(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Assertion(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
