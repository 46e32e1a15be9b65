use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("no sign change bracketing a root of the {what} equation in [{lo}, {hi}]")]
    Bracket { what: &'static str, lo: f64, hi: f64 },

    #[error("eigenvalue {index} is negative ({value}); use a smaller embedding dimension")]
    NegativeEigenvalue { index: usize, value: f64 },

    #[error("edge ({i}, {j}): {source}")]
    Edge {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{}{}: {message}", path.display(), line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Format {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },

    #[error("cell (epsilon={epsilon}, q={q}, n={n}, m={m}, replicate={replicate}): {source}")]
    Cell {
        epsilon: f64,
        q: f64,
        n: usize,
        m: usize,
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Config { .. } | Error::Format { .. } => 2,
            Error::NoConvergence { .. } | Error::Bracket { .. } | Error::NegativeEigenvalue { .. } => 3,
            Error::Edge { source, .. } => source.exit_code(),
            Error::Cell { .. } => 3,
            Error::Io(_) => 1,
        }
    }
}
