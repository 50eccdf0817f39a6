use std::path::PathBuf;

use thiserror::Error;

use crate::mesh::ValidationReport;
use crate::solver::ConvergenceRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("degenerate cell {cell}: volume {volume:e}")]
    DegenerateCell { cell: usize, volume: f64 },

    #[error("inverted face {face}: d.Gamma = {dot:e}")]
    InvertedFace { face: usize, dot: f64 },

    #[error("degenerate least-squares stencil in cell {cell}")]
    DegenerateStencil { cell: usize },

    #[error("mesh rejected:\n{0}")]
    InvalidMesh(ValidationReport),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("config line {line}: key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("time step {step} failed to converge after {} outer iterations", record.iterations.len())]
    StepFailed {
        step: usize,
        record: Box<ConvergenceRecord>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
