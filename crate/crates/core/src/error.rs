use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("closure exceeded {limit} elements; generators do not generate a finite subgroup")]
    NonClosure { limit: usize },

    #[error("generator {index} is not in SU(2): unitarity defect {unitarity:.3e}, det defect {det:.3e}")]
    NotInSU2 {
        index: usize,
        unitarity: f64,
        det: f64,
    },

    #[error("isotypic decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("McKay multiplicity a[{i}][{j}] = {value} is not an integer (residual {residual:.3e})")]
    NonIntegralMultiplicity {
        i: usize,
        j: usize,
        value: f64,
        residual: f64,
    },

    #[error("McKay graph matches no affine ADE template: {0}")]
    NotADE(String),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("element does not commute with the group action (defect {defect:.3e})")]
    NotInF { defect: f64 },

    #[error("matrix pair is not Γ-invariant (defect {defect:.3e})")]
    NotInvariant { defect: f64 },

    #[error("horizontal space has dimension {found}, expected {expected}")]
    WrongDimension { expected: usize, found: usize },

    #[error("complex structure does not preserve the horizontal space (defect {defect:.3e})")]
    ProjectionDefect { defect: f64 },

    #[error("sections are tabulated on different samples")]
    SampleMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("stage `{stage}`: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
