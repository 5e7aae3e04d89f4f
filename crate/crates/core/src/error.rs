use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} spins, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("vertex index {index} out of range for {n_vertices} vertices")]
    VertexOutOfRange { index: usize, n_vertices: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid spin value {value} at position {position}; spins must be +1 or -1")]
    InvalidSpin { position: usize, value: i64 },

    #[error("{what} needs {n_vertices} vertices, above the cap of {cap}")]
    Capacity {
        what: &'static str,
        n_vertices: usize,
        cap: usize,
    },

    #[error("degenerate model: {0}")]
    Degenerate(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
