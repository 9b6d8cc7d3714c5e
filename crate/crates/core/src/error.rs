use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not in su({dim}): skew residual {skew:.3e}, trace {trace:.3e}")]
    NotSu { dim: usize, skew: f64, trace: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("eigensolver did not converge for {dim}x{dim} matrix {entries}")]
    EigenNoConvergence { dim: usize, entries: String },

    #[error("degenerate spectrum: smallest eigenvalue gap {gap:.3e} <= {tol:.1e}")]
    DegenerateSpectrum { gap: f64, tol: f64 },

    #[error("eigenvalue multisets differ (worst distance {distance:.3e})")]
    SpectrumMismatch { distance: f64 },

    #[error("point is not on the unit sphere: |p|^2 - 1 = {0:.3e}")]
    NotOnSphere(f64),

    #[error("vector is not tangent: <X, p> = {0:.3e}")]
    NotTangent(f64),

    #[error("degenerate torus orbit: {0}")]
    DegenerateOrbit(String),

    #[error("ill-conditioned metric (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("{failures} of {samples} curvature samples failed")]
    TooManyFailures { failures: usize, samples: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
