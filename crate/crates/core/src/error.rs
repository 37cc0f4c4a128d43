use thiserror::Error;

/// Errors raised by mesh construction, assembly and solution.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("nonconforming triangulation: edge ({0}, {1}) is shared by {2} triangles")]
    Nonconforming(usize, usize, usize),

    #[error("triangle {0} references vertex {1}, but the mesh has only {2} vertices")]
    BadVertexIndex(usize, usize, usize),

    #[error("degenerate triangle {0} (signed area {1:e})")]
    DegenerateTriangle(usize, f64),

    #[error("no quadrature rule of degree {0} (supported: 1..=6)")]
    UnsupportedQuadrature(usize),

    #[error("conjugate gradients did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("vertex {vertex}: interpolation coefficient differs by {discrepancy:e} between adjacent elements")]
    InconsistentVertexCoefficient { vertex: usize, discrepancy: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for FemError {
    fn from(e: std::io::Error) -> Self {
        FemError::Io(e.to_string())
    }
}

impl From<csv::Error> for FemError {
    fn from(e: csv::Error) -> Self {
        FemError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FemError>;
