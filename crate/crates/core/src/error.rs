use thiserror::Error;

pub type Result<T> = std::result::Result<T, ThetaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("degenerate lattice basis: Gram-Schmidt norm of vector {index} is {norm_sq:e}")]
    DegenerateBasis { index: usize, norm_sq: f64 },

    #[error("ellipsoid has more than {cap} lattice points; Siegel-reduce the matrix or raise the cap")]
    EllipsoidTooLarge { cap: usize },

    #[error("unsupported argument: {0}")]
    UnsupportedArgument(String),

    #[error("radius {radius} must exceed rho/2 = {half_rho}")]
    InvalidRadius { radius: f64, half_rho: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("symplectic action is singular (condition number {condition:e})")]
    SingularTransform { condition: f64 },

    #[error("derivative order {requested} exceeds the {available} orders prepared in the context")]
    DerivOrderExceeded { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl ThetaError {
    /// True for failures of the numerical machinery, as opposed to bad input or
    /// a matrix outside the Siegel upper half space.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            ThetaError::DegenerateBasis { .. }
                | ThetaError::EllipsoidTooLarge { .. }
                | ThetaError::NoConvergence(_)
                | ThetaError::SingularTransform { .. }
                | ThetaError::InvalidRadius { .. }
        )
    }
}
