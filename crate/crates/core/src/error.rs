use thiserror::Error;

use crate::global::Rejection;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{name} is not symmetric (max |A - A^T| = {asymmetry:.3e})")]
    NotSymmetric { name: &'static str, asymmetry: f64 },

    #[error("phase-space matrix must be square with even dimension, got {rows}x{cols}")]
    NotPhaseSpace { rows: usize, cols: usize },

    #[error("matrix is not symplectic (max |W^T s W - s| = {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("state is off the pre-constraint surface (residual {residual:.3e} > {tolerance:.3e})")]
    ConstraintViolation { residual: f64, tolerance: f64 },

    #[error("adapted vector has nonzero pre-constraint components (max {residual:.3e} > {tolerance:.3e})")]
    AdaptedConstraintViolation { residual: f64, tolerance: f64 },

    #[error("trajectory rejected at slice {}: residual {:.3e}", .0.slice, .0.residual)]
    Rejected(Box<Rejection>),

    #[error("parameter vector is not an admissible solution (distance {distance:.3e})")]
    OutsideSolutionSpace { distance: f64 },

    #[error("slice index {index} out of range (last slice is {last})")]
    SliceOutOfRange { index: usize, last: usize },

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("invalid input: {0}")]
    Input(String),
}
