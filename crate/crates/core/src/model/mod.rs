//! Operator data, joint diagonalization, octants and the `Ω_ij` partition.

mod diag;
mod family;
mod octant;
mod spec;

pub use diag::{simultaneous_diagonalize, DiagonalizedFamily};
pub use family::{nth_prime, CustomTailFamily, EntryFamily, GeometricPrimeFamily};
pub use octant::{build_omega, OctantScheme, Omega};
pub(crate) use octant::build_omega_from_patterns;
pub use spec::{validate_spec, ExactPower, OperatorSpec, ScaleEntry, DET_THRESHOLD, TAU_DIAG, TAU_ORTH};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("entry list is empty")]
    EmptySpec,
    #[error("entry k={index}: matrix is {rows}x{cols}, expected {dimension}x{dimension}")]
    ShapeMismatch {
        index: i64,
        rows: usize,
        cols: usize,
        dimension: usize,
    },
    #[error("entry k={0}: non-finite coefficient or matrix entry")]
    NonFinite(i64),
    #[error("entry k={index}: matrix is not invertible (det = {det:e})")]
    NonInvertible { index: i64, det: f64 },
    #[error("entry k={index}: matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { index: i64, asymmetry: f64 },
    #[error("entries k={first} and k={second} do not commute (commutator max-norm {norm:e})")]
    NonCommuting { first: i64, second: i64, norm: f64 },
    #[error("entries k={first} and k={second} carry the same matrix")]
    DuplicateMatrix { first: i64, second: i64 },
    #[error("index k={0} appears more than once")]
    DuplicateIndex(i64),
    #[error("entry k={index}: exact eigenvalues do not match the matrix")]
    ExactMismatch { index: i64 },
    #[error("joint diagonalization did not converge (residual {residual:e})")]
    DegenerateFamily { residual: f64 },
    #[error("invalid octant enumeration: {0}")]
    BadOctantScheme(String),
    #[error("family provides no tail bound")]
    NoTailFormula,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}
