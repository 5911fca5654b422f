//! Periodic grids, real fields and their Fourier transforms.

mod field;
mod grid;
pub mod ops;
pub mod snapshot;
mod spectral;

use thiserror::Error;

pub use field::{ScalarField, VecField2};
pub use grid::Grid2;
pub use ops::{curl_h, dealias, divergence, gradient, laplacian, perp_gradient, transform_roundtrip};
pub use snapshot::{Snapshot, SnapshotError};
pub use spectral::Spectrum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {left:?} vs {right:?}")]
    GridMismatch { left: Grid2, right: Grid2 },
    #[error("non-finite sample {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("expected {expected} samples, got {actual}")]
    Length { expected: usize, actual: usize },
}
