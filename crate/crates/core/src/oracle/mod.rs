//! Brute-force numerical twins of the closed forms.
//!
//! Everything here works on sampled grids and knows nothing about the
//! closed-form beam laws: propagation goes through the discrete Fourier
//! transform, positivity through a Hermitian eigensolve, variance matrices
//! through an explicit Wigner transform and quadrature.

mod grid;
mod kernel;
mod moments;
mod propagate;
mod reduce;
mod wigner;

pub use grid::{
    default_points, Field1D, Field2D, Grid1D, DEFAULT_HALF_WIDTH_FACTOR, DEFAULT_POINTS,
    GRID_POINTS_ENV, MIN_POINTS,
};
pub use kernel::{
    kernel_eigenvalues, kernel_psd_check, KernelGrid, KernelGrid2D, PsdCheck, SampledKernel,
    PSD_RATIO_FLOOR,
};
pub use moments::{
    field_width, fit_gsm_kernel, kernel_width, numeric_width_scan, projected_field_width, GsmFit,
};
pub use propagate::{
    propagate_field_1d, propagate_field_2d, propagate_kernel_1d, EDGE_ENERGY_LIMIT,
};
pub use reduce::{reduce_field, reduce_kernel, rotate_field, HERMITICITY_LIMIT};
pub use wigner::{
    moments_of, phase_space_grids, phase_space_grids_for, wigner_moments, wigner_transform,
    WignerGrid2D, MIN_COVERAGE, PHASE_SPACE_POINTS, SAMPLING_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("input not adequately sampled: {edge_fraction:.3e} of the energy lies in the outer 5% of the grid")]
    Undersampled { edge_fraction: f64 },
    #[error("aliasing guard: propagation to z = {z} displaces the occupied band by {shift:.4} beyond the grid half width {half_width:.4}")]
    Aliasing { z: f64, shift: f64, half_width: f64 },
    #[error("aliasing guard: after propagation to z = {z}, {edge_fraction:.3e} of the energy lies in the outer 5% of the grid")]
    Wraparound { z: f64, edge_fraction: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("interpolated kernel violates Hermiticity by {0:.3e}; increase resolution")]
    HermiticityViolation(f64),
    #[error("inadequate sampling: {what} = {value:.3e}")]
    InadequateSampling { what: &'static str, value: f64 },
}
