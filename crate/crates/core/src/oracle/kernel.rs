//! Two-point functions sampled on grids, as Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Field1D, Grid1D};
use super::OracleError;
use crate::family::TwoPointFunction2D;

/// `min eigenvalue / max eigenvalue` at or above which a sampled kernel
/// counts as positive semidefinite.
pub const PSD_RATIO_FLOOR: f64 = -1e-8;

/// Anything exposing its samples as one square complex matrix.
pub trait SampledKernel {
    fn matrix(&self) -> &DMatrix<Complex64>;

    /// `max |Γ_ij - Γ_ji*| / max |Γ_ij|`.
    fn hermiticity_residual(&self) -> f64 {
        let m = self.matrix();
        let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let n = m.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }
}

/// Sampled one-dimensional two-point function, `values[(i, j)] = Γ(x_i, x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    pub grid: Grid1D,
    pub values: DMatrix<Complex64>,
}

impl SampledKernel for KernelGrid {
    fn matrix(&self) -> &DMatrix<Complex64> {
        &self.values
    }
}

impl KernelGrid {
    pub fn sample(grid: Grid1D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let xs = grid.points();
        let n = grid.n_points();
        KernelGrid {
            grid,
            values: DMatrix::from_fn(n, n, |i, j| f(xs[i], xs[j])),
        }
    }

    /// The coherent kernel `ψ(x) ψ(x')*`.
    pub fn from_field(field: &Field1D) -> Self {
        let n = field.grid.n_points();
        let v = &field.values;
        KernelGrid {
            grid: field.grid,
            values: DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()),
        }
    }

    /// `Γ(x_i, x_i)`, real for a Hermitian kernel.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.grid.n_points())
            .map(|i| self.values[(i, i)].re)
            .collect()
    }

    /// `∫ Γ(x, x) dx`.
    pub fn total_intensity(&self) -> f64 {
        self.diagonal().iter().sum::<f64>() * self.grid.spacing()
    }

    /// The transposition `Γ(x, x') → Γ(x', x)`.
    pub fn transpose(&self) -> KernelGrid {
        KernelGrid {
            grid: self.grid,
            values: self.values.transpose(),
        }
    }

    pub(crate) fn edge_fraction(&self) -> f64 {
        let d = self.diagonal();
        let total: f64 = d.iter().map(|v| v.abs()).sum();
        let edge: f64 = d
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.is_edge(*i))
            .map(|(_, v)| v.abs())
            .sum();
        edge / total
    }
}

/// Sampled two-dimensional two-point function flattened over the product
/// grid: row `ix * ny + iy` holds `(x_ix, y_iy)`, column `jx * ny' + jy`
/// holds `(x'_jx, y'_jy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid2D {
    pub row_x: Grid1D,
    pub row_y: Grid1D,
    pub col_x: Grid1D,
    pub col_y: Grid1D,
    pub values: DMatrix<Complex64>,
}

impl SampledKernel for KernelGrid2D {
    fn matrix(&self) -> &DMatrix<Complex64> {
        &self.values
    }
}

impl KernelGrid2D {
    /// Samples `Γ(ρ; ρ')` with `ρ` and `ρ'` on the same product grid.
    pub fn sample<G: TwoPointFunction2D>(grid_x: Grid1D, grid_y: Grid1D, gamma: &G) -> Self {
        let xs = grid_x.points();
        let ys = grid_y.points();
        let ny = grid_y.n_points();
        let n = grid_x.n_points() * ny;
        let values = DMatrix::from_fn(n, n, |r, c| {
            gamma.gamma([xs[r / ny], ys[r % ny]], [xs[c / ny], ys[c % ny]])
        });
        KernelGrid2D {
            row_x: grid_x,
            row_y: grid_y,
            col_x: grid_x,
            col_y: grid_y,
            values,
        }
    }

    pub fn at(&self, ix: usize, iy: usize, jx: usize, jy: usize) -> Complex64 {
        self.values[(
            ix * self.row_y.n_points() + iy,
            jx * self.col_y.n_points() + jy,
        )]
    }

    pub fn is_square(&self) -> bool {
        self.row_x == self.col_x && self.row_y == self.col_y
    }

    /// `Γ̃(x, y; x', y') = Γ(x', y; x, y')`; needs the `x` and `x'` grids to
    /// coincide.
    pub fn partial_transpose(&self) -> Result<KernelGrid2D, OracleError> {
        if self.row_x != self.col_x {
            return Err(OracleError::GridMismatch(
                "partial transpose needs identical x and x' grids".into(),
            ));
        }
        let nx = self.row_x.n_points();
        let (ny, nyp) = (self.row_y.n_points(), self.col_y.n_points());
        let values = DMatrix::from_fn(nx * ny, nx * nyp, |r, c| {
            let (ix, iy) = (r / ny, r % ny);
            let (jx, jy) = (c / nyp, c % nyp);
            self.values[(jx * ny + iy, ix * nyp + jy)]
        });
        Ok(KernelGrid2D {
            values,
            ..self.clone()
        })
    }

    /// `∫ Γ(ρ; ρ) d²ρ`.
    pub fn total_intensity(&self) -> f64 {
        let n = self.values.nrows().min(self.values.ncols());
        (0..n).map(|i| self.values[(i, i)].re).sum::<f64>()
            * self.row_x.spacing()
            * self.row_y.spacing()
    }
}

/// Result of [`kernel_psd_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub min_eigenvalue_ratio: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub psd: bool,
}

/// Eigenvalues of a sampled Hermitian kernel, ascending.
pub fn kernel_eigenvalues<K: SampledKernel>(kernel: &K) -> Result<Vec<f64>, OracleError> {
    let m = kernel.matrix();
    if m.nrows() != m.ncols() {
        return Err(OracleError::GridMismatch(
            "kernel matrix is not square".into(),
        ));
    }
    // Only the lower triangle is read by the eigensolver; symmetrize first.
    let h = (m + m.adjoint()) * Complex64::from(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Smallest eigenvalue over largest eigenvalue of the sampled matrix, and
/// the verdict `ratio ≥ -1e-8`.
pub fn kernel_psd_check<K: SampledKernel>(kernel: &K) -> Result<PsdCheck, OracleError> {
    let ev = kernel_eigenvalues(kernel)?;
    let min = ev[0];
    let max = *ev.last().unwrap();
    let ratio = if max > 0.0 {
        min / max
    } else if min == 0.0 {
        0.0
    } else {
        f64::NEG_INFINITY
    };
    Ok(PsdCheck {
        min_eigenvalue_ratio: ratio,
        min_eigenvalue: min,
        max_eigenvalue: max,
        psd: ratio >= PSD_RATIO_FLOOR,
    })
}
