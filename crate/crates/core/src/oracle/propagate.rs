//! Free-space paraxial propagation by the transfer-function method.
//!
//! `i ∂ψ/∂z = -(λ̄/2) ∂²ψ/∂x²` is diagonal in spatial frequency, so a field
//! is propagated by one forward transform, multiplication with
//! `exp(-iλ̄zk²/2)`, and one inverse transform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::grid::{Field1D, Field2D, Grid1D};
use super::kernel::KernelGrid;
use super::OracleError;

/// Energy fraction allowed in the outer 5% of a grid, before and after
/// propagation.
pub const EDGE_ENERGY_LIMIT: f64 = 1e-8;

// Spectral power below this fraction of the peak counts as unoccupied.
const BAND_FLOOR: f64 = 1e-20;

pub(crate) struct Transforms {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl Transforms {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transforms {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / n as f64,
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Normalized inverse.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        for v in data.iter_mut() {
            *v *= self.scale;
        }
    }
}

fn transfer(lambda_bar: f64, z: f64, k: &[f64]) -> Vec<Complex64> {
    k.iter()
        .map(|&k| Complex64::from_polar(1.0, -0.5 * lambda_bar * z * k * k))
        .collect()
}

/// Largest `|k|` carrying spectral power above the band floor.
fn occupied_band(spectrum_power: &[f64], k: &[f64]) -> f64 {
    let peak = spectrum_power.iter().cloned().fold(0.0, f64::max);
    spectrum_power
        .iter()
        .zip(k)
        .filter(|(p, _)| **p > BAND_FLOOR * peak)
        .map(|(_, k)| k.abs())
        .fold(0.0, f64::max)
}

/// The chirp `exp(-iλ̄zk²/2)` displaces frequency `k` by `λ̄zk`; anything
/// displaced beyond the grid edge wraps around.
fn check_chirp(z: f64, lambda_bar: f64, band: f64, grid: &Grid1D) -> Result<(), OracleError> {
    let shift = lambda_bar * z.abs() * band;
    if shift > grid.half_width() {
        return Err(OracleError::Aliasing {
            z,
            shift,
            half_width: grid.half_width(),
        });
    }
    Ok(())
}

fn check_input_edges(fraction: f64) -> Result<(), OracleError> {
    if fraction > EDGE_ENERGY_LIMIT {
        return Err(OracleError::Undersampled {
            edge_fraction: fraction,
        });
    }
    Ok(())
}

fn check_output_edges(z: f64, fraction: f64) -> Result<(), OracleError> {
    if fraction > EDGE_ENERGY_LIMIT {
        return Err(OracleError::Wraparound {
            z,
            edge_fraction: fraction,
        });
    }
    Ok(())
}

pub fn propagate_field_1d(
    field: &Field1D,
    z: f64,
    lambda_bar: f64,
) -> Result<Field1D, OracleError> {
    check_input_edges(field.edge_fraction())?;
    let grid = field.grid;
    let k = grid.wavenumbers();
    let fft = Transforms::new(grid.n_points());
    let mut data = field.values.clone();
    fft.forward(&mut data);
    let power: Vec<f64> = data.iter().map(|v| v.norm_sqr()).collect();
    check_chirp(z, lambda_bar, occupied_band(&power, &k), &grid)?;
    for (v, h) in data.iter_mut().zip(transfer(lambda_bar, z, &k)) {
        *v *= h;
    }
    fft.inverse(&mut data);
    let out = Field1D { grid, values: data };
    check_output_edges(z, out.edge_fraction())?;
    Ok(out)
}

/// Applies `f` to every `x` line (fixed `y`) and every `y` line (fixed `x`).
fn for_each_line(
    values: &mut [Complex64],
    nx: usize,
    ny: usize,
    mut along_x: impl FnMut(&mut [Complex64]),
    mut along_y: impl FnMut(&mut [Complex64]),
) {
    for row in values.chunks_mut(ny) {
        along_y(row);
    }
    let mut line = vec![Complex64::default(); nx];
    for iy in 0..ny {
        for ix in 0..nx {
            line[ix] = values[ix * ny + iy];
        }
        along_x(&mut line);
        for ix in 0..nx {
            values[ix * ny + iy] = line[ix];
        }
    }
}

pub fn propagate_field_2d(
    field: &Field2D,
    z: f64,
    lambda_bar: f64,
) -> Result<Field2D, OracleError> {
    check_input_edges(field.edge_fraction())?;
    let (gx, gy) = (field.grid_x, field.grid_y);
    let (nx, ny) = (gx.n_points(), gy.n_points());
    let (kx, ky) = (gx.wavenumbers(), gy.wavenumbers());
    let (fx, fy) = (Transforms::new(nx), Transforms::new(ny));
    let mut data = field.values.clone();
    for_each_line(&mut data, nx, ny, |l| fx.forward(l), |l| fy.forward(l));

    // Per-axis occupied bands from the marginal spectra.
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for (idx, v) in data.iter().enumerate() {
        px[idx / ny] += v.norm_sqr();
        py[idx % ny] += v.norm_sqr();
    }
    check_chirp(z, lambda_bar, occupied_band(&px, &kx), &gx)?;
    check_chirp(z, lambda_bar, occupied_band(&py, &ky), &gy)?;

    let hx = transfer(lambda_bar, z, &kx);
    let hy = transfer(lambda_bar, z, &ky);
    for (idx, v) in data.iter_mut().enumerate() {
        *v *= hx[idx / ny] * hy[idx % ny];
    }
    for_each_line(&mut data, nx, ny, |l| fx.inverse(l), |l| fy.inverse(l));
    let out = Field2D {
        grid_x: gx,
        grid_y: gy,
        values: data,
    };
    let frac = out.edge_fraction();
    check_output_edges(z, frac)?;
    Ok(out)
}

/// Propagates a one-dimensional two-point function: the transfer function
/// acts on `x` and its conjugate on `x'`, i.e. `Γ(z) = U Γ U†`.
pub fn propagate_kernel_1d(
    kernel: &KernelGrid,
    z: f64,
    lambda_bar: f64,
) -> Result<KernelGrid, OracleError> {
    let grid = kernel.grid;
    check_input_edges(kernel.edge_fraction())?;
    let n = grid.n_points();
    let k = grid.wavenumbers();
    let fft = Transforms::new(n);
    let h = transfer(lambda_bar, z, &k);

    let mut m: DMatrix<Complex64> = kernel.values.clone();
    // Columns (fixed x'): transform over x.
    for mut col in m.column_iter_mut() {
        let data = col.as_mut_slice();
        fft.forward(data);
    }
    // Band check on the x spectrum of the diagonal-dominant kernel.
    let power: Vec<f64> = (0..n)
        .map(|i| m.row(i).iter().map(|v| v.norm_sqr()).sum())
        .collect();
    check_chirp(z, lambda_bar, occupied_band(&power, &k), &grid)?;
    for mut col in m.column_iter_mut() {
        let data = col.as_mut_slice();
        for (v, t) in data.iter_mut().zip(&h) {
            *v *= t;
        }
        fft.inverse(data);
    }
    // Rows (fixed x): transform over x' with the conjugate transfer function.
    let mut mt = m.transpose();
    for mut col in mt.column_iter_mut() {
        let data = col.as_mut_slice();
        fft.forward(data);
        for (v, t) in data.iter_mut().zip(&h) {
            *v *= t.conj();
        }
        fft.inverse(data);
    }
    let out = KernelGrid {
        grid,
        values: mt.transpose(),
    };
    check_output_edges(z, out.edge_fraction())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{coherent_amplitude_1d, BeamParams1D};

    fn gaussian(n: usize, half_width: f64) -> (BeamParams1D, Field1D) {
        let p = BeamParams1D::new(1.0, 1.0, 1.0).unwrap();
        let grid = Grid1D::new(n, half_width).unwrap();
        (
            p,
            Field1D::sample(grid, |x| coherent_amplitude_1d(&p, x, 0.0)),
        )
    }

    #[test]
    fn zero_distance_is_identity() {
        let (_, f) = gaussian(256, 10.0);
        let g = propagate_field_1d(&f, 0.0, 1.0).unwrap();
        let err = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn matches_closed_form() {
        let (p, f) = gaussian(512, 12.0);
        let z = 0.8;
        let g = propagate_field_1d(&f, z, 1.0).unwrap();
        let peak = coherent_amplitude_1d(&p, 0.0, z).norm();
        for (x, v) in g.grid.points().into_iter().zip(&g.values) {
            let exact = coherent_amplitude_1d(&p, x, z);
            assert!((v - exact).norm() < 1e-12 * peak, "x={x}");
        }
    }

    #[test]
    fn rejects_undersampled_input() {
        let (_, f) = gaussian(64, 2.0);
        assert!(matches!(
            propagate_field_1d(&f, 0.1, 1.0),
            Err(OracleError::Undersampled { .. })
        ));
    }

    #[test]
    fn rejects_wraparound() {
        let (_, f) = gaussian(256, 8.0);
        assert!(matches!(
            propagate_field_1d(&f, 5.0, 1.0),
            Err(OracleError::Aliasing { .. })
        ));
    }
}
