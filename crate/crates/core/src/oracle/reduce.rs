//! Tracing a two-dimensional two-point function over `y'` in a rotated
//! frame, by cubic resampling on the rotated grid and trapezoid quadrature.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::{Field2D, Grid1D};
use super::kernel::{KernelGrid, KernelGrid2D, SampledKernel};
use super::OracleError;
use crate::witness::RotationAngle;

/// Hermiticity violation of a reduced kernel above which resolution is
/// deemed insufficient.
pub const HERMITICITY_LIMIT: f64 = 1e-8;

type Stencil = [(usize, usize, f64); 16];

/// Cubic Lagrange weights on the nodes `-1, 0, 1, 2` at offset `t`.
fn cubic_weights(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Separable cubic interpolation weights for the 4×4 grid points around
/// `(x, y)`, or `None` where the stencil leaves the grid.
fn stencil(gx: &Grid1D, gy: &Grid1D, x: f64, y: f64) -> Option<Stencil> {
    let (i, tx) = gx.locate(x)?;
    let (j, ty) = gy.locate(y)?;
    if i == 0 || j == 0 || i + 2 >= gx.n_points() || j + 2 >= gy.n_points() {
        return None;
    }
    let (wx, wy) = (cubic_weights(tx), cubic_weights(ty));
    let mut out = [(0, 0, 0.0); 16];
    for a in 0..4 {
        for b in 0..4 {
            out[4 * a + b] = (i + a - 1, j + b - 1, wx[a] * wy[b]);
        }
    }
    Some(out)
}

/// Lab-frame point of rotated-frame coordinates `(x', y')`.
fn unrotate(theta: RotationAngle, xp: f64, yp: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (xp * c - yp * s, xp * s + yp * c)
}

/// `Ψ'(x', y') = Ψ(x, y)` resampled onto the same grids in the rotated frame.
pub fn rotate_field(field: &Field2D, theta: RotationAngle) -> Field2D {
    let (gx, gy) = (field.grid_x, field.grid_y);
    let ys = gy.points();
    let mut values = Vec::with_capacity(field.values.len());
    for xp in gx.points() {
        for &yp in &ys {
            let (x, y) = unrotate(theta, xp, yp);
            let v = match stencil(&gx, &gy, x, y) {
                Some(st) => st.iter().map(|&(i, j, w)| field.at(i, j) * w).sum(),
                None => Complex64::default(),
            };
            values.push(v);
        }
    }
    Field2D {
        grid_x: gx,
        grid_y: gy,
        values,
    }
}

/// `Γ''(x', x'') = ∫ dy' Ψ'(x', y') Ψ'(x'', y')*` for a coherent field.
pub fn reduce_field(field: &Field2D, theta: RotationAngle) -> KernelGrid {
    let rotated = rotate_field(field, theta);
    let (nx, ny) = (field.grid_x.n_points(), field.grid_y.n_points());
    let a = DMatrix::from_row_slice(nx, ny, &rotated.values);
    let values = &a * a.adjoint() * Complex64::from(field.grid_y.spacing());
    KernelGrid {
        grid: field.grid_x,
        values,
    }
}

/// `Γ''(x', x'') = ∫ dy' Γ'(x', y'; x'', y')` for a general sampled 2D kernel.
pub fn reduce_kernel(
    kernel: &KernelGrid2D,
    theta: RotationAngle,
) -> Result<KernelGrid, OracleError> {
    if !kernel.is_square() {
        return Err(OracleError::GridMismatch(
            "reduction needs identical row and column grids".into(),
        ));
    }
    let (gx, gy) = (kernel.row_x, kernel.row_y);
    let nx = gx.n_points();
    let xs = gx.points();
    let ys = gy.points();
    // stencils[i][k] for the rotated-frame point (x'_i, y'_k).
    let stencils: Vec<Vec<Option<Stencil>>> = xs
        .iter()
        .map(|&xp| {
            ys.iter()
                .map(|&yp| {
                    let (x, y) = unrotate(theta, xp, yp);
                    stencil(&gx, &gy, x, y)
                })
                .collect()
        })
        .collect();
    let hy = gy.spacing();
    let mut values = DMatrix::zeros(nx, nx);
    for i in 0..nx {
        for j in 0..nx {
            let mut acc = Complex64::default();
            for (sa, sb) in stencils[i].iter().zip(&stencils[j]) {
                let (Some(a), Some(b)) = (sa, sb) else {
                    continue;
                };
                for &(ax, ay, wa) in a {
                    for &(bx, by, wb) in b {
                        acc += kernel.at(ax, ay, bx, by) * (wa * wb);
                    }
                }
            }
            values[(i, j)] = acc * hy;
        }
    }
    let out = KernelGrid { grid: gx, values };
    let residual = out.hermiticity_residual();
    if residual > HERMITICITY_LIMIT {
        return Err(OracleError::HermiticityViolation(residual));
    }
    Ok(out)
}
