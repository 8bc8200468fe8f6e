//! Numerical Wigner transform of sampled 2D two-point functions.
//!
//! `W(ρ, p) = (2πλ̄)⁻² ∫ d²s e^{-ip·s/λ̄} Γ(ρ + s/2; ρ - s/2)`. On a grid
//! with spacing `h` the separation `s` runs over multiples of `2h`, so both
//! arguments stay on grid points and the `s` integral is a plain DFT.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::grid::Grid1D;
use super::kernel::KernelGrid2D;
use super::propagate::Transforms;
use super::OracleError;
use crate::family::VarianceMatrix;

/// Allowed relative mismatch between `∫W` and `∫Γ(ρ; ρ)`, and allowed
/// fraction of `∫|W|` in the outer 5% of position or momentum range.
pub const SAMPLING_LIMIT: f64 = 1e-4;

/// Wigner function samples `W(x_i, y_j, p_k, p_l)`, momenta in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid2D {
    pub grid_x: Grid1D,
    pub grid_y: Grid1D,
    pub p_x: Vec<f64>,
    pub p_y: Vec<f64>,
    /// `values[((ix * ny + iy) * nx + kx) * ny + ky]`.
    pub values: Vec<f64>,
    /// `max |Im W| / max |W|` before the imaginary part was dropped.
    pub imaginary_residue: f64,
}

impl WignerGrid2D {
    pub fn at(&self, ix: usize, iy: usize, kx: usize, ky: usize) -> f64 {
        let (nx, ny) = (self.grid_x.n_points(), self.grid_y.n_points());
        self.values[((ix * ny + iy) * nx + kx) * ny + ky]
    }

    fn dp(p: &[f64]) -> f64 {
        p[1] - p[0]
    }

    /// Phase-space volume element.
    pub fn cell(&self) -> f64 {
        self.grid_x.spacing() * self.grid_y.spacing() * Self::dp(&self.p_x) * Self::dp(&self.p_y)
    }

    /// `∫ W d⁴ξ`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell()
    }
}

/// Momenta conjugate to separations `s = 2h m`, in FFT order.
fn momenta(grid: &Grid1D, lambda_bar: f64) -> Vec<f64> {
    let n = grid.n_points();
    let dp = 2.0 * PI * lambda_bar / (n as f64 * 2.0 * grid.spacing());
    (0..n)
        .map(|k| {
            let m = if k < n / 2 {
                k as isize
            } else {
                k as isize - n as isize
            };
            m as f64 * dp
        })
        .collect()
}

fn signed(index: usize, n: usize) -> isize {
    if index < n / 2 {
        index as isize
    } else {
        index as isize - n as isize
    }
}

/// Points per axis of the grids chosen by [`phase_space_grids`].
pub const PHASE_SPACE_POINTS: usize = 32;

/// Smallest number of marginal standard deviations the position and
/// momentum ranges must each cover.
pub const MIN_COVERAGE: f64 = 5.0;

/// Per-axis grids of `n_points` whose position and momentum ranges cover
/// the same number of standard deviations `σ_x`, `σ_p` of the expected
/// marginals, at most 8. Fails below [`MIN_COVERAGE`].
pub fn phase_space_grids(
    sigma_x: [f64; 2],
    sigma_p: [f64; 2],
    lambda_bar: f64,
    n_points: usize,
) -> Result<(Grid1D, Grid1D), OracleError> {
    let axis = |sx: f64, sp: f64| {
        // p_max = πλ̄n/(4 half_width); equal coverage half_width/σ_x = p_max/σ_p.
        let balanced = (PI * lambda_bar * n_points as f64 * sx / (4.0 * sp)).sqrt();
        let half_width = balanced.min(8.0 * sx);
        let coverage = half_width / sx;
        if coverage < MIN_COVERAGE {
            return Err(OracleError::InadequateSampling {
                what: "phase-space coverage in standard deviations",
                value: coverage,
            });
        }
        Grid1D::new(n_points, half_width)
    };
    Ok((axis(sigma_x[0], sigma_p[0])?, axis(sigma_x[1], sigma_p[1])?))
}

/// [`phase_space_grids`] sized from the diagonal of an expected variance matrix.
pub fn phase_space_grids_for(
    v: &VarianceMatrix,
    n_points: usize,
) -> Result<(Grid1D, Grid1D), OracleError> {
    let s = |i: usize| v.v[(i, i)].sqrt();
    phase_space_grids([s(0), s(1)], [s(2), s(3)], v.lambda_bar, n_points)
}

pub fn wigner_transform(
    kernel: &KernelGrid2D,
    lambda_bar: f64,
) -> Result<WignerGrid2D, OracleError> {
    if !kernel.is_square() {
        return Err(OracleError::GridMismatch(
            "Wigner transform needs identical row and column grids".into(),
        ));
    }
    let (gx, gy) = (kernel.row_x, kernel.row_y);
    let (nx, ny) = (gx.n_points(), gy.n_points());
    let fx = Transforms::new(nx);
    let fy = Transforms::new(ny);
    let scale = 4.0 * gx.spacing() * gy.spacing() / (2.0 * PI * lambda_bar).powi(2);

    let mut values = Vec::with_capacity(nx * ny * nx * ny);
    let mut max_re: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    let mut buf = vec![Complex64::default(); nx * ny];
    let mut line = vec![Complex64::default(); nx];
    for ix in 0..nx {
        for iy in 0..ny {
            for (idx, slot) in buf.iter_mut().enumerate() {
                let mx = signed(idx / ny, nx);
                let my = signed(idx % ny, ny);
                // The Nyquist separation has no mirror partner; leave it out.
                let (ax, bx) = (ix as isize + mx, ix as isize - mx);
                let (ay, by) = (iy as isize + my, iy as isize - my);
                let inside = mx != -(nx as isize) / 2
                    && my != -(ny as isize) / 2
                    && (0..nx as isize).contains(&ax)
                    && (0..nx as isize).contains(&bx)
                    && (0..ny as isize).contains(&ay)
                    && (0..ny as isize).contains(&by);
                *slot = if inside {
                    kernel.at(ax as usize, ay as usize, bx as usize, by as usize)
                } else {
                    Complex64::default()
                };
            }
            for row in buf.chunks_mut(ny) {
                fy.forward(row);
            }
            for ky in 0..ny {
                for kx in 0..nx {
                    line[kx] = buf[kx * ny + ky];
                }
                fx.forward(&mut line);
                for kx in 0..nx {
                    buf[kx * ny + ky] = line[kx];
                }
            }
            for v in &buf {
                let w = v * scale;
                max_re = max_re.max(w.re.abs());
                max_im = max_im.max(w.im.abs());
                values.push(w.re);
            }
        }
    }
    Ok(WignerGrid2D {
        grid_x: gx,
        grid_y: gy,
        p_x: momenta(&gx, lambda_bar),
        p_y: momenta(&gy, lambda_bar),
        values,
        imaginary_residue: if max_re > 0.0 { max_im / max_re } else { 0.0 },
    })
}

/// Second moments `V_ab = (1/I) ∫ ξ_a ξ_b W(ξ) d⁴ξ` of the numerically
/// transformed kernel.
pub fn wigner_moments(
    kernel: &KernelGrid2D,
    lambda_bar: f64,
) -> Result<VarianceMatrix, OracleError> {
    let w = wigner_transform(kernel, lambda_bar)?;
    moments_of(&w, kernel.total_intensity(), lambda_bar)
}

pub fn moments_of(
    w: &WignerGrid2D,
    intensity: f64,
    lambda_bar: f64,
) -> Result<VarianceMatrix, OracleError> {
    let (nx, ny) = (w.grid_x.n_points(), w.grid_y.n_points());
    let xs = w.grid_x.points();
    let ys = w.grid_y.points();
    let px_max = w.p_x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let py_max = w.p_y.iter().fold(0.0f64, |a, b| a.max(b.abs()));

    let mut sums = Matrix4::<f64>::zeros();
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut edge = 0.0;
    for (ix, &x) in xs.iter().enumerate() {
        for (iy, &y) in ys.iter().enumerate() {
            let pos_edge = w.grid_x.is_edge(ix) || w.grid_y.is_edge(iy);
            for kx in 0..nx {
                for ky in 0..ny {
                    let v = w.at(ix, iy, kx, ky);
                    let xi = [x, y, w.p_x[kx], w.p_y[ky]];
                    total += v;
                    abs_total += v.abs();
                    if pos_edge
                        || w.p_x[kx].abs() >= 0.95 * px_max
                        || w.p_y[ky].abs() >= 0.95 * py_max
                    {
                        edge += v.abs();
                    }
                    for a in 0..4 {
                        for b in a..4 {
                            sums[(a, b)] += xi[a] * xi[b] * v;
                        }
                    }
                }
            }
        }
    }
    let cell = w.cell();
    let w_total = total * cell;
    let drift = (w_total - intensity).abs() / intensity.abs();
    if drift > SAMPLING_LIMIT {
        return Err(OracleError::InadequateSampling {
            what: "Wigner normalization drift",
            value: drift,
        });
    }
    let edge_fraction = edge / abs_total;
    if edge_fraction > SAMPLING_LIMIT {
        return Err(OracleError::InadequateSampling {
            what: "Wigner mass at the phase-space grid edge",
            value: edge_fraction,
        });
    }
    let mut v = sums / total;
    for a in 0..4 {
        for b in 0..a {
            v[(a, b)] = v[(b, a)];
        }
    }
    Ok(VarianceMatrix::new(v, lambda_bar))
}
