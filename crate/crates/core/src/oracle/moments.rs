//! Widths and coherence lengths measured from sampled fields and kernels.

use serde::{Deserialize, Serialize};

use super::grid::{Field1D, Field2D, Grid1D};
use super::kernel::KernelGrid;
use super::propagate::propagate_field_2d;
use super::OracleError;
use crate::beams::{elliptic_amplitude_2d, BeamParams2D};
use crate::extended::Extended;
use crate::witness::RotationAngle;

fn width_from(weights: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut m0, mut m2) = (0.0, 0.0);
    for (x, w) in weights {
        m0 += w;
        m2 += x * x * w;
    }
    2.0 * (m2 / m0).sqrt()
}

/// `w = 2⟨x²⟩^{1/2}` under `|ψ|²`.
pub fn field_width(field: &Field1D) -> f64 {
    width_from(
        field
            .grid
            .points()
            .into_iter()
            .zip(field.values.iter().map(|v| v.norm_sqr())),
    )
}

/// `w'(z) = 2⟨x'²⟩^{1/2}` with `x' = x cos θ + y sin θ`, under `|Ψ|²`.
pub fn projected_field_width(field: &Field2D, theta: RotationAngle) -> f64 {
    let (s, c) = theta.sin_cos();
    let xs = field.grid_x.points();
    let ys = field.grid_y.points();
    let ny = ys.len();
    width_from(
        field
            .values
            .iter()
            .enumerate()
            .map(|(idx, v)| (xs[idx / ny] * c + ys[idx % ny] * s, v.norm_sqr())),
    )
}

/// `w = 2⟨x²⟩^{1/2}` under the kernel diagonal.
pub fn kernel_width(kernel: &KernelGrid) -> f64 {
    width_from(kernel.grid.points().into_iter().zip(kernel.diagonal()))
}

/// Width and coherence length of a kernel assumed to be of GSM form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsmFit {
    pub width: f64,
    /// `1/δ²`; may be slightly negative for a sampled coherent kernel.
    pub inverse_delta_sq: f64,
    pub coherence_length: Extended,
}

/// For a GSM kernel `|Γ|² ∝ exp(-2(x² + x'²)/w² - (x - x')²/δ²)`, so the
/// separation `s = x - x'` has variance `⟨s²⟩ = 1/(2(1/w² + 1/δ²))` under
/// `|Γ|²`. The width comes from the diagonal.
pub fn fit_gsm_kernel(kernel: &KernelGrid) -> GsmFit {
    let width = kernel_width(kernel);
    let xs = kernel.grid.points();
    let n = xs.len();
    let (mut m0, mut m2) = (0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let p = kernel.values[(i, j)].norm_sqr();
            let s = xs[i] - xs[j];
            m0 += p;
            m2 += s * s * p;
        }
    }
    let inverse_delta_sq = m0 / (2.0 * m2) - 1.0 / (width * width);
    let coherence_length = if inverse_delta_sq * width * width > 1e-12 {
        Extended::Finite(inverse_delta_sq.recip().sqrt())
    } else {
        Extended::Infinite
    };
    GsmFit {
        width,
        inverse_delta_sq,
        coherence_length,
    }
}

/// Projected widths `w'(z)` of an elliptic beam measured on numerically
/// propagated 2D fields.
pub fn numeric_width_scan(
    p: &BeamParams2D,
    theta: RotationAngle,
    z_samples: &[f64],
    grid_x: Grid1D,
    grid_y: Grid1D,
) -> Result<Vec<f64>, OracleError> {
    let initial = Field2D::sample(grid_x, grid_y, |x, y| elliptic_amplitude_2d(p, x, y, 0.0));
    z_samples
        .iter()
        .map(|&z| {
            let field = if z == 0.0 {
                initial.clone()
            } else {
                propagate_field_2d(&initial, z, p.lambda_bar)?
            };
            Ok(projected_field_width(&field, theta))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{gsm_gamma, GsmParams};

    #[test]
    fn gsm_fit_recovers_parameters() {
        let p = GsmParams::new(1.0, 1.2, Extended::Finite(0.6), 1.0).unwrap();
        let k = KernelGrid::sample(Grid1D::new(256, 10.0).unwrap(), |x, xp| {
            gsm_gamma(&p, x, xp, 0.0)
        });
        let fit = fit_gsm_kernel(&k);
        assert!((fit.width - 1.2).abs() < 1e-10);
        assert!((fit.coherence_length.as_finite().unwrap() - 0.6).abs() < 1e-10);
    }

    #[test]
    fn coherent_kernel_fits_infinite_delta() {
        let p = GsmParams::new(1.0, 1.0, Extended::Infinite, 1.0).unwrap();
        let k = KernelGrid::sample(Grid1D::new(128, 8.0).unwrap(), |x, xp| {
            gsm_gamma(&p, x, xp, 0.4)
        });
        assert_eq!(fit_gsm_kernel(&k).coherence_length, Extended::Infinite);
    }
}
