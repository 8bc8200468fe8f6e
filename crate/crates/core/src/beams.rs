//! Closed-form paraxial Gaussian beams.
//!
//! Coherent one-dimensional Gaussian amplitudes, one-dimensional Gaussian
//! Schell-model (GSM) two-point functions, and elliptic two-dimensional
//! coherent beams that factor into one-dimensional amplitudes along the
//! principal axes.
//!
//! Conventions: all lengths share one unit, `lambda_bar` is the reduced
//! wavelength `λ/2π`, and the radius of curvature follows
//! `R(z) = -(z + z_R²/z)`, so it is negative for `z > 0` and infinite in the
//! waist plane. The amplitude of a waist-plane beam of width `w` and
//! intensity measure `I` is `(2I/πw²)^{1/4} exp(-x²/w²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::extended::Extended;

/// Waist-plane parameters of a coherent one-dimensional Gaussian beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams1D {
    pub intensity: f64,
    pub waist_width: f64,
    pub lambda_bar: f64,
}

impl BeamParams1D {
    pub fn new(intensity: f64, waist_width: f64, lambda_bar: f64) -> Result<Self, ParamError> {
        let p = BeamParams1D {
            intensity,
            waist_width,
            lambda_bar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        ParamError::check_positive("intensity", self.intensity)?;
        ParamError::check_positive("waist_width", self.waist_width)?;
        ParamError::check_positive("lambda_bar", self.lambda_bar)
    }

    /// `z_R = w²/2λ̄`.
    pub fn rayleigh_range(&self) -> f64 {
        self.waist_width * self.waist_width / (2.0 * self.lambda_bar)
    }

    /// `∫|ψ|² dx`, which the waist-plane normalization fixes at `√I`.
    pub fn total_power(&self) -> f64 {
        self.intensity.sqrt()
    }
}

/// Waist-plane parameters of a one-dimensional GSM beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsmParams {
    pub intensity: f64,
    pub waist_width: f64,
    pub coherence_length: Extended,
    pub lambda_bar: f64,
}

impl GsmParams {
    pub fn new(
        intensity: f64,
        waist_width: f64,
        coherence_length: Extended,
        lambda_bar: f64,
    ) -> Result<Self, ParamError> {
        let p = GsmParams {
            intensity,
            waist_width,
            coherence_length,
            lambda_bar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        ParamError::check_positive("intensity", self.intensity)?;
        ParamError::check_positive("waist_width", self.waist_width)?;
        if let Extended::Finite(delta) = self.coherence_length {
            ParamError::check_positive("coherence_length", delta)?;
        }
        ParamError::check_positive("lambda_bar", self.lambda_bar)
    }

    pub fn coherent(beam: BeamParams1D) -> Self {
        GsmParams {
            intensity: beam.intensity,
            waist_width: beam.waist_width,
            coherence_length: Extended::Infinite,
            lambda_bar: beam.lambda_bar,
        }
    }
}

/// Waist-plane parameters of an elliptic coherent beam with principal axes
/// along `x` (width `width_x`) and `y` (width `width_y`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams2D {
    pub intensity_x: f64,
    pub intensity_y: f64,
    pub width_x: f64,
    pub width_y: f64,
    pub lambda_bar: f64,
}

impl BeamParams2D {
    pub fn new(
        intensity_x: f64,
        intensity_y: f64,
        width_x: f64,
        width_y: f64,
        lambda_bar: f64,
    ) -> Result<Self, ParamError> {
        let p = BeamParams2D {
            intensity_x,
            intensity_y,
            width_x,
            width_y,
            lambda_bar,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unit intensities.
    pub fn with_widths(width_x: f64, width_y: f64, lambda_bar: f64) -> Result<Self, ParamError> {
        Self::new(1.0, 1.0, width_x, width_y, lambda_bar)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        ParamError::check_positive("intensity_x", self.intensity_x)?;
        ParamError::check_positive("intensity_y", self.intensity_y)?;
        ParamError::check_positive("width_x", self.width_x)?;
        ParamError::check_positive("width_y", self.width_y)?;
        ParamError::check_positive("lambda_bar", self.lambda_bar)
    }

    pub fn axis_x(&self) -> BeamParams1D {
        BeamParams1D {
            intensity: self.intensity_x,
            waist_width: self.width_x,
            lambda_bar: self.lambda_bar,
        }
    }

    pub fn axis_y(&self) -> BeamParams1D {
        BeamParams1D {
            intensity: self.intensity_y,
            waist_width: self.width_y,
            lambda_bar: self.lambda_bar,
        }
    }
}

/// Geometry of a coherent beam at distance `z` from its waist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatedBeam1D {
    pub width: f64,
    pub curvature_radius: Extended,
    pub guoy_phase: f64,
    pub rayleigh_range: f64,
}

/// Geometry of a GSM beam at distance `z`; both the width and the coherence
/// length scale by the same factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatedGsm {
    pub width: f64,
    pub coherence_length: Extended,
    pub curvature_radius: Extended,
    pub rayleigh_range: f64,
}

/// `R(z) = -(z + z_R²/z)`, infinite at the waist.
pub fn curvature_radius(rayleigh_range: f64, z: f64) -> Extended {
    if z == 0.0 {
        Extended::Infinite
    } else {
        Extended::Finite(-(z + rayleigh_range * rayleigh_range / z))
    }
}

/// `1/R(z) = -z/(z² + z_R²)`, finite everywhere.
pub fn inverse_curvature_radius(rayleigh_range: f64, z: f64) -> f64 {
    -z / (z * z + rayleigh_range * rayleigh_range)
}

/// `(1 + (z/z_R)²)^{1/2}`.
fn expansion_factor(rayleigh_range: f64, z: f64) -> f64 {
    let t = z / rayleigh_range;
    (1.0 + t * t).sqrt()
}

pub fn beam_geometry_1d(p: &BeamParams1D, z: f64) -> PropagatedBeam1D {
    let z_r = p.rayleigh_range();
    PropagatedBeam1D {
        width: p.waist_width * expansion_factor(z_r, z),
        curvature_radius: curvature_radius(z_r, z),
        guoy_phase: -0.5 * (z / z_r).atan(),
        rayleigh_range: z_r,
    }
}

/// Complex amplitude `ψ(x; z)` including the Guoy phase.
pub fn coherent_amplitude_1d(p: &BeamParams1D, x: f64, z: f64) -> Complex64 {
    let z_r = p.rayleigh_range();
    let width = p.waist_width * expansion_factor(z_r, z);
    let magnitude = (2.0 * p.intensity / (PI * width * width)).powf(0.25);
    let guoy = -0.5 * (z / z_r).atan();
    let inv_r = inverse_curvature_radius(z_r, z);
    let exponent = Complex64::new(
        -x * x / (width * width),
        guoy - x * x * inv_r / (2.0 * p.lambda_bar),
    );
    magnitude * exponent.exp()
}

/// Rayleigh range of a GSM beam, `(w²/2λ̄)(1 + w²/δ²)^{-1/2}`.
pub fn gsm_rayleigh_range(p: &GsmParams) -> f64 {
    let w2 = p.waist_width * p.waist_width;
    w2 / (2.0 * p.lambda_bar) / (1.0 + w2 * p.coherence_length.recip_squared()).sqrt()
}

pub fn gsm_geometry(p: &GsmParams, z: f64) -> PropagatedGsm {
    let z_r = gsm_rayleigh_range(p);
    let scale = expansion_factor(z_r, z);
    PropagatedGsm {
        width: p.waist_width * scale,
        coherence_length: match p.coherence_length {
            Extended::Finite(delta) => Extended::Finite(delta * scale),
            Extended::Infinite => Extended::Infinite,
        },
        curvature_radius: curvature_radius(z_r, z),
        rayleigh_range: z_r,
    }
}

/// Two-point function `Γ(x, x'; z)` of a GSM beam.
pub fn gsm_gamma(p: &GsmParams, x: f64, x_prime: f64, z: f64) -> Complex64 {
    let z_r = gsm_rayleigh_range(p);
    let scale = expansion_factor(z_r, z);
    let width = p.waist_width * scale;
    let inv_delta2 = p.coherence_length.recip_squared() / (scale * scale);
    let inv_r = inverse_curvature_radius(z_r, z);
    let prefactor = (2.0 * p.intensity / (PI * width * width)).sqrt();
    let d = x - x_prime;
    let exponent = Complex64::new(
        -(x * x + x_prime * x_prime) / (width * width) - d * d * inv_delta2 / 2.0,
        -(x * x - x_prime * x_prime) * inv_r / (2.0 * p.lambda_bar),
    );
    prefactor * exponent.exp()
}

/// Elliptic coherent amplitude `Ψ(x, y; z) = ψ₁(x; z) ψ₂(y; z)`.
pub fn elliptic_amplitude_2d(p: &BeamParams2D, x: f64, y: f64, z: f64) -> Complex64 {
    coherent_amplitude_1d(&p.axis_x(), x, z) * coherent_amplitude_1d(&p.axis_y(), y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> BeamParams1D {
        BeamParams1D::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn amplitude_at_origin() {
        let psi = coherent_amplitude_1d(&unit(), 0.0, 0.0);
        assert_relative_eq!(psi.re, (2.0 / PI).powf(0.25), max_relative = 1e-15);
        assert_eq!(psi.im, 0.0);
        assert_relative_eq!(psi.re, 0.8932438417380023, max_relative = 1e-15);
    }

    #[test]
    fn amplitude_at_rayleigh_range() {
        let p = BeamParams1D::new(3.0, 0.7, 0.2).unwrap();
        let z_r = p.rayleigh_range();
        let a0 = coherent_amplitude_1d(&p, 0.0, 0.0);
        let a1 = coherent_amplitude_1d(&p, 0.0, z_r);
        assert_relative_eq!(
            a1.norm() / a0.norm(),
            2f64.powf(-0.25),
            max_relative = 1e-14
        );
        assert_relative_eq!(a1.arg(), -PI / 8.0, max_relative = 1e-14);
    }

    #[test]
    fn geometry_examples() {
        let g = beam_geometry_1d(&unit(), 0.0);
        assert_eq!(g.rayleigh_range, 0.5);
        assert_eq!(g.curvature_radius, Extended::Infinite);
        assert_eq!(g.width, 1.0);
        let g = beam_geometry_1d(&unit(), 0.5);
        assert_relative_eq!(g.width, 2f64.sqrt(), max_relative = 1e-15);

        let p = BeamParams1D::new(1.0, 2.0, 0.5).unwrap();
        let g = beam_geometry_1d(&p, 4.0);
        assert_eq!(g.rayleigh_range, 4.0);
        assert_relative_eq!(g.width, 2.0 * 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(g.curvature_radius, Extended::Finite(-8.0));
    }

    #[test]
    fn geometry_is_even_and_monotone() {
        let p = unit();
        let mut last = 0.0;
        for k in 0..50 {
            let z = k as f64 * 0.1;
            let g = beam_geometry_1d(&p, z);
            assert_eq!(g.width, beam_geometry_1d(&p, -z).width);
            assert!(g.width > last);
            last = g.width;
            assert!(g.guoy_phase > -PI / 2.0 && g.guoy_phase <= 0.0);
        }
    }

    #[test]
    fn gsm_rayleigh_range_examples() {
        let coherent = GsmParams::new(1.0, 1.0, Extended::Infinite, 1.0).unwrap();
        assert_eq!(gsm_rayleigh_range(&coherent), 0.5);
        let p = GsmParams::new(1.0, 1.0, Extended::Finite(1.0), 1.0).unwrap();
        assert_relative_eq!(
            gsm_rayleigh_range(&p),
            1.0 / (2.0 * 2f64.sqrt()),
            max_relative = 1e-15
        );
        let p = GsmParams::new(1.0, 2.0, Extended::Finite(1.0), 1.0).unwrap();
        assert_relative_eq!(
            gsm_rayleigh_range(&p),
            2.0 / 5f64.sqrt(),
            max_relative = 1e-15
        );
        assert!(
            gsm_rayleigh_range(&p)
                < beam_geometry_1d(&BeamParams1D::new(1.0, 2.0, 1.0).unwrap(), 0.0).rayleigh_range
        );
    }

    #[test]
    fn gsm_dual_sqrt2_law() {
        let p = GsmParams::new(1.0, 1.0, Extended::Finite(1.0), 1.0).unwrap();
        let g = gsm_geometry(&p, gsm_rayleigh_range(&p));
        assert_relative_eq!(g.width, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            g.coherence_length.as_finite().unwrap(),
            2f64.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn gsm_diagonal_at_waist() {
        let p = GsmParams::new(2.0, 1.3, Extended::Finite(0.4), 0.3).unwrap();
        for &x in &[-1.0, 0.0, 0.25, 2.0] {
            let g = gsm_gamma(&p, x, x, 0.0);
            let expected = (4.0 / (PI * 1.69)).sqrt() * (-2.0 * x * x / 1.69).exp();
            assert_eq!(g.im, 0.0);
            assert_relative_eq!(g.re, expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn gsm_is_hermitian() {
        let p = GsmParams::new(1.0, 1.0, Extended::Finite(2.0), 1.0).unwrap();
        let a = gsm_gamma(&p, 0.3, -0.1, 1.0);
        let b = gsm_gamma(&p, -0.1, 0.3, 1.0);
        assert_relative_eq!(a.re, b.re, max_relative = 1e-15);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-15);
    }

    #[test]
    fn coherent_limit_factorizes() {
        let beam = BeamParams1D::new(1.5, 0.8, 0.4).unwrap();
        let p = GsmParams::coherent(beam);
        for &(x, xp, z) in &[(0.1, 0.5, 0.0), (-0.3, 0.9, 1.7), (1.2, -1.1, -0.6)] {
            let g = gsm_gamma(&p, x, xp, z);
            let f = coherent_amplitude_1d(&beam, x, z) * coherent_amplitude_1d(&beam, xp, z).conj();
            assert_relative_eq!(g.re, f.re, epsilon = 1e-15, max_relative = 1e-13);
            assert_relative_eq!(g.im, f.im, epsilon = 1e-15, max_relative = 1e-13);
        }
    }

    #[test]
    fn elliptic_origin_and_product() {
        let p = BeamParams2D::new(2.0, 3.0, 2.0, 1.0, 1.0).unwrap();
        let a = elliptic_amplitude_2d(&p, 0.0, 0.0, 0.0);
        let expected = (4.0 * 6.0 / (PI * PI * 4.0)).powf(0.25);
        assert_relative_eq!(a.re, expected, max_relative = 1e-15);
        assert_eq!(a.im, 0.0);
        let v = elliptic_amplitude_2d(&p, 0.4, -0.7, 2.2);
        let w = coherent_amplitude_1d(&p.axis_x(), 0.4, 2.2)
            * coherent_amplitude_1d(&p.axis_y(), -0.7, 2.2);
        assert_eq!(v, w);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(BeamParams1D::new(1.0, 0.0, 1.0).is_err());
        assert!(BeamParams1D::new(1.0, 1.0, f64::NAN).is_err());
        assert!(GsmParams::new(1.0, 1.0, Extended::Finite(-1.0), 1.0).is_err());
        assert!(BeamParams2D::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
    }
}
