//! Projected-width entanglement witness for elliptic coherent beams.
//!
//! An elliptic beam written in a frame rotated by `θ` away from its
//! principal axes no longer factors into a function of `x'` times a function
//! of `y'`. Tracing out `y'` leaves a one-dimensional GSM beam whose
//! coherence length is finite exactly when the 2D amplitude is entangled in
//! the rotated variables, and that coherence length can be read off from how
//! the projected width `w'(z)` grows with `z`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beams::{beam_geometry_1d, BeamParams2D};
use crate::extended::Extended;

/// Fitted `w'(0)²/δ²` above which a width scan is declared entangled.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-6;

// Angles this close to 0 or π/2 are snapped onto the axis.
const AXIS_SNAP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("width scan needs at least 3 distinct z samples, got {0}")]
    TooFewSamples(usize),
    #[error("width scan must include the waist plane z = 0")]
    MissingWaistSample,
    #[error("width scan has {z} z samples but {widths} widths")]
    LengthMismatch { z: usize, widths: usize },
    #[error("width samples are degenerate: {0}")]
    DegenerateSamples(&'static str),
}

/// Anti-clockwise rotation angle of the measurement frame, canonicalized to
/// `[0, π)` since every projected quantity is π-periodic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct RotationAngle(f64);

impl RotationAngle {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        if t < AXIS_SNAP || PI - t < AXIS_SNAP {
            t = 0.0;
        } else if (t - FRAC_PI_2).abs() < AXIS_SNAP {
            t = FRAC_PI_2;
        }
        RotationAngle(t)
    }

    pub fn radians(&self) -> f64 {
        self.0
    }

    /// `(sin θ, cos θ)`, exact on the axes.
    pub fn sin_cos(&self) -> (f64, f64) {
        if self.0 == 0.0 {
            (0.0, 1.0)
        } else if self.0 == FRAC_PI_2 {
            (1.0, 0.0)
        } else {
            self.0.sin_cos()
        }
    }

    /// `|sin 2θ|`.
    pub fn abs_sin_double(&self) -> f64 {
        let (s, c) = self.sin_cos();
        (2.0 * s * c).abs()
    }

    pub fn is_axis_aligned(&self) -> bool {
        self.0 == 0.0 || self.0 == FRAC_PI_2
    }
}

impl From<f64> for RotationAngle {
    fn from(theta: f64) -> Self {
        RotationAngle::new(theta)
    }
}

impl From<RotationAngle> for f64 {
    fn from(theta: RotationAngle) -> f64 {
        theta.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub projected_waist: f64,
    pub effective_coherence_ratio: f64,
    pub effective_delta: Extended,
    pub entangled: bool,
}

impl WitnessReport {
    fn from_ratio(projected_waist: f64, ratio: f64) -> Self {
        WitnessReport {
            projected_waist,
            effective_coherence_ratio: ratio,
            effective_delta: if ratio > 0.0 {
                Extended::Finite(projected_waist / ratio)
            } else {
                Extended::Infinite
            },
            entangled: ratio > 0.0,
        }
    }
}

/// Gaussian parameters of one principal axis at distance `z`:
/// `ψ(s; z) = amplitude · exp(-alpha s²)`.
fn axis_gaussian(intensity: f64, width: f64, lambda_bar: f64, z: f64) -> (Complex64, Complex64) {
    let w2 = width * width;
    let q = Complex64::new(w2, 2.0 * lambda_bar * z);
    let amplitude = (2.0 * intensity / (PI * w2)).powf(0.25) * (Complex64::from(w2) / q).sqrt();
    (amplitude, q.inv())
}

/// Reduced two-point function `Γ''(x', x''; z) = ∫ dy' Ψ'(x', y'; z) Ψ'(x'', y'; z)*`,
/// evaluated by completing the square in `y'`.
pub fn reduced_gamma(
    p: &BeamParams2D,
    theta: RotationAngle,
    x1: f64,
    x2: f64,
    z: f64,
) -> Complex64 {
    let (s, c) = theta.sin_cos();
    let (amp_x, alpha_x) = axis_gaussian(p.intensity_x, p.width_x, p.lambda_bar, z);
    let (amp_y, alpha_y) = axis_gaussian(p.intensity_y, p.width_y, p.lambda_bar, z);
    // Ψ' = amp · exp(-(A x'² + 2B x'y' + D y'²)) with x = x'c - y's, y = x's + y'c.
    let a = alpha_x * c * c + alpha_y * s * s;
    let b = (alpha_y - alpha_x) * s * c;
    let d = alpha_x * s * s + alpha_y * c * c;
    let norm = (amp_x * amp_y).norm_sqr();
    let quad = 2.0 * d.re;
    let linear = b * x1 + b.conj() * x2;
    let exponent = -a * x1 * x1 - a.conj() * x2 * x2 + linear * linear / quad;
    norm * (PI / quad).sqrt() * exponent.exp()
}

/// `w'(z) = (cos²θ w₁(z)² + sin²θ w₂(z)²)^{1/2}`.
pub fn projected_width(p: &BeamParams2D, theta: RotationAngle, z: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let w1 = beam_geometry_1d(&p.axis_x(), z).width;
    let w2 = beam_geometry_1d(&p.axis_y(), z).width;
    (c * c * w1 * w1 + s * s * w2 * w2).sqrt()
}

/// `w'(0)² (cos²θ/w₁² + sin²θ/w₂²) - 1`, the excess far-field divergence
/// of the projected beam, equal to `(w'(0)/δ)²`.
pub fn coherence_term(p: &BeamParams2D, theta: RotationAngle) -> f64 {
    let (s, c) = theta.sin_cos();
    let w0_sq = projected_width(p, theta, 0.0).powi(2);
    w0_sq * (c * c / (p.width_x * p.width_x) + s * s / (p.width_y * p.width_y)) - 1.0
}

/// `w'(0)/δ = |w₁² - w₂²| / (2 w₁ w₂) · |sin 2θ|`.
pub fn effective_coherence_ratio(p: &BeamParams2D, theta: RotationAngle) -> f64 {
    let (w1, w2) = (p.width_x, p.width_y);
    (w1 * w1 - w2 * w2).abs() / (2.0 * w1 * w2) * theta.abs_sin_double()
}

pub fn effective_gsm_parameters(p: &BeamParams2D, theta: RotationAngle) -> WitnessReport {
    let w0 = projected_width(p, theta, 0.0);
    let ratio = if p.width_x == p.width_y {
        0.0
    } else {
        effective_coherence_ratio(p, theta)
    };
    WitnessReport::from_ratio(w0, ratio)
}

/// Least-squares fit of `w'(z)² = w'(0)² + slope · z²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthFit {
    pub waist_width_sq: f64,
    pub slope: f64,
    /// Fitted `w'(0)²/δ²`; may come out slightly negative on noisy data.
    pub coherence_term: f64,
}

impl WidthFit {
    pub fn entangled(&self) -> bool {
        self.coherence_term > ENTANGLEMENT_THRESHOLD
    }

    /// Fitted coherence length, infinite when the fit does not clear the
    /// entanglement threshold.
    pub fn effective_delta(&self) -> Extended {
        if self.entangled() {
            Extended::Finite((self.waist_width_sq / self.coherence_term).sqrt())
        } else {
            Extended::Infinite
        }
    }

    pub fn report(&self) -> WitnessReport {
        let w0 = self.waist_width_sq.sqrt();
        if self.entangled() {
            WitnessReport::from_ratio(w0, self.coherence_term.sqrt())
        } else {
            WitnessReport::from_ratio(w0, 0.0)
        }
    }
}

fn check_samples(z: &[f64]) -> Result<(), WitnessError> {
    let mut sorted = z.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < 3 {
        return Err(WitnessError::TooFewSamples(sorted.len()));
    }
    if !z.contains(&0.0) {
        return Err(WitnessError::MissingWaistSample);
    }
    Ok(())
}

/// Fits measured projected widths against the GSM growth law
/// `(w'(z)/w'(0))² = 1 + (2λ̄z/w'(0)²)² (1 + w'(0)²/δ²)`, linear in `z²`.
pub fn fit_width_scan(
    z: &[f64],
    widths: &[f64],
    lambda_bar: f64,
) -> Result<WidthFit, WitnessError> {
    if z.len() != widths.len() {
        return Err(WitnessError::LengthMismatch {
            z: z.len(),
            widths: widths.len(),
        });
    }
    check_samples(z)?;
    if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(WitnessError::DegenerateSamples(
            "widths must be finite and positive",
        ));
    }
    let n = z.len() as f64;
    let xs: Vec<f64> = z.iter().map(|v| v * v).collect();
    let ys: Vec<f64> = widths.iter().map(|w| w * w).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(WitnessError::DegenerateSamples("all z² values coincide"));
    }
    let slope = sxy / sxx;
    let waist_width_sq = y_mean - slope * x_mean;
    if waist_width_sq <= 0.0 {
        return Err(WitnessError::DegenerateSamples(
            "fitted waist width is not positive",
        ));
    }
    let coherence_term = slope * waist_width_sq / (4.0 * lambda_bar * lambda_bar) - 1.0;
    Ok(WidthFit {
        waist_width_sq,
        slope,
        coherence_term,
    })
}

/// Recovers the witness from closed-form projected widths sampled at `z_samples`.
pub fn witness_via_width_scan(
    p: &BeamParams2D,
    theta: RotationAngle,
    z_samples: &[f64],
) -> Result<WitnessReport, WitnessError> {
    check_samples(z_samples)?;
    if p.width_x == p.width_y {
        return Ok(WitnessReport::from_ratio(p.width_x, 0.0));
    }
    let widths: Vec<f64> = z_samples
        .iter()
        .map(|&z| projected_width(p, theta, z))
        .collect();
    Ok(fit_width_scan(z_samples, &widths, p.lambda_bar)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    fn elliptic() -> BeamParams2D {
        BeamParams2D::with_widths(2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn angle_canonicalization() {
        assert_eq!(RotationAngle::new(PI).radians(), 0.0);
        assert_eq!(RotationAngle::new(-FRAC_PI_2).radians(), FRAC_PI_2);
        assert_relative_eq!(
            RotationAngle::new(-FRAC_PI_4).radians(),
            3.0 * FRAC_PI_4,
            max_relative = 1e-15
        );
        assert!(RotationAngle::new(3.0 * FRAC_PI_2).is_axis_aligned());
        assert_eq!(RotationAngle::new(FRAC_PI_2).abs_sin_double(), 0.0);
    }

    #[test]
    fn axis_projections() {
        let p = elliptic();
        for &z in &[0.0, 0.3, 2.5] {
            assert_relative_eq!(
                projected_width(&p, RotationAngle::new(0.0), z),
                beam_geometry_1d(&p.axis_x(), z).width,
                max_relative = 1e-15
            );
            assert_relative_eq!(
                projected_width(&p, RotationAngle::new(FRAC_PI_2), z),
                beam_geometry_1d(&p.axis_y(), z).width,
                max_relative = 1e-15
            );
        }
        assert_relative_eq!(
            projected_width(&p, RotationAngle::new(FRAC_PI_4), 0.0).powi(2),
            2.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn effective_parameters_examples() {
        let r = effective_gsm_parameters(&elliptic(), RotationAngle::new(FRAC_PI_4));
        assert_relative_eq!(r.effective_coherence_ratio, 0.75, max_relative = 1e-15);
        assert_relative_eq!(r.projected_waist, 2.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            r.effective_delta.as_finite().unwrap(),
            2.5f64.sqrt() / 0.75,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            r.effective_delta.as_finite().unwrap(),
            2.1081851067789197,
            max_relative = 1e-12
        );
        assert!(r.entangled);

        let r = effective_gsm_parameters(&elliptic(), RotationAngle::new(PI / 8.0));
        assert_relative_eq!(
            r.effective_coherence_ratio,
            0.75 * FRAC_PI_4.sin(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            r.effective_coherence_ratio,
            0.5303300858899106,
            max_relative = 1e-14
        );

        let iso = BeamParams2D::with_widths(1.3, 1.3, 0.5).unwrap();
        let r = effective_gsm_parameters(&iso, RotationAngle::new(0.7));
        assert_eq!(r.effective_coherence_ratio, 0.0);
        assert_eq!(r.effective_delta, Extended::Infinite);
        assert!(!r.entangled);

        for theta in [0.0, FRAC_PI_2] {
            let r = effective_gsm_parameters(&elliptic(), RotationAngle::new(theta));
            assert!(!r.entangled);
            assert_eq!(r.effective_delta, Extended::Infinite);
        }
    }

    #[test]
    fn coherence_term_identity() {
        let p = elliptic();
        for k in 0..40 {
            let theta = RotationAngle::new(k as f64 * 0.08);
            let ratio = effective_coherence_ratio(&p, theta);
            assert_relative_eq!(
                coherence_term(&p, theta),
                ratio * ratio,
                epsilon = 1e-14,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn reduced_gamma_axis_aligned_is_coherent() {
        let p = BeamParams2D::new(1.0, 4.0, 2.0, 1.0, 1.0).unwrap();
        let ax = p.axis_x();
        for &(x1, x2, z) in &[(0.0, 0.0, 0.0), (0.3, -0.8, 0.7), (1.1, 0.2, -2.0)] {
            let g = reduced_gamma(&p, RotationAngle::new(0.0), x1, x2, z);
            let f = crate::beams::coherent_amplitude_1d(&ax, x1, z)
                * crate::beams::coherent_amplitude_1d(&ax, x2, z).conj()
                * p.axis_y().total_power();
            assert_relative_eq!(g.re, f.re, epsilon = 1e-15, max_relative = 1e-13);
            assert_relative_eq!(g.im, f.im, epsilon = 1e-15, max_relative = 1e-13);
        }
    }

    #[test]
    fn width_scan_closed_loop() {
        let z = [0.0, 0.5, 1.0, 2.0, 4.0];
        let r = witness_via_width_scan(&elliptic(), RotationAngle::new(FRAC_PI_4), &z).unwrap();
        assert_relative_eq!(
            r.effective_delta.as_finite().unwrap(),
            2.5f64.sqrt() / 0.75,
            max_relative = 1e-9
        );
        assert!(r.entangled);

        let iso = BeamParams2D::with_widths(1.0, 1.0, 1.0).unwrap();
        let r = witness_via_width_scan(&iso, RotationAngle::new(1.0), &z).unwrap();
        assert!(!r.entangled);
    }

    #[test]
    fn width_scan_rejects_bad_samples() {
        let p = elliptic();
        let t = RotationAngle::new(0.3);
        assert_eq!(
            witness_via_width_scan(&p, t, &[0.0, 1.0]),
            Err(WitnessError::TooFewSamples(2))
        );
        assert_eq!(
            witness_via_width_scan(&p, t, &[1.0, 1.0, 1.0, 1.0]),
            Err(WitnessError::TooFewSamples(1))
        );
        assert_eq!(
            witness_via_width_scan(&p, t, &[1.0, 2.0, 3.0]),
            Err(WitnessError::MissingWaistSample)
        );
        assert!(fit_width_scan(&[0.0, 1.0, 2.0], &[1.0, 1.0], 1.0).is_err());
    }
}
