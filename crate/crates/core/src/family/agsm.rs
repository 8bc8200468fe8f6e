use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{rows2, VarianceMatrix};
use crate::error::ParamError;

// Relative asymmetry tolerated in L and M.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("matrix {0} is not symmetric")]
    NotSymmetric(&'static str),
    #[error("matrix L is not positive definite")]
    LNotPositiveDefinite,
    #[error("matrix M is not positive semidefinite")]
    MNotPositiveSemidefinite,
    #[error("matrix L is singular")]
    SingularL,
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// A two-dimensional two-point function `Γ(ρ; ρ')`.
pub trait TwoPointFunction2D {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64;
}

impl<T: TwoPointFunction2D + ?Sized> TwoPointFunction2D for &T {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
        (**self).gamma(rho, rho_prime)
    }
}

/// The `(L, M, K)` triple plus intensity and reduced wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgsmParams {
    pub intensity: f64,
    #[serde(with = "rows2")]
    pub l: Matrix2<f64>,
    #[serde(with = "rows2")]
    pub m: Matrix2<f64>,
    #[serde(with = "rows2")]
    pub k: Matrix2<f64>,
    pub lambda_bar: f64,
}

fn is_symmetric(a: &Matrix2<f64>) -> bool {
    (a[(0, 1)] - a[(1, 0)]).abs() <= SYMMETRY_TOL * a.amax().max(f64::MIN_POSITIVE)
}

impl AgsmParams {
    pub fn new(
        intensity: f64,
        l: Matrix2<f64>,
        m: Matrix2<f64>,
        k: Matrix2<f64>,
        lambda_bar: f64,
    ) -> Result<Self, FamilyError> {
        let p = AgsmParams {
            intensity,
            l,
            m,
            k,
            lambda_bar,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks `Lᵀ = L > 0` and `Mᵀ = M ≥ 0`.
    pub fn validate(&self) -> Result<(), FamilyError> {
        ParamError::check_positive("intensity", self.intensity)?;
        ParamError::check_positive("lambda_bar", self.lambda_bar)?;
        for (name, mat) in [("L", &self.l), ("M", &self.m), ("K", &self.k)] {
            for x in mat.iter() {
                ParamError::check_finite(name, *x)?;
            }
        }
        if !is_symmetric(&self.l) {
            return Err(FamilyError::NotSymmetric("L"));
        }
        if !is_symmetric(&self.m) {
            return Err(FamilyError::NotSymmetric("M"));
        }
        let l = &self.l;
        if !(l[(0, 0)] > 0.0 && l.determinant() > 0.0) {
            return Err(FamilyError::LNotPositiveDefinite);
        }
        let m = &self.m;
        let scale = m.amax();
        let det_tol = 1e-14 * scale * scale;
        if m[(0, 0)] < 0.0 || m[(1, 1)] < 0.0 || m.determinant() < -det_tol {
            return Err(FamilyError::MNotPositiveSemidefinite);
        }
        Ok(())
    }
}

/// Evaluates `Γ(ρ; ρ') = (I/2π)(det L)^{1/2} exp{-¼ρᵀLρ - ¼ρ'ᵀLρ' - ½(ρ-ρ')ᵀM(ρ-ρ')
/// - (i/2λ̄)(ρ-ρ')ᵀK(ρ+ρ')}`.
pub fn agsm_gamma(p: &AgsmParams, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
    let r = Vector2::from(rho);
    let rp = Vector2::from(rho_prime);
    let diff = r - rp;
    let sum = r + rp;
    let re = -0.25 * r.dot(&(p.l * r)) - 0.25 * rp.dot(&(p.l * rp)) - 0.5 * diff.dot(&(p.m * diff));
    let im = -diff.dot(&(p.k * sum)) / (2.0 * p.lambda_bar);
    let prefactor = p.intensity / (2.0 * PI) * p.l.determinant().sqrt();
    prefactor * Complex64::new(re, im).exp()
}

impl TwoPointFunction2D for AgsmParams {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
        agsm_gamma(self, rho, rho_prime)
    }
}

/// Builds the phase-space variance matrix
///
/// ```text
/// V = ⎡ L⁻¹        -L⁻¹Kᵀ                 ⎤
///     ⎣ -KL⁻¹      KL⁻¹Kᵀ + λ̄²(L/4 + M)  ⎦
/// ```
pub fn variance_from_lmk(p: &AgsmParams) -> Result<VarianceMatrix, FamilyError> {
    let l_inv = p.l.try_inverse().ok_or(FamilyError::SingularL)?;
    let top_right = -(l_inv * p.k.transpose());
    let bottom_right =
        p.k * l_inv * p.k.transpose() + (p.l * 0.25 + p.m) * (p.lambda_bar * p.lambda_bar);
    let mut v = Matrix4::zeros();
    v.fixed_view_mut::<2, 2>(0, 0).copy_from(&l_inv);
    v.fixed_view_mut::<2, 2>(0, 2).copy_from(&top_right);
    v.fixed_view_mut::<2, 2>(2, 0)
        .copy_from(&top_right.transpose());
    v.fixed_view_mut::<2, 2>(2, 2).copy_from(&bottom_right);
    // L⁻¹ and the lower-right block are symmetric up to rounding; enforce it.
    let v = (v + v.transpose()) * 0.5;
    Ok(VarianceMatrix::new(v, p.lambda_bar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coherent_isotropic(w: f64) -> AgsmParams {
        AgsmParams::new(
            1.0,
            Matrix2::identity() * (4.0 / (w * w)),
            Matrix2::zeros(),
            Matrix2::zeros(),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn coherent_isotropic_factorizes() {
        let w = 1.3;
        let p = coherent_isotropic(w);
        // ψ(ρ) = (2/πw²)^{1/2} exp(-ρ²/w²) with I = 1.
        let psi = |r: [f64; 2]| {
            (2.0 / (PI * w * w)).sqrt() * (-(r[0] * r[0] + r[1] * r[1]) / (w * w)).exp()
        };
        for &(a, b) in &[
            ([0.0, 0.0], [0.0, 0.0]),
            ([0.3, -0.2], [1.0, 0.4]),
            ([-1.2, 0.7], [0.1, -0.9]),
        ] {
            let g = agsm_gamma(&p, a, b);
            assert_relative_eq!(g.re, psi(a) * psi(b), max_relative = 1e-14);
            assert_eq!(g.im, 0.0);
        }
    }

    #[test]
    fn variance_of_coherent_isotropic_beam() {
        let v = variance_from_lmk(&coherent_isotropic(1.0)).unwrap();
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.25, 0.25, 1.0, 1.0));
        assert!((v.v - expected).amax() < 1e-15);
    }

    #[test]
    fn validation() {
        let id = Matrix2::identity();
        let z = Matrix2::zeros();
        assert_eq!(
            AgsmParams::new(1.0, -id, z, z, 1.0).unwrap_err(),
            FamilyError::LNotPositiveDefinite
        );
        assert_eq!(
            AgsmParams::new(1.0, id, Matrix2::new(1.0, 0.0, 0.0, -0.1), z, 1.0).unwrap_err(),
            FamilyError::MNotPositiveSemidefinite
        );
        assert_eq!(
            AgsmParams::new(1.0, Matrix2::new(1.0, 0.2, 0.1, 1.0), z, z, 1.0).unwrap_err(),
            FamilyError::NotSymmetric("L")
        );
        assert!(AgsmParams::new(1.0, id, z, Matrix2::new(0.0, 3.0, -1.0, 2.0), 1.0).is_ok());
    }

    #[test]
    fn gamma_is_hermitian() {
        let p = AgsmParams::new(
            2.0,
            Matrix2::new(3.0, 0.5, 0.5, 2.0),
            Matrix2::new(1.0, -0.2, -0.2, 0.5),
            Matrix2::new(0.3, -0.7, 0.2, 0.1),
            0.8,
        )
        .unwrap();
        let a = agsm_gamma(&p, [0.2, -0.4], [0.9, 0.3]);
        let b = agsm_gamma(&p, [0.9, 0.3], [0.2, -0.4]);
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-14);
    }
}
