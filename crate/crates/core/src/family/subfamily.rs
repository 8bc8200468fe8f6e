use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::agsm::{AgsmParams, TwoPointFunction2D};
use super::separability::{uncertainty_check, PhysicalityVerdict};
use super::VarianceMatrix;
use crate::error::ParamError;
use crate::extended::Extended;

/// Parameters of a twisted Gaussian Schell-model beam.
///
/// Unphysical parameter sets (`|u| > λ̄/δ²`) are representable on purpose;
/// physicality is queried with [`tgsm_physicality`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TgsmParams {
    pub intensity: f64,
    pub width: f64,
    pub coherence_length: Extended,
    pub curvature_radius: Extended,
    pub twist: f64,
    pub lambda_bar: f64,
}

/// Parameters of a "curv" beam: same `L` and `M` as the twisted beams but a
/// symmetric traceless phase matrix `K = -uσ₁ - σ₃/R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvParams {
    pub intensity: f64,
    pub width: f64,
    pub coherence_length: Extended,
    pub curvature_radius: Extended,
    pub twist: f64,
    pub lambda_bar: f64,
}

fn validate_fields(
    intensity: f64,
    width: f64,
    coherence_length: Extended,
    curvature_radius: Extended,
    twist: f64,
    lambda_bar: f64,
) -> Result<(), ParamError> {
    ParamError::check_positive("intensity", intensity)?;
    ParamError::check_positive("width", width)?;
    if let Extended::Finite(delta) = coherence_length {
        ParamError::check_positive("coherence_length", delta)?;
    }
    if let Extended::Finite(r) = curvature_radius {
        ParamError::check_nonzero("curvature_radius", r)?;
    }
    ParamError::check_finite("twist", twist)?;
    ParamError::check_positive("lambda_bar", lambda_bar)
}

macro_rules! subfamily_common {
    ($t:ident, $twin:ident) => {
        impl $t {
            pub fn new(
                intensity: f64,
                width: f64,
                coherence_length: Extended,
                curvature_radius: Extended,
                twist: f64,
                lambda_bar: f64,
            ) -> Result<Self, ParamError> {
                validate_fields(
                    intensity,
                    width,
                    coherence_length,
                    curvature_radius,
                    twist,
                    lambda_bar,
                )?;
                Ok($t {
                    intensity,
                    width,
                    coherence_length,
                    curvature_radius,
                    twist,
                    lambda_bar,
                })
            }

            pub fn validate(&self) -> Result<(), ParamError> {
                validate_fields(
                    self.intensity,
                    self.width,
                    self.coherence_length,
                    self.curvature_radius,
                    self.twist,
                    self.lambda_bar,
                )
            }

            /// The partner family with identical parameters.
            pub fn twin(&self) -> $twin {
                $twin {
                    intensity: self.intensity,
                    width: self.width,
                    coherence_length: self.coherence_length,
                    curvature_radius: self.curvature_radius,
                    twist: self.twist,
                    lambda_bar: self.lambda_bar,
                }
            }

            /// `λ̄/δ²`, zero for a fully coherent beam.
            pub fn twist_bound(&self) -> f64 {
                self.lambda_bar * self.coherence_length.recip_squared()
            }

            pub fn satisfies_twist_bound(&self) -> bool {
                self.twist.abs() <= self.twist_bound()
            }

            fn l_matrix(&self) -> Matrix2<f64> {
                Matrix2::identity() * (4.0 / (self.width * self.width))
            }

            fn m_matrix(&self) -> Matrix2<f64> {
                Matrix2::identity() * self.coherence_length.recip_squared()
            }

            fn abcd(&self, b_sign: f64) -> AbcdCoefficients {
                let a = self.width * self.width / 4.0;
                let inv_r = self.curvature_radius.recip();
                let u = self.twist;
                let lb = self.lambda_bar;
                AbcdCoefficients {
                    a,
                    b: b_sign * (a * inv_r),
                    c: u * a,
                    d: lb
                        * lb
                        * (1.0 / (self.width * self.width) + self.coherence_length.recip_squared())
                        + a * (u * u + inv_r * inv_r),
                }
            }

            fn prefactor(&self) -> f64 {
                2.0 * self.intensity / (PI * self.width * self.width)
            }

            fn common_exponent(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> f64 {
                let r2 = rho[0] * rho[0] + rho[1] * rho[1];
                let rp2 = rho_prime[0] * rho_prime[0] + rho_prime[1] * rho_prime[1];
                let dx = rho[0] - rho_prime[0];
                let dy = rho[1] - rho_prime[1];
                -(r2 + rp2) / (self.width * self.width)
                    - (dx * dx + dy * dy) * self.coherence_length.recip_squared() / 2.0
            }
        }
    };
}

subfamily_common!(TgsmParams, CurvParams);
subfamily_common!(CurvParams, TgsmParams);

impl TgsmParams {
    /// `L = 4/w² 𝕀`, `M = 1/δ² 𝕀`, `K = 𝕀/R + iuσ₂`.
    pub fn to_agsm(&self) -> AgsmParams {
        let inv_r = self.curvature_radius.recip();
        let u = self.twist;
        AgsmParams {
            intensity: self.intensity,
            l: self.l_matrix(),
            m: self.m_matrix(),
            k: Matrix2::new(inv_r, u, -u, inv_r),
            lambda_bar: self.lambda_bar,
        }
    }

    pub fn abcd_coefficients(&self) -> AbcdCoefficients {
        self.abcd(-1.0)
    }
}

impl CurvParams {
    /// `L = 4/w² 𝕀`, `M = 1/δ² 𝕀`, `K = -uσ₁ - σ₃/R`.
    pub fn to_agsm(&self) -> AgsmParams {
        let inv_r = self.curvature_radius.recip();
        let u = self.twist;
        let sigma_1 = Matrix2::new(0.0, 1.0, 1.0, 0.0);
        let sigma_3 = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        AgsmParams {
            intensity: self.intensity,
            l: self.l_matrix(),
            m: self.m_matrix(),
            k: -(sigma_1 * u) - sigma_3 * inv_r,
            lambda_bar: self.lambda_bar,
        }
    }

    pub fn abcd_coefficients(&self) -> AbcdCoefficients {
        self.abcd(1.0)
    }
}

impl TwoPointFunction2D for TgsmParams {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
        let (x, y) = (rho[0], rho[1]);
        let (xp, yp) = (rho_prime[0], rho_prime[1]);
        let lb = self.lambda_bar;
        let r2 = x * x + y * y;
        let rp2 = xp * xp + yp * yp;
        let phase = -(r2 - rp2) * self.curvature_radius.recip() / (2.0 * lb)
            - self.twist * (x * yp - y * xp) / lb;
        self.prefactor() * Complex64::new(self.common_exponent(rho, rho_prime), phase).exp()
    }
}

impl TwoPointFunction2D for CurvParams {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
        let (x, y) = (rho[0], rho[1]);
        let (xp, yp) = (rho_prime[0], rho_prime[1]);
        let lb = self.lambda_bar;
        let phase = (x * x - y * y - xp * xp + yp * yp) * self.curvature_radius.recip()
            / (2.0 * lb)
            + self.twist * (x * y - xp * yp) / lb;
        self.prefactor() * Complex64::new(self.common_exponent(rho, rho_prime), phase).exp()
    }
}

/// The four distinct entries of a TGSM or curv variance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcdCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub fn tgsm_variance(p: &TgsmParams) -> (VarianceMatrix, AbcdCoefficients) {
    let k = p.abcd_coefficients();
    let (a, b, c, d) = (k.a, k.b, k.c, k.d);
    #[rustfmt::skip]
    let v = Matrix4::new(
        a,   0.0, b,   c,
        0.0, a,   -c,  b,
        b,   -c,  d,   0.0,
        c,   b,   0.0, d,
    );
    (VarianceMatrix::new(v, p.lambda_bar), k)
}

pub fn curv_variance(p: &CurvParams) -> (VarianceMatrix, AbcdCoefficients) {
    let k = p.abcd_coefficients();
    let (a, b, c, d) = (k.a, k.b, k.c, k.d);
    #[rustfmt::skip]
    let v = Matrix4::new(
        a,   0.0, b,   c,
        0.0, a,   c,   -b,
        b,   c,   d,   0.0,
        c,   -b,  0.0, d,
    );
    (VarianceMatrix::new(v, p.lambda_bar), k)
}

/// Roots of `(a-μ)(d-μ) = x`, larger root first. The smaller one is taken
/// from the product of roots to avoid cancellation near zero.
fn quadratic_pair(a: f64, d: f64, x: f64) -> (f64, f64) {
    let disc = ((a - d) * (a - d) + 4.0 * x).sqrt();
    let upper = 0.5 * (a + d + disc);
    let lower = if upper != 0.0 {
        (a * d - x) / upper
    } else {
        0.5 * (a + d - disc)
    };
    (upper, lower)
}

fn sorted(mut mu: [f64; 4]) -> [f64; 4] {
    mu.sort_by(f64::total_cmp);
    mu
}

/// Closed-form eigenvalues of `V + (i/2)λ̄β` for a TGSM variance matrix,
/// ascending: `2μ = a + d ± {(a-d)² + 4(b² + c² + λ̄²/4 ± λ̄c)}^{1/2}`.
pub fn tgsm_eigenvalues(k: &AbcdCoefficients, lambda_bar: f64) -> [f64; 4] {
    let base = k.b * k.b + k.c * k.c + lambda_bar * lambda_bar / 4.0;
    let (p1, m1) = quadratic_pair(k.a, k.d, base + lambda_bar * k.c);
    let (p2, m2) = quadratic_pair(k.a, k.d, base - lambda_bar * k.c);
    sorted([p1, m1, p2, m2])
}

/// Closed-form eigenvalues for a curv variance matrix; each appears twice.
pub fn curv_eigenvalues(k: &AbcdCoefficients, lambda_bar: f64) -> [f64; 4] {
    let x = k.b * k.b + k.c * k.c + lambda_bar * lambda_bar / 4.0;
    let (p, m) = quadratic_pair(k.a, k.d, x);
    sorted([p, p, m, m])
}

/// Physicality of a TGSM beam via the uncertainty principle. Agrees with
/// [`TgsmParams::satisfies_twist_bound`].
pub fn tgsm_physicality(p: &TgsmParams) -> PhysicalityVerdict {
    uncertainty_check(&tgsm_variance(p).0)
}
