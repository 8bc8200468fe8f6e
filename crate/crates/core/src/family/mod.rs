//! Anisotropic Gaussian Schell-model beams on optical phase space.
//!
//! A two-dimensional AGSM beam is fixed by its total intensity and three real
//! 2×2 matrices: `L` (intensity profile), `M` (partial coherence) and `K`
//! (phase). Its Wigner distribution is a centered Gaussian with a 4×4
//! variance matrix `V` over `ξ = (x, y, p_x, p_y)`, and the beam is physical
//! iff `V + (i/2)λ̄β ≥ 0`.
//!
//! Two four-parameter subfamilies share `L` and `M` and differ only in `K`:
//! the twisted (TGSM) beams, where `K` carries an antisymmetric twist, and
//! the "curv" beams, where `K` is symmetric traceless. The partial transpose
//! in `x` maps one onto the other, which is what ties the twist bound
//! `|u| ≤ λ̄/δ²` to entanglement of the curv beams.

mod agsm;
mod separability;
mod subfamily;

pub use agsm::{agsm_gamma, variance_from_lmk, AgsmParams, FamilyError, TwoPointFunction2D};
pub use separability::{
    classify_separability, partial_transpose_variance, separability_report, uncertainty_check,
    PartialTranspose, PhysicalityVerdict, SeparabilityReport, SeparabilityVerdict,
    PHYSICALITY_TOLERANCE,
};
pub use subfamily::{
    curv_eigenvalues, curv_variance, tgsm_eigenvalues, tgsm_physicality, tgsm_variance,
    AbcdCoefficients, CurvParams, TgsmParams,
};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

/// Real symmetric second-moment matrix over `(x, y, p_x, p_y)`, with the
/// momenta dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceMatrix {
    #[serde(with = "rows4")]
    pub v: Matrix4<f64>,
    pub lambda_bar: f64,
}

impl VarianceMatrix {
    pub fn new(v: Matrix4<f64>, lambda_bar: f64) -> Self {
        VarianceMatrix { v, lambda_bar }
    }

    pub fn asymmetry(&self) -> f64 {
        (self.v - self.v.transpose()).amax()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &VarianceMatrix) -> f64 {
        (self.v - other.v).amax()
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.v[(i, j)];
            }
        }
        out
    }
}

pub(crate) mod rows2 {
    use nalgebra::Matrix2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix2<f64>, s: S) -> Result<S::Ok, S::Error> {
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix2<f64>, D::Error> {
        let r = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok(Matrix2::new(r[0][0], r[0][1], r[1][0], r[1][1]))
    }
}

pub(crate) mod rows4 {
    use nalgebra::Matrix4;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix4<f64>, s: S) -> Result<S::Ok, S::Error> {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[(i, j)];
            }
        }
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix4<f64>, D::Error> {
        let r = <[[f64; 4]; 4]>::deserialize(d)?;
        Ok(Matrix4::from_fn(|i, j| r[i][j]))
    }
}
