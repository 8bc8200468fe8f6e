use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::agsm::TwoPointFunction2D;
use super::VarianceMatrix;

/// Relative floor for the smallest eigenvalue of `V + (i/2)λ̄β`, scaled by
/// the trace of that matrix.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityVerdict {
    pub physical: bool,
    pub min_eigenvalue: f64,
    /// Ascending, with multiplicity.
    pub eigenvalues: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeparabilityVerdict {
    Separable,
    Entangled,
    Unphysical,
}

/// Verdict plus the physicality checks it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub verdict: SeparabilityVerdict,
    pub physicality: PhysicalityVerdict,
    pub transposed_physicality: PhysicalityVerdict,
}

/// `β = [[0, 𝕀], [-𝕀, 0]]`.
fn beta() -> Matrix4<f64> {
    #[rustfmt::skip]
    let b = Matrix4::new(
        0.0,  0.0,  1.0, 0.0,
        0.0,  0.0,  0.0, 1.0,
        -1.0, 0.0,  0.0, 0.0,
        0.0,  -1.0, 0.0, 0.0,
    );
    b
}

/// The Hermitian matrix `V + (i/2)λ̄β`.
pub fn uncertainty_matrix(v: &VarianceMatrix) -> Matrix4<Complex64> {
    let b = beta();
    Matrix4::from_fn(|i, j| Complex64::new(v.v[(i, j)], 0.5 * v.lambda_bar * b[(i, j)]))
}

/// Optical uncertainty principle `V + (i/2)λ̄β ≥ 0`, decided from the four
/// eigenvalues of a general Hermitian eigensolve.
pub fn uncertainty_check(v: &VarianceMatrix) -> PhysicalityVerdict {
    let h = uncertainty_matrix(v);
    let ev = h.symmetric_eigenvalues();
    let mut eigenvalues = [ev[0], ev[1], ev[2], ev[3]];
    eigenvalues.sort_by(f64::total_cmp);
    let trace = v.v.trace();
    let min_eigenvalue = eigenvalues[0];
    PhysicalityVerdict {
        physical: min_eigenvalue >= -PHYSICALITY_TOLERANCE * trace.abs(),
        min_eigenvalue,
        eigenvalues,
    }
}

/// Partial transpose in `x` at the level of the variance matrix: `ΛVΛ` with
/// `Λ = diag(1, 1, -1, 1)`, which reverses the `x` momentum.
pub fn partial_transpose_variance(v: &VarianceMatrix) -> VarianceMatrix {
    let mut out = v.v;
    for j in 0..4 {
        if j != 2 {
            out[(2, j)] = -out[(2, j)];
            out[(j, 2)] = -out[(j, 2)];
        }
    }
    VarianceMatrix::new(out, v.lambda_bar)
}

pub fn separability_report(v: &VarianceMatrix) -> SeparabilityReport {
    let physicality = uncertainty_check(v);
    let transposed_physicality = uncertainty_check(&partial_transpose_variance(v));
    let verdict = if !physicality.physical {
        SeparabilityVerdict::Unphysical
    } else if !transposed_physicality.physical {
        SeparabilityVerdict::Entangled
    } else {
        SeparabilityVerdict::Separable
    };
    SeparabilityReport {
        verdict,
        physicality,
        transposed_physicality,
    }
}

/// Gaussian partial-transpose criterion: a physical beam is separable iff
/// its partial transpose is physical.
pub fn classify_separability(v: &VarianceMatrix) -> SeparabilityVerdict {
    separability_report(v).verdict
}

/// `Γ̃(x, y; x', y') = Γ(x', y; x, y')`, the partial transpose in `x` of a
/// two-point function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialTranspose<G>(pub G);

impl<G: TwoPointFunction2D> TwoPointFunction2D for PartialTranspose<G> {
    fn gamma(&self, rho: [f64; 2], rho_prime: [f64; 2]) -> Complex64 {
        self.0.gamma([rho_prime[0], rho[1]], [rho[0], rho_prime[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::Extended;
    use crate::family::{curv_variance, tgsm_variance, CurvParams, TgsmParams};
    use approx::assert_relative_eq;
    use nalgebra::Vector4;

    #[test]
    fn coherent_diagonal_is_physical() {
        let v = VarianceMatrix::new(
            Matrix4::from_diagonal(&Vector4::new(0.25, 0.25, 1.0, 1.0)),
            1.0,
        );
        let verdict = uncertainty_check(&v);
        // 2×2 blocks [[1/4, i/2], [-i/2, 1]] have eigenvalues 5/8 ± √(9/64 + 1/4).
        let s = (9.0f64 / 64.0 + 0.25).sqrt();
        assert_relative_eq!(verdict.eigenvalues[0], 0.625 - s, max_relative = 1e-12);
        assert_relative_eq!(verdict.eigenvalues[1], 0.625 - s, max_relative = 1e-12);
        assert_relative_eq!(verdict.eigenvalues[3], 0.625 + s, max_relative = 1e-12);
        assert!(verdict.min_eigenvalue.abs() < 1e-14);
        assert!(verdict.physical);
    }

    #[test]
    fn small_diagonal_is_unphysical() {
        let eps = 0.3;
        let v = VarianceMatrix::new(Matrix4::identity() * eps, 1.0);
        let verdict = uncertainty_check(&v);
        assert!(!verdict.physical);
        assert_relative_eq!(verdict.min_eigenvalue, eps - 0.5, max_relative = 1e-12);
    }

    #[test]
    fn pt_of_diagonal_is_identity_and_involution() {
        let v = VarianceMatrix::new(
            Matrix4::from_diagonal(&Vector4::new(1.0, 2.0, 3.0, 4.0)),
            1.0,
        );
        assert_eq!(partial_transpose_variance(&v), v);
        let w = VarianceMatrix::new(Matrix4::from_fn(|i, j| (i + j) as f64 + 0.5), 0.7);
        assert_eq!(
            partial_transpose_variance(&partial_transpose_variance(&w)),
            w
        );
    }

    #[test]
    fn pt_maps_tgsm_onto_curv() {
        let p = TgsmParams::new(
            1.0,
            1.0,
            Extended::Finite(1.0),
            Extended::Finite(2.0),
            0.5,
            1.0,
        )
        .unwrap();
        let (vt, _) = tgsm_variance(&p);
        let (vc, _) = curv_variance(&p.twin());
        assert_eq!(partial_transpose_variance(&vt), vc);
        assert_eq!(partial_transpose_variance(&vc), vt);
    }

    #[test]
    fn classification_table() {
        let delta = Extended::Finite(1.0);
        let t = |u| TgsmParams::new(1.0, 1.0, delta, Extended::Infinite, u, 1.0).unwrap();
        let c = |u| CurvParams::new(1.0, 1.0, delta, Extended::Infinite, u, 1.0).unwrap();
        assert_eq!(
            classify_separability(&tgsm_variance(&t(0.5)).0),
            SeparabilityVerdict::Separable
        );
        assert_eq!(
            classify_separability(&curv_variance(&c(0.5)).0),
            SeparabilityVerdict::Separable
        );
        assert_eq!(
            classify_separability(&curv_variance(&c(2.0)).0),
            SeparabilityVerdict::Entangled
        );
        assert_eq!(
            classify_separability(&tgsm_variance(&t(2.0)).0),
            SeparabilityVerdict::Unphysical
        );
    }

    #[test]
    fn kernel_pt_maps_curv_onto_tgsm() {
        let q = CurvParams::new(
            1.5,
            0.9,
            Extended::Finite(0.7),
            Extended::Finite(-1.4),
            0.8,
            0.6,
        )
        .unwrap();
        let pt = PartialTranspose(q);
        let t = q.twin();
        for &(a, b) in &[([0.1, 0.2], [-0.3, 0.5]), ([1.0, -0.4], [0.2, 0.9])] {
            let x = pt.gamma(a, b);
            let y = t.gamma(a, b);
            assert_relative_eq!(x.re, y.re, epsilon = 1e-15, max_relative = 1e-13);
            assert_relative_eq!(x.im, y.im, epsilon = 1e-15, max_relative = 1e-13);
            let back = PartialTranspose(pt).gamma(a, b);
            assert_eq!(back, q.gamma(a, b));
        }
    }
}
