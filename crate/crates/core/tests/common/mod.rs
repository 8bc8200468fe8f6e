//! Seeded parameter draws shared by the integration tests.
#![allow(dead_code)]

use beamlab::family::{AgsmParams, CurvParams, TgsmParams};
use beamlab::Extended;
use nalgebra::{Matrix2, Rotation2};
use rand::Rng;

/// Wide-range draw: δ and R are infinite one time in ten, the twist spans
/// three times the physical bound in either direction.
pub fn draw_tgsm(rng: &mut impl Rng) -> TgsmParams {
    let lambda_bar = rng.gen_range(0.1..2.0);
    let width = rng.gen_range(0.2..5.0);
    let delta = if rng.gen_bool(0.1) {
        Extended::Infinite
    } else {
        Extended::Finite(rng.gen_range(0.2..10.0))
    };
    let radius = if rng.gen_bool(0.1) {
        Extended::Infinite
    } else {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        Extended::Finite(sign * rng.gen_range(0.5..50.0))
    };
    let bound = lambda_bar * delta.recip_squared();
    let twist = if bound > 0.0 {
        bound * rng.gen_range(-3.0..3.0)
    } else {
        rng.gen_range(-1.0..1.0)
    };
    TgsmParams::new(1.0, width, delta, radius, twist, lambda_bar).unwrap()
}

pub fn draw_curv(rng: &mut impl Rng) -> CurvParams {
    draw_tgsm(rng).twin()
}

fn rotated_diag(rng: &mut impl Rng, a: f64, b: f64) -> Matrix2<f64> {
    let r = Rotation2::new(rng.gen_range(0.0..std::f64::consts::PI)).into_inner();
    r * Matrix2::new(a, 0.0, 0.0, b) * r.transpose()
}

/// AGSM draw with `L` eigenvalues in [2, 6], `M` eigenvalues in [0, 1] and
/// `K` entries in [-0.5, 0.5].
pub fn draw_agsm(rng: &mut impl Rng) -> AgsmParams {
    let (l1, l2) = (rng.gen_range(2.0..6.0), rng.gen_range(2.0..6.0));
    let l = rotated_diag(rng, l1, l2);
    let (m1, m2) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let m = rotated_diag(rng, m1, m2);
    let k = Matrix2::from_fn(|_, _| rng.gen_range(-0.5..0.5));
    AgsmParams::new(1.0, l, m, k, rng.gen_range(0.4..0.6)).unwrap()
}
