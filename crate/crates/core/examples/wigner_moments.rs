//! Second moments of the Wigner distribution of a sampled AGSM kernel
//! against the closed-form variance matrix.
//!
//! ```text
//! cargo run --release --example wigner_moments
//! ```

use beamlab::family::{variance_from_lmk, AgsmParams};
use beamlab::oracle::{phase_space_grids_for, wigner_moments, KernelGrid2D, PHASE_SPACE_POINTS};
use nalgebra::Matrix2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let l = Matrix2::new(4.0, 0.5, 0.5, 3.0);
    let m = Matrix2::new(0.6, 0.1, 0.1, 0.4);
    let k = Matrix2::new(0.2, -0.3, 0.1, -0.1);
    let p = AgsmParams::new(1.0, l, m, k, 0.5)?;
    let v = variance_from_lmk(&p)?;
    let (gx, gy) = phase_space_grids_for(&v, PHASE_SPACE_POINTS)?;
    let measured = wigner_moments(&KernelGrid2D::sample(gx, gy, &p), p.lambda_bar)?;
    println!("closed form:");
    for row in v.rows() {
        println!("  {row:>12.6?}");
    }
    println!("from the Wigner transform ({PHASE_SPACE_POINTS} points per axis):");
    for row in measured.rows() {
        println!("  {row:>12.6?}");
    }
    println!(
        "max entry error / norm = {:.2e}",
        measured.max_abs_diff(&v) / v.v.norm()
    );
    Ok(())
}
