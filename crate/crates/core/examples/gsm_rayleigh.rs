//! A partially coherent (GSM) beam diverges faster than the coherent beam of
//! the same waist: its Rayleigh range shrinks with the coherence length, and
//! width and coherence length both grow by √2 over it.
//!
//! ```text
//! cargo run --release --example gsm_rayleigh
//! ```

use beamlab::beams::{gsm_gamma, gsm_geometry, gsm_rayleigh_range, BeamParams1D, GsmParams};
use beamlab::oracle::{fit_gsm_kernel, propagate_kernel_1d, Grid1D, KernelGrid};
use beamlab::Extended;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coherent = BeamParams1D::new(1.0, 1.0, 1.0)?;
    println!("coherent z_R = {}", coherent.rayleigh_range());
    for delta in [4.0, 2.0, 1.0, 0.5] {
        let p = GsmParams::new(1.0, 1.0, Extended::Finite(delta), 1.0)?;
        println!("delta = {delta:<4} z_R = {:.6}", gsm_rayleigh_range(&p));
    }

    let p = GsmParams::new(1.0, 1.0, Extended::Finite(1.0), 1.0)?;
    let z_r = gsm_rayleigh_range(&p);
    let grid = Grid1D::new(512, 8.0 * 2f64.sqrt())?;
    let k0 = KernelGrid::sample(grid, |x, xp| gsm_gamma(&p, x, xp, 0.0));
    let k = propagate_kernel_1d(&k0, z_r, p.lambda_bar)?;
    let (before, after) = (fit_gsm_kernel(&k0), fit_gsm_kernel(&k));
    let closed = gsm_geometry(&p, z_r);
    println!("\nafter one Rayleigh range (closed form / fitted from the propagated kernel):");
    println!(
        "  width            {:.8} / {:.8}",
        closed.width, after.width
    );
    println!(
        "  coherence length {} / {}",
        closed.coherence_length, after.coherence_length
    );
    println!("  width growth     {:.8}", after.width / before.width);
    Ok(())
}
