//! Propagates a coherent Gaussian numerically and compares the measured
//! width with the closed-form width law.
//!
//! ```text
//! cargo run --example coherent_propagation
//! ```

use beamlab::beams::{beam_geometry_1d, coherent_amplitude_1d, BeamParams1D};
use beamlab::oracle::{field_width, propagate_field_1d, Field1D, Grid1D};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let beam = BeamParams1D::new(1.0, 1.0, 1.0)?;
    let z_r = beam.rayleigh_range();
    let widest = beam_geometry_1d(&beam, 2.0 * z_r).width;
    let start = Field1D::sample(Grid1D::default_for(widest)?, |x| {
        coherent_amplitude_1d(&beam, x, 0.0)
    });

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>10}",
        "z", "w(z)", "numeric w", "R(z)", "guoy"
    );
    for step in 0..=4 {
        let z = 0.5 * step as f64 * z_r;
        let g = beam_geometry_1d(&beam, z);
        let numeric = field_width(&propagate_field_1d(&start, z, beam.lambda_bar)?);
        println!(
            "{z:>8.3} {:>12.9} {numeric:>12.9} {:>12} {:>10.6}",
            g.width,
            g.curvature_radius
                .as_finite()
                .map_or("inf".into(), |r| format!("{r:.6}")),
            g.guoy_phase + 0.0
        );
    }
    Ok(())
}
