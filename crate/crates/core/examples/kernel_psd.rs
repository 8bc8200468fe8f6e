//! Brute-force physicality: eigenvalues of the sampled two-point function
//! of a twisted beam go negative past the twist bound.
//!
//! ```text
//! cargo run --release --example kernel_psd
//! ```

use beamlab::family::TgsmParams;
use beamlab::oracle::{kernel_psd_check, Grid1D, KernelGrid2D};
use beamlab::Extended;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid1D::new(16, 2.5)?;
    println!("{:>5} {:>16} {:>6}", "u", "min/max eig", "psd");
    for u in [0.0, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0] {
        let p = TgsmParams::new(1.0, 1.0, Extended::Finite(1.0), Extended::Infinite, u, 1.0)?;
        let check = kernel_psd_check(&KernelGrid2D::sample(grid, grid, &p))?;
        println!(
            "{u:>5.2} {:>16.6e} {:>6}",
            check.min_eigenvalue_ratio, check.psd
        );
    }
    Ok(())
}
