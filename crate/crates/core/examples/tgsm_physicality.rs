//! Physicality of twisted beams: the uncertainty-matrix eigenvalues turn
//! negative once the twist exceeds λ̄/δ², while the "curv" partner family
//! stays physical for any twist.
//!
//! ```text
//! cargo run --example tgsm_physicality
//! ```

use beamlab::family::{
    curv_eigenvalues, curv_variance, tgsm_eigenvalues, tgsm_variance, uncertainty_check, TgsmParams,
};
use beamlab::Extended;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>5} {:>14} {:>9} {:>14} {:>9}",
        "u", "tgsm min eig", "physical", "curv min eig", "physical"
    );
    for i in 0..=8 {
        let u = 0.25 * i as f64;
        let t = TgsmParams::new(1.0, 1.0, Extended::Finite(1.0), Extended::Infinite, u, 1.0)?;
        let (tv, tk) = tgsm_variance(&t);
        let c = t.twin();
        let (cv, ck) = curv_variance(&c);
        println!(
            "{u:>5.2} {:>14.6e} {:>9} {:>14.6e} {:>9}",
            tgsm_eigenvalues(&tk, t.lambda_bar)[0],
            uncertainty_check(&tv).physical,
            curv_eigenvalues(&ck, c.lambda_bar)[0],
            uncertainty_check(&cv).physical
        );
    }
    Ok(())
}
