//! Partial transposition maps the twisted family onto the curv family, so
//! one variance matrix decides both physicality and separability.
//!
//! ```text
//! cargo run --example partial_transpose
//! ```

use beamlab::family::{
    classify_separability, curv_variance, partial_transpose_variance, tgsm_variance, TgsmParams,
};
use beamlab::Extended;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = TgsmParams::new(
        1.0,
        1.0,
        Extended::Finite(1.0),
        Extended::Finite(2.0),
        0.7,
        1.0,
    )?;
    let (v, _) = tgsm_variance(&t);
    let transposed = partial_transpose_variance(&v);
    let (twin, _) = curv_variance(&t.twin());
    println!("tgsm variance:");
    for row in v.rows() {
        println!("  {row:>10.5?}");
    }
    println!(
        "partial transpose equals the curv variance: {}",
        transposed == twin
    );

    for u in [0.5, 1.0, 2.0] {
        let t = TgsmParams::new(1.0, 1.0, Extended::Finite(1.0), Extended::Infinite, u, 1.0)?;
        println!(
            "u = {u}: tgsm {:?}, curv {:?}",
            classify_separability(&tgsm_variance(&t).0),
            classify_separability(&curv_variance(&t.twin()).0)
        );
    }
    Ok(())
}
