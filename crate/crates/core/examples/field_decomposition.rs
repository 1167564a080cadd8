//! Decompose the electric field of a localized perturbation into its two
//! Landau-damped and two Klein-Gordon components and print their L² norms.
//!
//! ```bash
//! cargo run --release --example field_decomposition
//! ```

use landau::dispersion::Dispersion;
use landau::fields::{decompose_field, DecompositionOptions};
use landau::model::{DatumKind, InitialDatum, RadialGrid, TimeGrid};
use landau::poles::{track_branch, NewtonOptions};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let datum = InitialDatum::unit(DatumKind::GaussianRing);
    let grid = RadialGrid::panels(1e-3, 4.0, 0.7, 1.3, 0.05, 0.5, 8)?;
    let branch = track_branch(&disp, &grid, &NewtonOptions::default())?;
    let opts = DecompositionOptions { time: TimeGrid::new(40.0, 0.05)?, output_stride: 100, ..DecompositionOptions::default() };
    let dec = decompose_field(&disp, &datum, &branch, &grid, &opts)?;
    let l2 = &dec.l2;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "LD1", "LD2", "KG1", "KG2");
    for n in (0..l2.time.len()).step_by(100) {
        println!("{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", l2.time.t(n), l2.ld1[n], l2.ld2[n], l2.kg1[n], l2.kg2[n]);
    }
    Ok(())
}
