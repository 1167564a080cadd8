//! Follow the Landau-damped part of the distribution in the moving frame and
//! print Cauchy differences between pairs of times, with and without the
//! field coupling.
//!
//! ```bash
//! cargo run --release --example scattering
//! ```

use landau::dispersion::Dispersion;
use landau::kinetic::{scattering_run, ScatteringOptions};
use landau::model::{DatumKind, InitialDatum, RadialGrid};
use landau::poles::{track_branch, NewtonOptions};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let datum = InitialDatum::unit(DatumKind::GaussianRing);
    let grid = RadialGrid::panels(1e-3, 4.0, 0.7, 1.3, 0.1, 1.0, 4)?;
    let branch = track_branch(&disp, &grid, &NewtonOptions::default())?;
    for coupling in [true, false] {
        let opts = ScatteringOptions { coupling, ..ScatteringOptions::default() };
        let report = scattering_run(&disp, &datum, &branch, &grid, &opts)?;
        for row in &report.rows {
            println!("coupling {coupling:<5} D({}, {}) = {:.4e} (g3 {:.3e}, rest {:.3e})", row.t1, row.t2, row.d, row.d_g3, row.d_rest);
        }
    }
    Ok(())
}
