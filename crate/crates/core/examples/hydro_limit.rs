//! Compare the kinetic field with the Euler-Poisson (Klein-Gordon) field for
//! long-wave data and estimate the convergence rate in ε.
//!
//! ```bash
//! cargo run --release --example hydro_limit
//! ```

use landau::dispersion::Dispersion;
use landau::hydro::{hydro_slope_scan, HydroOptions};
use landau::model::{DatumKind, InitialDatum};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let datum = InitialDatum::unit(DatumKind::GaussianRing);
    let scan = hydro_slope_scan(&disp, &[0.2, 0.1, 0.05], 1.0, 3.0, &datum, &HydroOptions::default())?;
    for row in &scan.rows {
        println!("eps = {:<5} error {:.4e} (reference {:.4e})", row.epsilon, row.error, row.reference);
    }
    println!("error ~ eps^{:.3} (r2 {:.5})", scan.slope, scan.r2);
    Ok(())
}
