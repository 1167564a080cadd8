//! Solve the density Volterra equation for one wavenumber and read off the
//! Landau damping rate from the envelope.
//!
//! ```bash
//! cargo run --release --example volterra_density
//! ```

use landau::dispersion::Dispersion;
use landau::model::{DatumKind, InitialDatum, TimeGrid};
use landau::poles::{NewtonOptions, PoleBranch};
use landau::volterra::{fit_envelope_decay, solve_volterra_direct};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let datum = InitialDatum::unit(DatumKind::GaussianRing);
    let time = TimeGrid::new(60.0, 0.01)?;
    let kappas = [0.4, 0.5, 0.6];
    let branch = PoleBranch::track(&disp, &kappas, &NewtonOptions::default())?;
    for (kappa, node) in kappas.into_iter().zip(branch.nodes()) {
        let rho = solve_volterra_direct(disp.background(), &datum, kappa, &time)?;
        let fit = fit_envelope_decay(&rho, &time, (10.0, 60.0))?;
        println!("kappa = {kappa}: envelope rate {:.6}, pole rate {:.6} ({} peaks, r2 {:.6})", fit.rate, node.lambda, fit.n_peaks, fit.r2);
    }
    Ok(())
}
