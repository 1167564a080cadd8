//! Split the resolvent kernel into its pole part and the contour remainder
//! and check that the two add up to the direct solve.
//!
//! ```bash
//! cargo run --release --example resolvent_split
//! ```

use landau::dispersion::Dispersion;
use landau::model::TimeGrid;
use landau::poles::{NewtonOptions, PoleBranch};
use landau::resolvent::{kernel_traces, remainder_bound_fit, ContourQuadrature, ContourSpec};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let kappas = [0.1, 0.3, 0.5];
    let branch = PoleBranch::track(&disp, &kappas, &NewtonOptions::default())?;
    let time = TimeGrid::new(30.0, 0.01)?;
    let spec = ContourSpec::compact();
    for &kappa in &kappas {
        let node = branch.node_at(kappa)?;
        let tr = kernel_traces(&disp, node, &time, &spec)?;
        let worst = (0..time.len()).map(|n| (tr.direct[n] - tr.kg[n] - tr.rft[n]).abs()).fold(0.0, f64::max);
        println!("kappa = {kappa}: max |R_direct - R_KG - R_RFT| = {worst:.2e}");
    }
    let node = branch.node_at(0.1)?;
    let quad = ContourQuadrature::new(&disp, node, &spec, 0.01)?;
    let fit = remainder_bound_fit(&quad, 0.01)?;
    println!("remainder bound at kappa = 0.1: |R_RFT| <= {:.3} exp(-{:.3} kappa t)", fit.c, fit.lambda0);
    Ok(())
}
