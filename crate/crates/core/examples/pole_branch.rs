//! Track the Langmuir pole from long waves up to the split frequency, print a
//! few nodes and fit the Bohm-Gross law to the small-wavenumber part.
//!
//! ```bash
//! cargo run --release --example pole_branch
//! ```

use landau::dispersion::Dispersion;
use landau::model::RadialGrid;
use landau::poles::{bohm_gross_fit, lambda_flatness_check, track_branch, NewtonOptions};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let grid = RadialGrid::geometric(1e-3, 0.7, 200, 0.7)?;
    let branch = track_branch(&disp, &grid, &NewtonOptions::default())?;
    println!("{:>10} {:>14} {:>14} {:>12} {:>10}", "kappa", "Omega", "lambda", "log10 lam", "residual");
    for node in branch.nodes().iter().step_by(25) {
        println!("{:>10.5} {:>14.10} {:>14.6e} {:>12.3} {:>10.1e}", node.kappa, node.omega, node.lambda, node.log10_lambda, node.residual);
    }
    let fit = bohm_gross_fit(&branch, (0.05, 0.3))?;
    println!("Omega^2 ~ {:.5} + {:.4} kappa^2 (max residual {:.2e})", fit.c0, fit.c2, fit.max_residual);
    println!("with kappa^4 term: {:.6} + {:.4} kappa^2 + {:.3} kappa^4", fit.quartic_c0, fit.quartic_c2, fit.quartic_c4);
    for row in lambda_flatness_check(&branch, &[2, 4, 6])? {
        println!("sup lambda/kappa^{} over the lower half: 10^{:.1} at kappa = {:.4}", row.power, row.sup_log10_ratio, row.argmax_kappa);
    }
    let node = branch.solve_at(&disp, 0.3, &NewtonOptions::default())?;
    println!("residue coefficients at kappa = 0.3: A0 = {:.6}, A0+ + A0- = {:.6}", node.a_plus[0], node.a_sum(0));
    Ok(())
}
