//! Evaluate the dispersion function with every available method at a few
//! points and compare them against the closed form.
//!
//! ```bash
//! cargo run --release --example dispersion_function
//! ```

use landau::dispersion::{AsymptoticOrder, Dispersion};
use num_complex::Complex64;

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    println!("{:>6} {:>22} {:>12} {:>12} {:>12}", "kappa", "z", "|L|", "quad err", "asym err");
    for kappa in [0.1, 0.5, 1.0, 2.0] {
        for z in [Complex64::new(0.5, 1.0), Complex64::new(0.0, 3.0), Complex64::new(0.2, -0.5)] {
            let closed = disp.eval(z, kappa)?.value;
            let quad = disp.eval_l_quadrature(z, kappa)?;
            let asym = disp.eval_l_asymptotic(z, kappa, AsymptoticOrder::Four)?;
            println!(
                "{kappa:>6} {:>22} {:>12.4e} {:>12.2e} {:>12.2e}",
                format!("{:.2}{:+.2}i", z.re, z.im),
                closed.norm(),
                (quad - closed).norm(),
                (asym - closed).norm()
            );
        }
    }
    // On the imaginary axis the boundary value from the Plemelj formula agrees
    // with the analytic continuation.
    let (omega, kappa) = (1.2, 0.4);
    let plemelj = disp.eval_l_plemelj(omega, kappa)?;
    let closed = disp.eval(Complex64::new(0.0, omega), kappa)?.value;
    println!("plemelj at omega = {omega}, kappa = {kappa}: {plemelj:.12}, closed form {closed:.12}");
    Ok(())
}
