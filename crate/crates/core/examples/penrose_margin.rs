//! Sample `|1 − L|` over the two stability regions and report the smallest
//! value found (a positive margin means no zero of the dispersion relation
//! there).
//!
//! ```bash
//! cargo run --release --example penrose_margin
//! ```

use landau::dispersion::{Dispersion, PenroseGrid, PenroseRegion};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let high = PenroseGrid { kappa_min: 0.7, kappa_max: 20.0, n_kappa: 40, re_max: 4.0, im_max: 6.0, n_re: 30, n_im: 60 };
    let w = disp.penrose_margin(PenroseRegion::HighFreq { nu0: 0.7, lambda: 0.1 }, &high)?;
    println!("high frequency: min |1-L| = {:.4e} at kappa = {:.3}, z = {:.3} ({} samples)", w.min, w.kappa, w.z, w.samples);
    let low = PenroseGrid { kappa_min: 1e-3, kappa_max: 0.7, n_kappa: 40, re_max: 2.0, im_max: 3.0, n_re: 30, n_im: 60 };
    let w = disp.penrose_margin(PenroseRegion::LowFreq { epsilon: 0.3, delta_prime: 0.05 }, &low)?;
    println!("low frequency:  min |1-L| = {:.4e} at kappa = {:.3}, z = {:.3} ({} samples)", w.min, w.kappa, w.z, w.samples);
    Ok(())
}
