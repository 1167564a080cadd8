//! Fit power-law decay exponents of the Landau-damped field and compare them
//! with free transport of the same datum.
//!
//! ```bash
//! cargo run --release --example decay_rates
//! ```

use landau::dispersion::Dispersion;
use landau::fields::{decompose_field, fit_decay_exponent, free_transport_decay, norm_series, Component, DecompositionOptions, NormKind};
use landau::model::{DatumKind, InitialDatum, RadialGrid, TimeGrid};
use landau::poles::{track_branch, NewtonOptions};

fn main() -> landau::Result<()> {
    let disp = Dispersion::default();
    let datum = InitialDatum::unit(DatumKind::ThermalShell);
    let grid = RadialGrid::panels(1e-3, 6.0, 0.7, 1.3, 0.03, 0.5, 12)?;
    let branch = track_branch(&disp, &grid, &NewtonOptions::default())?;
    let opts = DecompositionOptions { time: TimeGrid::new(100.0, 0.05)?, output_stride: 20, ..DecompositionOptions::default() };
    let dec = decompose_field(&disp, &datum, &branch, &grid, &opts)?;
    let window = (20.0, 100.0);
    for (c, kind) in [(Component::Ld, NormKind::L2 { sigma: 0.0 }), (Component::Ld, NormKind::Linf), (Component::Kg1, NormKind::L2 { sigma: 0.0 })] {
        let (t, v) = norm_series(&dec, c, kind, window)?;
        let fit = fit_decay_exponent(&t, &v, window)?;
        println!("{} {}: t^{:.3} (r2 {:.4})", c.name(), kind.name(), fit.exponent, fit.r2);
    }
    let times: Vec<f64> = (0..dec.output.len()).map(|n| dec.output.t(n)).filter(|&t| t >= window.0).collect();
    let ft = free_transport_decay(&datum, &grid, &times, window)?;
    println!("free transport l2: t^{:.3}, linf: t^{:.3}", ft.l2_fit.exponent, ft.linf_fit.exponent);
    Ok(())
}
