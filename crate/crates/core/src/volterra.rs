//! Time-domain solvers for the density equation
//! `ρ̂(t) = G(κ, κt) + ∫₀ᵗ K(t−τ) ρ̂(τ) dτ`, `K(t) = −w0 t f̂⁰(κt)`,
//! and for the resolvent kernel `R = K + K∗R`, by the product trapezoid rule.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{free_transport_density, Background, InitialDatum, TimeGrid};
use crate::quad::{convolve_trapezoid, fit_line, local_maxima, parabolic_peak};

/// Kernel samples below this magnitude (past the kernel's peak) are dropped.
pub const KERNEL_CUTOFF: f64 = 1e-18;

/// Where a density trace came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Direct,
    ResolventReconstruction,
    DecompositionSum,
}

/// `ρ̂(t, κ)` on a uniform time grid for several wavenumbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDensity {
    pub time: TimeGrid,
    pub kappa: Vec<f64>,
    /// `rho[i][n]` is the value at `kappa[i]`, `t_n`.
    pub rho: Vec<Vec<Complex64>>,
    pub provenance: Provenance,
}

/// Samples of `K(t) = −w0 t f̂⁰(κt)` on the grid, truncated after the peak
/// once `|K|` falls below [`KERNEL_CUTOFF`].
pub fn density_kernel(bg: &dyn Background, kappa: f64, time: &TimeGrid) -> Vec<f64> {
    let w0 = bg.params().w0;
    let t_peak = 1.0 / (kappa * bg.params().v_th);
    let mut out = Vec::new();
    for n in 0..time.len() {
        let t = time.t(n);
        let k = -w0 * t * bg.fhat0(kappa * t);
        if t > t_peak && k.abs() < KERNEL_CUTOFF {
            break;
        }
        out.push(k);
    }
    out
}

/// Product-trapezoid march for `y(t) = f(t) + ∫₀ᵗ k(t−τ) y(τ) dτ` with a
/// real kernel `k` given on the first `kernel.len()` grid points (zero
/// beyond).
pub fn solve_convolution_volterra(kernel: &[f64], forcing: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n_pts = forcing.len();
    let m = kernel.len();
    let k = |i: usize| if i < m { kernel[i] } else { 0.0 };
    let diag = 1.0 - 0.5 * dt * k(0);
    let mut y: Vec<Complex64> = Vec::with_capacity(n_pts);
    if n_pts == 0 {
        return y;
    }
    y.push(forcing[0]);
    for n in 1..n_pts {
        let j_start = if n >= m { n + 1 - m } else { 1 };
        // Σ_{j = j_start}^{n−1} K_{n−j} y_j, two lanes per component.
        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        for (i, (kv, yv)) in kernel[1..=n - j_start].iter().rev().zip(&y[j_start..n]).enumerate() {
            re[i & 1] += kv * yv.re;
            im[i & 1] += kv * yv.im;
        }
        let s = Complex64::new(re[0] + re[1], im[0] + im[1]) + 0.5 * k(n) * y[0];
        y.push((forcing[n] + dt * s) / diag);
    }
    y
}

/// Direct solve of the density equation for one wavenumber.
pub fn solve_volterra_direct(bg: &dyn Background, datum: &InitialDatum, kappa: f64, time: &TimeGrid) -> Result<Vec<Complex64>> {
    check_kappa(kappa)?;
    let kernel = density_kernel(bg, kappa, time);
    let forcing: Vec<Complex64> = (0..time.len()).map(|n| free_transport_density(datum, kappa, time.t(n))).collect();
    Ok(solve_convolution_volterra(&kernel, &forcing, time.dt))
}

/// Direct solve of the resolvent equation `R = K + K∗R`.
pub fn solve_resolvent_direct(bg: &dyn Background, kappa: f64, time: &TimeGrid) -> Result<Vec<Complex64>> {
    check_kappa(kappa)?;
    let kernel = density_kernel(bg, kappa, time);
    let mut forcing = vec![Complex64::new(0.0, 0.0); time.len()];
    for (f, &k) in forcing.iter_mut().zip(&kernel) {
        *f = Complex64::new(k, 0.0);
    }
    Ok(solve_convolution_volterra(&kernel, &forcing, time.dt))
}

/// `ρ̂ = h + R∗h` with the trapezoid convolution.
pub fn reconstruct_density(forcing: &[Complex64], kernel_trace: &[Complex64], dt: f64) -> Result<Vec<Complex64>> {
    if forcing.len() != kernel_trace.len() {
        return Err(Error::config(
            "grid.t",
            format!("datum trace has {} samples but the kernel trace has {}", forcing.len(), kernel_trace.len()),
        ));
    }
    let conv = convolve_trapezoid(kernel_trace, forcing, dt);
    Ok(forcing.iter().zip(conv).map(|(h, c)| h + c).collect())
}

/// Richardson extrapolation of a second-order scheme: combines a solve on
/// `time` with one on the halved grid, `(4·fine − coarse)/3`, at the coarse
/// nodes.
pub fn richardson<F>(time: &TimeGrid, solve: F) -> Result<Vec<Complex64>>
where
    F: Fn(&TimeGrid) -> Result<Vec<Complex64>>,
{
    let coarse = solve(time)?;
    let fine = solve(&time.refined())?;
    Ok(coarse.iter().enumerate().map(|(n, c)| (4.0 * fine[2 * n] - c) / 3.0).collect())
}

/// Direct density solves for several wavenumbers in parallel, gathered in
/// input order.
pub fn solve_density_grid(bg: &dyn Background, datum: &InitialDatum, kappas: &[f64], time: &TimeGrid) -> Result<SpectralDensity> {
    let rho = kappas
        .par_iter()
        .map(|&k| solve_volterra_direct(bg, datum, k, time))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralDensity { time: *time, kappa: kappas.to_vec(), rho, provenance: Provenance::Direct })
}

/// Exponential envelope fit of an oscillating trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeFit {
    /// Decay rate `λ` in `|ρ| ~ C e^{−λt}`.
    pub rate: f64,
    pub r2: f64,
    pub n_peaks: usize,
}

/// Fits `ln|y|` at the local maxima of `|y|` inside `window` (peaks refined
/// by parabolic interpolation) against time. Peaks below
/// `1e-11·max|y|` are discarded as rounding noise.
pub fn fit_envelope_decay(trace: &[Complex64], time: &TimeGrid, window: (f64, f64)) -> Result<EnvelopeFit> {
    let mag: Vec<f64> = trace.iter().map(|v| v.norm()).collect();
    let floor = 1e-11 * mag.iter().cloned().fold(0.0, f64::max);
    let (mut ts, mut ls) = (Vec::new(), Vec::new());
    for i in local_maxima(&mag) {
        let t = time.t(i);
        if t < window.0 || t > window.1 || mag[i] <= floor {
            continue;
        }
        let (dt, val) = parabolic_peak(&mag, i, time.dt);
        ts.push(t + dt);
        ls.push(val.ln());
    }
    if ts.len() < 3 {
        return Err(Error::Fit(format!("only {} envelope peaks in window [{}, {}]", ts.len(), window.0, window.1)));
    }
    let fit = fit_line(&ts, &ls)?;
    Ok(EnvelopeFit { rate: -fit.slope, r2: fit.r2, n_peaks: ts.len() })
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Dispersion;
    use crate::model::{DatumKind, Maxwellian, PhysicalParams};
    use crate::poles::{find_pole, NewtonOptions};

    fn bg() -> Maxwellian {
        Maxwellian::default()
    }

    fn ring() -> InitialDatum {
        InitialDatum::unit(DatumKind::GaussianRing)
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn initial_value_and_zero_datum() {
        let tg = TimeGrid::new(5.0, 0.01).unwrap();
        let rho = solve_volterra_direct(&bg(), &ring(), 0.3, &tg).unwrap();
        assert_eq!(rho[0], ring().g(0.3, 0.0));
        let kernel = density_kernel(&bg(), 0.3, &tg);
        let zero = solve_convolution_volterra(&kernel, &vec![Complex64::new(0.0, 0.0); tg.len()], tg.dt);
        assert!(zero.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn resolvent_small_time_expansion() {
        let tg = TimeGrid::new(0.2, 0.001).unwrap();
        let r = richardson(&tg, |g| solve_resolvent_direct(&bg(), 0.5, g)).unwrap();
        assert_eq!(r[0], Complex64::new(0.0, 0.0));
        for n in [10, 50, 100, 200] {
            let t = tg.t(n);
            assert!((r[n].re + t).abs() < 2.0 * t.powi(3), "t={t}: {}", r[n]);
        }
    }

    #[test]
    fn both_solvers_are_second_order() {
        let tg = TimeGrid::new(10.0, 0.04).unwrap();
        let k = 0.4;
        let d = ring();
        let fine = TimeGrid::new(10.0, 0.0025).unwrap();
        // Max error at the coarse nodes against the 16x-refined solve.
        let err = |sol: &[Complex64], g: &TimeGrid, reference: &[Complex64]| {
            let stride = (g.len() - 1) / (tg.len() - 1);
            (0..tg.len()).map(|n| (sol[n * stride] - reference[n * 16]).norm()).fold(0.0, f64::max)
        };
        let reference = solve_volterra_direct(&bg(), &d, k, &fine).unwrap();
        let half = tg.refined();
        let e1 = err(&solve_volterra_direct(&bg(), &d, k, &tg).unwrap(), &tg, &reference);
        let e2 = err(&solve_volterra_direct(&bg(), &d, k, &half).unwrap(), &half, &reference);
        assert!(e1 / e2 >= 3.5, "density ratio {}", e1 / e2);

        let reference = solve_resolvent_direct(&bg(), k, &fine).unwrap();
        let r1 = err(&solve_resolvent_direct(&bg(), k, &tg).unwrap(), &tg, &reference);
        let r2 = err(&solve_resolvent_direct(&bg(), k, &half).unwrap(), &half, &reference);
        assert!(r1 / r2 >= 3.5, "kernel ratio {}", r1 / r2);
    }

    #[test]
    fn reconstruction_matches_direct_solve() {
        let tg = TimeGrid::new(50.0, 0.01).unwrap();
        let k = 0.3;
        let d = ring();
        let direct = richardson(&tg, |g| solve_volterra_direct(&bg(), &d, k, g)).unwrap();
        let recon = richardson(&tg, |g| {
            let r = solve_resolvent_direct(&bg(), k, g)?;
            let h: Vec<Complex64> = (0..g.len()).map(|n| d.g(k, k * g.t(n))).collect();
            reconstruct_density(&h, &r, g.dt)
        })
        .unwrap();
        assert!(max_diff(&direct, &recon) <= 1e-6, "{}", max_diff(&direct, &recon));
        assert_eq!(recon[0], d.g(k, 0.0));
    }

    #[test]
    fn reconstruction_rejects_mismatched_grids() {
        let e = reconstruct_density(&[Complex64::new(1.0, 0.0); 3], &[Complex64::new(0.0, 0.0); 4], 0.1).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn linearity() {
        let tg = TimeGrid::new(20.0, 0.02).unwrap();
        let k = 0.5;
        let d1 = InitialDatum::unit(DatumKind::GaussianRing);
        let d2 = InitialDatum::unit(DatumKind::ThermalShell);
        let kernel = density_kernel(&bg(), k, &tg);
        let h = |d: &InitialDatum| -> Vec<Complex64> { (0..tg.len()).map(|n| d.g(k, k * tg.t(n))).collect() };
        let (a, b) = (Complex64::new(0.7, 0.2), Complex64::new(-1.3, 0.0));
        let mix: Vec<Complex64> = h(&d1).iter().zip(h(&d2)).map(|(x, y)| a * x + b * y).collect();
        let s1 = solve_convolution_volterra(&kernel, &h(&d1), tg.dt);
        let s2 = solve_convolution_volterra(&kernel, &h(&d2), tg.dt);
        let sm = solve_convolution_volterra(&kernel, &mix, tg.dt);
        for n in 0..tg.len() {
            assert!((sm[n] - (a * s1[n] + b * s2[n])).norm() <= 1e-14 * (1.0 + sm[n].norm()));
        }
    }

    #[test]
    fn zero_coupling_is_free_transport() {
        let mut p = PhysicalParams::nondimensional();
        p.w0 = 0.0;
        let b = Maxwellian::new(p);
        let tg = TimeGrid::new(20.0, 0.05).unwrap();
        let d = InitialDatum::unit(DatumKind::ThermalShell);
        let rho = solve_volterra_direct(&b, &d, 0.4, &tg).unwrap();
        for (n, v) in rho.iter().enumerate() {
            assert_eq!(*v, d.g(0.4, 0.4 * tg.t(n)));
        }
    }

    #[test]
    fn envelope_rate_matches_the_pole_at_one_half() {
        let tg = TimeGrid::new(200.0, 0.01).unwrap();
        let rho = solve_volterra_direct(&bg(), &ring(), 0.5, &tg).unwrap();
        let fit = fit_envelope_decay(&rho, &tg, (10.0, 200.0)).unwrap();
        let p = find_pole(&Dispersion::default(), 0.5, Complex64::new(-0.1, 1.4), &NewtonOptions::default()).unwrap();
        assert!((fit.rate / -p.re - 1.0).abs() < 0.05, "{} vs {}", fit.rate, -p.re);
    }

    #[test]
    fn envelope_fit_needs_peaks() {
        let tg = TimeGrid::new(1.0, 0.1).unwrap();
        let flat = vec![Complex64::new(1.0, 0.0); tg.len()];
        assert!(fit_envelope_decay(&flat, &tg, (0.0, 1.0)).is_err());
    }

    #[test]
    fn non_uniform_time_nodes_are_rejected() {
        assert_eq!(TimeGrid::from_nodes(&[0.0, 0.1, 0.3]).unwrap_err().exit_code(), 2);
    }
}
