//! Long-wave comparison with the linearized Euler–Poisson (Klein-Gordon)
//! field.
//!
//! Amplitudes use the radial convention of [`crate::fields`]: `Ê = −i k̂ e`
//! with `e = (w0/κ) ρ̂`. The Euler–Poisson amplitude solves
//! `a'' + Ω_KG² a = 0` with `a(0) = (w0/κ) G(κ,0)` and, from the continuity
//! equation, `a'(0) = w0 ∂_s G(κ,0)`.
//!
//! Long-wave data are `G_ε(κ, s) = G₀(κ/ε, s)`. A field `F` is compared
//! through its rescaling `F_ε` with `F̂_ε(t,k) = F̂(t,εk)`, so every quantity
//! below is a function of the wavenumber `κ` of `G₀` and is evaluated at the
//! physical wavenumber `εκ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::model::{Background, InitialDatum, PhysicalParams, TimeGrid};
use crate::poles::{NewtonOptions, PoleBranch};
use crate::quad::{composite_rule, fit_line, gregory_integral, uniform_breaks, GaussLegendre};
use crate::volterra::{richardson, solve_volterra_direct};

/// `(2π)³`.
const TWO_PI_CUBED: f64 = 8.0 * PI * PI * PI;

/// `Ω_KG(κ) = √(ω_p² + 3 v_th² κ²)`.
pub fn omega_kg(params: &PhysicalParams, kappa: f64) -> f64 {
    (params.omega_p * params.omega_p + 3.0 * params.v_th * params.v_th * kappa * kappa).sqrt()
}

/// Euler–Poisson field amplitude at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KGFieldSpec {
    pub kappa: f64,
    pub omega_kg: f64,
    /// Field amplitude at `t = 0`.
    pub e0: Complex64,
    /// Time derivative of the amplitude at `t = 0`, set by the initial flux.
    pub de0: Complex64,
}

impl KGFieldSpec {
    /// Initial data taken from the ray profile of `datum` at `kappa`.
    pub fn from_datum(params: &PhysicalParams, datum: &InitialDatum, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")));
        }
        Ok(Self {
            kappa,
            omega_kg: omega_kg(params, kappa),
            e0: params.w0 / kappa * datum.g(kappa, 0.0),
            de0: params.w0 * datum.dg(1, kappa, 0.0),
        })
    }

    /// `+` and `−` frequency parts at time `t`, with
    /// `a = a₊ + a₋` and `a± ∝ e^{±iΩ_KG t}`.
    pub fn branches(&self, t: f64) -> [Complex64; 2] {
        let w = self.omega_kg;
        let i = Complex64::i();
        let plus = 0.5 * (self.e0 - i * self.de0 / w) * (i * w * t).exp();
        let minus = 0.5 * (self.e0 + i * self.de0 / w) * (-i * w * t).exp();
        [plus, minus]
    }

    /// Time derivative of the amplitude.
    pub fn derivative(&self, t: f64) -> Complex64 {
        let w = self.omega_kg;
        -self.e0 * w * (w * t).sin() + self.de0 * (w * t).cos()
    }
}

/// `a(t) = e0 cos Ω_KG t + de0 sin(Ω_KG t)/Ω_KG`.
pub fn solve_kg_exact(spec: &KGFieldSpec, t: f64) -> Complex64 {
    let w = spec.omega_kg;
    spec.e0 * (w * t).cos() + spec.de0 * (w * t).sin() / w
}

/// Which field is compared with the Euler–Poisson one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HydroMode {
    /// The Vlasov–Poisson field from the direct density solve.
    Kinetic,
    /// The field of the quadratic long-wave model of the dispersion
    /// function, which is the Euler–Poisson field itself; the error is zero
    /// by construction.
    SelfComparison,
}

/// Discretization of the H^{−s} comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydroOptions {
    /// Time step of the density solve (Richardson-extrapolated).
    pub dt: f64,
    /// Upper end of the `κ` quadrature, in units of the datum's κ-width.
    pub kappa_extent: f64,
    /// Number of 16-point Gauss–Legendre panels on `[0, kappa_extent]`.
    pub panels: usize,
    pub mode: HydroMode,
}

impl Default for HydroOptions {
    fn default() -> Self {
        Self { dt: 0.01, kappa_extent: 12.0, panels: 6, mode: HydroMode::Kinetic }
    }
}

/// One H^{−s} comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydroError {
    pub epsilon: f64,
    pub t: f64,
    pub s: f64,
    /// `ε ‖E_ε(t) − ℰ_ε(t)‖_{H^{−s}}`.
    pub error: f64,
    /// `‖E(t,·/ε) − ℰ(t,·/ε)‖_{H^{−s}} = ε² · error`.
    pub error_unscaled: f64,
    /// `ε ‖ℰ_ε(t)‖_{H^{−s}}`, for scale.
    pub reference: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// Time grid reaching `t` with a step no larger than `dt`.
fn time_grid_to(t: f64, dt: f64) -> Result<TimeGrid> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::config("hydro.dt", format!("must be positive, got {dt}")));
    }
    if t == 0.0 {
        return Ok(TimeGrid { dt, steps: 0 });
    }
    let steps = (t / dt).ceil();
    Ok(TimeGrid { dt: t / steps, steps: steps as usize })
}

/// Vlasov–Poisson density trace from the Richardson-extrapolated direct
/// solve.
fn vp_density(disp: &Dispersion, datum: &InitialDatum, kappa: f64, time: &TimeGrid) -> Result<Vec<Complex64>> {
    let bg = disp.background();
    richardson(time, |g| solve_volterra_direct(bg, datum, kappa, g))
}

/// Field amplitude `e(t, κ)` and its time derivative at the end of `time`.
///
/// Differentiating `ρ = f + K∗ρ` with `K(0) = 0` gives
/// `ρ'(t) = f'(t) + ∫₀ᵗ K'(τ) ρ(t−τ) dτ`, where `f(t) = G(κ,κt)` and
/// `K'(τ) = −w0 (f̂⁰(κτ) + κτ f̂⁰'(κτ))`. The derivative of the Maxwellian
/// transform is `f̂⁰'(ξ) = −v_th² ξ f̂⁰(ξ)`.
fn vp_state(disp: &Dispersion, datum: &InitialDatum, kappa: f64, time: &TimeGrid) -> Result<(Complex64, Complex64)> {
    let rho = vp_density(disp, datum, kappa, time)?;
    let p = disp.params();
    let bg = disp.background();
    let n = time.steps;
    let t = time.t_final();
    let v2 = p.v_th * p.v_th;
    let integrand: Vec<Complex64> = (0..=n)
        .map(|m| {
            let x = kappa * time.t(m);
            -p.w0 * bg.fhat0(x) * (1.0 - v2 * x * x) * rho[n - m]
        })
        .collect();
    let conv = if n == 0 { Complex64::new(0.0, 0.0) } else { gregory_integral(&integrand, time.dt) };
    let drho = kappa * datum.dg(1, kappa, kappa * t) + conv;
    Ok((p.w0 / kappa * rho[n], p.w0 / kappa * drho))
}

/// `ε ‖E_ε(t) − ℰ_ε(t)‖_{H^{−s}}` for the long-wave datum built from `datum`,
/// with `‖f‖²_{H^{−s}} = (2π)^{−3} ∫ ⟨k⟩^{−2s} |f̂(k)|² dk` evaluated by
/// radial Gauss–Legendre quadrature.
pub fn hminus_s_error(disp: &Dispersion, epsilon: f64, t: f64, s: f64, datum: &InitialDatum, opts: &HydroOptions) -> Result<HydroError> {
    if !(s > 2.5 && s < 3.5) {
        return Err(Error::Domain(format!("Sobolev index s must lie in (5/2, 7/2), got {s}")));
    }
    check_epsilon(epsilon)?;
    if opts.panels == 0 || !(opts.kappa_extent > 0.0) {
        return Err(Error::config("hydro.panels", "need at least one panel and a positive extent"));
    }
    let time = time_grid_to(t, opts.dt)?;
    let params = *disp.params();
    let long = datum.rescaled(epsilon)?;
    let k_max = opts.kappa_extent * datum.spec().width_kappa;
    let (kappa, w) = composite_rule(&uniform_breaks(0.0, k_max, opts.panels), &GaussLegendre::new(16));
    let rows = kappa
        .par_iter()
        .map(|&k| {
            let kp = epsilon * k;
            let kg = solve_kg_exact(&KGFieldSpec::from_datum(&params, &long, kp)?, t);
            let vp = match opts.mode {
                HydroMode::Kinetic => vp_state(disp, &long, kp, &time)?.0,
                HydroMode::SelfComparison => kg,
            };
            Ok(((vp - kg).norm_sqr(), kg.norm_sqr()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut diff, mut refn) = (0.0, 0.0);
    for ((&k, &wi), (d, r)) in kappa.iter().zip(&w).zip(rows) {
        let weight = 4.0 * PI * k * k * wi * (1.0 + k * k).powf(-s) / TWO_PI_CUBED;
        diff += weight * d;
        refn += weight * r;
    }
    let error = epsilon * diff.sqrt();
    Ok(HydroError { epsilon, t, s, error, error_unscaled: epsilon * epsilon * error, reference: epsilon * refn.sqrt() })
}

/// Errors over several `ε` with the log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydroScan {
    pub rows: Vec<HydroError>,
    pub slope: f64,
    pub r2: f64,
}

/// [`hminus_s_error`] for each `ε` at fixed `(t, s)` and the least-squares
/// slope of `log error` against `log ε`.
pub fn hydro_slope_scan(disp: &Dispersion, epsilons: &[f64], t: f64, s: f64, datum: &InitialDatum, opts: &HydroOptions) -> Result<HydroScan> {
    if epsilons.len() < 2 {
        return Err(Error::config("hydro.epsilon", "a slope needs at least two values of epsilon"));
    }
    let rows = epsilons.iter().map(|&e| hminus_s_error(disp, e, t, s, datum, opts)).collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| !(r.error > 0.0)) {
        return Err(Error::Fit("hydro errors must be positive for a log-log slope".into()));
    }
    let x: Vec<f64> = rows.iter().map(|r| r.epsilon.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.error.ln()).collect();
    let fit = fit_line(&x, &y)?;
    Ok(HydroScan { rows, slope: fit.slope, r2: fit.r2 })
}

/// A real Gaussian bump in `κ` used as a weak test amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestBump {
    pub center: f64,
    pub width: f64,
}

impl TestBump {
    /// Bumps at `κ ∈ {0.5, 1, 1.5}` with width 0.1.
    pub fn standard() -> [TestBump; 3] {
        [0.5, 1.0, 1.5].map(|center| TestBump { center, width: 0.1 })
    }

    fn value(&self, kappa: f64) -> f64 {
        let x = (kappa - self.center) / self.width;
        (-0.5 * x * x).exp()
    }

    /// Quadrature on `center ± 6 width` (clipped at 0).
    fn rule(&self) -> (Vec<f64>, Vec<f64>) {
        let a = (self.center - 6.0 * self.width).max(0.0);
        let b = self.center + 6.0 * self.width;
        composite_rule(&uniform_breaks(a, b, 4), &GaussLegendre::new(16))
    }
}

/// Settings of the weak-limit check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakLimitOptions {
    /// Macroscopic time; the fields are evaluated at `t/ε²`.
    pub t: f64,
    pub dt: f64,
    pub bumps: Vec<TestBump>,
    /// Low/high frequency split; every physical wavenumber `εκ` must lie
    /// below it.
    pub nu0: f64,
}

impl Default for WeakLimitOptions {
    fn default() -> Self {
        Self { t: 0.5, dt: 0.02, bumps: TestBump::standard().to_vec(), nu0: 0.7 }
    }
}

/// Pairings of one test bump with one frequency branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingRow {
    pub epsilon: f64,
    pub bump_center: f64,
    /// `+1` or `−1`.
    pub branch: i8,
    pub vlasov: Complex64,
    pub euler: Complex64,
    pub limit: Complex64,
    pub vlasov_difference: f64,
    pub euler_difference: f64,
}

/// Result of [`bohm_gross_weak_limit_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakLimitReport {
    pub t: f64,
    pub rows: Vec<PairingRow>,
    /// Largest Vlasov pairing difference per `ε`, in input order.
    pub max_difference: Vec<f64>,
    /// `max_difference` strictly decreases along the `ε` list.
    pub monotone: bool,
}

/// Demodulated long-wave pairings.
///
/// For each `ε` the Vlasov and Euler–Poisson amplitudes are evaluated at
/// time `τ = t/ε²` and wavenumber `εκ`, split into `±` frequency parts
/// `a± = ½(a ∓ i a'/ω)`, demodulated by `e^{∓iω_p τ}` and scaled by `ε`.
/// The projection frequency `ω` is `Ω_KG` for the Euler–Poisson field and
/// the pole frequency `Ω(εκ)` for the Vlasov field. Each part is paired against the test bumps and compared with
/// the Schrödinger-type limit `½ e^{±i(3v_th²/2ω_p)κ²t} e₀(κ)`, where
/// `e₀ = w0 G₀(κ,0)/κ`.
pub fn bohm_gross_weak_limit_check(disp: &Dispersion, epsilons: &[f64], datum: &InitialDatum, opts: &WeakLimitOptions) -> Result<WeakLimitReport> {
    if epsilons.is_empty() || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::config("hydro.epsilon", "epsilon list must be non-empty and strictly decreasing"));
    }
    if opts.bumps.is_empty() {
        return Err(Error::config("hydro.bumps", "need at least one test bump"));
    }
    let params = *disp.params();
    let wp = params.omega_p;
    let v2 = params.v_th * params.v_th;
    let mut rows = Vec::new();
    let mut max_difference = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        check_epsilon(eps)?;
        let long = datum.rescaled(eps)?;
        let tau = opts.t / (eps * eps);
        let time = time_grid_to(tau, opts.dt)?;
        let rules: Vec<(Vec<f64>, Vec<f64>)> = opts.bumps.iter().map(TestBump::rule).collect();
        let mut kappas: Vec<f64> = rules.iter().flat_map(|(k, _)| k.iter().map(|&k| eps * k)).filter(|&k| k > 0.0).collect();
        kappas.sort_by(f64::total_cmp);
        kappas.dedup();
        if kappas.last().is_some_and(|&k| k >= opts.nu0) {
            return Err(Error::Domain(format!("epsilon = {eps} maps the test bumps above nu0 = {}", opts.nu0)));
        }
        let branch = PoleBranch::track(disp, &kappas, &NewtonOptions::default())?;
        let demod = [(-Complex64::i() * wp * tau).exp(), (Complex64::i() * wp * tau).exp()];
        let parts = kappas
            .par_iter()
            .map(|&kp| {
                let omega = branch.node_at(kp)?.omega;
                let (e, de) = vp_state(disp, &long, kp, &time)?;
                let i = Complex64::i();
                let vp = [0.5 * (e - i * de / omega), 0.5 * (e + i * de / omega)];
                let ep = KGFieldSpec::from_datum(&params, &long, kp)?.branches(tau);
                Ok((kp, [0, 1].map(|b| (eps * vp[b] * demod[b], eps * ep[b] * demod[b]))))
            })
            .collect::<Result<Vec<_>>>()?;
        let lookup = |kp: f64| parts.binary_search_by(|(k, _)| k.total_cmp(&kp)).map(|i| parts[i].1);
        let mut worst: f64 = 0.0;
        for (bump, (knodes, wts)) in opts.bumps.iter().zip(&rules) {
            for (b, sign) in [(0usize, 1.0), (1, -1.0)] {
                let (mut vl, mut eu, mut li) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for (&k, &wk) in knodes.iter().zip(wts) {
                    if k <= 0.0 {
                        continue;
                    }
                    let vals = lookup(eps * k).map_err(|_| Error::Domain("missing pairing node".into()))?;
                    let weight = 4.0 * PI * k * k * wk * bump.value(k) / TWO_PI_CUBED;
                    let e0 = params.w0 / k * datum.g(k, 0.0);
                    let limit = 0.5 * (Complex64::i() * sign * 1.5 * v2 / wp * k * k * opts.t).exp() * e0;
                    vl += weight * vals[b].0;
                    eu += weight * vals[b].1;
                    li += weight * limit;
                }
                let row = PairingRow {
                    epsilon: eps,
                    bump_center: bump.center,
                    branch: if b == 0 { 1 } else { -1 },
                    vlasov: vl,
                    euler: eu,
                    limit: li,
                    vlasov_difference: (vl - li).norm(),
                    euler_difference: (eu - li).norm(),
                };
                worst = worst.max(row.vlasov_difference);
                rows.push(row);
            }
        }
        max_difference.push(worst);
    }
    let monotone = max_difference.windows(2).all(|w| w[1] < w[0]);
    Ok(WeakLimitReport { t: opts.t, rows, max_difference, monotone })
}
