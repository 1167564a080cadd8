//! Units, the Maxwellian background, radially compatible initial data with
//! closed-form s-derivatives, and the radial-wavenumber and time grids.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{composite_rule, GaussLegendre};
use crate::special::hermite_he;

/// Plasma constants and derived scales.
///
/// `w0 = ω_p² / n0` is the Poisson coupling and `v_th = √(T/mₑ)` the thermal
/// speed. The default is the nondimensional preset where every field is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub n0: f64,
    pub temperature: f64,
    pub m_e: f64,
    pub omega_p: f64,
    pub w0: f64,
    pub v_th: f64,
    pub lambda_d: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::nondimensional()
    }
}

impl PhysicalParams {
    /// The preset `n0 = T = mₑ = ω_p = w0 = v_th = λ_D = 1`.
    pub fn nondimensional() -> Self {
        Self { n0: 1.0, temperature: 1.0, m_e: 1.0, omega_p: 1.0, w0: 1.0, v_th: 1.0, lambda_d: 1.0 }
    }

    /// Builds the constants from density, temperature, electron mass and the
    /// charge coupling `q²/ε₀`, so that `w0 = coupling / mₑ` and
    /// `ω_p² = w0 · n0`.
    pub fn from_physical(n0: f64, temperature: f64, m_e: f64, coupling: f64) -> Result<Self> {
        for (name, v) in [("n0", n0), ("temperature", temperature), ("m_e", m_e), ("coupling", coupling)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("physics.{name}"), format!("must be finite and positive, got {v}")));
            }
        }
        let w0 = coupling / m_e;
        let omega_p = (w0 * n0).sqrt();
        let v_th = (temperature / m_e).sqrt();
        Ok(Self { n0, temperature, m_e, omega_p, w0, v_th, lambda_d: v_th / omega_p })
    }

    /// Checks positivity and the identity `ω_p² = w0·n0` to rounding.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("n0", self.n0),
            ("temperature", self.temperature),
            ("m_e", self.m_e),
            ("omega_p", self.omega_p),
            ("w0", self.w0),
            ("v_th", self.v_th),
            ("lambda_d", self.lambda_d),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("physics.{name}"), format!("must be finite and positive, got {v}")));
            }
        }
        let wp2 = self.omega_p * self.omega_p;
        if (wp2 - self.w0 * self.n0).abs() > 1e-12 * wp2 {
            return Err(Error::config("physics.omega_p", "omega_p^2 must equal w0 * n0"));
        }
        Ok(())
    }
}

/// Spatially homogeneous equilibrium, seen through the quantities the linear
/// theory needs: its Fourier transform and its one-dimensional marginal.
pub trait Background: Send + Sync {
    /// Physical constants of the equilibrium.
    fn params(&self) -> &PhysicalParams;
    /// Fourier transform `f̂⁰(ξ)` at `|ξ| = xi` (radial).
    fn fhat0(&self, xi: f64) -> f64;
    /// Hyperplane marginal `f_k⁰(r)`, independent of the direction `k̂`.
    fn marginal(&self, r: f64) -> f64;
    /// Derivative `(f_k⁰)'(r)`.
    fn marginal_derivative(&self, r: f64) -> f64;

    /// `∫ (f_k⁰)'(r)/r dr` by Gauss–Legendre quadrature over a symmetric
    /// range of ±14 thermal speeds.
    fn c_frak0(&self) -> f64 {
        let v = self.params().v_th;
        let rule = GaussLegendre::new(16);
        let breaks: Vec<f64> = (0..=56).map(|i| v * (-14.0 + 0.5 * i as f64)).collect();
        let (x, w) = composite_rule(&breaks, &rule);
        x.iter().zip(&w).map(|(&r, &wi)| wi * self.marginal_derivative(r) / r).sum()
    }
}

/// The Maxwellian `f⁰(v) = n0 (mₑ/2πT)^{3/2} e^{−mₑ|v|²/2T}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Maxwellian {
    pub params: PhysicalParams,
}

impl Maxwellian {
    pub fn new(params: PhysicalParams) -> Self {
        Self { params }
    }
}

impl Background for Maxwellian {
    fn params(&self) -> &PhysicalParams {
        &self.params
    }

    fn fhat0(&self, xi: f64) -> f64 {
        let v = self.params.v_th;
        self.params.n0 * (-0.5 * v * v * xi * xi).exp()
    }

    fn marginal(&self, r: f64) -> f64 {
        let v = self.params.v_th;
        self.params.n0 / ((2.0 * PI).sqrt() * v) * (-0.5 * r * r / (v * v)).exp()
    }

    fn marginal_derivative(&self, r: f64) -> f64 {
        let v = self.params.v_th;
        -r / (v * v) * self.marginal(r)
    }
}

/// Shapes of the built-in initial data. Every shape is a product of a
/// κ-profile and a Gaussian in `s` times a Hermite-type polynomial, so all
/// `s`-derivatives are available in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatumKind {
    /// `A (κ/w_κ)² e^{−κ²/2w_κ²} e^{−s²/2w_s²}`.
    GaussianRing,
    /// `A (κ/w_κ)(s/w_s) e^{−κ²/2w_κ²} e^{−s²/2w_s²}`: carries an initial flux.
    GaussianDipole,
    /// `A (s/w_s)² e^{−κ²/2w_κ²} e^{−s²/2w_s²}`: neutral with nonvanishing
    /// long-wave content, so its free transport decays at the generic rate.
    ThermalShell,
}

impl DatumKind {
    pub const ALL: [DatumKind; 3] = [DatumKind::GaussianRing, DatumKind::GaussianDipole, DatumKind::ThermalShell];

    pub fn name(self) -> &'static str {
        match self {
            DatumKind::GaussianRing => "gaussian_ring",
            DatumKind::GaussianDipole => "gaussian_dipole",
            DatumKind::ThermalShell => "thermal_shell",
        }
    }
}

impl FromStr for DatumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DatumKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config("datum.kind", format!("unknown datum kind `{s}` (expected gaussian_ring, gaussian_dipole or thermal_shell)")))
    }
}

/// Parameters of a built-in datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub kind: DatumKind,
    pub amplitude: f64,
    pub width_kappa: f64,
    pub width_s: f64,
}

impl DatumSpec {
    pub fn new(kind: DatumKind) -> Self {
        Self { kind, amplitude: 1.0, width_kappa: 1.0, width_s: 1.0 }
    }
}

/// Highest `s`-derivative order guaranteed by every datum.
pub const MAX_DERIVATIVE: usize = 6;

/// A localized perturbation represented on the ray `η = k̂s` by the profile
/// `G(κ, s) = ĥ_in(k, k̂s)`, optionally long-wave rescaled as
/// `G(κ, s) = G₀(κ/ε, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialDatum {
    spec: DatumSpec,
    kappa_scale: f64,
}

/// Builds a datum after checking its parameters.
pub fn make_default_datum(spec: DatumSpec) -> Result<InitialDatum> {
    for (name, v) in [("amplitude", spec.amplitude), ("width_kappa", spec.width_kappa), ("width_s", spec.width_s)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::config(format!("datum.{name}"), format!("must be finite and positive, got {v}")));
        }
    }
    let datum = InitialDatum { spec, kappa_scale: 1.0 };
    debug_assert_eq!(datum.g_re(0.0, 0.0), 0.0);
    Ok(datum)
}

impl InitialDatum {
    /// The unit-width, unit-amplitude datum of the given kind.
    pub fn unit(kind: DatumKind) -> Self {
        Self { spec: DatumSpec::new(kind), kappa_scale: 1.0 }
    }

    pub fn spec(&self) -> &DatumSpec {
        &self.spec
    }

    /// Long-wave rescaling `G_ε(κ, s) = G(κ/ε, s)`, the Fourier image of
    /// `ε³ h(εx, v)`.
    pub fn rescaled(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("rescaling factor must be positive, got {epsilon}")));
        }
        Ok(Self { spec: self.spec, kappa_scale: self.kappa_scale / epsilon })
    }

    /// Human-readable name plus parameters.
    pub fn description(&self) -> String {
        format!(
            "{} (amplitude {}, width_kappa {}, width_s {}, kappa scale {})",
            self.spec.kind.name(),
            self.spec.amplitude,
            self.spec.width_kappa,
            self.spec.width_s,
            self.kappa_scale
        )
    }

    /// Highest derivative order available.
    pub fn max_derivative(&self) -> usize {
        MAX_DERIVATIVE
    }

    /// `G(κ, s)`.
    pub fn g(&self, kappa: f64, s: f64) -> Complex64 {
        Complex64::new(self.g_re(kappa, s), 0.0)
    }

    /// `∂_sʲ G(κ, s)`.
    pub fn dg(&self, j: usize, kappa: f64, s: f64) -> Complex64 {
        Complex64::new(self.dg_re(j, kappa, s), 0.0)
    }

    /// Real-valued `G(κ, s)` (all built-in data are real on the ray).
    pub fn g_re(&self, kappa: f64, s: f64) -> f64 {
        self.dg_re(0, kappa, s)
    }

    /// Real-valued `∂_sʲ G(κ, s)`.
    pub fn dg_re(&self, j: usize, kappa: f64, s: f64) -> f64 {
        let sp = &self.spec;
        let q = kappa * self.kappa_scale / sp.width_kappa;
        let x = s / sp.width_s;
        let gauss = (-0.5 * (q * q + x * x)).exp();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let scale = sign * sp.width_s.powi(-(j as i32));
        let poly = match sp.kind {
            DatumKind::GaussianRing => q * q * hermite_he(j, x),
            DatumKind::GaussianDipole => q * hermite_he(j + 1, x),
            DatumKind::ThermalShell => hermite_he(j + 2, x) + hermite_he(j, x),
        };
        sp.amplitude * scale * poly * gauss
    }
}

/// Free-transport density `𝔥̂(t, κ) = G(κ, κt)`.
pub fn free_transport_density(datum: &InitialDatum, kappa: f64, t: f64) -> Complex64 {
    datum.g(kappa, kappa * t)
}

/// Radial wavenumber nodes with weights for `∫_{ℝ³} g(|k|) dk = 4π∫ g(κ)κ² dκ`
/// and the low/high frequency split `ν₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    kappa: Vec<f64>,
    weights: Vec<f64>,
    nu0: f64,
}

impl RadialGrid {
    /// Validates and wraps explicit nodes and 3D weights.
    pub fn new(kappa: Vec<f64>, weights: Vec<f64>, nu0: f64) -> Result<Self> {
        if kappa.is_empty() || kappa.len() != weights.len() {
            return Err(Error::config("grid.kappa", "nodes and weights must be non-empty and of equal length"));
        }
        if kappa[0] <= 0.0 || kappa.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid.kappa", "nodes must be positive and strictly increasing"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::config("grid.kappa", "weights must be positive"));
        }
        if !(nu0 >= kappa[0] && nu0 <= kappa[kappa.len() - 1]) {
            return Err(Error::config("constants.nu0", format!("nu0 = {nu0} lies outside the wavenumber range")));
        }
        Ok(Self { kappa, weights, nu0 })
    }

    /// Composite Gauss–Legendre grid on `[kappa_min, kappa_max]` with panels
    /// growing geometrically by `ratio`, widths capped at `max_width_low`
    /// below `ν₀` and `max_width_high` above, and `ν₀` as a panel edge.
    pub fn panels(
        kappa_min: f64,
        kappa_max: f64,
        nu0: f64,
        ratio: f64,
        max_width_low: f64,
        max_width_high: f64,
        order: usize,
    ) -> Result<Self> {
        if !(kappa_min > 0.0 && kappa_max > kappa_min) {
            return Err(Error::config("grid.kappa_max", "need 0 < kappa_min < kappa_max"));
        }
        if !(nu0 > kappa_min && nu0 < kappa_max) {
            return Err(Error::config("constants.nu0", "nu0 must lie strictly inside (kappa_min, kappa_max)"));
        }
        if !(ratio > 1.0 && max_width_low > 0.0 && max_width_high > 0.0 && order >= 2) {
            return Err(Error::config("grid.panel_ratio", "panel ratio must exceed 1, widths must be positive and order >= 2"));
        }
        let mut breaks = vec![kappa_min];
        let mut k = kappa_min;
        for (end, cap) in [(nu0, max_width_low), (kappa_max, max_width_high)] {
            while k < end {
                let step = ((ratio - 1.0) * k).min(cap);
                let next = if k + 1.5 * step >= end { end } else { k + step };
                breaks.push(next);
                k = next;
            }
        }
        let (x, w) = composite_rule(&breaks, &GaussLegendre::new(order));
        let weights = x.iter().zip(&w).map(|(k, w)| 4.0 * PI * k * k * w).collect();
        Self::new(x, weights, nu0)
    }

    /// `n` geometrically spaced nodes on `[kappa_min, kappa_max]` with
    /// trapezoidal 3D weights; used for branch tables.
    pub fn geometric(kappa_min: f64, kappa_max: f64, n: usize, nu0: f64) -> Result<Self> {
        if !(kappa_min > 0.0 && kappa_max > kappa_min) {
            return Err(Error::config("grid.kappa_max", "need 0 < kappa_min < kappa_max"));
        }
        if n < 2 {
            return Err(Error::config("grid.n_kappa", "need at least two nodes"));
        }
        let r = (kappa_max / kappa_min).powf(1.0 / (n - 1) as f64);
        let mut kappa: Vec<f64> = (0..n).map(|i| kappa_min * r.powi(i as i32)).collect();
        kappa[n - 1] = kappa_max;
        let weights = (0..n)
            .map(|i| {
                let lo = if i == 0 { kappa[0] } else { kappa[i - 1] };
                let hi = if i == n - 1 { kappa[n - 1] } else { kappa[i + 1] };
                4.0 * PI * kappa[i] * kappa[i] * 0.5 * (hi - lo)
            })
            .collect();
        Self::new(kappa, weights, nu0)
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    /// `4π∫ g(κ)κ² dκ` for samples `g` on the nodes.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// Uniform time grid `t_i = i·dt`, `i = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    /// Grid reaching `t_final` in steps of `dt`; `t_final/dt` must be an integer.
    pub fn new(t_final: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config("grid.dt", format!("must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::config("grid.t_final", format!("must be non-negative, got {t_final}")));
        }
        let ratio = t_final / dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config("grid.t_final", "t_final must be an integer multiple of dt"));
        }
        Ok(Self { dt, steps: steps as usize })
    }

    /// Accepts explicit nodes if they start at 0 and are uniformly spaced.
    pub fn from_nodes(t: &[f64]) -> Result<Self> {
        if t.len() < 2 || t[0] != 0.0 {
            return Err(Error::config("grid.t", "time grid must start at 0 with at least two nodes"));
        }
        let dt = t[1] - t[0];
        for (i, &ti) in t.iter().enumerate() {
            if (ti - i as f64 * dt).abs() > 1e-9 * dt.max(ti.abs()) {
                return Err(Error::config("grid.t", "time grid must be uniform"));
            }
        }
        Self::new(dt * (t.len() - 1) as f64, dt)
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t(self.steps)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.t(i)).collect()
    }

    /// The grid with half the step over the same span.
    pub fn refined(&self) -> Self {
        Self { dt: 0.5 * self.dt, steps: 2 * self.steps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn derivatives_match_finite_differences_for_every_kind() {
        for kind in DatumKind::ALL {
            let d = make_default_datum(DatumSpec { kind, amplitude: 1.3, width_kappa: 0.8, width_s: 1.2 }).unwrap();
            let mut worst: f64 = 0.0;
            for j in 1..=MAX_DERIVATIVE {
                for &k in &[0.0, 0.1, 0.5, 1.0, 2.0] {
                    for &s in &[-3.0, -1.0, 0.0, 0.3, 1.0, 2.5, 4.0] {
                        let exact = d.dg_re(j, k, s);
                        let fd = five_point(|x| d.dg_re(j - 1, k, x), s, 1e-3);
                        worst = worst.max((exact - fd).abs() / (1.0 + exact.abs()));
                    }
                }
            }
            assert!(worst <= 1e-6, "{kind:?}: {worst}");
        }
    }

    #[test]
    fn ring_matches_stated_values() {
        let d = InitialDatum::unit(DatumKind::GaussianRing);
        assert_eq!(d.g_re(0.0, 1.7), 0.0);
        assert_eq!(d.dg_re(1, 0.8, 0.0), 0.0);
        assert!((d.dg_re(2, 1.0, 0.0) + (-0.5f64).exp()).abs() < 1e-15);
        assert!((free_transport_density(&d, 1.0, 0.0).re - (-0.5f64).exp()).abs() < 1e-15);
        let want = (-0.5f64).exp() * (-4.5f64).exp();
        assert!((free_transport_density(&d, 1.0, 3.0).re - want).abs() < 1e-16);
        assert_eq!(free_transport_density(&d, 0.0, 5.0).re, 0.0);
    }

    #[test]
    fn every_kind_is_charge_neutral() {
        for kind in DatumKind::ALL {
            assert_eq!(InitialDatum::unit(kind).g_re(0.0, 0.0), 0.0, "{kind:?}");
        }
    }

    #[test]
    fn unknown_kind_is_a_configuration_error() {
        let e = "top_hat".parse::<DatumKind>().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!("thermal_shell".parse::<DatumKind>().unwrap(), DatumKind::ThermalShell);
    }

    #[test]
    fn nonpositive_amplitude_is_rejected() {
        let mut spec = DatumSpec::new(DatumKind::GaussianRing);
        spec.amplitude = 0.0;
        assert!(make_default_datum(spec).is_err());
    }

    #[test]
    fn rescaling_stretches_the_wavenumber_profile() {
        let d = InitialDatum::unit(DatumKind::GaussianRing);
        let r = d.rescaled(0.1).unwrap();
        assert!((r.g_re(0.05, 0.7) - d.g_re(0.5, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn physical_params_round_trip() {
        let p = PhysicalParams::from_physical(2.5, 0.7, 3.0, 1.9).unwrap();
        assert!((p.omega_p * p.omega_p - p.w0 * p.n0).abs() <= 4.0 * f64::EPSILON * p.w0 * p.n0);
        assert!((p.lambda_d - p.v_th / p.omega_p).abs() < 1e-15);
        p.validate().unwrap();
        PhysicalParams::nondimensional().validate().unwrap();
        assert!(PhysicalParams::from_physical(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn maxwellian_background_invariants() {
        let m = Maxwellian::default();
        assert_eq!(m.fhat0(0.0), 1.0);
        assert!((m.c_frak0() + 1.0).abs() < 1e-12);
        let m2 = Maxwellian::new(PhysicalParams::from_physical(2.0, 4.0, 1.0, 1.0).unwrap());
        assert!((m2.c_frak0() + 2.0 / 4.0).abs() < 1e-12);
        // the marginal integrates to the density
        let rule = GaussLegendre::new(20);
        let total: f64 = (0..40).map(|i| rule.integrate(-20.0 + i as f64, -19.0 + i as f64, |r| m2.marginal(r))).sum();
        assert!((total - 2.0).abs() < 1e-10);
    }

    #[test]
    fn panel_grid_integrates_a_gaussian_ball() {
        let g = RadialGrid::panels(1e-3, 8.0, 0.7, 1.2, 0.05, 0.25, 16).unwrap();
        assert!(g.kappa().contains(&g.kappa()[0]));
        let vals: Vec<f64> = g.kappa().iter().map(|k| (-0.5 * k * k).exp()).collect();
        // ∫ e^{−|k|²/2} dk over ℝ³ = (2π)^{3/2}, minus the tiny ball below 1e-3
        let want = (2.0 * PI).powf(1.5);
        assert!((g.integrate(&vals) - want).abs() < 1e-8);
        assert!(g.kappa().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn time_grid_rejects_non_uniform_nodes() {
        assert!(TimeGrid::from_nodes(&[0.0, 0.1, 0.25]).is_err());
        let g = TimeGrid::from_nodes(&[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(g.steps, 3);
        assert!(TimeGrid::new(1.0, 0.3).is_err());
        assert_eq!(TimeGrid::new(50.0, 0.01).unwrap().len(), 5001);
    }

    proptest! {
        #[test]
        fn zeroth_derivative_is_the_profile(k in 0.0f64..3.0, s in -5.0f64..5.0) {
            for kind in DatumKind::ALL {
                let d = InitialDatum::unit(kind);
                prop_assert_eq!(d.dg_re(0, k, s), d.g_re(k, s));
            }
        }

        #[test]
        fn free_transport_samples_the_ray(k in 0.0f64..3.0, t in 0.0f64..50.0) {
            let d = InitialDatum::unit(DatumKind::ThermalShell);
            prop_assert_eq!(free_transport_density(&d, k, t), d.g(k, k * t));
        }
    }
}
