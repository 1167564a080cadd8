//! The dispersion function
//! `𝓛(z, κ) = −(w0/κ²) ∫₀^∞ e^{−(z/κ)s} s f̂⁰(k̂s) ds`
//! and its derivative, boundary values and long-wave expansion.
//!
//! For the Maxwellian, with `u = z/(κ v_th)` and
//! `J_n(u) = ∫₀^∞ sⁿ e^{−us−s²/2} ds`,
//! `𝓛 = −(ω_p²/(κ v_th)²) J₁(u)` and `∂_z𝓛 = (ω_p²/(κ v_th)³) J₂(u)`,
//! where `J₁ = 1 − u J₀` and `J₀ = √(π/2) w(iu/√2)` with `w` the Faddeeva
//! function.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Background, Maxwellian, PhysicalParams};
use crate::quad::GaussLegendre;
use crate::special::gaussian_moments;

/// How a dispersion value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Plemelj,
    Asymptotic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Plemelj => "plemelj",
            Method::Asymptotic => "asymptotic",
        }
    }
}

/// One evaluation of `𝓛` and `∂_z𝓛`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionEval {
    pub z: Complex64,
    pub kappa: f64,
    pub value: Complex64,
    pub dz_value: Complex64,
    pub method: Method,
}

/// Truncation order of the long-wave expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticOrder {
    Two,
    Four,
}

/// Region scanned by [`Dispersion::penrose_margin`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenroseRegion {
    /// `κ ≥ ν₀`, `Re z ≥ −λκ`.
    HighFreq { nu0: f64, lambda: f64 },
    /// `Re z ≥ −δ′κ` outside the discs `|z ∓ iω_p| < ε`.
    LowFreq { epsilon: f64, delta_prime: f64 },
}

/// Sampling lattice for the Penrose scan: geometric in κ, uniform in
/// `Re z ∈ [region edge, re_max]` and `Im z ∈ [−im_max, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenroseGrid {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub n_kappa: usize,
    pub re_max: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

/// Sampled minimum of `|1 − 𝓛|` and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenroseWitness {
    pub min: f64,
    pub kappa: f64,
    pub z: Complex64,
    pub samples: usize,
}

/// Sample count and smallest `(|1 − 𝓛|, z)` at one wavenumber of a Penrose scan.
type KappaScan = (usize, Option<(f64, Complex64)>);

/// Dispersion-function evaluator for a Maxwellian background.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dispersion {
    background: Maxwellian,
}

impl Dispersion {
    pub fn new(params: PhysicalParams) -> Self {
        Self { background: Maxwellian::new(params) }
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.background.params
    }

    pub fn background(&self) -> &Maxwellian {
        &self.background
    }

    fn check_kappa(kappa: f64) -> Result<()> {
        if kappa.is_finite() && kappa > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")))
        }
    }

    /// `(𝓛, ∂_z𝓛)` from the closed form.
    pub fn eval(&self, z: Complex64, kappa: f64) -> Result<DispersionEval> {
        Self::check_kappa(kappa)?;
        let p = self.params();
        let kv = kappa * p.v_th;
        let u = z / kv;
        let [_, j1, j2] = gaussian_moments(u);
        let pref = p.omega_p * p.omega_p / (kv * kv);
        let value = -pref * j1;
        let dz_value = pref * j2 / kv;
        if !(value.re.is_finite() && value.im.is_finite() && dz_value.re.is_finite() && dz_value.im.is_finite()) {
            return Err(Error::accuracy(format!("dispersion function overflows at z = {z}, kappa = {kappa}"), f64::INFINITY));
        }
        Ok(DispersionEval { z, kappa, value, dz_value, method: Method::ClosedForm })
    }

    /// `𝓛(z, κ)` from the closed form.
    pub fn eval_l_closed(&self, z: Complex64, kappa: f64) -> Result<Complex64> {
        Ok(self.eval(z, kappa)?.value)
    }

    /// `∂_z𝓛(z, κ)` from the closed form.
    pub fn eval_dz_l(&self, z: Complex64, kappa: f64) -> Result<Complex64> {
        Ok(self.eval(z, kappa)?.dz_value)
    }

    /// `𝓛(z, κ)` by direct quadrature of its defining integral, with the
    /// background entering only through `f̂⁰`.
    ///
    /// The integrand `e^{−(z/κ)s} s f̂⁰(s)` is integrated on
    /// `[0, s* + 10/v_th]` where `s*` is the peak of its modulus, using
    /// 16-point Gauss–Legendre panels no wider than `0.5/v_th` and carrying
    /// at most one period of the phase. The error estimate is the change
    /// under panel halving; the result is rejected if it exceeds
    /// `1e-11·max(1, |𝓛|)`.
    pub fn eval_l_quadrature(&self, z: Complex64, kappa: f64) -> Result<Complex64> {
        Self::check_kappa(kappa)?;
        let p = *self.params();
        let a = z / kappa;
        let bg = self.background;
        let (value, est) = laplace_quadrature(a, p.v_th, |s| s * bg.fhat0(s));
        let value = -p.w0 / (kappa * kappa) * value;
        let est = p.w0 / (kappa * kappa) * est;
        if !(value.re.is_finite() && value.im.is_finite()) || est > 1e-11 * value.norm().max(1.0) {
            return Err(Error::accuracy(format!("quadrature of the dispersion integral at z = {z}, kappa = {kappa}"), est));
        }
        Ok(value)
    }

    /// `𝓛(z, κ)` from the two-sided split used for `Re z < 0`: the full-line
    /// Gaussian transform in closed form minus the half-line integral over
    /// `s < 0`, the latter by quadrature (it decays there).
    pub fn eval_l_two_sided(&self, z: Complex64, kappa: f64) -> Result<Complex64> {
        Self::check_kappa(kappa)?;
        let p = *self.params();
        let kv = kappa * p.v_th;
        let u = z / kv;
        let full = -(2.0 * PI).sqrt() * u * (u * u / 2.0).exp();
        let (half, est) = laplace_quadrature(-u, 1.0, |s| s * (-0.5 * s * s).exp());
        let j1 = full + half;
        let pref = p.omega_p * p.omega_p / (kv * kv);
        if est > 1e-12 * half.norm().max(1.0) {
            return Err(Error::accuracy("half-line quadrature in the two-sided split", est));
        }
        Ok(-pref * j1)
    }

    /// `𝓛(iω, κ)` from the boundary-value formula
    /// `(w0/κ²)[PV∫(f_k⁰)'(r)/(r − ω/κ) dr − iπ (f_k⁰)'(ω/κ)]`,
    /// with the principal value folded into
    /// `∫₀^∞ [(f_k⁰)'(c+u) − (f_k⁰)'(c−u)]/u du`.
    pub fn eval_l_plemelj(&self, omega: f64, kappa: f64) -> Result<Complex64> {
        Self::check_kappa(kappa)?;
        let p = *self.params();
        let bg = self.background;
        let c = omega / kappa;
        let upper = c.abs() + 12.0 * p.v_th;
        let pv = |width: f64| -> f64 {
            let rule = GaussLegendre::new(16);
            let n = (upper / width).ceil() as usize;
            (0..n)
                .map(|i| {
                    let a = upper * i as f64 / n as f64;
                    let b = upper * (i + 1) as f64 / n as f64;
                    rule.integrate(a, b, |u: f64| (bg.marginal_derivative(c + u) - bg.marginal_derivative(c - u)) / u)
                })
                .sum()
        };
        let coarse = pv(0.5 * p.v_th);
        let fine = pv(0.25 * p.v_th);
        let est = (fine - coarse).abs();
        if !fine.is_finite() || est > 1e-11 * fine.abs().max(1.0) {
            return Err(Error::accuracy(format!("principal-value quadrature at omega = {omega}, kappa = {kappa}"), est));
        }
        let scale = p.w0 / (kappa * kappa);
        Ok(Complex64::new(scale * fine, -scale * PI * bg.marginal_derivative(c)))
    }

    /// Long-wave expansion `−(ω_p²/z²)[1 − 3v_th²κ²/z²]` truncated at the
    /// requested order.
    pub fn eval_l_asymptotic(&self, z: Complex64, kappa: f64, order: AsymptoticOrder) -> Result<Complex64> {
        Self::check_kappa(kappa)?;
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("the long-wave expansion is singular at z = 0".into()));
        }
        let p = self.params();
        let lead = -p.omega_p * p.omega_p / (z * z);
        Ok(match order {
            AsymptoticOrder::Two => lead,
            AsymptoticOrder::Four => lead * (1.0 - 3.0 * p.v_th * p.v_th * kappa * kappa / (z * z)),
        })
    }

    /// Sampled minimum of `|1 − 𝓛(z, κ)|` over a discretized region.
    ///
    /// Per-κ scans run in parallel; the reduction visits κ in grid order and
    /// keeps the first minimum, so ties resolve to the lexicographically
    /// smallest `(κ, Re z, Im z)` index.
    pub fn penrose_margin(&self, region: PenroseRegion, grid: &PenroseGrid) -> Result<PenroseWitness> {
        if grid.n_kappa == 0 || grid.n_re == 0 || grid.n_im == 0 {
            return Err(Error::config("penrose.grid", "sampling grid is empty"));
        }
        if !(grid.kappa_min > 0.0 && grid.kappa_max >= grid.kappa_min && grid.im_max >= 0.0) {
            return Err(Error::config("penrose.grid", "need 0 < kappa_min <= kappa_max and im_max >= 0"));
        }
        let omega_p = self.params().omega_p;
        let kappas: Vec<f64> = (0..grid.n_kappa)
            .map(|i| {
                if grid.n_kappa == 1 {
                    grid.kappa_min
                } else {
                    grid.kappa_min * (grid.kappa_max / grid.kappa_min).powf(i as f64 / (grid.n_kappa - 1) as f64)
                }
            })
            .filter(|&k| match region {
                PenroseRegion::HighFreq { nu0, .. } => k >= nu0,
                PenroseRegion::LowFreq { .. } => true,
            })
            .collect();
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let per_kappa: Vec<Result<KappaScan>> = kappas
            .par_iter()
            .map(|&kappa| {
                let re_min = match region {
                    PenroseRegion::HighFreq { lambda, .. } => -lambda * kappa,
                    PenroseRegion::LowFreq { delta_prime, .. } => -delta_prime * kappa,
                };
                let mut best: Option<(f64, Complex64)> = None;
                let mut count = 0;
                for i in 0..grid.n_re {
                    for j in 0..grid.n_im {
                        let z = Complex64::new(lerp(re_min, grid.re_max, i, grid.n_re), lerp(-grid.im_max, grid.im_max, j, grid.n_im));
                        if let PenroseRegion::LowFreq { epsilon, .. } = region {
                            let disc = Complex64::new(0.0, omega_p);
                            if (z - disc).norm() < epsilon || (z + disc).norm() < epsilon {
                                continue;
                            }
                        }
                        count += 1;
                        let m = (1.0 - self.eval_l_closed(z, kappa)?).norm();
                        if best.map_or(true, |(b, _)| m < b) {
                            best = Some((m, z));
                        }
                    }
                }
                Ok((count, best))
            })
            .collect();
        let mut witness: Option<PenroseWitness> = None;
        let mut samples = 0;
        for (kappa, r) in kappas.iter().zip(per_kappa) {
            let (count, best) = r?;
            samples += count;
            if let Some((m, z)) = best {
                if witness.map_or(true, |w| m < w.min) {
                    witness = Some(PenroseWitness { min: m, kappa: *kappa, z, samples: 0 });
                }
            }
        }
        let mut w = witness.ok_or_else(|| Error::config("penrose.grid", "no sample falls inside the region"))?;
        w.samples = samples;
        Ok(w)
    }
}

/// `∫₀^∞ e^{−a s} g(s) ds` for `g` with Gaussian decay on the scale `1/v`,
/// returning the value from halved panels and the coarse/fine difference.
fn laplace_quadrature(a: Complex64, v: f64, g: impl Fn(f64) -> f64) -> (Complex64, f64) {
    // |e^{−as}| e^{−v²s²/2} peaks at s* = max(0, −Re a)/v².
    let s_star = (-a.re).max(0.0) / (v * v);
    let upper = s_star + 10.0 / v;
    let mut width = 0.5 / v;
    if a.im != 0.0 {
        width = width.min(2.0 * PI / a.im.abs());
    }
    let n = (upper / width).ceil().max(1.0) as usize;
    let rule = GaussLegendre::new(16);
    let integrate = |panels: usize| -> Complex64 {
        (0..panels)
            .map(|i| {
                let lo = upper * i as f64 / panels as f64;
                let hi = upper * (i + 1) as f64 / panels as f64;
                rule.integrate(lo, hi, |s: f64| (-a * s).exp() * g(s))
            })
            .sum()
    };
    let coarse = integrate(n);
    let fine = integrate(2 * n);
    (fine, (fine - coarse).norm())
}

#[cfg(test)]
// Reference values are kept with every digit of the high-precision source.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disp() -> Dispersion {
        Dispersion::default()
    }

    #[test]
    fn long_wave_limit_at_fixed_z() {
        let v = disp().eval_l_closed(c(0.0, 2.0), 1e-3).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-6, "{v}");
    }

    #[test]
    fn closed_form_matches_quadrature_on_the_real_axis() {
        let d = disp();
        let a = d.eval_l_closed(c(1.0, 0.0), 1.0).unwrap();
        let b = d.eval_l_quadrature(c(1.0, 0.0), 1.0).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn quadrature_value_at_the_origin() {
        let v = disp().eval_l_quadrature(c(0.0, 0.0), 1.0).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn quadrature_is_conjugate_symmetric() {
        let d = disp();
        let a = d.eval_l_quadrature(c(1.0, 2.0), 0.7).unwrap();
        let b = d.eval_l_quadrature(c(1.0, -2.0), 0.7).unwrap();
        assert!((a.conj() - b).norm() < 1e-14);
    }

    // Reference values from 50-digit evaluation of −J₁(z/κ)/κ².
    #[test]
    fn closed_form_matches_high_precision_values() {
        let d = disp();
        let cases = [
            (c(1.0, 0.0), 1.0, c(-0.34432045758120153, 0.0)),
            (c(0.0, 1.2), 0.3, c(0.90650203615120299, 0.018686224626276769)),
            (c(-0.02, 1.1), 0.4, c(1.4182306682701594, 0.43955926546785822)),
        ];
        for (z, k, want) in cases {
            let got = d.eval_l_closed(z, k).unwrap();
            assert!((got - want).norm() < 1e-12 * want.norm(), "z={z} k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn derivative_near_the_cold_plasma_limit() {
        let v = disp().eval_dz_l(c(0.0, 1.0), 1e-3).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-4, "{v}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let d = disp();
        let h = 1e-5;
        for z in [c(1.0, 0.0), c(0.3, 1.1), c(-0.05, 0.9)] {
            let k = if z.re == 1.0 { 1.0 } else { 0.4 };
            let fd = (d.eval_l_closed(z + h, k).unwrap() - d.eval_l_closed(z - h, k).unwrap()) / (2.0 * h);
            let ex = d.eval_dz_l(z, k).unwrap();
            assert!((fd - ex).norm() < 1e-8 * (1.0 + ex.norm()), "z={z}");
        }
    }

    #[test]
    fn plemelj_matches_closed_form() {
        let d = disp();
        for (w, k) in [(1.0, 1.0), (1.2, 0.3), (0.75, 0.5), (0.0, 1.0), (-0.8, 0.6)] {
            let a = d.eval_l_plemelj(w, k).unwrap();
            let b = d.eval_l_closed(c(0.0, w), k).unwrap();
            assert!((a - b).norm() < 1e-8, "w={w} k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn plemelj_imaginary_part_signs() {
        let d = disp();
        assert_eq!(d.eval_l_plemelj(0.0, 1.0).unwrap().im, 0.0);
        assert!(d.eval_l_plemelj(0.75, 0.5).unwrap().im > 0.0);
        assert!(d.eval_l_plemelj(-0.75, 0.5).unwrap().im < 0.0);
    }

    #[test]
    fn asymptotic_expansion_values() {
        let d = disp();
        let two = d.eval_l_asymptotic(c(0.0, 2.0), 0.9, AsymptoticOrder::Two).unwrap();
        assert!((two - c(0.25, 0.0)).norm() < 1e-15);
        let four = d.eval_l_asymptotic(c(0.0, 1.0), 0.1, AsymptoticOrder::Four).unwrap();
        assert!((four - c(1.03, 0.0)).norm() < 1e-14, "{four}");
        assert!(d.eval_l_asymptotic(c(0.0, 0.0), 0.1, AsymptoticOrder::Two).is_err());
    }

    #[test]
    fn asymptotic_remainder_ratio_stays_bounded() {
        let d = disp();
        let z = c(0.0, 1.1);
        let ratio = |k: f64| {
            let r = d.eval_l_closed(z, k).unwrap() - d.eval_l_asymptotic(z, k, AsymptoticOrder::Four).unwrap();
            r.norm() * z.norm().powi(4) / k.powi(4)
        };
        let (a, b) = (ratio(0.05), ratio(0.2));
        assert!(a <= 3.0 * b && b <= 3.0 * a, "{a} {b}");
    }

    #[test]
    fn two_sided_split_agrees_left_of_the_axis() {
        let d = disp();
        for (z, k) in [(c(-0.3, 1.0), 0.2), (c(-0.5, 0.4), 0.6), (c(-0.1, 2.0), 0.5)] {
            let a = d.eval_l_closed(z, k).unwrap();
            let b = d.eval_l_two_sided(z, k).unwrap();
            assert!((a - b).norm() < 1e-8 * (1.0 + a.norm()), "z={z}: {a} vs {b}");
        }
    }

    #[test]
    fn nonpositive_wavenumber_is_a_domain_error() {
        assert!(matches!(disp().eval_l_closed(c(1.0, 0.0), 0.0), Err(Error::Domain(_))));
        assert!(disp().eval_l_quadrature(c(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn penrose_high_frequency_margin_is_positive() {
        let g = PenroseGrid { kappa_min: 0.5, kappa_max: 3.0, n_kappa: 6, re_max: 5.0, im_max: 5.0, n_re: 40, n_im: 80 };
        let w = disp().penrose_margin(PenroseRegion::HighFreq { nu0: 0.5, lambda: 0.1 }, &g).unwrap();
        assert!(w.min > 0.0);
    }

    #[test]
    fn penrose_low_frequency_minimum_sits_on_a_disc() {
        let g = PenroseGrid { kappa_min: 0.01, kappa_max: 0.3, n_kappa: 5, re_max: 2.0, im_max: 3.0, n_re: 41, n_im: 121 };
        let eps = 0.3;
        let w = disp().penrose_margin(PenroseRegion::LowFreq { epsilon: eps, delta_prime: 0.05 }, &g).unwrap();
        assert!(w.min > 0.0);
        let dist = (w.z - c(0.0, 1.0)).norm().min((w.z + c(0.0, 1.0)).norm());
        let spacing = 6.0 / 120.0 + 2.05 / 40.0;
        assert!(dist >= eps && dist - eps <= spacing, "argmin {} at distance {dist}", w.z);
    }

    #[test]
    fn penrose_scan_rejects_empty_grids() {
        let g = PenroseGrid { kappa_min: 0.1, kappa_max: 0.2, n_kappa: 0, re_max: 1.0, im_max: 1.0, n_re: 1, n_im: 1 };
        let e = disp().penrose_margin(PenroseRegion::LowFreq { epsilon: 0.3, delta_prime: 0.05 }, &g).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(re in -0.05f64..3.0, im in -3.0f64..3.0, k in 0.05f64..2.0) {
            let d = disp();
            let z = c(re * k, im);
            let a = d.eval(z, k).unwrap();
            let b = d.eval(z.conj(), k).unwrap();
            prop_assert!((a.value.conj() - b.value).norm() <= 1e-14 * (1.0 + a.value.norm()));
            prop_assert!((a.dz_value.conj() - b.dz_value).norm() <= 1e-14 * (1.0 + a.dz_value.norm()));
        }

        #[test]
        fn closed_form_agrees_with_quadrature(re in -0.05f64..3.0, im in -3.0f64..3.0, k in 0.05f64..2.0) {
            let d = disp();
            let z = c(re * k, im);
            prop_assume!(z.norm() <= 3.0);
            let a = d.eval_l_closed(z, k).unwrap();
            let b = d.eval_l_quadrature(z, k).unwrap();
            prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "z={} k={}: {} vs {}", z, k, a, b);
        }
    }
}
