//! Splitting of the resolvent kernel `𝓡 = 𝓡_KG + 𝓡_RFT`.
//!
//! `𝓡(t) = (1/2πi)∫ e^{zt} F(z) dz` with `F = 𝓛/(1 − 𝓛)` along a vertical
//! line right of every zero of `1 − 𝓛`. Moving the line left past the pole
//! pair `p±` leaves the residues `𝓡_KG = J₊e^{p₊t} + J₋e^{p₋t}` and the
//! integral over the deformed contour
//! `Γ = Γ₋ ∪ Γ₀ ∪ Γ₊`:
//!
//! * `Γ₀`: `Re z = γ′κ`, `|Im z| ≤ H`, `H = κ·min(R_cap, φ·Ω/κ)`;
//! * `Γ₊`: `z(s) = γ′κ − s + i(H + (1+β)s)`, `s ≥ 0`, and its mirror `Γ₋`.
//!
//! `F(z̄) = conj F(z)` reduces the integral to the upper half,
//! `𝓡_RFT(t) = (1/π) Im ∫_{Γ₀⁺ ∪ Γ₊} e^{zt} F(z) dz`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::model::{Background, TimeGrid};
use crate::poles::{PoleBranch, PoleNode};
use crate::quad::{fit_line, local_maxima, parabolic_peak, GaussLegendre};
use crate::volterra::{fit_envelope_decay, richardson, solve_resolvent_direct, EnvelopeFit};

/// Legs are long enough that `|e^{zt}| < e^{−LEG_DECAY}` at their far end
/// for every `t ≥ t_min`.
const LEG_DECAY: f64 = 40.0;
/// Minimum leg length.
const MIN_LEG: f64 = 1e3;

/// Shape and resolution of the deformed contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContourSpec {
    /// Abscissa of `Γ₀` as a multiple of κ; negative.
    pub gamma_prime: f64,
    /// Leg slope parameter `β`: legs rise by `1 + β` per unit moved left.
    pub slope: f64,
    /// Cap `R_cap` on the half-height of `Γ₀` in units of κ.
    pub height_cap: f64,
    /// Fraction `φ` of the pole frequency used as the half-height of `Γ₀`.
    pub height_fraction: f64,
    /// Gauss–Legendre order of every panel.
    pub panel_order: usize,
    /// Nodes on the upper half of `Γ₀`.
    pub nodes_gamma0: usize,
    /// Nodes on each leg.
    pub nodes_per_leg: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { gamma_prime: -0.5, slope: 0.5, height_cap: 3.0, height_fraction: 0.5, panel_order: 16, nodes_gamma0: 2000, nodes_per_leg: 2000 }
    }
}

impl ContourSpec {
    /// Default shape with 384 nodes on `Γ₀` and 1024 per leg, for long
    /// sweeps over many wavenumbers.
    pub fn compact() -> Self {
        Self { nodes_gamma0: 384, nodes_per_leg: 1024, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let field = |name: &str| format!("contour.{name}");
        if !(self.gamma_prime < 0.0 && self.gamma_prime.is_finite()) {
            return Err(Error::config(field("gamma_prime"), "must be negative"));
        }
        if !(self.slope > 0.0 && self.slope.is_finite()) {
            return Err(Error::config(field("slope"), "must be positive so the legs leave the Gaussian growth sector"));
        }
        if !(self.height_cap > 0.0 && self.height_cap.is_finite()) {
            return Err(Error::config(field("height_cap"), "must be positive"));
        }
        if !(self.height_fraction > 0.0 && self.height_fraction < 1.0) {
            return Err(Error::config(field("height_fraction"), "must lie in (0, 1)"));
        }
        if self.panel_order < 2 {
            return Err(Error::config(field("panel_order"), "must be at least 2"));
        }
        for (name, n) in [("nodes_gamma0", self.nodes_gamma0), ("nodes_per_leg", self.nodes_per_leg)] {
            if n < self.panel_order || n % self.panel_order != 0 {
                return Err(Error::config(field(name), format!("must be a positive multiple of panel_order = {}", self.panel_order)));
            }
        }
        Ok(())
    }

    /// Half-height `H` of `Γ₀` for a pole of frequency `omega`.
    pub fn height(&self, kappa: f64, omega: f64) -> f64 {
        kappa * self.height_cap.min(self.height_fraction * omega / kappa)
    }

    /// Point of the upper contour at height `y ≥ 0` above the real axis.
    pub fn abscissa_at(&self, kappa: f64, omega: f64, y: f64) -> f64 {
        let h = self.height(kappa, omega);
        let x0 = self.gamma_prime * kappa;
        if y <= h {
            x0
        } else {
            x0 - (y - h) / (1.0 + self.slope)
        }
    }
}

/// `𝓡_KG(t) = 2 Re(J₊ e^{p₊t})`.
pub fn kernel_kg(node: &PoleNode, t: f64) -> f64 {
    2.0 * (node.j_plus * (node.p * t).exp()).re
}

/// [`kernel_kg`] at a tabulated branch node.
pub fn kernel_kg_at(branch: &PoleBranch, kappa: f64, t: f64) -> Result<f64> {
    Ok(kernel_kg(branch.node_at(kappa)?, t))
}

/// [`kernel_kg`] on a time grid.
pub fn kg_trace(node: &PoleNode, time: &TimeGrid) -> Vec<f64> {
    (0..time.len()).map(|n| kernel_kg(node, time.t(n))).collect()
}

/// Quadrature of the remainder integral at one wavenumber, stored as the
/// sum of exponentials `𝓡_RFT(t) = (1/π) Im Σ c_i e^{z_i t}`.
#[derive(Debug, Clone)]
pub struct ContourQuadrature {
    kappa: f64,
    t_min: f64,
    nodes: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    /// `∫` of the leading tail `−ω_p²/z²` beyond the leg end; only
    /// contributes at `t = 0`.
    tail_at_zero: Complex64,
    min_pole_distance: f64,
}

impl ContourQuadrature {
    /// Builds the quadrature for times `t = 0` and `t ≥ t_min`.
    ///
    /// Fails with a contour-collision error when the pole lies within
    /// `10⁻³κ` of a node, and with a configuration error when the pole is
    /// not enclosed between the contour and the imaginary axis.
    pub fn new(disp: &Dispersion, node: &PoleNode, spec: &ContourSpec, t_min: f64) -> Result<Self> {
        spec.validate()?;
        if !(t_min > 0.0 && t_min.is_finite()) {
            return Err(Error::config("grid.dt", "the contour quadrature needs a positive smallest time"));
        }
        let kappa = node.kappa;
        let x0 = spec.gamma_prime * kappa;
        let h = spec.height(kappa, node.omega);
        let rule = GaussLegendre::new(spec.panel_order);
        let mut nodes = Vec::with_capacity(spec.nodes_gamma0 + spec.nodes_per_leg);
        let mut dz = Vec::with_capacity(nodes.capacity());

        // Upper half of Γ₀, uniform panels.
        let n_panels = spec.nodes_gamma0 / spec.panel_order;
        let width = h / n_panels as f64;
        for k in 0..n_panels {
            for (y, w) in rule.mapped(k as f64 * width, (k + 1) as f64 * width) {
                nodes.push(Complex64::new(x0, y));
                dz.push(Complex64::new(0.0, w));
            }
        }

        // Upper leg, panels uniform in ξ with s = s₀(e^ξ − 1).
        let leg_len = (LEG_DECAY / t_min).max(MIN_LEG);
        let s0 = 0.05 * kappa;
        let dir = Complex64::new(-1.0, 1.0 + spec.slope);
        let n_panels = spec.nodes_per_leg / spec.panel_order;
        let xi_end = (leg_len / s0).ln_1p();
        let dxi = xi_end / n_panels as f64;
        for k in 0..n_panels {
            for (xi, w) in rule.mapped(k as f64 * dxi, (k + 1) as f64 * dxi) {
                let s = s0 * xi.exp_m1();
                nodes.push(Complex64::new(x0, h) + dir * s);
                dz.push(dir * (w * s0 * xi.exp()));
            }
        }

        let min_pole_distance = nodes.iter().map(|z| (z - node.p).norm()).fold(f64::INFINITY, f64::min);
        if min_pole_distance < 1e-3 * kappa {
            return Err(Error::ContourCollision { kappa, distance: min_pole_distance });
        }
        if node.p.re <= spec.abscissa_at(kappa, node.omega, node.p.im) {
            return Err(Error::config(
                "contour.gamma_prime",
                format!("pole {} at kappa = {kappa} is not enclosed by the contour", node.p),
            ));
        }

        let coeffs = nodes
            .iter()
            .zip(&dz)
            .map(|(&z, &d)| {
                let l = disp.eval_l_closed(z, kappa)?;
                Ok(l / (1.0 - l) * d)
            })
            .collect::<Result<Vec<_>>>()?;

        let wp2 = disp.params().omega_p.powi(2);
        let z_end = Complex64::new(x0, h) + dir * leg_len;
        Ok(Self { kappa, t_min, nodes, coeffs, tail_at_zero: -wp2 / z_end, min_pole_distance })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    /// Upper-half contour nodes.
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn min_pole_distance(&self) -> f64 {
        self.min_pole_distance
    }

    /// Upper-half integral `∫ e^{zt} F dz`, before taking `(1/π) Im`.
    pub fn upper_integral(&self, t: f64) -> Complex64 {
        let mut acc: Complex64 = self.nodes.iter().zip(&self.coeffs).map(|(z, c)| c * (z * t).exp()).sum();
        if t == 0.0 {
            acc += self.tail_at_zero;
        }
        acc
    }

    /// `𝓡_RFT(t)`; accurate at `t = 0` and for `t ≥ t_min`.
    pub fn eval(&self, t: f64) -> f64 {
        self.upper_integral(t).im / std::f64::consts::PI
    }

    /// `𝓡_RFT` on a uniform grid by the recurrence `e^{z t_{n+1}} = e^{z t_n}e^{zΔt}`.
    /// Terms that have decayed below `10⁻²²` of the largest coefficient are
    /// dropped; the surviving terms keep their order.
    pub fn trace(&self, time: &TimeGrid) -> Vec<f64> {
        let n_nodes = self.nodes.len();
        let (mut re, mut im) = (Vec::with_capacity(n_nodes), Vec::with_capacity(n_nodes));
        let (mut step_re, mut step_im) = (Vec::with_capacity(n_nodes), Vec::with_capacity(n_nodes));
        for (z, c) in self.nodes.iter().zip(&self.coeffs) {
            let step = (z * time.dt).exp();
            re.push(c.re);
            im.push(c.im);
            step_re.push(step.re);
            step_im.push(step.im);
        }
        let c_max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let drop_below = (1e-22 * c_max).powi(2);
        let mut out = Vec::with_capacity(time.len());
        for n in 0..time.len() {
            let mut lanes = [0.0; 4];
            let mut chunks = im.chunks_exact(4);
            for ch in &mut chunks {
                for (l, v) in lanes.iter_mut().zip(ch) {
                    *l += v;
                }
            }
            let rest: f64 = chunks.remainder().iter().sum();
            out.push((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + rest);
            for i in 0..re.len() {
                let (a, b) = (re[i], im[i]);
                re[i] = a * step_re[i] - b * step_im[i];
                im[i] = a * step_im[i] + b * step_re[i];
            }
            if n % 64 == 63 {
                let keep: Vec<bool> = re.iter().zip(&im).map(|(a, b)| a * a + b * b >= drop_below).collect();
                for v in [&mut re, &mut im, &mut step_re, &mut step_im] {
                    let mut it = keep.iter();
                    v.retain(|_| *it.next().expect("mask length"));
                }
            }
        }
        out[0] += self.tail_at_zero.im;
        out.iter().map(|v| v / std::f64::consts::PI).collect()
    }
}

/// `𝓡_RFT(t)` by contour quadrature at a single time.
pub fn kernel_rft_contour(disp: &Dispersion, node: &PoleNode, t: f64, spec: &ContourSpec) -> Result<f64> {
    let t_min = if t > 0.0 { t } else { 1.0 };
    Ok(ContourQuadrature::new(disp, node, spec, t_min)?.eval(t))
}

/// Number of zeros of `1 − 𝓛` between the upper contour and the line
/// `Re z = right`, below height `top`, by the argument principle on the
/// boundary of that region.
pub fn count_enclosed_zeros(disp: &Dispersion, node: &PoleNode, spec: &ContourSpec, right: f64, top: f64, samples_per_side: usize) -> Result<i64> {
    spec.validate()?;
    let kappa = node.kappa;
    let x0 = spec.gamma_prime * kappa;
    let h = spec.height(kappa, node.omega);
    let x_top = spec.abscissa_at(kappa, node.omega, top);
    if !(top > h && right > x0) {
        return Err(Error::config("contour", "argument-principle box must extend above Γ₀ and right of it"));
    }
    let corners = [
        Complex64::new(x0, 0.0),
        Complex64::new(right, 0.0),
        Complex64::new(right, top),
        Complex64::new(x_top, top),
        Complex64::new(x0, h),
        Complex64::new(x0, 0.0),
    ];
    let mut total = 0.0;
    let mut prev = 1.0 - disp.eval_l_closed(corners[0], kappa)?;
    for w in corners.windows(2) {
        for i in 1..=samples_per_side {
            let z = w[0] + (w[1] - w[0]) * (i as f64 / samples_per_side as f64);
            let cur = 1.0 - disp.eval_l_closed(z, kappa)?;
            let step = (cur / prev).arg();
            if step.abs() > 1.0 {
                return Err(Error::Resolution(format!("argument step {step} too large; increase the sampling")));
            }
            total += step;
            prev = cur;
        }
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// Fitted remainder bound `|𝓡_RFT(t)| ≤ C e^{−λ₀κt}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderFit {
    pub kappa: f64,
    pub lambda0: f64,
    pub c: f64,
    pub r2: f64,
    pub n_peaks: usize,
    /// End of the fitted range (where the trace meets its rounding floor).
    pub t_end: f64,
}

/// Fits `λ₀` from the envelope of `|𝓡_RFT|` over `t ∈ [5/κ, 50/κ]`
/// (peaks below the rounding floor dropped), then
/// `C = sup_{t ≤ t_end} |𝓡_RFT(t)| e^{λ₀κt}`.
pub fn remainder_bound_fit(quad: &ContourQuadrature, dt: f64) -> Result<RemainderFit> {
    let kappa = quad.kappa();
    let window = (5.0 / kappa, 50.0 / kappa);
    let time = TimeGrid::new((window.1 / dt).ceil() * dt, dt)?;
    let trace: Vec<Complex64> = quad.trace(&time).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let fit = fit_envelope_decay(&trace, &time, window)?;
    let lambda0 = fit.rate / kappa;
    let mag: Vec<f64> = trace.iter().map(|v| v.norm()).collect();
    let floor = 1e-11 * mag.iter().cloned().fold(0.0, f64::max);
    let t_end = local_maxima(&mag)
        .into_iter()
        .filter(|&i| mag[i] > floor && time.t(i) <= window.1)
        .map(|i| time.t(i) + parabolic_peak(&mag, i, dt).0)
        .fold(0.0, f64::max);
    let c = mag
        .iter()
        .enumerate()
        .filter(|(n, _)| time.t(*n) <= t_end)
        .map(|(n, m)| m * (fit.rate * time.t(n)).exp())
        .fold(0.0, f64::max);
    Ok(RemainderFit { kappa, lambda0, c, r2: fit.r2, n_peaks: fit.n_peaks, t_end })
}

/// One wavenumber of the splitting check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRow {
    pub kappa: f64,
    pub max_discrepancy: f64,
    pub max_abs_direct: f64,
    pub max_abs_rft: f64,
}

/// Outcome of [`split_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    pub rows: Vec<SplitRow>,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Time traces of the three kernels at one wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTraces {
    pub kappa: f64,
    pub direct: Vec<f64>,
    pub kg: Vec<f64>,
    pub rft: Vec<f64>,
}

/// `𝓡_direct` (Richardson-extrapolated Volterra solve), `𝓡_KG` and
/// `𝓡_RFT` on `time` at the node's wavenumber.
pub fn kernel_traces(disp: &Dispersion, node: &PoleNode, time: &TimeGrid, spec: &ContourSpec) -> Result<KernelTraces> {
    let bg = disp.background();
    let direct = richardson(time, |g| solve_resolvent_direct(bg, node.kappa, g))?;
    let quad = ContourQuadrature::new(disp, node, spec, time.dt)?;
    Ok(KernelTraces { kappa: node.kappa, direct: direct.iter().map(|v| v.re).collect(), kg: kg_trace(node, time), rft: quad.trace(time) })
}

/// Tabulates `max_t |𝓡_direct − (𝓡_KG + 𝓡_RFT)|` per branch node.
pub fn split_check(disp: &Dispersion, branch: &PoleBranch, kappas: &[f64], time: &TimeGrid, spec: &ContourSpec, tolerance: f64) -> Result<SplitReport> {
    let rows = kappas
        .par_iter()
        .map(|&k| {
            let node = branch.node_at(k)?;
            let tr = kernel_traces(disp, node, time, spec)?;
            let max_discrepancy = tr.direct.iter().zip(&tr.kg).zip(&tr.rft).map(|((d, g), r)| (d - g - r).abs()).fold(0.0, f64::max);
            let max_abs = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            Ok(SplitRow { kappa: k, max_discrepancy, max_abs_direct: max_abs(&tr.direct), max_abs_rft: max_abs(&tr.rft) })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_discrepancy = rows.iter().map(|r| r.max_discrepancy).fold(0.0, f64::max);
    Ok(SplitReport { rows, max_discrepancy, tolerance, passed: max_discrepancy <= tolerance })
}

/// Exponential fit of the envelope of the direct kernel above `ν₀`, where
/// no pole is split off.
pub fn high_frequency_kernel_fit(bg: &dyn Background, kappa: f64, time: &TimeGrid) -> Result<EnvelopeFit> {
    let r = solve_resolvent_direct(bg, kappa, time)?;
    fit_envelope_decay(&r, time, (0.0, time.t_final()))
}

/// Log-log slope of `C(κ)` between wavenumbers, for the `κ³` scaling check.
pub fn remainder_scaling_exponent(fits: &[RemainderFit]) -> Result<f64> {
    let x: Vec<f64> = fits.iter().map(|f| f.kappa.ln()).collect();
    let y: Vec<f64> = fits.iter().map(|f| f.c.ln()).collect();
    Ok(fit_line(&x, &y)?.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poles::{NewtonOptions, PoleBranch};

    fn disp() -> Dispersion {
        Dispersion::default()
    }

    fn node(k: f64) -> PoleNode {
        let b = PoleBranch::track(&disp(), &[k], &NewtonOptions::default()).unwrap();
        b.nodes()[0]
    }

    #[test]
    fn kg_kernel_is_real_and_starts_near_zero() {
        let n = node(1e-3);
        assert!(kernel_kg(&n, 0.0).abs() < 1e-5);
        let n = node(0.1);
        let tg = TimeGrid::new(100.0, 0.001).unwrap();
        let tr = kg_trace(&n, &tg);
        let crossings: Vec<f64> = tr
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].signum() != w[1].signum())
            .map(|(i, w)| tg.t(i) + tg.dt * w[0] / (w[0] - w[1]))
            .collect();
        let period = 2.0 * (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
        let expected = std::f64::consts::TAU / n.omega;
        assert!((period / expected - 1.0).abs() < 0.01, "{period} vs {expected}");
    }

    #[test]
    fn kg_kernel_outside_branch_is_domain_error() {
        let b = PoleBranch::track(&disp(), &[0.1, 0.2], &NewtonOptions::default()).unwrap();
        assert_eq!(kernel_kg_at(&b, 0.15, 1.0).unwrap_err().exit_code(), 2);
        assert!(kernel_kg_at(&b, 0.2, 1.0).is_ok());
    }

    #[test]
    fn split_matches_direct_kernel_at_point_three() {
        let n = node(0.3);
        let tg = TimeGrid::new(20.0, 0.01).unwrap();
        let tr = kernel_traces(&disp(), &n, &tg, &ContourSpec::default()).unwrap();
        for t in [0.0, 1.0, 5.0, 20.0] {
            let i = (t / tg.dt).round() as usize;
            let diff = tr.direct[i] - tr.kg[i] - tr.rft[i];
            assert!(diff.abs() <= 1e-6, "t = {t}: {diff}");
        }
        let quad = ContourQuadrature::new(&disp(), &n, &ContourSpec::default(), tg.dt).unwrap();
        for t in [1.0, 5.0, 20.0] {
            let i = (t / tg.dt).round() as usize;
            assert!((quad.eval(t) - tr.rft[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn remainder_is_real_by_conjugate_symmetry() {
        let n = node(0.3);
        let d = disp();
        let quad = ContourQuadrature::new(&d, &n, &ContourSpec::default(), 0.5).unwrap();
        // The lower half is the mirror image traversed towards the axis: ∫ g dz = −Σ g(z̄) conj(dz).
        for t in [0.5, 3.0] {
            let upper = quad.upper_integral(t);
            let lower: Complex64 = quad
                .nodes()
                .iter()
                .zip(&quad.coeffs)
                .map(|(z, c)| {
                    let zc = z.conj();
                    let l = d.eval_l_closed(zc, 0.3).unwrap();
                    let f_up = {
                        let lu = d.eval_l_closed(*z, 0.3).unwrap();
                        lu / (1.0 - lu)
                    };
                    let dz = c / f_up;
                    -(l / (1.0 - l)) * dz.conj() * (zc * t).exp()
                })
                .sum();
            let full = (upper + lower) / Complex64::new(0.0, std::f64::consts::TAU);
            assert!(full.im.abs() < 1e-12, "{full}");
            assert!((full.re - quad.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn contour_independence() {
        let n = node(0.3);
        let d = disp();
        let base = ContourSpec::default();
        let moved = ContourSpec { gamma_prime: -0.4, slope: 0.7, height_fraction: 0.4, ..base };
        let q1 = ContourQuadrature::new(&d, &n, &base, 0.5).unwrap();
        let q2 = ContourQuadrature::new(&d, &n, &moved, 0.5).unwrap();
        let q3 = ContourQuadrature::new(&d, &n, &ContourSpec::compact(), 0.5).unwrap();
        for t in [0.0, 0.5, 2.0, 10.0, 40.0] {
            assert!((q1.eval(t) - q2.eval(t)).abs() < 1e-8, "t = {t}");
            assert!((q1.eval(t) - q3.eval(t)).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn remainder_is_bounded_near_zero() {
        let n = node(0.2);
        let q = ContourQuadrature::new(&disp(), &n, &ContourSpec::default(), 1e-3).unwrap();
        let r0 = q.eval(0.0);
        assert!((r0 + kernel_kg(&n, 0.0)).abs() < 1e-8, "{r0}");
        for t in [1e-3, 1e-2, 0.1] {
            assert!(q.eval(t).is_finite() && (q.eval(t) - r0).abs() < 1.0);
        }
    }

    #[test]
    fn argument_principle_finds_one_zero() {
        for k in [0.05, 0.3, 0.6] {
            let n = node(k);
            let count = count_enclosed_zeros(&disp(), &n, &ContourSpec::default(), 0.5, n.omega + 2.0, 20000).unwrap();
            assert_eq!(count, 1, "kappa = {k}");
        }
    }

    #[test]
    fn collision_and_enclosure_errors() {
        let k = 0.3;
        let n = node(k);
        let d = disp();
        // Γ₀ right of the pole: not enclosed.
        let right = ContourSpec { gamma_prime: -0.01, height_fraction: 0.999, height_cap: 10.0, ..ContourSpec::default() };
        assert!(matches!(ContourQuadrature::new(&d, &n, &right, 1.0).unwrap_err(), Error::Config { .. }));
        // Leg passing through the pole.
        let fraction = 0.99;
        let x0 = n.p.re + (1.0 - fraction) * n.omega / 1.5;
        let through = ContourSpec { gamma_prime: x0 / k, height_fraction: fraction, height_cap: 10.0, ..ContourSpec::default() };
        let e = ContourQuadrature::new(&d, &n, &through, 1.0).unwrap_err();
        assert!(matches!(e, Error::ContourCollision { .. }), "{e}");
        assert_eq!(e.exit_code(), 3);
        assert_eq!(ContourSpec { nodes_per_leg: 100, ..ContourSpec::default() }.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn high_frequency_kernel_decays() {
        let tg = TimeGrid::new(40.0, 0.01).unwrap();
        let fit = high_frequency_kernel_fit(disp().background(), 1.0, &tg).unwrap();
        assert!(fit.rate > 0.0 && fit.r2 >= 0.95, "{fit:?}");
    }

    #[test]
    fn remainder_bound_scales_like_kappa_cubed() {
        let d = disp();
        let fits: Vec<RemainderFit> = [0.05, 0.1]
            .iter()
            .map(|&k| remainder_bound_fit(&ContourQuadrature::new(&d, &node(k), &ContourSpec::default(), 0.05).unwrap(), 0.05).unwrap())
            .collect();
        let ratio = fits[0].c / fits[1].c;
        eprintln!("{fits:?} ratio {ratio}");
        assert!(ratio > 0.125 / 2.0 && ratio < 0.125 * 2.0);
    }
}
