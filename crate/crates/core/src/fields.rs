//! Four-way decomposition of the electric field and its physical-space
//! norms.
//!
//! Fourier convention: `ĥ(k) = ∫ e^{−ik·x} h(x) dx`, inverse with
//! `(2π)^{−3}`. The field law `E = −∇W∗ρ` with `Ŵ = w0/|k|²` gives
//! `Ê(t,k) = −i k̂ e(t,κ)` with the radial amplitude `e = (w0/κ) ρ̂`, and
//! on radial `x`, `E(x) = E_r(|x|) x̂` with
//! `E_r(r) = (2π)^{−3} ∫ e(κ) j₁(κr) 4πκ² dκ`.
//!
//! With `g(τ) = G(κ, κτ)` and `A_j^± = J±/p±^{j+1}` the amplitude splits as
//!
//! * `e_LD1 = (w0/κ)[g(t) − Σ_{j≤ℓ} Σ± A_j^± κʲ G_j(κ,κt)]`,
//! * `e_KG1 = (w0/κ) Σ_{j≤ℓ} Σ± A_j^± e^{p±t} κʲ G_j(κ,0)`,
//! * `e_KG2 = (w0/κ) Σ± A_ℓ^± ∫₀ᵗ e^{p±(t−τ)} κ^{ℓ+1} G_{ℓ+1}(κ,κτ) dτ`,
//! * `e_LD2 = (w0/κ) ∫₀ᵗ 𝓡_RFT(t−τ) g(τ) dτ`,
//!
//! below `ν₀`; above it the whole amplitude comes from the direct solve and
//! is booked as `e_LD2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::model::{InitialDatum, RadialGrid, TimeGrid};
use crate::poles::{PoleBranch, PoleNode, N_COEFFS};
use crate::quad::{convolve_gregory_real, fit_line, GaussLegendre};
use crate::resolvent::{ContourQuadrature, ContourSpec};
use crate::special::{spherical_j0, spherical_j1};
use crate::volterra::{richardson, solve_volterra_direct};

/// `(2π)³`.
const TWO_PI_CUBED: f64 = 8.0 * PI * PI * PI;
/// Datum samples below this fraction of the peak are treated as zero.
const SUPPORT_CUTOFF: f64 = 1e-17;
/// Radial step of the x-grids used for sup norms.
pub const X_STEP: f64 = 0.25;

/// A field component or a sum of components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Ld1,
    Ld2,
    Kg1,
    Kg2,
    /// `e_LD1 + e_LD2`.
    Ld,
    /// `e_KG1 + e_KG2`.
    Kg,
    /// All four components.
    Sum,
    /// From the direct density solve.
    Direct,
}

impl Component {
    pub const PARTS: [Component; 4] = [Component::Ld1, Component::Ld2, Component::Kg1, Component::Kg2];

    pub fn name(self) -> &'static str {
        match self {
            Component::Ld1 => "e_ld1",
            Component::Ld2 => "e_ld2",
            Component::Kg1 => "e_kg1",
            Component::Kg2 => "e_kg2",
            Component::Ld => "e_ld",
            Component::Kg => "e_kg",
            Component::Sum => "e_sum",
            Component::Direct => "e_total_direct",
        }
    }

    fn mask(self) -> [bool; 4] {
        match self {
            Component::Ld1 => [true, false, false, false],
            Component::Ld2 => [false, true, false, false],
            Component::Kg1 => [false, false, true, false],
            Component::Kg2 => [false, false, false, true],
            Component::Ld => [true, true, false, false],
            Component::Kg => [false, false, true, true],
            Component::Sum | Component::Direct => [true; 4],
        }
    }
}

/// How the amplitude at a wavenumber was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSource {
    /// Pole residues plus contour remainder.
    Split,
    /// Direct density solve, all booked as `e_LD2`.
    DirectHighFrequency,
}

/// Settings for [`decompose_field`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionOptions {
    /// Computational time grid.
    pub time: TimeGrid,
    /// Amplitudes are stored every `output_stride` steps.
    pub output_stride: usize,
    /// Expansion order `ℓ`.
    pub ell: usize,
    pub contour: ContourSpec,
    /// Also store the amplitude from the direct density solve.
    pub with_direct: bool,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self { time: TimeGrid { dt: 0.05, steps: 4000 }, output_stride: 20, ell: 4, contour: ContourSpec::compact(), with_direct: false }
    }
}

/// Full-resolution `L²` norms of the components on the computational grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Series {
    pub time: TimeGrid,
    pub ld1: Vec<f64>,
    pub ld2: Vec<f64>,
    pub kg1: Vec<f64>,
    pub kg2: Vec<f64>,
    pub ld: Vec<f64>,
    pub kg: Vec<f64>,
    pub sum: Vec<f64>,
    pub direct: Option<Vec<f64>>,
}

impl L2Series {
    pub fn get(&self, c: Component) -> Option<&[f64]> {
        Some(match c {
            Component::Ld1 => &self.ld1,
            Component::Ld2 => &self.ld2,
            Component::Kg1 => &self.kg1,
            Component::Kg2 => &self.kg2,
            Component::Ld => &self.ld,
            Component::Kg => &self.kg,
            Component::Sum => &self.sum,
            Component::Direct => return self.direct.as_deref(),
        })
    }
}

/// Radial field amplitudes on the (output time, κ) grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDecomposition {
    pub grid: RadialGrid,
    /// Times at which amplitudes are stored.
    pub output: TimeGrid,
    pub ell: usize,
    pub source: Vec<FieldSource>,
    /// `e_ld1[i][n]` is the amplitude at `κ_i`, output time `n`.
    pub e_ld1: Vec<Vec<Complex64>>,
    pub e_ld2: Vec<Vec<Complex64>>,
    pub e_kg1: Vec<Vec<Complex64>>,
    pub e_kg2: Vec<Vec<Complex64>>,
    pub e_total_direct: Option<Vec<Vec<Complex64>>>,
    pub l2: L2Series,
}

impl FieldDecomposition {
    fn parts(&self) -> [&Vec<Vec<Complex64>>; 4] {
        [&self.e_ld1, &self.e_ld2, &self.e_kg1, &self.e_kg2]
    }

    /// Amplitude over κ of a component at output index `n`.
    pub fn slice(&self, c: Component, n: usize) -> Result<Vec<Complex64>> {
        if c == Component::Direct {
            let d = self.e_total_direct.as_ref().ok_or_else(|| Error::config("fields.with_direct", "the direct amplitude was not computed"))?;
            return Ok(d.iter().map(|row| row[n]).collect());
        }
        let mask = c.mask();
        let parts = self.parts();
        Ok((0..self.grid.len())
            .map(|i| (0..4).filter(|&p| mask[p]).map(|p| parts[p][i][n]).sum())
            .collect())
    }

    /// `max |Σ components − direct|` over the stored grid.
    pub fn sum_identity_error(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 0..self.output.len() {
            let s = self.slice(Component::Sum, n)?;
            let d = self.slice(Component::Direct, n)?;
            worst = s.iter().zip(&d).map(|(a, b)| (a - b).norm()).fold(worst, f64::max);
        }
        Ok(worst)
    }
}

/// Amplitudes at one wavenumber on the full computational time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeFields {
    pub kappa: f64,
    /// `[e_LD1, e_LD2, e_KG1, e_KG2]`.
    pub parts: [Vec<Complex64>; 4],
    pub direct: Option<Vec<Complex64>>,
    pub source: FieldSource,
}

/// The decomposition at a single wavenumber: the four-way split below `ν₀`
/// (where `kappa` must be a node of `branch`), the direct solve above it.
pub fn decompose_wavenumber(disp: &Dispersion, datum: &InitialDatum, branch: &PoleBranch, kappa: f64, nu0: f64, opts: &DecompositionOptions) -> Result<NodeFields> {
    check_options(datum, opts)?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")));
    }
    if kappa < nu0 {
        decompose_node(disp, datum, branch.node_at(kappa)?, opts)
    } else {
        direct_node(disp, datum, kappa, opts)
    }
}

fn check_options(datum: &InitialDatum, opts: &DecompositionOptions) -> Result<()> {
    if opts.ell + 1 > datum.max_derivative() || opts.ell + 1 > N_COEFFS {
        return Err(Error::config(
            "fields.ell",
            format!("expansion order {} needs derivatives to order {}, datum provides {}", opts.ell, opts.ell + 1, datum.max_derivative().min(N_COEFFS)),
        ));
    }
    if opts.output_stride == 0 || opts.time.steps % opts.output_stride != 0 {
        return Err(Error::config("fields.output_stride", "must be positive and divide the number of time steps"));
    }
    opts.contour.validate()
}

/// Builds the decomposition on every node of `grid`. Nodes below `ν₀` must
/// be tabulated in `branch`.
pub fn decompose_field(disp: &Dispersion, datum: &InitialDatum, branch: &PoleBranch, grid: &RadialGrid, opts: &DecompositionOptions) -> Result<FieldDecomposition> {
    check_options(datum, opts)?;
    let time = opts.time;
    let stride = opts.output_stride;
    let output = TimeGrid { dt: time.dt * stride as f64, steps: time.steps / stride };
    let n_t = time.len();
    let n_k = grid.len();

    let mut acc = vec![vec![0.0; n_t]; 7];
    let mut acc_direct = opts.with_direct.then(|| vec![0.0; n_t]);
    let mut stored: [Vec<Vec<Complex64>>; 4] = Default::default();
    let mut stored_direct = opts.with_direct.then(Vec::new);
    let mut source = Vec::with_capacity(n_k);

    const CHUNK: usize = 32;
    for start in (0..n_k).step_by(CHUNK) {
        let idx: Vec<usize> = (start..(start + CHUNK).min(n_k)).collect();
        let results = idx
            .par_iter()
            .map(|&i| {
                let k = grid.kappa()[i];
                if k < grid.nu0() {
                    decompose_node(disp, datum, branch.node_at(k)?, opts)
                } else {
                    direct_node(disp, datum, k, opts)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        for (&i, res) in idx.iter().zip(results) {
            let w = grid.weights()[i] / TWO_PI_CUBED;
            for n in 0..n_t {
                let [a, b, c, d] = [res.parts[0][n], res.parts[1][n], res.parts[2][n], res.parts[3][n]];
                let vals = [a, b, c, d, a + b, c + d, a + b + c + d];
                for (slot, v) in acc.iter_mut().zip(vals) {
                    slot[n] += w * v.norm_sqr();
                }
            }
            if let (Some(acc_d), Some(d)) = (acc_direct.as_mut(), res.direct.as_ref()) {
                for (a, v) in acc_d.iter_mut().zip(d) {
                    *a += w * v.norm_sqr();
                }
            }
            for (dst, src) in stored.iter_mut().zip(&res.parts) {
                dst.push(src.iter().step_by(stride).copied().collect());
            }
            if let (Some(dst), Some(d)) = (stored_direct.as_mut(), res.direct.as_ref()) {
                dst.push(d.iter().step_by(stride).copied().collect());
            }
            source.push(res.source);
        }
    }

    let sqrt = |v: Vec<f64>| v.into_iter().map(f64::sqrt).collect::<Vec<_>>();
    let mut acc = acc.into_iter().map(sqrt);
    let mut next = || acc.next().expect("seven accumulators");
    let l2 = L2Series {
        time,
        ld1: next(),
        ld2: next(),
        kg1: next(),
        kg2: next(),
        ld: next(),
        kg: next(),
        sum: next(),
        direct: acc_direct.map(sqrt),
    };
    let [e_ld1, e_ld2, e_kg1, e_kg2] = stored;
    Ok(FieldDecomposition { grid: grid.clone(), output, ell: opts.ell, source, e_ld1, e_ld2, e_kg1, e_kg2, e_total_direct: stored_direct, l2 })
}

/// Index past which `|v|` stays below `SUPPORT_CUTOFF · max|v|`.
fn support_len(v: &[Complex64]) -> usize {
    let peak = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    v.iter().rposition(|x| x.norm() > SUPPORT_CUTOFF * peak).map_or(0, |i| i + 1)
}

fn direct_amplitude(disp: &Dispersion, datum: &InitialDatum, kappa: f64, time: &TimeGrid) -> Result<Vec<Complex64>> {
    let pref = disp.params().w0 / kappa;
    let rho = richardson(time, |g| solve_volterra_direct(disp.background(), datum, kappa, g))?;
    Ok(rho.into_iter().map(|r| r * pref).collect())
}

fn direct_node(disp: &Dispersion, datum: &InitialDatum, kappa: f64, opts: &DecompositionOptions) -> Result<NodeFields> {
    let e = direct_amplitude(disp, datum, kappa, &opts.time)?;
    let zero = vec![Complex64::new(0.0, 0.0); e.len()];
    Ok(NodeFields {
        kappa,
        parts: [zero.clone(), e.clone(), zero.clone(), zero],
        direct: opts.with_direct.then_some(e),
        source: FieldSource::DirectHighFrequency,
    })
}

fn decompose_node(disp: &Dispersion, datum: &InitialDatum, node: &PoleNode, opts: &DecompositionOptions) -> Result<NodeFields> {
    let time = &opts.time;
    let ell = opts.ell;
    let k = node.kappa;
    let pref = disp.params().w0 / k;
    let n_t = time.len();
    let p = [node.p, node.p_minus()];
    let a = |sign: usize, j: usize| if sign == 0 { node.a_plus[j] } else { node.a_minus(j) };
    let kj: Vec<f64> = (0..=ell + 1).map(|j| k.powi(j as i32)).collect();

    let g: Vec<Complex64> = (0..n_t).map(|n| datum.g(k, k * time.t(n))).collect();
    let support = support_len(&g);

    // e_LD1 and e_KG1.
    let g0: Vec<Complex64> = (0..=ell).map(|j| datum.dg(j, k, 0.0) * kj[j]).collect();
    let mut ld1 = Vec::with_capacity(n_t);
    let mut kg1 = Vec::with_capacity(n_t);
    for (n, &gn) in g.iter().enumerate().take(n_t) {
        let t = time.t(n);
        let mut v = gn;
        if n < support {
            for (j, &kjj) in kj.iter().enumerate().take(ell + 1) {
                v -= (a(0, j) + a(1, j)) * datum.dg(j, k, k * t) * kjj;
            }
        }
        ld1.push(v * pref);
        let e = [(p[0] * t).exp(), (p[1] * t).exp()];
        let mut w = Complex64::new(0.0, 0.0);
        for (j, gj) in g0.iter().enumerate() {
            w += (a(0, j) * e[0] + a(1, j) * e[1]) * gj;
        }
        kg1.push(w * pref);
    }

    // e_KG2 by an exponential recurrence with Gauss–Legendre steps.
    let rule = GaussLegendre::new(8);
    let step = [(p[0] * time.dt).exp(), (p[1] * time.dt).exp()];
    let mut integral = [Complex64::new(0.0, 0.0); 2];
    let mut kg2 = Vec::with_capacity(n_t);
    kg2.push(Complex64::new(0.0, 0.0));
    for n in 1..n_t {
        let (t0, t1) = (time.t(n - 1), time.t(n));
        for (s, acc) in integral.iter_mut().enumerate() {
            *acc *= step[s];
            if n <= support + 1 {
                let local: Complex64 = rule
                    .mapped(t0, t1)
                    .map(|(tau, w)| (p[s] * (t1 - tau)).exp() * datum.dg(ell + 1, k, k * tau) * (w * kj[ell + 1]))
                    .sum();
                *acc += local;
            }
        }
        kg2.push((a(0, ell) * integral[0] + a(1, ell) * integral[1]) * pref);
    }

    // e_LD2 from the contour remainder.
    let quad = ContourQuadrature::new(disp, node, &opts.contour, time.dt)?;
    let rft = quad.trace(time);
    let ld2: Vec<Complex64> = convolve_gregory_real(&rft, &g, support, time.dt).into_iter().map(|v| v * pref).collect();

    let direct = if opts.with_direct { Some(direct_amplitude(disp, datum, k, time)?) } else { None };
    Ok(NodeFields { kappa: k, parts: [ld1, ld2, kg1, kg2], direct, source: FieldSource::Split })
}

/// `‖⟨∇, t∇⟩^σ E(t)‖_{L²}² = (2π)^{−3} ∫ ⟨κ, tκ⟩^{2σ} |e|² dk`.
pub fn l2_norm(grid: &RadialGrid, amp: &[Complex64], t: f64, sigma: f64) -> f64 {
    let s: f64 = grid
        .kappa()
        .iter()
        .zip(grid.weights())
        .zip(amp)
        .map(|((&k, &w), e)| {
            let weight = if sigma == 0.0 { 1.0 } else { (1.0 + k * k + t * t * k * k).powf(sigma) };
            w * weight * e.norm_sqr()
        })
        .sum();
    (s / TWO_PI_CUBED).sqrt()
}

fn check_aliasing(grid: &RadialGrid, amp: &[Complex64]) -> Result<()> {
    let energy: Vec<f64> = grid.weights().iter().zip(amp).map(|(w, e)| w * e.norm_sqr()).collect();
    let total: f64 = energy.iter().sum();
    let tail: f64 = energy.iter().rev().take(2).sum();
    if total > 0.0 && tail > 0.01 * total {
        return Err(Error::Resolution(format!(
            "spectrum not resolved: {:.3}% of the energy sits on the two highest wavenumbers",
            100.0 * tail / total
        )));
    }
    Ok(())
}

fn radial_transform(grid: &RadialGrid, amp: &[Complex64], r: &[f64], kernel: fn(f64) -> f64) -> Result<Vec<Complex64>> {
    if amp.len() != grid.len() {
        return Err(Error::config("grid.kappa", "amplitude and radial grid differ in length"));
    }
    check_aliasing(grid, amp)?;
    let peak = amp.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let active: Vec<(f64, Complex64)> = grid
        .kappa()
        .iter()
        .zip(grid.weights())
        .zip(amp)
        .filter(|(_, e)| e.norm() > 1e-15 * peak)
        .map(|((&k, &w), &e)| (k, e * (w / TWO_PI_CUBED)))
        .collect();
    Ok(r.iter().map(|&x| active.iter().map(|&(k, c)| c * kernel(k * x)).sum()).collect())
}

/// Radial component `E_r(r)` of the field whose spectrum is `−i k̂ e(κ)`:
/// `E_r(r) = (2π)^{−3} ∫ e(κ) j₁(κr) 4πκ² dκ`.
///
/// Fails with a resolution error when more than 1% of the spectral energy
/// sits on the two highest grid wavenumbers.
pub fn inverse_radial_transform(grid: &RadialGrid, amp: &[Complex64], r: &[f64]) -> Result<Vec<Complex64>> {
    radial_transform(grid, amp, r, spherical_j1)
}

/// Inverse transform of a radial scalar spectrum,
/// `h(r) = (2π)^{−3} ∫ ĥ(κ) j₀(κr) 4πκ² dκ`.
pub fn inverse_radial_transform_scalar(grid: &RadialGrid, amp: &[Complex64], r: &[f64]) -> Result<Vec<Complex64>> {
    radial_transform(grid, amp, r, spherical_j0)
}

/// Uniform radial grid `0, X_STEP, …` up to `3t + 20`.
pub fn sup_norm_grid(t: f64) -> Vec<f64> {
    let r_max = 3.0 * t + 20.0;
    let n = (r_max / X_STEP).ceil() as usize;
    (0..=n).map(|i| i as f64 * X_STEP).collect()
}

/// `max_{r ≤ 3t+20} |E_r(r)|` for the vector field with amplitude `e`.
pub fn linf_norm(grid: &RadialGrid, amp: &[Complex64], t: f64) -> Result<f64> {
    Ok(inverse_radial_transform(grid, amp, &sup_norm_grid(t))?.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Which norm a series tracks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NormKind {
    L2 { sigma: f64 },
    Linf,
}

impl NormKind {
    pub fn name(self) -> String {
        match self {
            NormKind::L2 { sigma: 0.0 } => "l2".into(),
            NormKind::L2 { sigma } => format!("l2_sigma{sigma}"),
            NormKind::Linf => "linf".into(),
        }
    }
}

/// Norm of a component at the stored output times inside `window`.
pub fn norm_series(decomp: &FieldDecomposition, component: Component, kind: NormKind, window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let idx: Vec<usize> = (0..decomp.output.len()).filter(|&n| (window.0..=window.1).contains(&decomp.output.t(n))).collect();
    let values = idx
        .par_iter()
        .map(|&n| {
            let t = decomp.output.t(n);
            let amp = decomp.slice(component, n)?;
            match kind {
                NormKind::L2 { sigma } => Ok(l2_norm(&decomp.grid, &amp, t, sigma)),
                NormKind::Linf => linf_norm(&decomp.grid, &amp, t),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((idx.iter().map(|&n| decomp.output.t(n)).collect(), values))
}

/// Power-law fit `‖·‖ ~ C tᵃ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub r2: f64,
    pub n_samples: usize,
    pub window: (f64, f64),
}

/// Least-squares slope of `log v` against `log t` over `window`.
pub fn fit_decay_exponent(t: &[f64], v: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if !(window.0 > 0.0 && window.1 > window.0) {
        return Err(Error::Fit(format!("decay window [{}, {}] must lie in positive times", window.0, window.1)));
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (&ti, &vi) in t.iter().zip(v) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        if !(vi > 0.0 && vi.is_finite()) {
            return Err(Error::Fit(format!("non-positive norm {vi} at t = {ti}")));
        }
        x.push(ti.ln());
        y.push(vi.ln());
    }
    if x.len() < 10 {
        return Err(Error::Fit(format!("only {} samples in the decay window", x.len())));
    }
    let fit = fit_line(&x, &y)?;
    Ok(DecayFit { exponent: fit.slope, r2: fit.r2, n_samples: x.len(), window })
}

/// Norms of free transport `𝔥̂(t,κ) = G(κ,κt)` and of its gradient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreeTransportReport {
    pub t: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    /// `‖∇𝔥(t)‖_{L^∞}`.
    pub grad_linf: Vec<f64>,
    pub l2_fit: DecayFit,
    pub linf_fit: DecayFit,
    pub grad_linf_fit: DecayFit,
}

/// Free-transport norms at `times`, with power-law fits over `window`.
pub fn free_transport_decay(datum: &InitialDatum, grid: &RadialGrid, times: &[f64], window: (f64, f64)) -> Result<FreeTransportReport> {
    let rows = times
        .par_iter()
        .map(|&t| {
            let rho: Vec<Complex64> = grid.kappa().iter().map(|&k| datum.g(k, k * t)).collect();
            let grad: Vec<Complex64> = grid.kappa().iter().zip(&rho).map(|(&k, r)| r * k).collect();
            let r = sup_norm_grid(t);
            let sup = |v: Vec<Complex64>| v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            Ok((
                l2_norm(grid, &rho, t, 0.0),
                sup(inverse_radial_transform_scalar(grid, &rho, &r)?),
                sup(inverse_radial_transform(grid, &grad, &r)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let l2: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let linf: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let grad_linf: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(FreeTransportReport {
        l2_fit: fit_decay_exponent(times, &l2, window)?,
        linf_fit: fit_decay_exponent(times, &linf, window)?,
        grad_linf_fit: fit_decay_exponent(times, &grad_linf, window)?,
        t: times.to_vec(),
        l2,
        linf,
        grad_linf,
    })
}

/// Smooth cutoff: 1 on `[0, ν₀/2]`, 0 on `[ν₀, ∞)`, `C^∞` in between.
pub fn low_pass(kappa: f64, nu0: f64) -> f64 {
    let x = (nu0 - kappa) / (0.5 * nu0);
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// `sup_x |K(t,x)|` for the weakly damped dispersive kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersiveKernelReport {
    pub t: Vec<f64>,
    pub sup: Vec<f64>,
    pub fit: Option<DecayFit>,
}

/// `K(t,r) = (2π)^{−3/2} ∫ e^{p₊(κ)t} a(κ) j₀(κr) 4πκ² dκ` with symbol
/// `a = amplitude · low_pass(κ, ν₀)`, maximized over
/// `r ≤ 2t·max|∇Ω| + 20`. Fails with a resolution error when the phase
/// changes by more than one radian between adjacent nodes.
pub fn dispersive_kernel_decay(branch: &PoleBranch, grid: &RadialGrid, amplitude: f64, times: &[f64], window: Option<(f64, f64)>) -> Result<DispersiveKernelReport> {
    let nu0 = grid.nu0();
    let mut nodes = Vec::new();
    for (&k, &w) in grid.kappa().iter().zip(grid.weights()) {
        let a = amplitude * low_pass(k, nu0);
        if a != 0.0 {
            nodes.push((k, w * a, branch.node_at(k)?.p));
        }
    }
    let group = nodes.windows(2).map(|w| ((w[1].2.im - w[0].2.im) / (w[1].0 - w[0].0)).abs()).fold(0.0, f64::max);
    let sup = times
        .par_iter()
        .map(|&t| {
            let r_max = 2.0 * t * group + 20.0;
            for w in nodes.windows(2) {
                let phase = (w[1].2.im - w[0].2.im).abs() * t + (w[1].0 - w[0].0) * r_max;
                if phase > 1.0 {
                    return Err(Error::Resolution(format!("kernel phase step {phase:.3} rad at kappa = {} exceeds 1 at t = {t}", w[0].0)));
                }
            }
            let coeff: Vec<(f64, Complex64)> = nodes.iter().map(|&(k, c, p)| (k, (p * t).exp() * c)).collect();
            let n_r = (r_max / X_STEP).ceil() as usize;
            let scale = (2.0 * PI).powf(-1.5);
            Ok((0..=n_r)
                .map(|i| {
                    let r = i as f64 * X_STEP;
                    coeff.iter().map(|&(k, c)| c * spherical_j0(k * r)).sum::<Complex64>().norm() * scale
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = match window {
        Some(w) => Some(fit_decay_exponent(times, &sup, w)?),
        None => None,
    };
    Ok(DispersiveKernelReport { t: times.to_vec(), sup, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DatumKind;
    use crate::poles::{track_branch, NewtonOptions};

    fn small_grid() -> RadialGrid {
        RadialGrid::panels(1e-3, 6.0, 0.7, 1.3, 0.05, 0.5, 16).unwrap()
    }

    #[test]
    fn sum_identity_and_cross_ell() {
        let disp = Dispersion::default();
        let grid = RadialGrid::panels(0.05, 3.0, 0.7, 1.3, 0.2, 0.8, 8).unwrap();
        let branch = track_branch(&disp, &grid, &NewtonOptions::default()).unwrap();
        let datum = InitialDatum::unit(DatumKind::GaussianRing);
        let time = TimeGrid::new(20.0, 0.01).unwrap();
        let mut sums = Vec::new();
        for ell in [0, 4] {
            let opts = DecompositionOptions { time, output_stride: 100, ell, with_direct: true, ..Default::default() };
            let d = decompose_field(&disp, &datum, &branch, &grid, &opts).unwrap();
            let err = d.sum_identity_error().unwrap();
            assert!(err <= 1e-6, "ell = {ell}: {err}");
            // t = 0: the sum is the initial field.
            let s0 = d.slice(Component::Sum, 0).unwrap();
            for (k, v) in grid.kappa().iter().zip(&s0) {
                assert!((v - datum.g(*k, 0.0) / *k).norm() < 1e-12);
            }
            sums.push(d.slice(Component::Sum, 1).unwrap());
            // KG parts vanish above ν₀.
            for (i, &k) in grid.kappa().iter().enumerate() {
                if k >= grid.nu0() {
                    assert!(d.e_kg1[i].iter().chain(&d.e_kg2[i]).all(|v| v.norm() == 0.0));
                }
            }
        }
        let diff = sums[0].iter().zip(&sums[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-6, "{diff}");
    }

    #[test]
    fn ell_beyond_datum_is_config_error() {
        let disp = Dispersion::default();
        let grid = small_grid();
        let branch = PoleBranch::track(&disp, &[0.1], &NewtonOptions::default()).unwrap();
        let opts = DecompositionOptions { ell: 6, ..Default::default() };
        let e = decompose_field(&disp, &InitialDatum::unit(DatumKind::GaussianRing), &branch, &grid, &opts).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn l2_norm_single_node_and_zero() {
        let (k, w) = (0.5, 0.01);
        let grid = RadialGrid::new(vec![k, 1.0], vec![4.0 * PI * k * k * w, 0.3], 0.7).unwrap();
        let v = l2_norm(&grid, &[Complex64::new(3.0, 4.0), Complex64::new(0.0, 0.0)], 0.0, 0.0);
        assert!((v * v - w * 25.0 * k * k * 4.0 * PI / TWO_PI_CUBED).abs() < 1e-15);
        let g = small_grid();
        assert_eq!(l2_norm(&g, &vec![Complex64::new(0.0, 0.0); g.len()], 1.0, 1.0), 0.0);
    }

    #[test]
    fn parseval_round_trip() {
        let grid = RadialGrid::panels(1e-3, 12.0, 0.7, 1.3, 0.05, 0.1, 16).unwrap();
        let amp: Vec<Complex64> = grid.kappa().iter().map(|&k| Complex64::new(k * (-0.5 * k * k).exp(), 0.0)).collect();
        let spectral = l2_norm(&grid, &amp, 0.0, 0.0);
        let rule = GaussLegendre::new(16);
        let mut phys = 0.0;
        for p in 0..400 {
            let (a, b) = (p as f64 * 0.1, (p + 1) as f64 * 0.1);
            let pts: Vec<(f64, f64)> = rule.mapped(a, b).collect();
            let r: Vec<f64> = pts.iter().map(|x| x.0).collect();
            let e = inverse_radial_transform(&grid, &amp, &r).unwrap();
            phys += pts.iter().zip(&e).map(|((x, w), v)| 4.0 * PI * x * x * w * v.norm_sqr()).sum::<f64>();
        }
        assert!((phys.sqrt() / spectral - 1.0).abs() < 1e-4, "{} vs {spectral}", phys.sqrt());
    }

    #[test]
    fn aliasing_is_detected() {
        let grid = small_grid();
        let amp: Vec<Complex64> = grid.kappa().iter().map(|_| Complex64::new(1.0, 0.0)).collect();
        assert_eq!(inverse_radial_transform(&grid, &amp, &[1.0]).unwrap_err().exit_code(), 4);
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        assert!(inverse_radial_transform(&grid, &zero, &[0.0, 1.0]).unwrap().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn decay_fit_on_synthetic_power_law() {
        let t: Vec<f64> = (0..50).map(|i| 20.0 + 4.0 * i as f64).collect();
        let v: Vec<f64> = t.iter().map(|x| 3.0 * x.powi(-4)).collect();
        let fit = fit_decay_exponent(&t, &v, (20.0, 200.0)).unwrap();
        assert!((fit.exponent + 4.0).abs() < 1e-6);
        let mut bad = v.clone();
        bad[3] = 0.0;
        assert_eq!(fit_decay_exponent(&t, &bad, (20.0, 200.0)).unwrap_err().exit_code(), 3);
        assert!(fit_decay_exponent(&t[..5], &v[..5], (20.0, 200.0)).is_err());
    }

    #[test]
    fn free_transport_rates() {
        let grid = RadialGrid::panels(1e-3, 8.0, 0.7, 1.3, 0.02, 0.25, 16).unwrap();
        let times: Vec<f64> = (0..=18).map(|i| 20.0 * (10f64).powf(i as f64 / 18.0)).collect();
        let rep = free_transport_decay(&InitialDatum::unit(DatumKind::ThermalShell), &grid, &times, (20.0, 200.0)).unwrap();
        assert!((rep.linf_fit.exponent + 3.0).abs() < 0.2, "{:?}", rep.linf_fit);
        assert!((rep.l2_fit.exponent + 1.5).abs() < 0.2, "{:?}", rep.l2_fit);
        assert!((rep.grad_linf_fit.exponent + 4.0).abs() < 0.3, "{:?}", rep.grad_linf_fit);
    }

    #[test]
    fn dispersive_kernel_rate_and_zero_symbol() {
        let disp = Dispersion::default();
        let grid = RadialGrid::panels(1e-3, 1.0, 0.7, 1.3, 0.01, 0.1, 16).unwrap();
        let branch = track_branch(&disp, &grid, &NewtonOptions::default()).unwrap();
        let times: Vec<f64> = (0..=12).map(|i| 10.0 * (10f64).powf(i as f64 / 12.0)).collect();
        let rep = dispersive_kernel_decay(&branch, &grid, 1.0, &times, Some((10.0, 100.0))).unwrap();
        let fit = rep.fit.unwrap();
        assert!((fit.exponent + 1.5).abs() < 0.2, "{fit:?}");
        assert!(rep.sup[0].is_finite());
        let zero = dispersive_kernel_decay(&branch, &grid, 0.0, &[1.0, 5.0], None).unwrap();
        assert!(zero.sup.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn low_pass_shape() {
        assert_eq!(low_pass(0.2, 0.7), 1.0);
        assert_eq!(low_pass(0.7, 0.7), 0.0);
        assert!((low_pass(0.525, 0.7) - 0.5).abs() < 1e-12);
    }
}
