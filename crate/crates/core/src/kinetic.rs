//! Distribution function on the ray `η = k̂s` in the free-transport moving
//! frame, its Klein-Gordon / Landau-damped split, and the scattering check.
//!
//! With `Ê = −i k̂ e` and `∇̂_v f⁰(η) = iη f̂⁰(η)`, only the `k̂`-component of
//! `η` enters and the Duhamel formula on the ray reads
//!
//! `ĝ(t,κ,s) = G(κ,s) − ∫₀ᵗ e(τ,κ) φ(s − κτ) dτ`, `φ(σ) = σ f̂⁰(σ)`.
//!
//! Its diagonal `s = κt` is the density, `ρ̂(t,κ) = ĝ(t,κ,κt)`.
//!
//! Integrating the `e_KG1` part by parts with `C_j^± = A_j^± κʲ ∂_sʲG(κ,0)`
//! and `ẽ(t) = (w0/κ) Σ_j Σ± C_j^± e^{p±t}/p±` splits it into additive
//! contributions to `ĝ`:
//!
//! * `g_KG(t,s) = −ẽ(t) φ(s − κt)`,
//! * `g₂(s) = ẽ(0) φ(s)`,
//! * `g₃(t,s) = −w0 Σ_j Σ± (C_j^±/p±) ∫₀ᵗ e^{p±τ} φ'(s − κτ) dτ`,
//!
//! and the rest is `g_rest = −∫₀ᵗ (e_KG2 + e_LD)(τ) φ(s − κτ) dτ`. Then
//! `ĝ = G + g_KG + g₂ + g₃ + g_rest`, `h_KG` is the transported `g_KG`, and
//! `h_LD = G + g₂ + g₃ + g_rest` in the moving frame.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::fields::{decompose_wavenumber, DecompositionOptions, FieldSource};
use crate::model::{Background, InitialDatum, RadialGrid, TimeGrid};
use crate::poles::{PoleBranch, PoleNode, N_COEFFS};
use crate::quad::{cumulative_integral, gregory_integral};
use crate::volterra::{richardson, solve_volterra_direct};

/// `(2π)³`.
const TWO_PI_CUBED: f64 = 8.0 * PI * PI * PI;
/// `φ` is treated as zero beyond this many thermal widths.
const PHI_EXTENT: f64 = 10.0;
/// Expansion order of the phase-shifted Klein-Gordon field.
pub const TILDE_ORDER: usize = 4;

/// `φ(σ) = σ f̂⁰(σ)`.
fn phi(bg: &dyn Background, sigma: f64) -> f64 {
    sigma * bg.fhat0(sigma)
}

/// `φ'(σ) = f̂⁰(σ)(1 − v_th² σ²)` for the Maxwellian.
fn dphi(bg: &dyn Background, sigma: f64) -> f64 {
    let v = bg.params().v_th;
    bg.fhat0(sigma) * (1.0 - v * v * sigma * sigma)
}

/// Pole data of the Klein-Gordon part at one wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KgPoles {
    /// `[p₊, p₋]`.
    pub p: [Complex64; 2],
    /// `c[j] = [C_j⁺, C_j⁻]` with `C_j^± = A_j^± κʲ ∂_sʲG(κ,0)`.
    pub c: Vec<[Complex64; 2]>,
}

impl KgPoles {
    pub fn new(node: &PoleNode, datum: &InitialDatum, ell: usize) -> Result<Self> {
        if ell >= N_COEFFS || ell > datum.max_derivative() {
            return Err(Error::config("kinetic.ell", format!("expansion order {ell} exceeds the available coefficients")));
        }
        let k = node.kappa;
        let c = (0..=ell)
            .map(|j| {
                let g = datum.dg(j, k, 0.0) * k.powi(j as i32);
                [node.a_plus[j] * g, node.a_minus(j) * g]
            })
            .collect();
        Ok(Self { p: [node.p, node.p_minus()], c })
    }

    /// `Σ_j Σ± C_j^± e^{p±t}/p±`.
    fn tilde_sum(&self, t: f64) -> Complex64 {
        let e = [(self.p[0] * t).exp() / self.p[0], (self.p[1] * t).exp() / self.p[1]];
        self.c.iter().map(|c| c[0] * e[0] + c[1] * e[1]).sum()
    }
}

/// `ẽ(t,κ) = (w0/κ) Σ_{j≤4} Σ± e^{p±t} A_j^± κʲ ∂_sʲG(κ,0)/p±`, the radial
/// amplitude of the phase-shifted field with `Ẽ_KG = i k̂ ẽ`, so that
/// `ĥ_KG(t,k,η) = −ẽ(t,κ) φ(k̂·η)`.
pub fn h_kg_tilde_field(disp: &Dispersion, branch: &PoleBranch, datum: &InitialDatum, nu0: f64, kappa: f64, t: f64) -> Result<Complex64> {
    if !(kappa > 0.0 && kappa < nu0) {
        return Err(Error::Domain(format!("the Klein-Gordon field needs 0 < kappa < nu0 = {nu0}, got {kappa}")));
    }
    let poles = KgPoles::new(branch.node_at(kappa)?, datum, TILDE_ORDER)?;
    Ok(disp.params().w0 / kappa * poles.tilde_sum(t))
}

/// Field amplitudes at one wavenumber on a fine time grid, grouped as the
/// Duhamel split needs them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldTrace {
    pub kappa: f64,
    pub time: TimeGrid,
    pub w0: f64,
    /// Absent above `ν₀` and without coupling.
    pub poles: Option<KgPoles>,
    pub e_kg1: Vec<Complex64>,
    pub e_kg2: Vec<Complex64>,
    /// `e_LD1 + e_LD2`.
    pub e_ld: Vec<Complex64>,
}

impl FieldTrace {
    /// Components from the field decomposition at `kappa`.
    pub fn from_decomposition(
        disp: &Dispersion,
        datum: &InitialDatum,
        branch: &PoleBranch,
        kappa: f64,
        nu0: f64,
        opts: &DecompositionOptions,
    ) -> Result<Self> {
        let nf = decompose_wavenumber(disp, datum, branch, kappa, nu0, opts)?;
        let poles = match nf.source {
            FieldSource::Split => Some(KgPoles::new(branch.node_at(kappa)?, datum, opts.ell)?),
            FieldSource::DirectHighFrequency => None,
        };
        let [ld1, ld2, kg1, kg2] = nf.parts;
        let e_ld = ld1.iter().zip(&ld2).map(|(a, b)| a + b).collect();
        Ok(Self { kappa, time: opts.time, w0: disp.params().w0, poles, e_kg1: kg1, e_kg2: kg2, e_ld })
    }

    /// The zero-coupling control: no field at all.
    pub fn zero_coupling(kappa: f64, time: TimeGrid) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); time.len()];
        Self { kappa, time, w0: 0.0, poles: None, e_kg1: zero.clone(), e_kg2: zero.clone(), e_ld: zero }
    }

    /// Total amplitude at step `n`.
    pub fn total(&self, n: usize) -> Complex64 {
        self.e_kg1[n] + self.e_kg2[n] + self.e_ld[n]
    }

    /// `ẽ(t)`, zero without poles.
    fn tilde(&self, t: f64) -> Complex64 {
        self.poles.as_ref().map_or(Complex64::new(0.0, 0.0), |p| self.w0 / self.kappa * p.tilde_sum(t))
    }
}

/// `ĝ(t,κ,s)` on an `(output time, s)` grid with its components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTrace {
    pub kappa: f64,
    pub s_nodes: Vec<f64>,
    pub time: TimeGrid,
    /// `G(κ,s)`.
    pub initial: Vec<Complex64>,
    /// `g[n][i]` at output time `n`, node `s_i`.
    pub g: Vec<Vec<Complex64>>,
    pub g_kg: Vec<Vec<Complex64>>,
    /// Time independent.
    pub g2: Vec<Complex64>,
    pub g3: Vec<Vec<Complex64>>,
    pub rest: Vec<Vec<Complex64>>,
    /// `ĝ(t_n, κ, κt_n)`, the density.
    pub diagonal: Vec<Complex64>,
}

impl PhaseTrace {
    /// `h_LD = G + g₂ + g₃ + g_rest` at output time `n`.
    pub fn h_ld(&self, n: usize) -> Vec<Complex64> {
        (0..self.s_nodes.len()).map(|i| self.initial[i] + self.g2[i] + self.g3[n][i] + self.rest[n][i]).collect()
    }

    /// `max |G + g_KG + g₂ + g₃ + g_rest − g|` over the grid.
    pub fn component_sum_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.time.len() {
            for i in 0..self.s_nodes.len() {
                let sum = self.initial[i] + self.g_kg[n][i] + self.g2[i] + self.g3[n][i] + self.rest[n][i];
                worst = worst.max((sum - self.g[n][i]).norm());
            }
        }
        worst
    }

    /// Index of output time `t`, if it is one.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        let x = t / self.time.dt;
        let n = x.round();
        ((x - n).abs() <= 1e-9 * x.max(1.0) && n >= 0.0 && (n as usize) < self.time.len()).then_some(n as usize)
    }
}

/// Checks that `s` is uniform and increasing and returns its step.
fn s_step(s: &[f64]) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::config("kinetic.s", "the s-grid needs at least two nodes"));
    }
    let h = s[1] - s[0];
    if !(h > 0.0) || s.iter().enumerate().any(|(i, &x)| (x - s[0] - i as f64 * h).abs() > 1e-9 * (1.0 + x.abs())) {
        return Err(Error::config("kinetic.s", "the s-grid must be uniform and increasing"));
    }
    Ok(h)
}

/// Uniform s-grid covering `[−margin, κ t_max + margin]` with step `h`.
pub fn s_grid_for(kappa: f64, t_max: f64, margin: f64, h: f64) -> Vec<f64> {
    let lo = -margin;
    let n = ((kappa * t_max + 2.0 * margin) / h).ceil() as usize;
    (0..=n).map(|i| lo + i as f64 * h).collect()
}

/// Running `∫₀^{t_m} f(τ) dτ` at the output steps `m·stride`, for an
/// integrand that vanishes outside the step window `[lo, hi]`.
fn windowed_cumulative(f: impl Fn(usize) -> Complex64, lo: usize, hi: usize, stride: usize, n_out: usize, dt: f64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if hi <= lo {
        return vec![zero; n_out];
    }
    let vals: Vec<Complex64> = (lo..=hi).map(f).collect();
    let cum = cumulative_integral(&vals, dt);
    (0..n_out)
        .map(|m| {
            let n = m * stride;
            if n <= lo {
                zero
            } else if n >= hi {
                cum[hi - lo]
            } else {
                cum[n - lo]
            }
        })
        .collect()
}

/// Evolves `ĝ` on the ray by fourth-order cumulative quadrature of the
/// Duhamel integral and assembles its components.
///
/// `output` must be a subsampling of the field's time grid. The s-grid
/// must span `[−L, κ t_final + L]` with `L = 10 max(w_s, 1/v_th)` so that
/// every translate `φ(s − κτ)` stays inside it.
pub fn evolve_g(disp: &Dispersion, datum: &InitialDatum, field: &FieldTrace, s_grid: &[f64], output: &TimeGrid) -> Result<PhaseTrace> {
    let bg = disp.background();
    let fine = field.time;
    let ratio = output.dt / fine.dt;
    let stride = ratio.round() as usize;
    if stride == 0 || (ratio - stride as f64).abs() > 1e-9 * ratio || output.steps * stride > fine.steps {
        return Err(Error::config("kinetic.t", "output times must be a subsampling of the field time grid"));
    }
    if [&field.e_kg1, &field.e_kg2, &field.e_ld].iter().any(|v| v.len() != fine.len()) {
        return Err(Error::config("kinetic.t", "field components do not match the field time grid"));
    }
    s_step(s_grid)?;
    let k = field.kappa;
    let v = disp.params().v_th;
    let margin = PHI_EXTENT * datum.spec().width_s.max(1.0 / v);
    let t_max = output.t_final();
    if s_grid[0] > -margin || s_grid[s_grid.len() - 1] < k * t_max + margin {
        return Err(Error::Resolution(format!(
            "s-grid [{}, {}] does not cover [{}, {}] needed up to t = {t_max} at kappa = {k}",
            s_grid[0],
            s_grid[s_grid.len() - 1],
            -margin,
            k * t_max + margin
        )));
    }
    let n_out = output.len();
    let n_fine = output.steps * stride;
    let dt = fine.dt;
    let phi_extent = PHI_EXTENT / v;

    // Step window where φ(s − κτ) is non-negligible.
    let window = |s: f64| -> (usize, usize) {
        let lo = ((s - phi_extent) / (k * dt)).floor().max(0.0);
        let hi = ((s + phi_extent) / (k * dt)).ceil().min(n_fine as f64);
        if hi < 0.0 {
            (0, 0)
        } else {
            (lo as usize, hi.max(0.0) as usize)
        }
    };
    let tilde0 = field.tilde(0.0);
    let tilde_out: Vec<Complex64> = (0..n_out).map(|m| field.tilde(output.t(m))).collect();

    let columns = s_grid
        .par_iter()
        .map(|&s| {
            let (lo, hi) = window(s);
            let tau = |n: usize| fine.t(n);
            let total = windowed_cumulative(|n| field.total(n) * phi(bg, s - k * tau(n)), lo, hi, stride, n_out, dt);
            let rest = windowed_cumulative(|n| (field.e_kg2[n] + field.e_ld[n]) * phi(bg, s - k * tau(n)), lo, hi, stride, n_out, dt);
            let g3 = match &field.poles {
                Some(poles) => {
                    let q: Vec<Complex64> = poles.c.iter().map(|c| c[0] / poles.p[0]).collect();
                    let qm: Vec<Complex64> = poles.c.iter().map(|c| c[1] / poles.p[1]).collect();
                    let (qs, qms): (Complex64, Complex64) = (q.iter().sum(), qm.iter().sum());
                    let integral = windowed_cumulative(
                        |n| {
                            let t = tau(n);
                            (qs * (poles.p[0] * t).exp() + qms * (poles.p[1] * t).exp()) * dphi(bg, s - k * t)
                        },
                        lo,
                        hi,
                        stride,
                        n_out,
                        dt,
                    );
                    integral.into_iter().map(|x| -field.w0 * x).collect()
                }
                None => vec![Complex64::new(0.0, 0.0); n_out],
            };
            let g0 = datum.g(k, s);
            let g: Vec<Complex64> = total.iter().map(|x| g0 - x).collect();
            let g_kg: Vec<Complex64> = (0..n_out).map(|m| -tilde_out[m] * phi(bg, s - k * output.t(m))).collect();
            let rest: Vec<Complex64> = rest.into_iter().map(|x| -x).collect();
            (g0, tilde0 * phi(bg, s), g, g_kg, g3, rest)
        })
        .collect::<Vec<_>>();

    let n_s = s_grid.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut g = vec![vec![zero; n_s]; n_out];
    let mut g_kg = g.clone();
    let mut g3 = g.clone();
    let mut rest = g.clone();
    let mut initial = Vec::with_capacity(n_s);
    let mut g2 = Vec::with_capacity(n_s);
    for (i, (g0, c2, cg, ckg, c3, cr)) in columns.into_iter().enumerate() {
        initial.push(g0);
        g2.push(c2);
        for m in 0..n_out {
            g[m][i] = cg[m];
            g_kg[m][i] = ckg[m];
            g3[m][i] = c3[m];
            rest[m][i] = cr[m];
        }
    }

    // Density on the diagonal s = κt.
    let diagonal = (0..n_out)
        .map(|m| {
            let n = m * stride;
            let t = fine.t(n);
            let first = n.saturating_sub((phi_extent / (k * dt)).ceil() as usize);
            let vals: Vec<Complex64> = (first..=n).map(|j| field.total(j) * phi(bg, k * (t - fine.t(j)))).collect();
            datum.g(k, k * t) - gregory_integral(&vals, dt)
        })
        .collect();

    Ok(PhaseTrace { kappa: k, s_nodes: s_grid.to_vec(), time: *output, initial, g, g_kg, g2, g3, rest, diagonal })
}

/// `max_n |ĝ(t_n,κ,κt_n) − ρ̂(t_n,κ)|` against the Richardson-extrapolated
/// direct density solve on the field's time grid.
pub fn density_consistency_error(disp: &Dispersion, datum: &InitialDatum, trace: &PhaseTrace, field_time: &TimeGrid) -> Result<f64> {
    let rho = richardson(field_time, |g| solve_volterra_direct(disp.background(), datum, trace.kappa, g))?;
    let stride = (trace.time.dt / field_time.dt).round() as usize;
    Ok(trace.diagonal.iter().enumerate().map(|(m, d)| (d - rho[m * stride]).norm()).fold(0.0, f64::max))
}

/// One Cauchy difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringRow {
    pub t1: f64,
    pub t2: f64,
    /// `‖h_LD(t₂) − h_LD(t₁)‖` in the moving frame.
    pub d: f64,
    /// The same difference restricted to `g₃`.
    pub d_g3: f64,
    /// The same difference restricted to `g_rest`.
    pub d_rest: f64,
    /// Component norms at `t₂`.
    pub norm_h_ld: f64,
    pub norm_g_kg: f64,
    pub norm_g3: f64,
    pub norm_rest: f64,
}

/// Result of [`scattering_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringReport {
    pub p: f64,
    pub rows: Vec<ScatteringRow>,
    /// `D` of each row divided by `D` of the first row (0 when that vanishes).
    pub ratios: Vec<f64>,
}

/// Weighted spectral norm `((2π)^{−3} Σ_κ W_κ Σ_s h |f|^p)^{1/p}` over the
/// reduced `(κ, s)` grid.
fn spectral_norm(traces: &[PhaseTrace], weights: &[f64], p: f64, f: impl Fn(usize, &PhaseTrace) -> Vec<Complex64>) -> f64 {
    let mut acc = 0.0;
    for (i, (tr, &w)) in traces.iter().zip(weights).enumerate() {
        let h = tr.s_nodes[1] - tr.s_nodes[0];
        let sum: f64 = f(i, tr).iter().map(|x| x.norm().powf(p)).sum();
        acc += w / TWO_PI_CUBED * h * sum;
    }
    acc.powf(1.0 / p)
}

/// Cauchy differences `D(t₁,t₂) = ‖h_LD(t₂) − h_LD(t₁)‖` over the traces
/// (one per wavenumber, with 3D radial weights `weights`) in a spectral
/// `ℓ^p` proxy norm.
pub fn scattering_check(traces: &[PhaseTrace], weights: &[f64], p: f64, t_pairs: &[(f64, f64)]) -> Result<ScatteringReport> {
    if traces.is_empty() || traces.len() != weights.len() {
        return Err(Error::config("kinetic.kappa", "need one weight per phase trace"));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::config("kinetic.p", format!("norm exponent must be finite and at least 1, got {p}")));
    }
    let mut rows = Vec::with_capacity(t_pairs.len());
    for &(t1, t2) in t_pairs {
        if t2 < t1 {
            return Err(Error::config("kinetic.t_pairs", format!("pair ({t1}, {t2}) is not increasing")));
        }
        let idx = |t: f64| -> Result<Vec<usize>> {
            traces
                .iter()
                .map(|tr| tr.time_index(t).ok_or_else(|| Error::Resolution(format!("t = {t} is not an output time of the phase traces"))))
                .collect()
        };
        let (n1, n2) = (idx(t1)?, idx(t2)?);
        let d = spectral_norm(traces, weights, p, |i, tr| tr.h_ld(n2[i]).iter().zip(tr.h_ld(n1[i])).map(|(a, b)| a - b).collect());
        let diff = |sel: &dyn Fn(&PhaseTrace) -> &Vec<Vec<Complex64>>| {
            spectral_norm(traces, weights, p, |i, tr| sel(tr)[n2[i]].iter().zip(&sel(tr)[n1[i]]).map(|(a, b)| a - b).collect())
        };
        let norm_of = |sel: &dyn Fn(&PhaseTrace, usize) -> Vec<Complex64>| spectral_norm(traces, weights, p, |i, tr| sel(tr, n2[i]));
        rows.push(ScatteringRow {
            t1,
            t2,
            d,
            d_g3: diff(&|tr| &tr.g3),
            d_rest: diff(&|tr| &tr.rest),
            norm_h_ld: norm_of(&|tr, n| tr.h_ld(n)),
            norm_g_kg: norm_of(&|tr, n| tr.g_kg[n].clone()),
            norm_g3: norm_of(&|tr, n| tr.g3[n].clone()),
            norm_rest: norm_of(&|tr, n| tr.rest[n].clone()),
        });
    }
    let d0 = rows.first().map_or(0.0, |r| r.d);
    let ratios = rows.iter().map(|r| if d0 > 0.0 { r.d / d0 } else { 0.0 }).collect();
    Ok(ScatteringReport { p, rows, ratios })
}

/// Settings of a full scattering run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringOptions {
    /// Field decomposition on the fine grid; its span bounds the largest time.
    pub decomposition: DecompositionOptions,
    /// Spacing of the stored phase-trace times.
    pub output_dt: f64,
    /// Step of the s-grids.
    pub s_step: f64,
    pub p: f64,
    pub t_pairs: Vec<(f64, f64)>,
    /// `false` runs the zero-coupling control.
    pub coupling: bool,
}

impl Default for ScatteringOptions {
    fn default() -> Self {
        Self {
            decomposition: DecompositionOptions { time: TimeGrid { dt: 0.05, steps: 2000 }, output_stride: 200, ..DecompositionOptions::default() },
            output_dt: 10.0,
            s_step: 0.2,
            p: 2.0,
            t_pairs: vec![(10.0, 20.0), (50.0, 100.0)],
            coupling: true,
        }
    }
}

/// Phase traces on every node of `grid` followed by [`scattering_check`].
pub fn scattering_run(disp: &Dispersion, datum: &InitialDatum, branch: &PoleBranch, grid: &RadialGrid, opts: &ScatteringOptions) -> Result<ScatteringReport> {
    let time = opts.decomposition.time;
    let steps = (opts.output_dt / time.dt).round() as usize;
    if steps == 0 || time.steps % steps != 0 {
        return Err(Error::config("kinetic.output_dt", "must be a multiple of the field time step that divides the span"));
    }
    let output = TimeGrid { dt: time.dt * steps as f64, steps: time.steps / steps };
    let margin = PHI_EXTENT * datum.spec().width_s.max(1.0 / disp.params().v_th);
    let traces = grid
        .kappa()
        .par_iter()
        .map(|&k| {
            let field = if opts.coupling {
                FieldTrace::from_decomposition(disp, datum, branch, k, grid.nu0(), &opts.decomposition)?
            } else {
                FieldTrace::zero_coupling(k, time)
            };
            let s = s_grid_for(k, output.t_final(), margin + opts.s_step, opts.s_step);
            evolve_g(disp, datum, &field, &s, &output)
        })
        .collect::<Result<Vec<_>>>()?;
    scattering_check(&traces, grid.weights(), opts.p, &opts.t_pairs)
}
