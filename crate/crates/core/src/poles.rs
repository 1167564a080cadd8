//! The Langmuir pole branches `p±(κ) = −λ(κ) ± iΩ(κ)` solving `𝓛(p, κ) = 1`,
//! with residue factors `J±(κ) = −1/∂_z𝓛(p±, κ)` and expansion coefficients
//! `A_j^±(κ) = J±(κ)/p±(κ)^{j+1}`.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::model::RadialGrid;
use crate::quad::{fit_line, least_squares, LineFit};

/// Number of tabulated coefficients `A_j`, `j = 0..N_COEFFS`.
pub const N_COEFFS: usize = 6;

/// Newton iteration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewtonOptions {
    /// Convergence threshold on `|1 − 𝓛|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Radius of the admissible disc around the seed.
    pub eps_disc: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-13, max_iter: 50, eps_disc: 0.3 }
    }
}

/// Newton iteration `z ← z + (1 − 𝓛)/∂_z𝓛` for the root of `1 − 𝓛(·, κ)`
/// near `seed`, on the branch `Im z > 0`.
pub fn find_pole(disp: &Dispersion, kappa: f64, seed: Complex64, opts: &NewtonOptions) -> Result<Complex64> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")));
    }
    let mut z = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..=opts.max_iter {
        let ev = disp.eval(z, kappa).map_err(|e| Error::RootFind {
            kappa,
            message: format!("dispersion evaluation failed at {z}: {e}"),
            residual,
        })?;
        let f = 1.0 - ev.value;
        residual = f.norm();
        if residual <= opts.tol {
            if z.im <= 0.0 {
                return Err(Error::BranchJump { kappa, root_re: z.re, root_im: z.im, distance: (z - seed).norm() });
            }
            return Ok(z);
        }
        z += f / ev.dz_value;
        let distance = (z - seed).norm();
        if !(distance <= opts.eps_disc) {
            return Err(Error::BranchJump { kappa, root_re: z.re, root_im: z.im, distance });
        }
    }
    Err(Error::RootFind { kappa, message: format!("no convergence in {} iterations", opts.max_iter), residual })
}

/// Branch data at one wavenumber. The `−` branch is the complex conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleNode {
    pub kappa: f64,
    pub p: Complex64,
    pub omega: f64,
    /// Damping rate `−Re p`; underflows to 0 at very small κ.
    pub lambda: f64,
    /// `log₁₀ λ`, accurate even where `λ` underflows.
    pub log10_lambda: f64,
    pub residual: f64,
    pub dz_l: Complex64,
    pub j_plus: Complex64,
    pub a_plus: [Complex64; N_COEFFS],
}

impl PoleNode {
    /// Post-processes a converged root.
    pub fn new(disp: &Dispersion, kappa: f64, p: Complex64) -> Result<Self> {
        let ev = disp.eval(p, kappa)?;
        let j_plus = -1.0 / ev.dz_value;
        let mut a_plus = [Complex64::new(0.0, 0.0); N_COEFFS];
        let mut pk = p;
        for a in a_plus.iter_mut() {
            *a = j_plus / pk;
            pk *= p;
        }
        let omega = p.im;
        let log10_lambda = log10_damping_rate(disp, kappa, p)?;
        Ok(Self {
            kappa,
            p,
            omega,
            lambda: 10f64.powf(log10_lambda),
            log10_lambda,
            residual: (1.0 - ev.value).norm(),
            dz_l: ev.dz_value,
            j_plus,
            a_plus,
        })
    }

    pub fn p_minus(&self) -> Complex64 {
        self.p.conj()
    }

    pub fn j_minus(&self) -> Complex64 {
        self.j_plus.conj()
    }

    pub fn a_minus(&self, j: usize) -> Complex64 {
        self.a_plus[j].conj()
    }

    /// `A_j⁺ + A_j⁻ = 2 Re A_j⁺`.
    pub fn a_sum(&self, j: usize) -> f64 {
        2.0 * self.a_plus[j].re
    }
}

/// `log₁₀ λ(κ)`. Taken directly from `−Re p` when that is resolvable above
/// the Newton tolerance; otherwise from the first-order perturbation of the
/// real-frequency root, `λ ≈ Im𝓛(iΩ)·Re(i/∂_z𝓛(iΩ))` with the exact
/// boundary value `Im𝓛(iΩ) = (ω_p² π r/(√(2π) κ² v³)) e^{−r²/2v²}`, `r = Ω/κ`,
/// evaluated in logarithms.
fn log10_damping_rate(disp: &Dispersion, kappa: f64, p: Complex64) -> Result<f64> {
    let direct = -p.re;
    if direct > 1e-6 {
        return Ok(direct.log10());
    }
    let prm = disp.params();
    let v = prm.v_th;
    let r = p.im / kappa;
    let log_im = (prm.omega_p * prm.omega_p * PI * r / ((2.0 * PI).sqrt() * kappa * kappa * v * v * v)).ln() - 0.5 * r * r / (v * v);
    let dz = disp.eval_dz_l(Complex64::new(0.0, p.im), kappa)?;
    let factor = (Complex64::i() / dz).re;
    if !(factor > 0.0) {
        return Err(Error::accuracy(format!("perturbative damping rate is not positive at kappa = {kappa}"), factor));
    }
    Ok((log_im + factor.ln()) / LN_10)
}

/// Tabulated `+` branch on increasing wavenumbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleBranch {
    nodes: Vec<PoleNode>,
}

/// Largest ratio between consecutive continuation wavenumbers.
const CONTINUATION_RATIO: f64 = 1.1;
/// Wavenumber where continuation starts from the cold-plasma seed `iω_p`.
const CONTINUATION_START: f64 = 1e-3;

impl PoleBranch {
    /// Continuation along `kappas` (strictly increasing, positive), starting
    /// from the seed `iω_p` at `min(κ₀, 10⁻³)` and inserting geometric
    /// sub-steps so consecutive wavenumbers differ by at most 10%.
    pub fn track(disp: &Dispersion, kappas: &[f64], opts: &NewtonOptions) -> Result<Self> {
        if kappas.is_empty() {
            return Err(Error::config("grid.kappa", "branch tracking needs at least one wavenumber"));
        }
        if kappas[0] <= 0.0 || kappas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("grid.kappa", "wavenumbers must be positive and strictly increasing"));
        }
        let mut k_prev = kappas[0].min(CONTINUATION_START);
        let mut root = find_pole(disp, k_prev, Complex64::new(0.0, disp.params().omega_p), opts)?;
        let mut nodes = Vec::with_capacity(kappas.len());
        for &k in kappas {
            while k > k_prev * CONTINUATION_RATIO {
                k_prev *= CONTINUATION_RATIO;
                root = find_pole(disp, k_prev, root, opts)?;
            }
            root = find_pole(disp, k, root, opts)?;
            k_prev = k;
            nodes.push(PoleNode::new(disp, k, root)?);
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[PoleNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kappa_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.kappa).collect()
    }

    /// The node tabulated at exactly `kappa`.
    pub fn node_at(&self, kappa: f64) -> Result<&PoleNode> {
        self.nodes
            .binary_search_by(|n| n.kappa.total_cmp(&kappa))
            .map(|i| &self.nodes[i])
            .map_err(|_| Error::Domain(format!("kappa = {kappa} is not a branch node")))
    }

    /// Branch data at an arbitrary `kappa` inside the tabulated range,
    /// continued from the nearest tabulated node below it.
    pub fn solve_at(&self, disp: &Dispersion, kappa: f64, opts: &NewtonOptions) -> Result<PoleNode> {
        if let Ok(n) = self.node_at(kappa) {
            return Ok(*n);
        }
        let first = self.nodes.first().ok_or_else(|| Error::Domain("empty branch".into()))?;
        let last = self.nodes.last().expect("non-empty");
        if kappa < first.kappa || kappa > last.kappa {
            return Err(Error::Domain(format!("kappa = {kappa} outside the branch range [{}, {}]", first.kappa, last.kappa)));
        }
        let i = self.nodes.partition_point(|n| n.kappa < kappa) - 1;
        let root = find_pole(disp, kappa, self.nodes[i].p, opts)?;
        PoleNode::new(disp, kappa, root)
    }
}

/// Tracks the branch on the nodes of `grid` that lie in `(0, ν₀]`.
pub fn track_branch(disp: &Dispersion, grid: &RadialGrid, opts: &NewtonOptions) -> Result<PoleBranch> {
    let kappas: Vec<f64> = grid.kappa().iter().copied().filter(|&k| k <= grid.nu0()).collect();
    PoleBranch::track(disp, &kappas, opts)
}

/// Quadratic and quartic least-squares models of `Ω²(κ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BohmGrossFit {
    pub n_nodes: usize,
    /// `Ω² ≈ c0 + c2 κ²`.
    pub c0: f64,
    pub c2: f64,
    pub max_residual: f64,
    /// `Ω² ≈ c0 + c2 κ² + c4 κ⁴`.
    pub quartic_c0: f64,
    pub quartic_c2: f64,
    pub quartic_c4: f64,
    pub quartic_max_residual: f64,
}

/// Fits `Ω²` against `κ²` on the nodes inside `window`.
pub fn bohm_gross_fit(branch: &PoleBranch, window: (f64, f64)) -> Result<BohmGrossFit> {
    let pts: Vec<(f64, f64)> = branch
        .nodes()
        .iter()
        .filter(|n| n.kappa >= window.0 && n.kappa <= window.1)
        .map(|n| (n.kappa * n.kappa, n.omega * n.omega))
        .collect();
    if pts.len() < 6 {
        return Err(Error::Fit(format!("Bohm-Gross fit needs at least 6 nodes in the window, found {}", pts.len())));
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let ones = vec![1.0; x.len()];
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let quad = least_squares(&[ones.clone(), x.clone()], &y)?;
    let quart = least_squares(&[ones, x.clone(), x2], &y)?;
    let max_res = |c: &[f64]| {
        x.iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - c.iter().enumerate().map(|(k, ck)| ck * xi.powi(k as i32)).sum::<f64>()).abs())
            .fold(0.0, f64::max)
    };
    Ok(BohmGrossFit {
        n_nodes: x.len(),
        c0: quad[0],
        c2: quad[1],
        max_residual: max_res(&quad),
        quartic_c0: quart[0],
        quartic_c2: quart[1],
        quartic_c4: quart[2],
        quartic_max_residual: max_res(&quart),
    })
}

/// One row of the flatness table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatnessRow {
    pub power: u32,
    /// `log₁₀ sup λ(κ)/κ^N` over the lower half of the tabulated range.
    pub sup_log10_ratio: f64,
    pub argmax_kappa: f64,
    /// The supremum sits at the top of the lower half.
    pub attained_at_top: bool,
    /// `λ/κ^N` decreases strictly as κ decreases across the lower half.
    pub monotone: bool,
}

/// For each `N`, scans `λ(κ)/κ^N` (in logarithms) over the lower half of
/// the tabulated nodes.
pub fn lambda_flatness_check(branch: &PoleBranch, powers: &[u32]) -> Result<Vec<FlatnessRow>> {
    let nodes = branch.nodes();
    if nodes.len() < 4 || nodes[0].kappa > 0.1 {
        return Err(Error::Resolution("flatness check needs a branch tabulated down to kappa <= 0.1".into()));
    }
    let lower = &nodes[..nodes.len() / 2];
    Ok(powers
        .iter()
        .map(|&n| {
            let logs: Vec<f64> = lower.iter().map(|nd| nd.log10_lambda - n as f64 * nd.kappa.log10()).collect();
            let (imax, &sup) = logs
                .iter()
                .enumerate()
                .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
            FlatnessRow {
                power: n,
                sup_log10_ratio: sup,
                argmax_kappa: lower[imax].kappa,
                attained_at_top: imax == lower.len() - 1,
                monotone: logs.windows(2).all(|w| w[1] > w[0]),
            }
        })
        .collect())
}

/// Regression of `ln λ` on `−1/κ²` over the nodes with `κ ≤ kappa_max`.
/// The slope is the fitted exponential constant `c` in `λ ∝ e^{−c/κ²}`.
pub fn exponential_constant_fit(branch: &PoleBranch, kappa_max: f64) -> Result<LineFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = branch
        .nodes()
        .iter()
        .filter(|n| n.kappa <= kappa_max)
        .map(|n| (-1.0 / (n.kappa * n.kappa), n.log10_lambda * LN_10))
        .unzip();
    fit_line(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn default_branch() -> PoleBranch {
        let grid = RadialGrid::geometric(1e-3, 0.7, 200, 0.7).unwrap();
        track_branch(&Dispersion::default(), &grid, &NewtonOptions::default()).unwrap()
    }

    #[test]
    fn cold_plasma_limit() {
        let p = find_pole(&Dispersion::default(), 1e-3, c(0.0, 1.0), &NewtonOptions::default()).unwrap();
        assert!((p - c(0.0, 1.0)).norm() < 1e-4);
    }

    #[test]
    fn bohm_gross_at_a_tenth() {
        let p = find_pole(&Dispersion::default(), 0.1, c(0.0, 1.0), &NewtonOptions::default()).unwrap();
        assert!((p.im * p.im - 1.03).abs() < 1e-3, "{p}");
    }

    #[test]
    fn residual_and_definition_consistency_on_every_node() {
        let d = Dispersion::default();
        let b = default_branch();
        assert_eq!(b.len(), 200);
        for n in b.nodes() {
            assert!(n.residual <= 1e-12, "kappa {}", n.kappa);
            assert!((1.0 - d.eval_l_closed(n.p_minus(), n.kappa).unwrap()).norm() <= 1e-12);
            assert!(n.log10_lambda.is_finite());
            let mut pk = n.p;
            for j in 0..N_COEFFS {
                assert!((n.a_plus[j] * pk - n.j_plus).norm() <= 1e-14 * n.j_plus.norm());
                pk *= n.p;
            }
        }
        assert!(b.nodes().windows(2).all(|w| w[1].omega > w[0].omega));
    }

    #[test]
    fn residue_limits_at_small_wavenumber() {
        let b = default_branch();
        let n = &b.nodes()[0];
        assert!((n.j_plus - c(0.0, 0.5)).norm() < 1e-4);
        assert!((n.a_sum(0) - 1.0).abs() < 1e-4);
        assert!(n.a_sum(1).abs() < 1e-4);
    }

    #[test]
    fn damping_rate_paths_agree_where_both_apply() {
        let d = Dispersion::default();
        for (k, tol) in [(0.2, 2e-3), (0.3, 2e-2)] {
            let p = find_pole(&d, k, c(0.0, 1.0), &NewtonOptions::default()).unwrap();
            let prm = d.params();
            let r = p.im / k;
            let im = prm.omega_p.powi(2) * PI * r / ((2.0 * PI).sqrt() * k * k) * (-0.5 * r * r).exp();
            let dz = d.eval_dz_l(c(0.0, p.im), k).unwrap();
            let pert = im * (Complex64::i() / dz).re;
            assert!((pert / -p.re - 1.0).abs() < tol, "k={k}: {pert} vs {}", -p.re);
        }
    }

    #[test]
    fn seed_perturbation_gives_the_same_root() {
        let d = Dispersion::default();
        let base = find_pole(&d, 0.4, c(0.0, 1.2), &NewtonOptions::default()).unwrap();
        for s in [c(1e-3, 0.0), c(0.0, -1e-3), c(-7e-4, 7e-4)] {
            let p = find_pole(&d, 0.4, base + s, &NewtonOptions::default()).unwrap();
            assert!((p - base).norm() < 1e-10);
        }
    }

    #[test]
    fn distant_seed_is_a_branch_jump() {
        let opts = NewtonOptions { eps_disc: 0.05, ..NewtonOptions::default() };
        let e = find_pole(&Dispersion::default(), 0.6, c(0.0, 1.0), &opts).unwrap_err();
        assert!(matches!(e, Error::BranchJump { .. }), "{e}");
        assert_eq!(e.exit_code(), 5);
    }

    #[test]
    fn iteration_cap_is_a_root_find_error() {
        let opts = NewtonOptions { max_iter: 1, ..NewtonOptions::default() };
        let e = find_pole(&Dispersion::default(), 0.5, c(0.0, 1.2), &opts).unwrap_err();
        assert!(matches!(e, Error::RootFind { .. }));
    }

    #[test]
    fn bohm_gross_fit_recovers_the_long_wave_coefficients() {
        let grid = RadialGrid::geometric(1e-3, 0.7, 400, 0.7).unwrap();
        let b = track_branch(&Dispersion::default(), &grid, &NewtonOptions::default()).unwrap();
        // Below 0.06 the κ⁴ term is too small to bias the straight-line fit.
        let fit = bohm_gross_fit(&b, (0.01, 0.06)).unwrap();
        assert!((fit.c0 - 1.0).abs() < 1e-4, "{fit:?}");
        assert!((fit.c2 - 3.0).abs() < 0.05, "{fit:?}");
        // On the wider window the quartic term is visible and the refit captures it.
        let wide = bohm_gross_fit(&b, (0.05, 0.3)).unwrap();
        assert!(wide.quartic_max_residual * 10.0 <= wide.max_residual);
        assert!((wide.quartic_c0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn degenerate_fit_window_is_an_error() {
        assert!(matches!(bohm_gross_fit(&default_branch(), (0.2, 0.2)), Err(Error::Fit(_))));
    }

    #[test]
    fn exponential_constant_is_one_half() {
        let fit = exponential_constant_fit(&default_branch(), 0.1).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-3, "{fit:?}");
    }

    #[test]
    fn flatness_ratios_decrease_toward_zero() {
        let rows = lambda_flatness_check(&default_branch(), &[2, 4, 6]).unwrap();
        for r in rows {
            assert!(r.monotone && r.attained_at_top, "{r:?}");
        }
    }

    #[test]
    fn solve_at_interpolates_between_nodes() {
        let d = Dispersion::default();
        let b = default_branch();
        let n = b.solve_at(&d, 0.3333, &NewtonOptions::default()).unwrap();
        assert!(n.residual <= 1e-12);
        assert!(b.solve_at(&d, 0.9, &NewtonOptions::default()).is_err());
    }
}
