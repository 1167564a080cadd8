//! The acceptance suite: seventeen pass/fail checks with pinned fixtures and
//! tolerances, shared by the `accept` subcommand and the `acceptance` test
//! target.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::fields::{
    decompose_field, decompose_wavenumber, dispersive_kernel_decay, fit_decay_exponent, free_transport_decay, norm_series, Component, DecompositionOptions,
    FieldDecomposition, NormKind,
};
use crate::hydro::{hydro_slope_scan, HydroOptions};
use crate::kinetic::{scattering_run, ScatteringOptions};
use crate::model::{DatumKind, InitialDatum, RadialGrid, TimeGrid};
use crate::poles::{bohm_gross_fit, lambda_flatness_check, track_branch, NewtonOptions, PoleBranch};
use crate::resolvent::{high_frequency_kernel_fit, remainder_bound_fit, split_check, ContourQuadrature, ContourSpec};
use crate::volterra::{fit_envelope_decay, solve_volterra_direct};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Number of criteria in the suite.
pub const N_CRITERIA: u8 = 17;

/// Low/high frequency split used by every fixture.
const NU0: f64 = 0.7;

/// Identifiers and short names of the criteria, in order.
pub const CRITERIA: [(u8, &str); N_CRITERIA as usize] = [
    (1, "dispersion closed form vs quadrature"),
    (2, "boundary values on the imaginary axis"),
    (3, "pole residual and cold-plasma limit"),
    (4, "long-wave frequency fit"),
    (5, "damping rate vs time-domain envelope"),
    (6, "damping rate flatness"),
    (7, "resolvent splitting"),
    (8, "remainder bound scaling"),
    (9, "high-frequency kernel decay"),
    (10, "field decomposition identity"),
    (11, "decay exponents"),
    (12, "dispersive kernel decay"),
    (13, "Klein-Gordon boundedness"),
    (14, "residue coefficient limits"),
    (15, "Euler-Poisson comparison slope"),
    (16, "kinetic scattering"),
    (17, "report determinism"),
];

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// The headline number compared against the target.
    pub measured: f64,
    pub target: String,
    pub detail: String,
}

impl CriterionOutcome {
    /// One console line: `[PASS] 07 resolvent splitting: ...`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {:02} {}: measured {:?}, target {}; {}", self.id, self.name, self.measured, self.target, self.detail)
    }
}

/// The JSON report written by `accept`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptanceReport {
    pub schema_version: u32,
    pub package_version: String,
    pub criteria: Vec<CriterionOutcome>,
    pub passed: usize,
    pub failed: usize,
}

impl AcceptanceReport {
    pub fn new(criteria: Vec<CriterionOutcome>) -> Self {
        let passed = criteria.iter().filter(|c| c.passed).count();
        Self { schema_version: SCHEMA_VERSION, package_version: env!("CARGO_PKG_VERSION").to_string(), failed: criteria.len() - passed, passed, criteria }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Shared fixtures, built lazily and reused across criteria.
#[derive(Default)]
pub struct Suite {
    branch: Option<PoleBranch>,
    decay: Option<(RadialGrid, FieldDecomposition)>,
    reports: Vec<CriterionOutcome>,
}

fn outcome(id: u8, passed: bool, measured: f64, target: impl Into<String>, detail: impl Into<String>) -> CriterionOutcome {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    CriterionOutcome { id, name, passed, measured, target: target.into(), detail: detail.into() }
}

fn disp() -> Dispersion {
    Dispersion::default()
}

fn ring() -> InitialDatum {
    InitialDatum::unit(DatumKind::GaussianRing)
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

/// The 200-node geometric branch table on `[10⁻³, ν₀]`.
pub fn default_branch_grid() -> Result<RadialGrid> {
    RadialGrid::geometric(1e-3, NU0, 200, NU0)
}

/// The quadrature grid of the decay runs.
pub fn default_field_grid() -> Result<RadialGrid> {
    RadialGrid::panels(1e-3, 8.0, NU0, 1.3, 0.017, 0.25, 16)
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    fn branch(&mut self) -> Result<&PoleBranch> {
        if self.branch.is_none() {
            self.branch = Some(track_branch(&disp(), &default_branch_grid()?, &NewtonOptions::default())?);
        }
        Ok(self.branch.as_ref().expect("branch was just built"))
    }

    fn decay(&mut self) -> Result<&(RadialGrid, FieldDecomposition)> {
        if self.decay.is_none() {
            let d = disp();
            let grid = default_field_grid()?;
            let branch = track_branch(&d, &grid, &NewtonOptions::default())?;
            let datum = InitialDatum::unit(DatumKind::ThermalShell);
            let dec = decompose_field(&d, &datum, &branch, &grid, &DecompositionOptions::default())?;
            self.decay = Some((grid, dec));
        }
        Ok(self.decay.as_ref().expect("decomposition was just built"))
    }

    /// Runs criterion `id`; a numerical error is reported as a failure with
    /// the error text as detail.
    pub fn run(&mut self, id: u8) -> CriterionOutcome {
        let res = match id {
            1 => self.dispersion_oracle(),
            2 => self.plemelj(),
            3 => self.pole_residual(),
            4 => self.bohm_gross(),
            5 => self.landau_rate(),
            6 => self.flatness(),
            7 => self.splitting(),
            8 => self.remainder_shape(),
            9 => self.high_frequency(),
            10 => self.decomposition_identity(),
            11 => self.decay_exponents(),
            12 => self.dispersive_kernel(),
            13 => self.kg_boundedness(),
            14 => self.coefficient_limits(),
            15 => self.hydro(),
            16 => self.scattering(),
            17 => self.determinism(),
            _ => Err(Error::config("accept.criterion", format!("no criterion {id}"))),
        };
        let out = res.unwrap_or_else(|e| outcome(id, false, f64::NAN, "no error", format!("error: {e}")));
        if id < N_CRITERIA {
            self.reports.push(out.clone());
        }
        out
    }

    /// Runs every criterion in order, calling `progress` after each one.
    pub fn run_all(&mut self, mut progress: impl FnMut(&CriterionOutcome)) -> AcceptanceReport {
        let outs = (1..=N_CRITERIA)
            .map(|id| {
                let o = self.run(id);
                progress(&o);
                o
            })
            .collect();
        AcceptanceReport::new(outs)
    }

    fn dispersion_oracle(&mut self) -> Result<CriterionOutcome> {
        let start = Instant::now();
        let d = disp();
        let delta_prime = 0.05;
        let kappas: Vec<f64> = (0..8).map(|i| 0.05 * (40f64).powf(i as f64 / 7.0)).collect();
        // 20 radii × 30 angles in the half-disc, shifted to Re z ≥ −δ′κ/2.
        let points: Vec<(f64, f64)> = (0..20)
            .flat_map(|i| (0..30).map(move |j| (2.95 * (i as f64 + 0.5) / 20.0, -0.5 * PI + PI * j as f64 / 29.0)))
            .collect();
        let worst = kappas
            .par_iter()
            .map(|&k| {
                let mut worst = 0.0f64;
                for &(r, th) in &points {
                    let z = Complex64::from_polar(r, th) - 0.5 * delta_prime * k;
                    let a = d.eval_l_closed(z, k)?;
                    let b = d.eval_l_quadrature(z, k)?;
                    worst = worst.max((a - b).norm() / (1.0 + a.norm()));
                }
                Ok(worst)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let fast = within(start.elapsed(), 60);
        let n = kappas.len() * points.len();
        Ok(outcome(1, worst <= 1e-10 && fast, worst, "<= 1e-10 relative to 1+|L|, under 60 s", format!("{n} samples ({} z-points x {} wavenumbers), runtime within limit: {fast}", points.len(), kappas.len())))
    }

    fn plemelj(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let mut worst = 0.0f64;
        let mut n = 0;
        for i in 0..20 {
            let omega = -3.0 + 6.0 * (i as f64 + 0.5) / 20.0;
            for j in 0..10 {
                let k = 0.05 * (40f64).powf(j as f64 / 9.0);
                let a = d.eval_l_closed(Complex64::new(0.0, omega), k)?;
                let b = d.eval_l_plemelj(omega, k)?;
                worst = worst.max((a - b).norm());
                n += 1;
            }
        }
        Ok(outcome(2, worst <= 1e-8, worst, "<= 1e-8", format!("{n} (omega, kappa) samples")))
    }

    fn pole_residual(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let branch = self.branch()?;
        let mut worst = 0.0f64;
        for n in branch.nodes() {
            worst = worst.max((1.0 - d.eval_l_closed(n.p, n.kappa)?).norm());
        }
        let first = branch.nodes()[0];
        let dist = (first.p - Complex64::i()).norm();
        let passed = worst <= 1e-12 && dist <= 1e-4 && branch.len() == 200;
        Ok(outcome(3, passed, worst, "residual <= 1e-12 on 200 nodes, |p(1e-3) - i| <= 1e-4", format!("{} nodes, |p(1e-3) - i| = {dist:?}", branch.len())))
    }

    fn bohm_gross(&mut self) -> Result<CriterionOutcome> {
        let fit = bohm_gross_fit(self.branch()?, (0.05, 0.3))?;
        let improvement = fit.max_residual / fit.quartic_max_residual;
        let passed = (fit.c0 - 1.0).abs() <= 1e-3 && (fit.c2 - 3.0).abs() <= 0.05 && improvement >= 10.0;
        Ok(outcome(
            4,
            passed,
            fit.c2,
            "c0 = 1 +- 1e-3, c2 = 3 +- 0.05 on [0.05, 0.3], quartic refit residual reduction >= 10",
            format!("{} nodes, c0 = {:?}, c2 = {:?}, quartic c4 = {:?}, residual reduction {improvement:?}", fit.n_nodes, fit.c0, fit.c2, fit.quartic_c4),
        ))
    }

    fn landau_rate(&mut self) -> Result<CriterionOutcome> {
        let start = Instant::now();
        let d = disp();
        let tg = TimeGrid::new(200.0, 0.01)?;
        let kappas = [0.4, 0.5, 0.6];
        let branch = crate::poles::PoleBranch::track(&d, &kappas, &NewtonOptions::default())?;
        let rows = kappas
            .par_iter()
            .map(|&k| {
                let rho = solve_volterra_direct(d.background(), &ring(), k, &tg)?;
                let fit = fit_envelope_decay(&rho, &tg, (10.0, 200.0))?;
                let pole = branch.node_at(k)?.lambda;
                Ok((k, pole, fit.rate))
            })
            .collect::<Result<Vec<_>>>()?;
        let worst = rows.iter().map(|(_, p, f)| (p - f).abs() / p).fold(0.0, f64::max);
        let fast = within(start.elapsed(), 120);
        let detail = rows.iter().map(|(k, p, f)| format!("kappa {k:?}: pole {p:?}, fit {f:?}")).collect::<Vec<_>>().join("; ");
        Ok(outcome(5, worst <= 0.05 && fast, worst, "relative difference <= 0.05, under 120 s", format!("{detail}; runtime within limit: {fast}")))
    }

    fn flatness(&mut self) -> Result<CriterionOutcome> {
        let rows = lambda_flatness_check(self.branch()?, &[2, 4, 6])?;
        let passed = rows.iter().all(|r| r.monotone);
        let detail = rows.iter().map(|r| format!("N = {}: monotone {}", r.power, r.monotone)).collect::<Vec<_>>().join("; ");
        let n_ok = rows.iter().filter(|r| r.monotone).count();
        Ok(outcome(6, passed, n_ok as f64, "lambda/kappa^N decreasing as kappa decreases for N in {2, 4, 6}", detail))
    }

    fn splitting(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let kappas: Vec<f64> = RadialGrid::geometric(0.05, NU0, 12, NU0)?.kappa().to_vec();
        let branch = PoleBranch::track(&d, &kappas, &NewtonOptions::default())?;
        let tg = TimeGrid::new(50.0, 0.01)?;
        let base = ContourSpec::default();
        let report = split_check(&d, &branch, &kappas, &tg, &base, 1e-5)?;
        let moved = ContourSpec { gamma_prime: -0.4, slope: 0.7, height_fraction: 0.4, ..base };
        let independence = kappas
            .par_iter()
            .map(|&k| {
                let n = branch.node_at(k)?;
                let q1 = ContourQuadrature::new(&d, n, &base, tg.dt)?;
                let q2 = ContourQuadrature::new(&d, n, &moved, tg.dt)?;
                Ok((0..=50).map(|i| (q1.eval(i as f64) - q2.eval(i as f64)).abs()).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let passed = report.max_discrepancy <= 1e-5 && independence <= 1e-8;
        Ok(outcome(
            7,
            passed,
            report.max_discrepancy,
            "max |R_direct - (R_KG + R_RFT)| <= 1e-5, contour perturbation <= 1e-8",
            format!("{} wavenumbers in [0.05, {NU0}], t in [0, 50] at dt 0.01; contour perturbation {independence:?}", kappas.len()),
        ))
    }

    fn remainder_shape(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let branch = PoleBranch::track(&d, &[0.05, 0.1], &NewtonOptions::default())?;
        let fits = [0.05, 0.1]
            .iter()
            .map(|&k| remainder_bound_fit(&ContourQuadrature::new(&d, branch.node_at(k)?, &ContourSpec::default(), 0.05)?, 0.05))
            .collect::<Result<Vec<_>>>()?;
        let ratio = fits[0].c / fits[1].c;
        let factor = ratio / 0.125;
        let passed = (0.5..=2.0).contains(&factor);
        Ok(outcome(
            8,
            passed,
            factor,
            "C(0.05)/C(0.1) within a factor 2 of 1/8",
            format!("C(0.05) = {:?}, C(0.1) = {:?}, lambda0 = {:?}", fits[0].c, fits[1].c, fits[0].lambda0),
        ))
    }

    fn high_frequency(&mut self) -> Result<CriterionOutcome> {
        let tg = TimeGrid::new(40.0, 0.01)?;
        let fit = high_frequency_kernel_fit(disp().background(), 1.0, &tg)?;
        Ok(outcome(9, fit.rate > 0.0 && fit.r2 >= 0.95, fit.r2, "rate > 0 and r2 >= 0.95", format!("rate {:?} from {} peaks", fit.rate, fit.n_peaks)))
    }

    fn decomposition_identity(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let grid = default_field_grid()?;
        // Every 16th node of the decay grid, on both sides of ν₀.
        let kappas: Vec<f64> = grid.kappa().iter().step_by(16).copied().collect();
        let low: Vec<f64> = kappas.iter().copied().filter(|&k| k < NU0).collect();
        let branch = PoleBranch::track(&d, &low, &NewtonOptions::default())?;
        let opts = DecompositionOptions { time: TimeGrid::new(50.0, 0.01)?, output_stride: 1, with_direct: true, ..Default::default() };
        let datum = ring();
        let worst = kappas
            .par_iter()
            .map(|&k| {
                let f = decompose_wavenumber(&d, &datum, &branch, k, NU0, &opts)?;
                let direct = f.direct.as_ref().expect("direct amplitude requested");
                Ok((0..direct.len()).map(|n| (f.parts.iter().map(|p| p[n]).sum::<Complex64>() - direct[n]).norm()).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(outcome(10, worst <= 1e-6, worst, "<= 1e-6", format!("{} wavenumbers ({} below nu0), t in [0, 50] at dt 0.01", kappas.len(), low.len())))
    }

    fn decay_exponents(&mut self) -> Result<CriterionOutcome> {
        let start = Instant::now();
        let window = (20.0, 200.0);
        let (grid, dec) = self.decay()?;
        let fit = |kind: NormKind| -> Result<f64> {
            let (t, v) = norm_series(dec, Component::Ld, kind, window)?;
            Ok(fit_decay_exponent(&t, &v, window)?.exponent)
        };
        let l2 = fit(NormKind::L2 { sigma: 0.0 })?;
        let linf = fit(NormKind::Linf)?;
        let times: Vec<f64> = (0..=18).map(|i| 20.0 * 10f64.powf(i as f64 / 18.0)).collect();
        let ft = free_transport_decay(&InitialDatum::unit(DatumKind::ThermalShell), grid, &times, window)?.linf_fit.exponent;
        let fast = within(start.elapsed(), 600);
        let passed = (-2.7..=-2.3).contains(&l2) && (-4.3..=-3.7).contains(&linf) && (-3.2..=-2.8).contains(&ft) && linf < ft && fast;
        Ok(outcome(
            11,
            passed,
            linf,
            "L2 in [-2.7, -2.3], Linf in [-4.3, -3.7], free transport Linf in [-3.2, -2.8], t in [20, 200], under 600 s",
            format!("L2 exponent {l2:?}, Linf exponent {linf:?}, free transport Linf exponent {ft:?}, {} wavenumbers; runtime within limit: {fast}", grid.len()),
        ))
    }

    fn dispersive_kernel(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let grid = RadialGrid::panels(1e-3, 1.0, NU0, 1.3, 0.01, 0.1, 16)?;
        let branch = track_branch(&d, &grid, &NewtonOptions::default())?;
        let times: Vec<f64> = (0..=12).map(|i| 10.0 * 10f64.powf(i as f64 / 12.0)).collect();
        let rep = dispersive_kernel_decay(&branch, &grid, 1.0, &times, Some((10.0, 100.0)))?;
        let fit = rep.fit.ok_or_else(|| Error::Fit("no fit window".into()))?;
        Ok(outcome(12, (fit.exponent + 1.5).abs() <= 0.2, fit.exponent, "-1.5 +- 0.2 over [10, 100]", format!("r2 {:?}, {} samples", fit.r2, fit.n_samples)))
    }

    fn kg_boundedness(&mut self) -> Result<CriterionOutcome> {
        let (_, dec) = self.decay()?;
        let time = dec.l2.time;
        let mid = (100.0 / time.dt).round() as usize;
        if time.steps < 2 * mid {
            return Err(Error::Resolution("the decomposition does not reach t = 200".into()));
        }
        let env = |a: usize, b: usize| dec.l2.kg1[a..=b].iter().cloned().fold(0.0, f64::max);
        let early = env(0, mid);
        let late = env(mid, 2 * mid);
        Ok(outcome(13, late <= early, late / early, "envelope over [100, 200] <= envelope over [0, 100]", format!("early {early:?}, late {late:?}")))
    }

    fn coefficient_limits(&mut self) -> Result<CriterionOutcome> {
        let branch = self.branch()?;
        let mut worst = 0.0f64;
        let mut arg = (0.0, 0);
        for n in branch.nodes().iter().filter(|n| n.kappa <= 0.2) {
            let bound = 3.0 * n.kappa * n.kappa;
            for j in 0..2 {
                let dev = if j == 0 { (n.a_sum(0) - 1.0).abs() } else { n.a_sum(1).abs() };
                if dev / bound > worst {
                    worst = dev / bound;
                    arg = (n.kappa, j);
                }
            }
        }
        Ok(outcome(
            14,
            worst <= 1.0,
            worst,
            "max deviation / (3 kappa^2) <= 1 for kappa <= 0.2",
            format!("largest ratio for A_{} at kappa {:?}", arg.1, arg.0),
        ))
    }

    fn hydro(&mut self) -> Result<CriterionOutcome> {
        let scan = hydro_slope_scan(&disp(), &[0.2, 0.1, 0.05], 1.0, 3.0, &ring(), &HydroOptions::default())?;
        let errs = scan.rows.iter().map(|r| format!("{:?}", r.error)).collect::<Vec<_>>().join(", ");
        Ok(outcome(15, (scan.slope - 2.0).abs() <= 0.3, scan.slope, "2.0 +- 0.3", format!("errors [{errs}] at eps [0.2, 0.1, 0.05], r2 {:?}", scan.r2)))
    }

    fn scattering(&mut self) -> Result<CriterionOutcome> {
        let d = disp();
        let grid = RadialGrid::panels(1e-3, 8.0, NU0, 1.3, 0.1, 1.0, 4)?;
        let branch = track_branch(&d, &grid, &NewtonOptions::default())?;
        let opts = ScatteringOptions::default();
        let coupled = scattering_run(&d, &ring(), &branch, &grid, &opts)?;
        let control = scattering_run(&d, &ring(), &branch, &grid, &ScatteringOptions { coupling: false, ..opts })?;
        let ratio = coupled.rows[1].d / coupled.rows[0].d;
        let zero = control.rows.iter().all(|r| r.d == 0.0);
        let r = &coupled.rows;
        Ok(outcome(
            16,
            ratio <= 0.2 && zero,
            ratio,
            "D(50, 100) <= 0.2 D(10, 20), zero coupling D = 0",
            format!(
                "D(10, 20) = {:?}, D(50, 100) = {:?} (g3 part {:?}, remainder part {:?}), zero-coupling D = 0: {zero}",
                r[0].d, r[1].d, r[1].d_g3, r[1].d_rest
            ),
        ))
    }

    fn determinism(&mut self) -> Result<CriterionOutcome> {
        let first = serde_json::to_string(&self.reports)?;
        let mut again = Suite::new();
        let rerun: Vec<CriterionOutcome> = (1..N_CRITERIA).map(|id| again.run(id)).collect();
        let second = serde_json::to_string(&rerun)?;
        let complete = self.reports.len() == N_CRITERIA as usize - 1;
        let same = first == second;
        Ok(outcome(
            17,
            same && complete,
            if same { 0.0 } else { 1.0 },
            "byte-identical reports from two runs",
            format!("{} bytes compared, all prior criteria present: {complete}", first.len()),
        ))
    }
}
