//! Batch front-end: argument parsing, scenario orchestration and artifact
//! emission for every subcommand.
//!
//! | subcommand      | artifacts                                                   |
//! |-----------------|-------------------------------------------------------------|
//! | `dispersion`    | `dispersion.csv`                                            |
//! | `poles`         | `poles.csv`                                                 |
//! | `volterra`      | `volterra.csv`, or `kernel.csv` with `--kernel`             |
//! | `resolvent`     | `resolvent.csv`                                             |
//! | `decompose`     | `decompose_{ld1,ld2,kg1,kg2}.csv`, `decompose_l2.csv`       |
//! | `decay-fit`     | `decay_fit.json`                                            |
//! | `hydro-compare` | `hydro_compare.json`                                        |
//! | `scatter`       | `scatter.csv`                                               |
//! | `accept`        | `accept.json`                                               |
//!
//! Exit status: 0 success, 1 a failed acceptance criterion or an i/o error,
//! 2 configuration, 3 numerical accuracy, 4 resolution, 5 root finding.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::acceptance::Suite;
use crate::dispersion::{AsymptoticOrder, Dispersion, Method};
use crate::error::{Error, Result};
use crate::fields::{decompose_field, fit_decay_exponent, free_transport_decay, norm_series, Component, DecayFit, DecompositionOptions, NormKind};
use crate::hydro::{hydro_slope_scan, HydroOptions, HydroScan};
use crate::kinetic::{scattering_run, ScatteringOptions};
use crate::model::TimeGrid;
use crate::output::{write_json, Cell, Csv};
use crate::poles::{track_branch, PoleBranch, N_COEFFS};
use crate::resolvent::kernel_traces;
use crate::volterra::{solve_resolvent_direct, solve_volterra_direct};
use crate::ScenarioConfig;

/// Command line of the `landau` binary.
#[derive(Debug, Parser)]
#[command(name = "landau", version, about = "Linear Vlasov-Poisson response around a Maxwellian")]
pub struct Cli {
    /// Worker threads; 0 or absent uses every core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Scenario file (TOML); the built-in defaults apply when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// The subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate the dispersion function on a complex lattice.
    Dispersion,
    /// Track the Langmuir pole branch and its residue coefficients.
    Poles,
    /// Solve the density Volterra equation per wavenumber.
    Volterra {
        /// Emit the resolvent kernel instead of the density.
        #[arg(long)]
        kernel: bool,
    },
    /// Compare the direct resolvent kernel with its residue plus contour split.
    Resolvent,
    /// Split the electric field into its four components.
    Decompose,
    /// Fit power-law decay exponents of the field components.
    DecayFit,
    /// Long-wave comparison with the Euler-Poisson field.
    HydroCompare,
    /// Cauchy differences of the Landau-damped distribution.
    Scatter,
    /// Run the acceptance suite.
    Accept,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Poles => "poles",
            Command::Volterra { .. } => "volterra",
            Command::Resolvent => "resolvent",
            Command::Decompose => "decompose",
            Command::DecayFit => "decay-fit",
            Command::HydroCompare => "hydro-compare",
            Command::Scatter => "scatter",
            Command::Accept => "accept",
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Failed acceptance criteria (only `accept` sets this).
    pub failed_criteria: usize,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let name = cli.command.name();
    let result = load_config(&cli).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(out) => {
            for f in &out.files {
                eprintln!("landau {name}: wrote {}", f.display());
            }
            if out.failed_criteria > 0 {
                eprintln!("landau {name}: {} criteria failed", out.failed_criteria);
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("landau {name}: {e}");
            e.exit_code()
        }
    }
}

/// The scenario from `--config` (or the defaults) with the command-line
/// overrides applied.
pub fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

/// Runs one subcommand on a bounded worker pool of `cfg.threads` workers.
pub fn run(command: Command, cfg: &ScenarioConfig) -> Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::config("threads", format!("cannot start the worker pool: {e}")))?;
    pool.install(|| dispatch(command, cfg))
}

fn dispatch(command: Command, cfg: &ScenarioConfig) -> Result<RunOutcome> {
    let files = match command {
        Command::Dispersion => vec![dispersion(cfg)?.write(&cfg.out, "dispersion.csv")?],
        Command::Poles => vec![poles(cfg)?.write(&cfg.out, "poles.csv")?],
        Command::Volterra { kernel } => {
            let name = if kernel { "kernel.csv" } else { "volterra.csv" };
            vec![volterra(cfg, kernel)?.write(&cfg.out, name)?]
        }
        Command::Resolvent => vec![resolvent(cfg)?.write(&cfg.out, "resolvent.csv")?],
        Command::Decompose => decompose(cfg)?,
        Command::DecayFit => vec![write_json(&cfg.out, "decay_fit.json", "decay-fit", &decay_fit(cfg)?)?],
        Command::HydroCompare => vec![write_json(&cfg.out, "hydro_compare.json", "hydro-compare", &hydro_compare(cfg)?)?],
        Command::Scatter => vec![scatter(cfg)?.write(&cfg.out, "scatter.csv")?],
        Command::Accept => {
            let report = Suite::new().run_all(|o| eprintln!("{}", o.line()));
            std::fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join("accept.json");
            std::fs::write(&path, report.to_json()?)?;
            return Ok(RunOutcome { files: vec![path], failed_criteria: report.failed });
        }
    };
    Ok(RunOutcome { files, failed_criteria: 0 })
}

fn disp(cfg: &ScenarioConfig) -> Dispersion {
    let _ = cfg;
    Dispersion::default()
}

fn lattice(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `dispersion.csv`: `z_re, z_im, kappa, L_re, L_im, dzL_re, dzL_im, method`.
/// The derivative columns always come from the closed form; the `plemelj`
/// method evaluates on the imaginary axis only.
pub fn dispersion(cfg: &ScenarioConfig) -> Result<Csv> {
    let d = disp(cfg);
    let dc = &cfg.dispersion;
    let re = if dc.method == Method::Plemelj { vec![0.0] } else { lattice(dc.re.0, dc.re.1, dc.re.2) };
    let im = lattice(dc.im.0, dc.im.1, dc.im.2);
    let mut points = Vec::with_capacity(dc.kappas.len() * re.len() * im.len());
    for &k in &dc.kappas {
        for &x in &re {
            for &y in &im {
                points.push((k, Complex64::new(x, y)));
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(k, z)| {
            let closed = d.eval(z, k)?;
            let value = match dc.method {
                Method::ClosedForm => closed.value,
                Method::Quadrature => d.eval_l_quadrature(z, k)?,
                Method::Plemelj => d.eval_l_plemelj(z.im, k)?,
                Method::Asymptotic => d.eval_l_asymptotic(z, k, AsymptoticOrder::Four)?,
            };
            Ok([z.re, z.im, k, value.re, value.im, closed.dz_value.re, closed.dz_value.im])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["z_re", "z_im", "kappa", "L_re", "L_im", "dzL_re", "dzL_im", "method"]);
    for r in rows {
        let mut cells: Vec<Cell> = r.iter().map(|&v| Cell::F(v)).collect();
        cells.push(Cell::S(dc.method.name()));
        csv.cells(&cells);
    }
    Ok(csv)
}

fn branch(cfg: &ScenarioConfig) -> Result<PoleBranch> {
    track_branch(&disp(cfg), &cfg.branch_grid()?, &cfg.newton())
}

/// `poles.csv`: `kappa, Re_p, Im_p, lambda, Omega, log10_lambda, J_re, J_im`
/// and `A{j}_re, A{j}_im` for `j = 0..5`, one row per branch node.
pub fn poles(cfg: &ScenarioConfig) -> Result<Csv> {
    let b = branch(cfg)?;
    let mut header: Vec<String> = ["kappa", "Re_p", "Im_p", "lambda", "Omega", "log10_lambda", "J_re", "J_im"].iter().map(|s| s.to_string()).collect();
    for j in 0..N_COEFFS {
        header.push(format!("A{j}_re"));
        header.push(format!("A{j}_im"));
    }
    let mut csv = Csv::new(&header);
    for n in b.nodes() {
        let mut row = vec![n.kappa, n.p.re, n.p.im, n.lambda, n.omega, n.log10_lambda, n.j_plus.re, n.j_plus.im];
        for a in n.a_plus {
            row.extend([a.re, a.im]);
        }
        csv.row(&row);
    }
    Ok(csv)
}

/// `volterra.csv` (`t, kappa, rho_re, rho_im, abs_rho`) or, with `kernel`,
/// `kernel.csv` (`t, kappa, R_re, R_im, abs_R`), at every `output_stride`-th
/// step of the `[grid]` time grid.
pub fn volterra(cfg: &ScenarioConfig, kernel: bool) -> Result<Csv> {
    let d = disp(cfg);
    let datum = cfg.initial_datum()?;
    let time = cfg.grid.time;
    let traces = cfg
        .volterra_kappas
        .par_iter()
        .map(|&k| if kernel { solve_resolvent_direct(d.background(), k, &time) } else { solve_volterra_direct(d.background(), &datum, k, &time) })
        .collect::<Result<Vec<_>>>()?;
    let header = if kernel { ["t", "kappa", "R_re", "R_im", "abs_R"] } else { ["t", "kappa", "rho_re", "rho_im", "abs_rho"] };
    let mut csv = Csv::new(&header);
    for (&k, tr) in cfg.volterra_kappas.iter().zip(&traces) {
        for n in (0..time.len()).step_by(cfg.grid.output_stride) {
            csv.row(&[time.t(n), k, tr[n].re, tr[n].im, tr[n].norm()]);
        }
    }
    Ok(csv)
}

/// `resolvent.csv`: `t, kappa, R_direct, R_KG, R_RFT, discrepancy` with
/// `discrepancy = R_direct − R_KG − R_RFT`.
pub fn resolvent(cfg: &ScenarioConfig) -> Result<Csv> {
    let d = disp(cfg);
    let b = PoleBranch::track(&d, &cfg.resolvent_kappas, &cfg.newton())?;
    let time = cfg.grid.time;
    let traces = cfg
        .resolvent_kappas
        .par_iter()
        .map(|&k| kernel_traces(&d, b.node_at(k)?, &time, &cfg.contour))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["t", "kappa", "R_direct", "R_KG", "R_RFT", "discrepancy"]);
    for tr in &traces {
        for n in (0..time.len()).step_by(cfg.grid.output_stride) {
            csv.row(&[time.t(n), tr.kappa, tr.direct[n], tr.kg[n], tr.rft[n], tr.direct[n] - tr.kg[n] - tr.rft[n]]);
        }
    }
    Ok(csv)
}

fn decomposition_options(cfg: &ScenarioConfig) -> DecompositionOptions {
    DecompositionOptions {
        time: cfg.field_grid.time,
        output_stride: cfg.field_grid.output_stride,
        ell: cfg.constants.ell,
        contour: cfg.contour,
        with_direct: false,
    }
}

fn field_decomposition(cfg: &ScenarioConfig) -> Result<crate::fields::FieldDecomposition> {
    let d = disp(cfg);
    let grid = cfg.field_grid.radial_grid(cfg.constants.nu0)?;
    let b = track_branch(&d, &grid, &cfg.newton())?;
    decompose_field(&d, &cfg.initial_datum()?, &b, &grid, &decomposition_options(cfg))
}

/// `decompose_{ld1,ld2,kg1,kg2}.csv` (`t, kappa, amp_re, amp_im`) on the
/// field grid, plus `decompose_l2.csv` with the L² norm of every component.
pub fn decompose(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    let dec = field_decomposition(cfg)?;
    let mut files = Vec::new();
    for (name, amp) in [("ld1", &dec.e_ld1), ("ld2", &dec.e_ld2), ("kg1", &dec.e_kg1), ("kg2", &dec.e_kg2)] {
        let mut csv = Csv::new(&["t", "kappa", "amp_re", "amp_im"]);
        for n in 0..dec.output.len() {
            for (k, row) in dec.grid.kappa().iter().zip(amp.iter()) {
                csv.row(&[dec.output.t(n), *k, row[n].re, row[n].im]);
            }
        }
        files.push(csv.write(&cfg.out, &format!("decompose_{name}.csv"))?);
    }
    let l2 = &dec.l2;
    let mut csv = Csv::new(&["t", "ld1", "ld2", "kg1", "kg2", "ld", "kg", "sum"]);
    let stride = cfg.field_grid.output_stride;
    for n in (0..l2.time.len()).step_by(stride) {
        csv.row(&[l2.time.t(n), l2.ld1[n], l2.ld2[n], l2.kg1[n], l2.kg2[n], l2.ld[n], l2.kg[n], l2.sum[n]]);
    }
    files.push(csv.write(&cfg.out, "decompose_l2.csv")?);
    Ok(files)
}

/// One row of `decay_fit.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFitRow {
    pub component: String,
    pub norm: String,
    pub window: (f64, f64),
    pub exponent: f64,
    pub r2: f64,
}

impl DecayFitRow {
    fn new(component: &str, norm: &str, fit: DecayFit) -> Self {
        Self { component: component.into(), norm: norm.into(), window: fit.window, exponent: fit.exponent, r2: fit.r2 }
    }
}

/// Body of `decay_fit.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFitReport {
    pub datum: String,
    pub n_kappa: usize,
    pub fits: Vec<DecayFitRow>,
}

/// Power-law fits of component norms over the configured window, plus the
/// free-transport reference.
pub fn decay_fit(cfg: &ScenarioConfig) -> Result<DecayFitReport> {
    let dec = field_decomposition(cfg)?;
    let window = cfg.decay_window;
    let pairs = [
        (Component::Ld, NormKind::L2 { sigma: 0.0 }),
        (Component::Ld, NormKind::L2 { sigma: 1.0 }),
        (Component::Ld, NormKind::Linf),
        (Component::Ld1, NormKind::Linf),
        (Component::Ld2, NormKind::Linf),
        (Component::Kg1, NormKind::L2 { sigma: 0.0 }),
        (Component::Kg2, NormKind::Linf),
        (Component::Sum, NormKind::L2 { sigma: 0.0 }),
    ];
    let mut fits = Vec::new();
    for (c, kind) in pairs {
        let (t, v) = norm_series(&dec, c, kind, window)?;
        fits.push(DecayFitRow::new(c.name(), &kind.name(), fit_decay_exponent(&t, &v, window)?));
    }
    let times: Vec<f64> = (0..dec.output.len()).map(|n| dec.output.t(n)).filter(|t| (window.0..=window.1).contains(t)).collect();
    let datum = cfg.initial_datum()?;
    let ft = free_transport_decay(&datum, &dec.grid, &times, window)?;
    fits.push(DecayFitRow::new("free_transport", "l2", ft.l2_fit));
    fits.push(DecayFitRow::new("free_transport", "linf", ft.linf_fit));
    fits.push(DecayFitRow::new("free_transport_gradient", "linf", ft.grad_linf_fit));
    Ok(DecayFitReport { datum: datum.description(), n_kappa: dec.grid.len(), fits })
}

/// Body of `hydro_compare.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydroCompareReport {
    pub datum: String,
    #[serde(flatten)]
    pub scan: HydroScan,
}

/// H^{−s} errors over the configured `ε` values and their slope.
pub fn hydro_compare(cfg: &ScenarioConfig) -> Result<HydroCompareReport> {
    let h = &cfg.hydro;
    let datum = cfg.initial_datum()?;
    let opts = HydroOptions { dt: h.dt, ..HydroOptions::default() };
    let scan = hydro_slope_scan(&disp(cfg), &h.epsilons, h.t, h.s, &datum, &opts)?;
    Ok(HydroCompareReport { datum: datum.description(), scan })
}

/// `scatter.csv`: `t1, t2, D, D_g3, D_rest, norm_h_ld, norm_g_kg, norm_g3,
/// norm_rest`.
pub fn scatter(cfg: &ScenarioConfig) -> Result<Csv> {
    let d = disp(cfg);
    let sc = &cfg.scatter;
    let grid = sc.grid.radial_grid(cfg.constants.nu0)?;
    let b = track_branch(&d, &grid, &cfg.newton())?;
    let opts = ScatteringOptions {
        decomposition: DecompositionOptions {
            time: TimeGrid { dt: sc.grid.time.dt, steps: sc.grid.time.steps },
            output_stride: sc.grid.output_stride,
            ell: cfg.constants.ell,
            contour: cfg.contour,
            with_direct: false,
        },
        output_dt: sc.output_dt,
        s_step: sc.s_step,
        p: sc.p,
        t_pairs: sc.t_pairs.clone(),
        coupling: true,
    };
    let report = scattering_run(&d, &cfg.initial_datum()?, &b, &grid, &opts)?;
    let mut csv = Csv::new(&["t1", "t2", "D", "D_g3", "D_rest", "norm_h_ld", "norm_g_kg", "norm_g3", "norm_rest"]);
    for r in &report.rows {
        csv.row(&[r.t1, r.t2, r.d, r.d_g3, r.d_rest, r.norm_h_ld, r.norm_g_kg, r.norm_g3, r.norm_rest]);
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subcommand_names_parse() {
        for name in ["dispersion", "poles", "volterra", "resolvent", "decompose", "decay-fit", "hydro-compare", "scatter", "accept"] {
            let cli = Cli::try_parse_from(["landau", name]).unwrap();
            assert_eq!(cli.command.name(), name);
        }
        let cli = Cli::try_parse_from(["landau", "volterra", "--kernel", "--threads", "2"]).unwrap();
        assert_eq!(cli.command, Command::Volterra { kernel: true });
        assert_eq!(cli.threads, Some(2));
    }

    #[test]
    fn default_poles_table_has_two_hundred_monotone_rows() {
        let csv = poles(&ScenarioConfig::default()).unwrap();
        assert_eq!(csv.n_rows(), 200);
        let text = csv.render();
        let kappas: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(kappas.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert_eq!(main_with_args(["landau", "plot"]), 2);
    }
}
