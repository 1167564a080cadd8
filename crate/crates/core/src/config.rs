//! Scenario configuration: a versioned TOML file validated field by field
//! before any computation.
//!
//! Schema (version 1). Only `schema_version` and the three `[grid]` wavenumber
//! keys are required; every other key has the default shown.
//!
//! ```toml
//! schema_version = 1
//! threads = 0                 # worker count, 0 = all cores
//! out = "out"                 # output directory
//! seed = 0                    # reserved, unused by the numerics
//!
//! [datum]
//! kind = "gaussian_ring"      # gaussian_ring | gaussian_dipole | thermal_shell
//! amplitude = 1.0
//! width_kappa = 1.0
//! width_s = 1.0
//!
//! [grid]                      # branch table and per-wavenumber time runs
//! kappa_min = 0.001
//! kappa_max = 0.7
//! n_kappa = 200
//! t_final = 50.0
//! dt = 0.01
//! output_stride = 10
//!
//! [constants]
//! nu0 = 0.7
//! delta = 0.5
//! delta_prime = 0.05
//! eps_disc = 0.3
//! lambda = 0.1
//! ell = 4
//!
//! [contour]                   # deformed Laplace contour; keys left out of a
//!                             # present table take 2000 nodes per piece
//! gamma_prime = -0.5
//! slope = 0.5
//! height_cap = 3.0
//! height_fraction = 0.5
//! panel_order = 16
//! nodes_gamma0 = 384
//! nodes_per_leg = 1024
//!
//! [field_grid]                # quadrature grid of decompose / decay-fit
//! kappa_min = 0.001
//! kappa_max = 8.0
//! panel_ratio = 1.3
//! width_low = 0.017
//! width_high = 0.25
//! order = 16
//! t_final = 200.0
//! dt = 0.05
//! output_stride = 20
//!
//! [dispersion]
//! method = "closed_form"      # closed_form | quadrature | plemelj | asymptotic
//! kappas = [0.1, 0.5, 1.0]
//! re_min = 0.0
//! re_max = 1.0
//! n_re = 11
//! im_min = -2.0
//! im_max = 2.0
//! n_im = 21
//!
//! [volterra]
//! kappas = [0.4, 0.5, 0.6]
//!
//! [resolvent]
//! kappas = [0.1, 0.3, 0.5]
//!
//! [decay]
//! window = [20.0, 200.0]
//!
//! [hydro]
//! epsilons = [0.2, 0.1, 0.05]
//! t = 1.0
//! s = 3.0
//! dt = 0.01
//!
//! [scatter]
//! kappa_min = 0.001
//! kappa_max = 8.0
//! panel_ratio = 1.3
//! width_low = 0.1
//! width_high = 1.0
//! order = 4
//! t_final = 100.0
//! dt = 0.05
//! output_dt = 10.0
//! s_step = 0.2
//! p = 2.0
//! t_pairs = [[10.0, 20.0], [50.0, 100.0]]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dispersion::Method;
use crate::error::{Error, Result};
use crate::model::{make_default_datum, DatumKind, DatumSpec, InitialDatum, RadialGrid, TimeGrid};
use crate::poles::NewtonOptions;
use crate::resolvent::ContourSpec;

/// The only accepted `schema_version`.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Option<u32>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    datum: Option<RawDatum>,
    grid: Option<RawGrid>,
    constants: Option<RawConstants>,
    contour: Option<ContourSpec>,
    field_grid: Option<RawPanels>,
    dispersion: Option<RawDispersion>,
    volterra: Option<RawKappas>,
    resolvent: Option<RawKappas>,
    decay: Option<RawDecay>,
    hydro: Option<RawHydro>,
    scatter: Option<RawScatter>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    kind: Option<String>,
    amplitude: Option<f64>,
    width_kappa: Option<f64>,
    width_s: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    kappa_min: Option<f64>,
    kappa_max: Option<f64>,
    n_kappa: Option<usize>,
    t_final: Option<f64>,
    dt: Option<f64>,
    output_stride: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    nu0: Option<f64>,
    delta: Option<f64>,
    delta_prime: Option<f64>,
    eps_disc: Option<f64>,
    lambda: Option<f64>,
    ell: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPanels {
    kappa_min: Option<f64>,
    kappa_max: Option<f64>,
    panel_ratio: Option<f64>,
    width_low: Option<f64>,
    width_high: Option<f64>,
    order: Option<usize>,
    t_final: Option<f64>,
    dt: Option<f64>,
    output_stride: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDispersion {
    method: Option<String>,
    kappas: Option<Vec<f64>>,
    re_min: Option<f64>,
    re_max: Option<f64>,
    n_re: Option<usize>,
    im_min: Option<f64>,
    im_max: Option<f64>,
    n_im: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKappas {
    kappas: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecay {
    window: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHydro {
    epsilons: Option<Vec<f64>>,
    t: Option<f64>,
    s: Option<f64>,
    dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScatter {
    kappa_min: Option<f64>,
    kappa_max: Option<f64>,
    panel_ratio: Option<f64>,
    width_low: Option<f64>,
    width_high: Option<f64>,
    order: Option<usize>,
    t_final: Option<f64>,
    dt: Option<f64>,
    output_dt: Option<f64>,
    s_step: Option<f64>,
    p: Option<f64>,
    t_pairs: Option<Vec<[f64; 2]>>,
}

/// Geometric branch-table grid plus the time grid of per-wavenumber runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub n_kappa: usize,
    pub time: TimeGrid,
    pub output_stride: usize,
}

/// Composite Gauss–Legendre wavenumber grid and its time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelConfig {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub panel_ratio: f64,
    pub width_low: f64,
    pub width_high: f64,
    pub order: usize,
    pub time: TimeGrid,
    pub output_stride: usize,
}

/// Tunable constants of the splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub nu0: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub eps_disc: f64,
    pub lambda: f64,
    pub ell: usize,
}

/// Evaluation lattice of the `dispersion` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionConfig {
    pub method: Method,
    pub kappas: Vec<f64>,
    pub re: (f64, f64, usize),
    pub im: (f64, f64, usize),
}

/// Settings of `hydro-compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydroConfig {
    pub epsilons: Vec<f64>,
    pub t: f64,
    pub s: f64,
    pub dt: f64,
}

/// Settings of `scatter`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterConfig {
    pub grid: PanelConfig,
    pub output_dt: f64,
    pub s_step: f64,
    pub p: f64,
    pub t_pairs: Vec<(f64, f64)>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub threads: usize,
    pub out: PathBuf,
    pub seed: u64,
    pub datum: DatumSpec,
    pub grid: GridConfig,
    pub constants: Constants,
    pub contour: ContourSpec,
    pub field_grid: PanelConfig,
    pub dispersion: DispersionConfig,
    pub volterra_kappas: Vec<f64>,
    pub resolvent_kappas: Vec<f64>,
    pub decay_window: (f64, f64),
    pub hydro: HydroConfig,
    pub scatter: ScatterConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let raw = RawConfig {
            schema_version: Some(CONFIG_SCHEMA_VERSION),
            grid: Some(RawGrid { kappa_min: Some(1e-3), kappa_max: Some(0.7), n_kappa: Some(200), ..RawGrid::default() }),
            ..RawConfig::default()
        };
        validate(raw).expect("built-in defaults are valid")
    }
}

impl ScenarioConfig {
    /// Parses and validates TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("missing field") || msg.starts_with("unknown field"))
                .unwrap_or("config")
                .to_string();
            Error::config(field, msg)
        })?;
        validate(raw)
    }

    /// Reads, parses and validates a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn initial_datum(&self) -> Result<InitialDatum> {
        make_default_datum(self.datum)
    }

    /// The geometric branch-table grid.
    pub fn branch_grid(&self) -> Result<RadialGrid> {
        let g = &self.grid;
        RadialGrid::geometric(g.kappa_min, g.kappa_max, g.n_kappa, self.constants.nu0.clamp(g.kappa_min, g.kappa_max))
    }

    pub fn newton(&self) -> NewtonOptions {
        NewtonOptions { eps_disc: self.constants.eps_disc, ..NewtonOptions::default() }
    }
}

impl PanelConfig {
    pub fn radial_grid(&self, nu0: f64) -> Result<RadialGrid> {
        RadialGrid::panels(self.kappa_min, self.kappa_max, nu0, self.panel_ratio, self.width_low, self.width_high, self.order)
    }
}

fn require<T>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::config(field, "missing required field"))
}

fn positive(v: f64, field: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(field, format!("must be finite and positive, got {v}")))
    }
}

fn time_grid(t_final: f64, dt: f64, stride: usize, section: &str) -> Result<TimeGrid> {
    let dt = positive(dt, &format!("{section}.dt"))?;
    let time = TimeGrid::new(t_final, dt).map_err(|e| match e {
        Error::Config { field, message } => Error::config(field.replace("grid.", &format!("{section}.")), message),
        other => other,
    })?;
    if stride == 0 || time.steps % stride != 0 {
        return Err(Error::config(format!("{section}.output_stride"), format!("must be positive and divide the {} time steps", time.steps)));
    }
    Ok(time)
}

fn kappa_list(v: Vec<f64>, field: &str) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::config(field, "list must not be empty"));
    }
    for &k in &v {
        positive(k, field)?;
    }
    Ok(v)
}

fn panels(raw: RawPanels, section: &str, defaults: (f64, f64, f64, usize, f64, f64, usize)) -> Result<PanelConfig> {
    let (kmax, wl, wh, order, t_final, dt, stride) = defaults;
    let p = PanelConfig {
        kappa_min: positive(raw.kappa_min.unwrap_or(1e-3), &format!("{section}.kappa_min"))?,
        kappa_max: positive(raw.kappa_max.unwrap_or(kmax), &format!("{section}.kappa_max"))?,
        panel_ratio: raw.panel_ratio.unwrap_or(1.3),
        width_low: positive(raw.width_low.unwrap_or(wl), &format!("{section}.width_low"))?,
        width_high: positive(raw.width_high.unwrap_or(wh), &format!("{section}.width_high"))?,
        order: raw.order.unwrap_or(order),
        time: time_grid(raw.t_final.unwrap_or(t_final), raw.dt.unwrap_or(dt), raw.output_stride.unwrap_or(stride), section)?,
        output_stride: raw.output_stride.unwrap_or(stride),
    };
    if !(p.panel_ratio > 1.0 && p.panel_ratio.is_finite()) {
        return Err(Error::config(format!("{section}.panel_ratio"), "must exceed 1"));
    }
    if p.order < 2 {
        return Err(Error::config(format!("{section}.order"), "must be at least 2"));
    }
    if p.kappa_max <= p.kappa_min {
        return Err(Error::config(format!("{section}.kappa_max"), "must exceed kappa_min"));
    }
    Ok(p)
}

fn validate(raw: RawConfig) -> Result<ScenarioConfig> {
    let version = require(raw.schema_version, "schema_version")?;
    if version != CONFIG_SCHEMA_VERSION {
        return Err(Error::config("schema_version", format!("unsupported version {version}, expected {CONFIG_SCHEMA_VERSION}")));
    }

    let d = raw.datum.unwrap_or_default();
    let datum = DatumSpec {
        kind: d.kind.as_deref().unwrap_or("gaussian_ring").parse::<DatumKind>()?,
        amplitude: d.amplitude.unwrap_or(1.0),
        width_kappa: d.width_kappa.unwrap_or(1.0),
        width_s: d.width_s.unwrap_or(1.0),
    };
    make_default_datum(datum)?;

    let g = require(raw.grid, "grid")?;
    let kappa_min = positive(require(g.kappa_min, "grid.kappa_min")?, "grid.kappa_min")?;
    let kappa_max = positive(require(g.kappa_max, "grid.kappa_max")?, "grid.kappa_max")?;
    let n_kappa = require(g.n_kappa, "grid.n_kappa")?;
    if kappa_max <= kappa_min {
        return Err(Error::config("grid.kappa_max", format!("must exceed kappa_min = {kappa_min}, got {kappa_max}")));
    }
    if n_kappa < 2 {
        return Err(Error::config("grid.n_kappa", format!("need at least 2 nodes, got {n_kappa}")));
    }
    let stride = g.output_stride.unwrap_or(10);
    let grid = GridConfig { kappa_min, kappa_max, n_kappa, time: time_grid(g.t_final.unwrap_or(50.0), g.dt.unwrap_or(0.01), stride, "grid")?, output_stride: stride };

    let c = raw.constants.unwrap_or_default();
    let constants = Constants {
        nu0: positive(c.nu0.unwrap_or(0.7), "constants.nu0")?,
        delta: positive(c.delta.unwrap_or(0.5), "constants.delta")?,
        delta_prime: positive(c.delta_prime.unwrap_or(0.05), "constants.delta_prime")?,
        eps_disc: positive(c.eps_disc.unwrap_or(0.3), "constants.eps_disc")?,
        lambda: positive(c.lambda.unwrap_or(0.1), "constants.lambda")?,
        ell: c.ell.unwrap_or(4),
    };
    if constants.ell > 4 {
        return Err(Error::config("constants.ell", format!("expansion order must be at most 4, got {}", constants.ell)));
    }

    let contour = raw.contour.unwrap_or_else(ContourSpec::compact);
    contour.validate()?;

    let field_grid = panels(raw.field_grid.unwrap_or_default(), "field_grid", (8.0, 0.017, 0.25, 16, 200.0, 0.05, 20))?;
    if !(constants.nu0 > field_grid.kappa_min && constants.nu0 < field_grid.kappa_max) {
        return Err(Error::config("constants.nu0", "must lie strictly inside the field grid range"));
    }

    let dr = raw.dispersion.unwrap_or_default();
    let method = match dr.method.as_deref().unwrap_or("closed_form") {
        "closed_form" => Method::ClosedForm,
        "quadrature" => Method::Quadrature,
        "plemelj" => Method::Plemelj,
        "asymptotic" => Method::Asymptotic,
        other => return Err(Error::config("dispersion.method", format!("unknown method `{other}`"))),
    };
    let axis = |lo: f64, hi: f64, n: usize, name: &str| -> Result<(f64, f64, usize)> {
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) || n == 0 || (n == 1 && hi != lo) {
            return Err(Error::config(format!("dispersion.{name}"), "need a finite range with at least one point (one point only for a degenerate range)"));
        }
        Ok((lo, hi, n))
    };
    let dispersion = DispersionConfig {
        method,
        kappas: kappa_list(dr.kappas.unwrap_or_else(|| vec![0.1, 0.5, 1.0]), "dispersion.kappas")?,
        re: axis(dr.re_min.unwrap_or(0.0), dr.re_max.unwrap_or(1.0), dr.n_re.unwrap_or(11), "n_re")?,
        im: axis(dr.im_min.unwrap_or(-2.0), dr.im_max.unwrap_or(2.0), dr.n_im.unwrap_or(21), "n_im")?,
    };

    let volterra_kappas = kappa_list(raw.volterra.and_then(|v| v.kappas).unwrap_or_else(|| vec![0.4, 0.5, 0.6]), "volterra.kappas")?;
    let resolvent_kappas = kappa_list(raw.resolvent.and_then(|v| v.kappas).unwrap_or_else(|| vec![0.1, 0.3, 0.5]), "resolvent.kappas")?;
    if let Some(&k) = resolvent_kappas.iter().find(|&&k| k >= constants.nu0) {
        return Err(Error::config("resolvent.kappas", format!("wavenumber {k} is not below nu0 = {}", constants.nu0)));
    }

    let window = raw.decay.and_then(|d| d.window).unwrap_or([20.0, 200.0]);
    if !(window[0] >= 0.0 && window[1] > window[0]) {
        return Err(Error::config("decay.window", "need 0 <= start < end"));
    }
    if window[1] > field_grid.time.t_final() + 1e-9 {
        return Err(Error::config("decay.window", format!("window end exceeds field_grid.t_final = {}", field_grid.time.t_final())));
    }

    let h = raw.hydro.unwrap_or_default();
    let hydro = HydroConfig {
        epsilons: h.epsilons.unwrap_or_else(|| vec![0.2, 0.1, 0.05]),
        t: h.t.unwrap_or(1.0),
        s: h.s.unwrap_or(3.0),
        dt: positive(h.dt.unwrap_or(0.01), "hydro.dt")?,
    };
    if hydro.epsilons.len() < 2 || hydro.epsilons.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::config("hydro.epsilons", "need at least two values in (0, 1)"));
    }
    if !(hydro.s > 2.5 && hydro.s < 3.5) {
        return Err(Error::config("hydro.s", format!("Sobolev index must lie in (2.5, 3.5), got {}", hydro.s)));
    }
    if !(hydro.t >= 0.0 && hydro.t.is_finite()) {
        return Err(Error::config("hydro.t", "must be finite and non-negative"));
    }

    let s = raw.scatter.unwrap_or_default();
    let output_dt = positive(s.output_dt.unwrap_or(10.0), "scatter.output_dt")?;
    let scatter_dt = s.dt.unwrap_or(0.05);
    let out_steps = (output_dt / scatter_dt).round().max(1.0) as usize;
    let sg = RawPanels {
        kappa_min: s.kappa_min,
        kappa_max: s.kappa_max,
        panel_ratio: s.panel_ratio,
        width_low: s.width_low,
        width_high: s.width_high,
        order: s.order,
        t_final: s.t_final,
        dt: s.dt,
        output_stride: Some(out_steps),
    };
    let scatter = ScatterConfig {
        grid: panels(sg, "scatter", (8.0, 0.1, 1.0, 4, 100.0, 0.05, out_steps))?,
        output_dt,
        s_step: positive(s.s_step.unwrap_or(0.2), "scatter.s_step")?,
        p: s.p.unwrap_or(2.0),
        t_pairs: s.t_pairs.unwrap_or_else(|| vec![[10.0, 20.0], [50.0, 100.0]]).into_iter().map(|[a, b]| (a, b)).collect(),
    };
    if !(scatter.p >= 1.0 && scatter.p.is_finite()) {
        return Err(Error::config("scatter.p", "must be finite and at least 1"));
    }
    if scatter.t_pairs.is_empty() || scatter.t_pairs.iter().any(|&(a, b)| !(a >= 0.0 && b >= a && b <= scatter.grid.time.t_final() + 1e-9)) {
        return Err(Error::config("scatter.t_pairs", "need increasing pairs inside [0, scatter.t_final]"));
    }

    Ok(ScenarioConfig {
        threads: raw.threads.unwrap_or(0),
        out: raw.out.unwrap_or_else(|| PathBuf::from("out")),
        seed: raw.seed.unwrap_or(0),
        datum,
        grid,
        constants,
        contour,
        field_grid,
        dispersion,
        volterra_kappas,
        resolvent_kappas,
        decay_window: (window[0], window[1]),
        hydro,
        scatter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "schema_version = 1\n[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 200\n";

    #[test]
    fn minimal_file_equals_the_defaults() {
        assert_eq!(ScenarioConfig::from_toml(MINIMAL).unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn documented_schema_parses() {
        let doc = include_str!("config.rs");
        let block: String = doc
            .lines()
            .skip_while(|l| !l.starts_with("//! ```toml"))
            .skip(1)
            .take_while(|l| !l.starts_with("//! ```"))
            .map(|l| format!("{}\n", l.trim_start_matches("//!").trim_start()))
            .collect();
        let parsed = ScenarioConfig::from_toml(&block).unwrap();
        assert_eq!(parsed, ScenarioConfig::default());
    }

    #[test]
    fn missing_kappa_max_names_the_field() {
        let e = ScenarioConfig::from_toml("schema_version = 1\n[grid]\nkappa_min = 0.001\nn_kappa = 200\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("grid.kappa_max"), "{e}");
    }

    #[test]
    fn field_level_errors() {
        let cases = [
            ("schema_version = 2\n[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 200\n", "schema_version"),
            ("[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 200\n", "schema_version"),
            (&format!("{MINIMAL}[datum]\nkind = \"torus\"\n"), "datum.kind"),
            (&format!("{MINIMAL}[datum]\namplitude = -1.0\n"), "datum.amplitude"),
            (&format!("{MINIMAL}[hydro]\ns = 4.0\n"), "hydro.s"),
            (&format!("{MINIMAL}[resolvent]\nkappas = [0.9]\n"), "resolvent.kappas"),
            ("schema_version = 1\n[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 200\nt_final = 1.0\ndt = 0.3\n", "grid.t_final"),
            (&format!("{MINIMAL}[grid2]\n"), "grid2"),
            (&format!("{MINIMAL}[contour]\nnodes_per_leg = 10\n"), "contour"),
        ];
        for (text, field) in cases {
            let e = ScenarioConfig::from_toml(text).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}");
            assert!(e.to_string().contains(field), "{field}: {e}");
        }
    }

    #[test]
    fn default_branch_grid_has_two_hundred_nodes() {
        let g = ScenarioConfig::default().branch_grid().unwrap();
        assert_eq!(g.len(), 200);
        assert!(g.kappa().windows(2).all(|w| w[1] > w[0]));
    }
}
