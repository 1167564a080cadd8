//! Linear response of a Maxwellian plasma in ℝ³: the dispersion function,
//! the Langmuir pole branches, time-domain Volterra solvers, the contour
//! splitting of the resolvent kernel, the Klein-Gordon / Landau-damped field
//! decomposition, the Euler–Poisson long-wave comparison and the kinetic
//! scattering check.
//!
//! Units default to the nondimensional preset `ω_p = v_th = n0 = w0 = 1`.

// Negated float comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod fields;
pub mod hydro;
pub mod kinetic;
pub mod model;
pub mod output;
pub mod poles;
pub mod quad;
pub mod resolvent;
pub mod special;
pub mod volterra;

pub use config::ScenarioConfig;
pub use error::{Error, Result};
