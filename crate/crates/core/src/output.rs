//! Deterministic artifact writers: CSV with a header row and JSON with a
//! `schema_version` field. Floats use the shortest decimal form that
//! round-trips.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Version of every CSV/JSON artifact layout.
pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip decimal form of `x`; `NaN` and infinities as
/// `NaN`, `inf`, `-inf`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A CSV table assembled in memory and written in one call.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    body: String,
}

/// One CSV cell.
pub enum Cell<'a> {
    F(f64),
    U(usize),
    S(&'a str),
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|s| s.as_ref().to_string()).collect(), body: String::new() }
    }

    /// Appends a row of floats.
    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<Cell> = values.iter().map(|&v| Cell::F(v)).collect();
        self.cells(&cells);
    }

    /// Appends a row of mixed cells.
    pub fn cells(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.header.len(), "row width must match the header");
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            match c {
                Cell::F(v) => self.body.push_str(&fmt_f64(*v)),
                Cell::U(v) => self.body.push_str(&v.to_string()),
                Cell::S(v) => self.body.push_str(v),
            }
        }
        self.body.push('\n');
    }

    pub fn n_rows(&self) -> usize {
        self.body.lines().count()
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header.join(","), self.body)
    }

    /// Writes to `dir/name`, creating `dir` if needed.
    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        write_text(dir, name, &self.render())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    package_version: &'static str,
    command: &'a str,
    #[serde(flatten)]
    data: &'a T,
}

/// Pretty JSON of `data` with `schema_version`, package version and the
/// producing command merged in at the top level.
pub fn json_string<T: Serialize>(command: &str, data: &T) -> Result<String> {
    let env = Envelope { schema_version: OUTPUT_SCHEMA_VERSION, package_version: env!("CARGO_PKG_VERSION"), command, data };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

/// Writes [`json_string`] to `dir/name`.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, command: &str, data: &T) -> Result<PathBuf> {
    write_text(dir, name, &json_string(command, data)?)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}
