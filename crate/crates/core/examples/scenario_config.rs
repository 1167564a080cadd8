//! Load a scenario file, run two subcommands through the library front-end
//! and list the artifacts.
//!
//! ```bash
//! cargo run --release --example scenario_config -- crates/core/fixtures/quick.toml
//! ```

use std::path::PathBuf;

use landau::cli::{run, Command};
use landau::ScenarioConfig;

fn main() -> landau::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/quick.toml")));
    let mut cfg = ScenarioConfig::load(&path)?;
    cfg.out = std::env::temp_dir().join("landau-scenario");
    for command in [Command::Poles, Command::Resolvent] {
        let outcome = run(command, &cfg)?;
        for f in outcome.files {
            println!("{}: {}", command.name(), f.display());
        }
    }
    Ok(())
}
