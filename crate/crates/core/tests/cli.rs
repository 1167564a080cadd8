//! End-to-end runs of the `landau` binary.

use std::path::Path;
use std::process::{Command, Output};

const QUICK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/quick.toml");

fn landau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau")).args(args).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let runs = [("dispersion", "dispersion.csv"), ("resolvent", "resolvent.csv"), ("decompose", "decompose_l2.csv"), ("scatter", "scatter.csv"), ("hydro-compare", "hydro_compare.json")];
    for (cmd, file) in runs {
        for (dir, threads) in [(&a, "1"), (&b, "4")] {
            let out = landau(&[cmd, "--config", QUICK, "--out", dir.path().to_str().unwrap(), "--threads", threads]);
            assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        }
        assert_eq!(read(a.path(), file), read(b.path(), file), "{file} differs between runs");
    }
}

#[test]
fn default_poles_table_has_header_and_200_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = landau(&["poles", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(read(dir.path(), "poles.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kappa,Re_p,Im_p,lambda,Omega,log10_lambda,J_re,J_im,A0_re"));
    let kappas: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(kappas.len(), 200);
    assert!(kappas.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn json_outputs_carry_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let out = landau(&["hydro-compare", "--config", QUICK, "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&read(dir.path(), "hydro_compare.json")).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "hydro-compare");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn kernel_flag_switches_the_volterra_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = landau(&["volterra", "--kernel", "--config", QUICK, "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(read(dir.path(), "kernel.csv")).unwrap();
    assert!(text.starts_with("t,kappa,R_re,R_im,abs_R\n"));
    assert!(!dir.path().join("volterra.csv").exists());
}

#[test]
fn missing_required_key_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "schema_version = 1\n[grid]\nkappa_min = 0.001\nn_kappa = 200\n").unwrap();
    let out = landau(&["poles", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("grid.kappa_max"), "{stderr}");
    assert!(stderr.contains("poles"), "{stderr}");
}

#[test]
fn unknown_key_and_bad_version_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (text, field) in [
        ("schema_version = 1\n[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 20\nkappa_maximum = 1.0\n", "kappa_maximum"),
        ("schema_version = 7\n[grid]\nkappa_min = 0.001\nkappa_max = 0.7\nn_kappa = 20\n", "schema_version"),
    ] {
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, text).unwrap();
        let out = landau(&["dispersion", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains(field));
    }
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = landau(&["poles", "--config", "/nonexistent/landau.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = landau(&["plot"]);
    assert_eq!(out.status.code(), Some(2));
}

fn run_with(text: &str, cmd: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, text).unwrap();
    landau(&[cmd, "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
}

const SMALL_FIELD: &str = "schema_version = 1\n[grid]\nkappa_min = 0.01\nkappa_max = 0.7\nn_kappa = 20\n[field_grid]\nwidth_low = 0.1\nwidth_high = 0.1\norder = 4\nt_final = 40.0\n";

#[test]
fn truncated_spectrum_exits_4() {
    let text = format!("{SMALL_FIELD}kappa_max = 0.8\n[datum]\nwidth_kappa = 3.0\n[decay]\nwindow = [10.0, 40.0]\n");
    let out = run_with(&text, "decay-fit");
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn undersampled_decay_window_exits_3() {
    let text = format!("{SMALL_FIELD}kappa_max = 2.0\n[decay]\nwindow = [10.0, 12.0]\n");
    let out = run_with(&text, "decay-fit");
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
