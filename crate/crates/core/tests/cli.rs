use std::path::Path;
use std::process::Command;

use qglimit::cli::spectrum_table;

const BIN: &str = env!("CARGO_BIN_EXE_qglimit");

const SMALL: &str = "\
grid.L = 50.26548245743669
grid.nh = 16
grid.nv = 4
prim.epsilon = 0.2
prim.gamma = 2
prim.mu = 0.05
prim.rho_bar = 1
prim.pressure_coeff = 0.5
prim.dt = 0.02
prim.T = 0.2
prim.output_every = 5
limit.dt = 0.02
limit.T = 0.2
limit.output_every = 5
sweep.epsilons = 0.4, 0.2
sweep.dt = 0.02
sweep.T = 0.2
sweep.profile = random
sweep.mode = 3
sweep.seed = 7
";

fn qglimit(args: &[&str]) -> std::process::Output {
    Command::new(BIN)
        .args(args)
        .env_remove("QGLIMIT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn empty_config_exits_2_listing_missing_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let out = qglimit(&[
        "sweep",
        "--config",
        &cfg,
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["grid.L", "prim.epsilon", "limit.T", "sweep.epsilons"] {
        assert!(err.contains(key), "{key} missing from: {err}");
    }
    assert!(!out_dir.exists(), "no artifacts on validation errors");
}

#[test]
fn unknown_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}grid.nz = 4\n"));
    let out = qglimit(&["limit-run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn same_config_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let files = [
        ("sweep", "convergence_report.csv"),
        ("sweep", "convergence_extra.csv"),
        ("limit-run", "limit_energy.csv"),
        ("primitive-run", "primitive_energy.csv"),
        ("primitive-run", "primitive_diagnostics.csv"),
        ("rage", "rage.csv"),
    ];
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        for cmd in ["sweep", "limit-run", "primitive-run", "rage"] {
            let out = qglimit(&[
                cmd,
                "--config",
                &cfg,
                "--output-dir",
                out_dir.to_str().unwrap(),
                "--jobs",
                "2",
            ]);
            assert!(
                out.status.success(),
                "{cmd}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
    for (_, f) in files {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(!a.is_empty() && a == b, "{f} differs between runs");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/convergence_report.csv")).unwrap();
    assert!(csv.starts_with("epsilon,err_u,err_r,residual_geo,u3_norm,divh_norm,rage_avg\n"));
    assert_eq!(csv.lines().count(), 3);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_flag_changes_random_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    for (run, seed) in [("a", "1"), ("b", "2")] {
        let out_dir = dir.path().join(run);
        let out = qglimit(&[
            "limit-run",
            "--config",
            &cfg,
            "--output-dir",
            out_dir.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a/limit_energy.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/limit_energy.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn environment_overrides_reach_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("env");
    let out = Command::new(BIN)
        .args(["limit-run", "--config", &cfg])
        .env("QGLIMIT_OUTPUT_DIR", &out_dir)
        .env("QGLIMIT_LIMIT_T", "0.4")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("limit_energy.csv")).unwrap();
    // samples at t = 0, 0.1, ..., 0.4 plus the header
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn spectrum_rows_and_identities() {
    let t = spectrum_table(2, 3).unwrap();
    assert_eq!(t.rows().len(), 5 * 5 * 4);
    for row in t.rows() {
        let k = row[2];
        assert!((row[7] * row[8] - k * k).abs() < 1e-12 * (1.0 + k * k));
        assert!(row[9] < 1e-10);
    }
    let one = spectrum_table(0, 0).unwrap();
    let row = &one.rows()[0];
    assert_eq!(row[3..7], [-1.0, 0.0, 0.0, 1.0]);
    assert!(spectrum_table(-1, 0).is_err());
}

#[test]
fn spectrum_subcommand_writes_csv_and_rejects_bad_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = qglimit(&["spectrum", "--max-xi", "1", "--max-k", "2", "--output-dir", d]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 * 3);
    let out = qglimit(&["spectrum", "--max-xi", "-1", "--max-k", "0", "--output-dir", d]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn solver_abort_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // at eps close to 1 the density thins out until the fixed step is unstable
    let text = SMALL
        .replace("prim.epsilon = 0.2", "prim.epsilon = 0.9")
        .replace("prim.mu = 0.05", "prim.mu = 0.01")
        .replace("prim.T = 0.2", "prim.T = 4")
        .replace("sweep.profile = random", "sweep.profile = plane")
        .replace("sweep.mode = 3", "sweep.mode = 1\nsweep.amplitude = 1.1");
    let cfg = write_config(dir.path(), &text);
    let out_dir = dir.path().join("out");
    let out = qglimit(&[
        "primitive-run",
        "--config",
        &cfg,
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(3), "{err}");
    assert!(err.contains("last good time"), "{err}");
    assert!(!out_dir.exists());
}
