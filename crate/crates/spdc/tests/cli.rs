use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spdc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spdc"))
        .arg("--output")
        .arg(dir)
        .args(args)
        .output()
        .expect("spawn spdc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn preset(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn sweep_angle_writes_38_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = spdc(dir.path(), &["sweep-angle", "--from", "29.3", "--to", "33.0", "--steps", "38"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("sweep_angle.tsv")).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("theta_a_deg\t"));
    assert_eq!(body.len() - 1, 38);
    assert!(body[1].starts_with("29.3000000\t"));
    assert!(body[38].starts_with("33.0000000\t"));
}

#[test]
fn cas_analytic_from_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("w185.cfg");
    let o = spdc(dir.path(), &["--config", &cfg, "--engine", "analytic", "cas", "--idler", "0.033,-0.485"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.starts_with("cas analytic:"), "{out}");
    let g = spdc::format::read_grid(&dir.path().join("cas_analytic.grid")).unwrap();
    assert_eq!(g.engine, "analytic");
    let p = g.grid.argmax_point();
    assert!((p.x + 0.033).abs() < 0.01 && (p.y - 0.485).abs() < 0.02, "{p:?}");
}

#[test]
fn as_smoke_reports_radius() {
    let dir = tempfile::tempdir().unwrap();
    let o = spdc(dir.path(), &["--config", &preset("w35.cfg"), "--set", "grid.count=32", "as"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("r_as "));
    assert!(dir.path().join("as_exact.grid").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str], file: &str| {
        let o = spdc(dir.path(), args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(dir.path().join(file)).unwrap()
    };
    let cfg = preset("w5.cfg");
    for (args, file) in [
        (vec!["--config", &cfg, "cas"], "cas_exact.grid"),
        (vec!["--config", &cfg, "--set", "grid.count=24", "as"], "as_exact.grid"),
        (vec!["--config", &cfg, "cone"], "cone_exact.grid"),
    ] {
        let a = run(&args, file);
        let b = run(&args, file);
        assert!(a == b, "{file} differs between runs");
    }
}

#[test]
fn every_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("w35.cfg");
    for args in [
        vec!["aperture"],
        vec!["slice", "--axis", "x"],
        vec!["--engine", "analytic", "slice", "--axis", "y"],
        vec!["cone", "--taylor"],
        vec!["sweep-lambda", "--from", "400nm", "--to", "520nm", "--steps", "5"],
        vec!["match-lambda", "--angle", "31deg"],
        vec!["match-lambda", "--angle", "31", "--quantity", "radius"],
        vec!["peak-idler"],
        vec!["--engine", "analytic", "as", "--form", "semi", "--set", "grid.count=16"],
    ] {
        let mut full = vec!["--config", cfg.as_str()];
        full.extend(args.iter().copied());
        let o = spdc(dir.path(), &full);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["--bogus", "aperture"],
        vec!["slice", "--axis", "z"],
        vec!["--set", "nope=1", "aperture"],
        vec!["--set", "crystal.cut_angle=20", "aperture"],
        vec!["--config", "/nonexistent/x.cfg", "aperture"],
        vec!["sweep-angle", "--from", "30", "--to", "29", "--steps", "3"],
        vec!["sweep-angle", "--from", "29", "--to", "30", "--steps", "0"],
        vec!["match-lambda", "--angle", "33", "--quantity", "radius"],
        vec!["--set", "pump.wavelength=5um", "aperture"],
    ] {
        let o = spdc(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?} printed nothing on stderr");
    }
}

#[test]
fn non_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = spdc(
        dir.path(),
        &["--set", "quadrature.refinements=0", "--set", "quadrature.tolerance=1e-12", "--set", "grid.count=16", "as"],
    );
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&spdc(dir.path(), &["--help"])), 0);
}
