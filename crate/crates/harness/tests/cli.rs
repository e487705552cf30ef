//! The `modal` binary end to end.

use std::path::PathBuf;
use std::process::Command;

use modal_core::{
    default_radial_grid, synthesize_basis, write_basis, H2Mode, Integrator, PeakProfile,
};
use modal_harness::gamma_io::{read_bin, read_csv};
use modal_harness::study::gamma3d;
use modal_harness::{Inputs, Mode, RunConfig};

fn modal() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modal"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("modal-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gamma3d_csv_matches_library_and_records_config() {
    let dir = scratch("csv");
    let out = dir.join("g.csv");
    let status = modal()
        .args(["--mode", "gamma3d", "--lmax", "10", "--pmax", "2", "--r-samples", "30"])
        .args(["--integrator", "spline", "--h2", "exact", "--workers", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let second = text.lines().nth(1).unwrap();
    assert!(second.starts_with("# config mode=gamma3d lmin=2 lmax=10 pmax=2"));
    assert!(second.contains("integrator=spline h2=exact"));
    assert!(second.contains("block=64 workers=2"));

    let mut cfg = RunConfig::new(Mode::Gamma3d);
    cfg.l_max = 10;
    cfg.p_max = 2;
    cfg.r_samples = 30;
    cfg.workers = 2;
    let want = gamma3d(&Inputs::load(&cfg).unwrap(), &cfg, Integrator::Spline, H2Mode::Exact).unwrap();
    assert_eq!(read_csv(&text).unwrap().as_slice(), want.as_slice());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_with_flag_override_and_binary_output() {
    let dir = scratch("bin");
    let cfg_path = dir.join("run.cfg");
    let out = dir.join("g.mgam");
    std::fs::write(
        &cfg_path,
        format!("mode=gamma2d\nlmax=12\npmax=2\nr-samples=24\nformat=bin\nout={}\n", out.display()),
    )
    .unwrap();
    let status = modal().arg("--config").arg(&cfg_path).args(["--lmax", "8"]).status().unwrap();
    assert!(status.success());
    let g = read_bin(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(g.meta().l_max, 8);
    assert_eq!(g.n_max(), 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn crosscheck_and_convergence_emit_csv() {
    let out = modal()
        .args(["--mode", "crosscheck", "--lmax", "10", "--pmax", "2", "--r-samples", "24"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# config mode=crosscheck"));
    assert!(text.contains("comparison,rmse_percent,max_rel_deviation,seconds_2d,seconds_3d\nexact,"));

    let out = modal()
        .args(["--mode", "convergence", "--lmax", "6", "--pmax", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "integrator,r_samples,rmse_percent,max_rel_deviation,seconds");
    assert_eq!(data.len(), 1 + 3 * 6);
    let gold = data.iter().find(|l| l.starts_with("spline,1768,")).unwrap();
    assert!(gold.starts_with("spline,1768,0e0,0e0,"));
}

#[test]
fn exit_codes_separate_config_numerical_and_io() {
    let code = |args: &[&str]| modal().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["--mode", "gamma3d", "--lmin", "1"]), 2);
    assert_eq!(code(&["--mode", "gamma3d", "--integrator", "simpson"]), 2);
    assert_eq!(code(&["--lmax", "4"]), 2);
    assert_eq!(code(&["--mode", "gamma3d", "--mapping", "/nonexistent/map.txt"]), 4);
    assert_eq!(code(&["--mode", "gamma3d", "--config", "/nonexistent/run.cfg"]), 4);

    // A basis file whose power spectrum is not positive is a numerical
    // failure.
    let dir = scratch("codes");
    let profile = PeakProfile::default();
    let grid = default_radial_grid(16, &profile).unwrap();
    let tables = synthesize_basis(1, 2, 4, &grid, &profile).unwrap();
    let mut buf = Vec::new();
    write_basis(&mut buf, &tables, &grid).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let c_row = lines.iter().position(|l| l == "[C]").unwrap() + 1;
    lines[c_row] = format!("-{}", lines[c_row]);
    let path = dir.join("bad.basis");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let bad = path.to_str().unwrap();
    assert_eq!(code(&["--mode", "gamma3d", "--pmax", "1", "--lmax", "4", "--basis", bad]), 3);

    let junk = dir.join("junk.basis");
    std::fs::write(&junk, "not a basis\n").unwrap();
    assert_eq!(
        code(&["--mode", "gamma3d", "--pmax", "1", "--lmax", "4", "--basis", junk.to_str().unwrap()]),
        4
    );
    std::fs::remove_dir_all(dir).unwrap();
}
