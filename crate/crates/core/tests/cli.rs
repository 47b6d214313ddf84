use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scenario-drift"))
}

#[test]
fn cover_to_stdout() {
    let out = bin().args(["cover", "--seed", "3", "--set", "r0=2.0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema=cover.v1"));
    assert!(lines.next().unwrap().starts_with("r0,gamma_static,gamma_robust,beta_model_b,beta_static"));
    assert!(lines.next().unwrap().starts_with("2,"));
}

#[test]
fn config_file_and_out_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bounds.toml");
    std::fs::write(&cfg, "seed = 4\nr0_grid = [1.8, 2.4]\neps_grid = [0.1]\n").unwrap();
    let out = dir.path().join("fig1.csv");
    let status = bin()
        .args(["bounds", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let primary = std::fs::read_to_string(&out).unwrap();
    assert!(primary.starts_with("#schema=bounds_r0.v1\n"));
    assert_eq!(primary.lines().count(), 4);
    let second = std::fs::read_to_string(dir.path().join("fig1_bounds_epsilon.csv")).unwrap();
    assert!(second.contains("\n0.1,309,182\n"));
}

#[test]
fn same_seed_same_bytes() {
    let run = || bin().args(["validate", "--seed", "8", "--repetitions", "100", "--samples", "1000"]).output().unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["cover", "--set", "preset=wobble"]), Some(2));
    assert_eq!(code(&["cover", "--set", "bogus=1"]), Some(2));
    assert_eq!(code(&["cover", "--epsilon", "1.5"]), Some(2));
    assert_eq!(code(&["control", "--set", "strategy=exhaustive", "--set", "control_n=5"]), Some(3));
    // One evaluation draw per repetition makes the violation estimate 0 or 1,
    // far noisier than the certificate allows.
    assert_eq!(
        code(&["validate", "--seed", "1", "--set", "validation_mode=static", "--samples", "1", "--repetitions", "2000"]),
        Some(4)
    );
}

#[test]
fn desk_scale_control_runs() {
    let out = bin().args(["control", "--desk-scale", "--set", "control_n=40", "--seed", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("#schema=control_schedule.v1\nrho,r0,rho_over_r0,k,epsilon,flag,realized\n"));
    assert!(text.contains("#schema=control_solution.v1\n"));
    assert!(text.contains("\n4,40,exhaustive,"));
}
