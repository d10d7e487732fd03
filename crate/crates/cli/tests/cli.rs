use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elastica"))
}

fn run_with(config: &str, dir: &Path) -> Output {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

const MINIMAL_DISPERSION: &str = r#"
experiment = "dispersion"

[grid]
n_sites = 64
length = 6.283185307179586

[params]
modes = [1, 2]
t_total = 30.0
"#;

#[test]
fn list_names_every_experiment() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "dispersion",
        "gauge-check",
        "quanta",
        "eph-rate",
        "eph-shift",
        "spin-selection",
        "relaxation",
    ] {
        assert!(text.contains(name), "missing {name} in list output");
    }
}

#[test]
fn successful_run_exits_zero_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(MINIMAL_DISPERSION, dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = fs::read_to_string(dir.path().join("out/dispersion.csv")).unwrap();
    assert!(csv.starts_with("q,omega_measured,omega_expected\n"));
    assert_eq!(csv.lines().count(), 3); // header + 2 modes
    let summary = fs::read_to_string(dir.path().join("out/summary.toml")).unwrap();
    assert!(summary.contains("passed = true"));
}

#[test]
fn unknown_experiment_exits_two_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        r#"
experiment = "foo"

[grid]
n_sites = 64
length = 1.0
"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("foo") && err.contains("experiment"), "{err}");
}

#[test]
fn unknown_config_key_rejected_before_compute() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        r#"
experiment = "dispersion"
typo_key = 1

[grid]
n_sites = 64
length = 6.283185307179586
"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // nothing was written
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_params_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        r#"
experiment = "dispersion"

[grid]
n_sites = 64
length = 6.283185307179586

[params]
modez = [1]
"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("dispersion"), "{err}");
}

#[test]
fn failing_check_exits_one() {
    // a mode near the zone edge misses the continuum dispersion by far
    // more than one percent
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        r#"
experiment = "dispersion"

[grid]
n_sites = 64
length = 6.283185307179586

[params]
modes = [30]
t_total = 10.0
"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let summary = fs::read_to_string(dir.path().join("out/summary.toml")).unwrap();
    assert!(summary.contains("passed = false"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.toml");
    fs::write(
        &cfg,
        r#"
experiment = "relaxation"
seed = 1

[grid]
n_sites = 4
length = 1.0

[params]
lambda = 0.3
n_steps = 200
n_realizations = 16
record_every = 10
"#,
    )
    .unwrap();
    let mut curves = Vec::new();
    for (seed, sub) in [("1", "a"), ("2", "b")] {
        let out = bin()
            .arg("run")
            .arg("--config")
            .arg(&cfg)
            .arg("--seed")
            .arg(seed)
            .arg("--out")
            .arg(dir.path().join(sub))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        curves.push(fs::read(dir.path().join(sub).join("decay.csv")).unwrap());
    }
    assert_ne!(curves[0], curves[1], "different seeds must differ");
}

#[test]
fn output_env_var_is_the_default_root() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.toml");
    fs::write(&cfg, MINIMAL_DISPERSION).unwrap();
    let out = bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .env("ELASTICA_OUT", dir.path().join("env_out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("env_out/summary.toml").exists());
}
