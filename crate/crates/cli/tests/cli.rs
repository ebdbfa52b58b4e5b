//! End-to-end tests of the `mmvis` binary: exit codes, emitted files, and
//! run-to-run reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mmvis(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmvis"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL_DELAY_CONFIG: &str = r#"
kind = "delay-rayleigh"
n_highest = [1, 3]
trials = 4
master_seed = 11

[delays]
unit = "rayleigh-units"
values = [0.0, 0.5, 1.0]

[grid]
samples_per_axis = 128
"#;

#[test]
fn delay_sweep_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", SMALL_DELAY_CONFIG);
    let out = mmvis(
        &["delay-sweep", "--config", &config, "--out", "results", "--formats", "csv,json,svg"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let results = dir.path().join("results");
    let csv = fs::read_to_string(results.join("delay_sweep_n_1.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4); // header + 3 delay rows
    assert!(lines[0].starts_with("delay_zr,mean,stderr,trial_0"));
    assert!(results.join("delay_sweep_n_3.csv").exists());
    assert!(results.join("delay_sweep.json").exists());
    assert!(results.join("delay_sweep.svg").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", SMALL_DELAY_CONFIG);
    for out_dir in ["a", "b"] {
        let out = mmvis(
            &["delay-sweep", "--config", &config, "--out", out_dir],
            dir.path(),
        );
        assert!(out.status.success());
    }
    for name in ["delay_sweep_n_1.csv", "delay_sweep_n_3.csv", "delay_sweep.json"] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
}

#[test]
fn seed_override_changes_the_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", SMALL_DELAY_CONFIG);
    for (out_dir, seed) in [("a", "11"), ("b", "12")] {
        let out = mmvis(
            &["delay-sweep", "--config", &config, "--out", out_dir, "--seed", seed],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("a").join("delay_sweep_n_3.csv")).unwrap();
    let b = fs::read(dir.path().join("b").join("delay_sweep_n_3.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bad.toml", "kind = \"delay-rayleigh\"\nnope = 1\n");
    let out = mmvis(&["delay-sweep", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inconsistent_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // Mode-order sweep with time delays: consistent TOML, invalid run.
    let text = r#"
n_highest = [2, 3]
trials = 2

[delays]
unit = "seconds"
values = [1e-9]
"#;
    let config = write_config(dir.path(), "run.toml", text);
    let out = mmvis(&["mode-sweep", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undersized_grid_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
kind = "delay-rayleigh"
n_highest = [10]
trials = 1

[delays]
unit = "rayleigh-units"
values = [2.0]

[grid]
samples_per_axis = 64
half_extent = 3.0
"#;
    let config = write_config(dir.path(), "run.toml", text);
    let out = mmvis(&["delay-sweep", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid too small"));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.toml", SMALL_DELAY_CONFIG);
    // A plain file where the output directory should go.
    fs::write(dir.path().join("blocked"), b"").unwrap();
    let out = mmvis(
        &["delay-sweep", "--config", &config, "--out", "blocked"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_config_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmvis(&["delay-sweep", "--config", "absent.toml"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn beam_image_writes_pngs_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
kind = "beam-image"
n_highest = 5
master_seed = 3

[grid]
samples_per_axis = 64

[beam_image]
trials = [0, 1]
"#;
    let config = write_config(dir.path(), "run.toml", text);
    let out = mmvis(
        &["beam-image", "--config", &config, "--out", "img", "--dump-coeffs"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let img = dir.path().join("img");
    for trial in [0, 1] {
        let png = fs::read(img.join(format!("beam_trial{trial}.png"))).unwrap();
        assert_eq!(&png[1..4], b"PNG");
        let coeffs = fs::read_to_string(img.join(format!("beam_trial{trial}_coeffs.csv"))).unwrap();
        assert_eq!(coeffs.lines().count(), 1 + 15); // header + N(N+1)/2 rows
    }
}

#[test]
fn wavelength_sweep_runs_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
kind = "wavelength-n"

[[fibers]]
numerical_aperture = 0.2
core_radius = 25e-6
profile = "parabolic"

[wavelength_scan]
min = 1.0e-6
max = 1.6e-6
points = 4
"#;
    let config = write_config(dir.path(), "run.toml", text);
    let out = mmvis(
        &["wavelength-sweep", "--config", &config, "--out", "wl"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv =
        fs::read_to_string(dir.path().join("wl").join("wavelength_sweep_na_0.2_a_25um_parabolic.csv"))
            .unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().starts_with("0.000001,"));
}

#[test]
fn validate_subcommand_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmvis(&["validate", "--grid", "128"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches("PASS").count(), 7);
    assert!(!stdout.contains("FAIL"));
}
