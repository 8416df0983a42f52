//! End-to-end runs of the `resonorm` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use resonorm::normalform::flow_map;
use resonorm::ResonantSeries;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resonorm-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_resonorm"));
    cmd.args(args).env_remove("RESONORM_OUT");
    if let Some(dir) = env_out {
        cmd.env("RESONORM_OUT", dir);
    }
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// The single error line: `error code=<code> exit=<status> message="..."`.
fn assert_error(o: &Output, code: &str, exit: i32) {
    assert_eq!(o.status.code(), Some(exit), "{}", stderr(o));
    let text = stderr(o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "{text}");
    assert!(lines[0].starts_with(&format!("error code={code} exit={exit} message=\"")), "{text}");
}

#[test]
fn normalize_writes_json_and_table() {
    let out = scratch("normalize");
    let o = run(&["normalize", data("h7.json").to_str().unwrap(), "--n", "7", "--truncation", "5", "--out"], None);
    // `--out` without a value is an input error.
    assert_error(&o, "input", 1);
    let o = run(
        &["normalize", data("h7.json").to_str().unwrap(), "--n", "7", "--truncation", "5", "--out", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let json = std::fs::read_to_string(out.join("normalforms/h7.nf.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n"], 7);
    assert!(out.join("normalforms/h7.nf.txt").exists());
}

#[test]
fn degenerate_and_malformed_inputs_have_distinct_exit_codes() {
    let out = scratch("errors");
    let dir = out.to_str().unwrap();
    let twist = run(&["normalize", data("h7_twist.json").to_str().unwrap(), "--out", dir], None);
    assert_error(&twist, "degeneracy", 2);
    let broken = run(&["normalize", data("broken.json").to_str().unwrap(), "--out", dir], None);
    assert_error(&broken, "parse", 1);
    let missing = run(&["bifurcate", "--out", dir], None);
    assert_error(&missing, "input", 1);
    let unknown = run(&["frobnicate"], None);
    assert_error(&unknown, "input", 1);
    let suite = run(&["verify", "--suite", "nonsense", "--out", dir], None);
    assert_error(&suite, "parse", 1);
    let jobs = run(&["verify", "--suite", "tables", "--jobs", "0", "--out", dir], None);
    assert_error(&jobs, "input", 1);
}

#[test]
fn a_map_input_is_interpolated_first() {
    let out = scratch("map");
    let h = ResonantSeries::from_json(&std::fs::read_to_string(data("h7.json")).unwrap()).unwrap();
    let map = flow_map(&h, h.truncation() - 1).unwrap();
    let input = out.join("g7.json");
    std::fs::write(&input, map.to_json()).unwrap();
    let dir = out.to_str().unwrap();
    let from_map = run(&["normalize", input.to_str().unwrap(), "--map", "--truncation", "5", "--out", dir], None);
    assert!(from_map.status.success(), "{}", stderr(&from_map));
    let from_h = run(&["normalize", data("h7.json").to_str().unwrap(), "--truncation", "5", "--out", dir], None);
    assert!(from_h.status.success(), "{}", stderr(&from_h));
    let a = std::fs::read_to_string(out.join("normalforms/g7.nf.json")).unwrap();
    let b = std::fs::read_to_string(out.join("normalforms/h7.nf.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn non_resonant_map_terms_are_rejected() {
    // A linear term that does not commute with the rotation by 2π/n.
    let out = scratch("resonance");
    let mut g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("h7.json")).unwrap()).unwrap();
    g["terms"].as_array_mut().unwrap().push(serde_json::json!({ "k": 1, "l": 0, "re": "1", "im": "0" }));
    let input = out.join("bad_map.json");
    std::fs::write(&input, g.to_string()).unwrap();
    let o = run(&["normalize", input.to_str().unwrap(), "--map", "--out", out.to_str().unwrap()], None);
    assert_error(&o, "domain", 1);
}

#[test]
fn flags_override_the_config_file_and_unknown_keys_are_rejected() {
    let out = scratch("config");
    let cfg = out.join("run.json");
    std::fs::write(&cfg, r#"{ "n": 5, "nu_range": "-0.1:0.1:20", "grid": "20x20" }"#).unwrap();
    let dir = out.to_str().unwrap();
    let o = run(&["bifurcate", "--config", cfg.to_str().unwrap(), "--n", "7", "--out", dir], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("curves/boundaries_n7.csv").exists());
    assert!(!out.join("curves/boundaries_n5.csv").exists());
    let grid = std::fs::read_to_string(out.join("grids/domains_n7.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 20 * 20);

    std::fs::write(&cfg, r#"{ "n": 5, "colour": "red" }"#).unwrap();
    let o = run(&["bifurcate", "--config", cfg.to_str().unwrap(), "--out", dir], None);
    assert_error(&o, "input", 1);
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn the_environment_overrides_the_output_directory() {
    let flag_dir = scratch("flag-out");
    let env_dir = scratch("env-out");
    let o = run(
        &["levels", "--n", "5", "--delta", "0", "--nu", "0", "--critical", "--grid", "64x64", "--out"],
        None,
    );
    assert_error(&o, "input", 1);
    let o = run(
        &[
            "levels", "--n", "5", "--delta", "0", "--nu", "0", "--critical", "--grid", "64x64", "--out",
            flag_dir.to_str().unwrap(),
        ],
        Some(&env_dir),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(env_dir.join("curves/levels_n5_delta0_nu0.csv").exists());
    assert!(!flag_dir.join("curves").exists());
}

#[test]
fn help_and_version_succeed() {
    assert!(run(&["--help"], None).status.success());
    assert!(run(&["--version"], None).status.success());
}
