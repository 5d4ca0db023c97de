use std::path::PathBuf;

use e6lax::cli::{main_with_args, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("e6lax-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("e6lax").chain(args.iter().copied()))
}

fn run_to(args: &[&str], name: &str) -> (i32, String) {
    let out = scratch(name);
    let mut all = args.to_vec();
    let path = out.to_str().unwrap().to_string();
    all.extend(["--out", &path]);
    let code = run(&all);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn config_errors_exit_two() {
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "[params]\nb4 = \"1/2\"\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "selftest"]), EXIT_CONFIG);
    std::fs::write(&cfg, "[params]\nq = \"1\"\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "selftest"]), EXIT_CONFIG);
    assert_eq!(run(&["--config", "/nonexistent/e6lax.toml", "selftest"]), EXIT_CONFIG);
}

#[test]
fn unknown_target_is_a_usage_error() {
    assert_eq!(run(&["correspond", "painleve"]), EXIT_CONFIG);
    assert_eq!(run(&["no-such-command"]), EXIT_CONFIG);
}

#[test]
fn derive_fg_tables() {
    let (code, csv) = run_to(&["derive-fg", "--times", "0"], "empty.csv");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("t,re_f,im_f,re_g,im_g,residual_first,residual_second"));

    let (code, csv) = run_to(&["derive-fg", "--times", "3"], "three.csv");
    assert_eq!(code, EXIT_PASS);
    let rows: Vec<_> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
}

#[test]
fn evolve_tables() {
    let (code, csv) = run_to(&["evolve", "--f0", "1/5,1/7", "--g0", "-2/3", "--steps", "0"], "zero.csv");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(csv.lines().count(), 2);

    let (code, csv) = run_to(&["evolve", "--f0", "1/5,1/7", "--g0", "-2/3", "--steps", "4"], "four.csv");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(csv.lines().count(), 6);

    let (code, csv) = run_to(&["evolve", "--f0", "0", "--g0", "0", "--steps", "2"], "singular.csv");
    assert_eq!(code, EXIT_FAIL);
    assert!(csv.contains("index 1"), "{csv}");

    assert_eq!(run(&["evolve", "--f0", "0.2", "--g0", "1", "--steps", "1"]), EXIT_CONFIG);
}

#[test]
fn correspond_json_report() {
    let (code, json) = run_to(&["--json", "correspond", "sakai"], "sakai.json");
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["group"] == "sakai"));
}
