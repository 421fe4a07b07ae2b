use std::path::PathBuf;
use std::process::{Command, Output};

fn polyuct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyuct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyuct-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn missing_fixture_names_the_oracle_command() {
    let missing = temp("nope.json");
    let out = polyuct(&["regret-curve", "--fixture", missing.to_str().unwrap(), "--n-grid", "64"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("polyuct oracle --out"), "{err}");
}

#[test]
fn single_point_grid_gives_one_row() {
    let out = polyuct(&["return-curve", "--n-grid", "32", "--trials", "3", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,trials,mean_return,std,stderr");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("32,3,"));
}

#[test]
fn chain_regret_after_oracle() {
    let fixture = temp("chain-oracle.json");
    let f = fixture.to_str().unwrap();
    assert!(polyuct(&["oracle", "--env", "chain", "--out", f]).status.success());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
    let v0 = json["states"]["0"]["v"].as_f64().unwrap();
    assert!((v0 - 0.970299).abs() < 1e-9, "{v0}");

    let out = polyuct(&[
        "regret-curve",
        "--env",
        "chain",
        "--fixture",
        f,
        "--n-grid",
        "256",
        "--trials",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",Right,"), "{text}");
}

#[test]
fn fixture_for_another_env_is_rejected() {
    let fixture = temp("lake-oracle.json");
    let f = fixture.to_str().unwrap();
    assert!(polyuct(&["oracle", "--out", f]).status.success());
    let out = polyuct(&["regret-curve", "--env", "chain", "--fixture", f, "--n-grid", "64"]);
    assert!(!out.status.success());
}

#[test]
fn constants_exit_codes() {
    let ok = polyuct(&["constants", "--alpha", "4"]);
    assert!(ok.status.success());
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["feasible"], true);
    assert_eq!(report["eta_dd"], 0.5);

    let bad = polyuct(&["constants", "--xi", "4"]);
    assert_eq!(bad.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["diagnostics"][0]["code"], "infeasible_alpha");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let config = temp("bad.json");
    std::fs::write(&config, r#"{"seeds": 3}"#).unwrap();
    let out = polyuct(&["return-curve", "--config", config.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn flags_override_config() {
    let config = temp("grid.json");
    std::fs::write(&config, r#"{"trials": 2, "n_grid": [16, 32]}"#).unwrap();
    let c = config.to_str().unwrap();
    let out = polyuct(&["return-curve", "--config", c, "--n-grid", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("8,2,"));
}
