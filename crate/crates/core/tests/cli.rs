use std::path::PathBuf;
use std::process::Command;

use potentia::cli::run;
use serde_json::Value;

fn games() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/games")
}

fn game(name: &str) -> String {
    games().join(name).to_string_lossy().into_owned()
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str], stdin: &str) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input = stdin.as_bytes();
    let full: Vec<&str> = std::iter::once("potentia")
        .chain(args.iter().copied())
        .collect();
    let code = run(full, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = call(&a, "");
    (
        o.code,
        serde_json::from_str(&o.stdout).unwrap_or(Value::Null),
    )
}

const ZERO: &str = r#"{"players":2,"strategies":[2,2],"payoffs":[[0,0,0,0],[0,0,0,0]]}"#;

#[test]
fn check_zero_game_from_stdin() {
    let o = call(&["check", "-"], ZERO);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("result: potential"));
    assert!(!o.stdout.contains("not potential"));
}

#[test]
fn check_exit_codes() {
    assert_eq!(call(&["check", &game("matching_pennies.json")], "").code, 1);
    assert_eq!(
        call(&["check", &game("three_player_perturbed.json")], "").code,
        1
    );
    assert_eq!(
        call(&["check", &game("four_player_potential.json")], "").code,
        0
    );
    assert_eq!(call(&["check", "-"], "{not json").code, 2);
    assert_eq!(call(&["check", "/no/such/file.json"], "").code, 2);
    assert_eq!(call(&["check", "-", "--method", "bogus"], ZERO).code, 2);
    assert_eq!(call(&["check", "-", "--abs-eps", "-1"], ZERO).code, 2);
}

#[test]
fn method_inapplicable_to_shape() {
    let doc = r#"{"bimatrix":{"C1":[[1,2,3],[4,5,6]],"C2":[[1,2,3],[4,5,6]]}}"#;
    let o = call(&["check", "-", "--method", "minimal"], doc);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("unsupported"), "{}", o.stderr);
    let o = call(
        &[
            "check",
            &game("three_player_potential.json"),
            "--method",
            "hino",
        ],
        "",
    );
    assert_eq!(o.code, 2);
}

#[test]
fn minimal_method_lists_five_residuals() {
    let (code, v) = json(&[
        "check",
        &game("three_player_potential.json"),
        "--method",
        "minimal",
    ]);
    assert_eq!(code, 0);
    let result = &v["report"]["results"][0];
    assert_eq!(result["name"], "minimal");
    assert_eq!(result["residuals"].as_array().unwrap().len(), 5);
}

#[test]
fn all_methods_agree_on_corpus() {
    for entry in std::fs::read_dir(games()).unwrap() {
        let path = entry.unwrap().path();
        let o = call(&["check", path.to_str().unwrap()], "");
        assert!(
            o.code == 0 || o.code == 1,
            "{path:?}: {} {}",
            o.code,
            o.stderr
        );
    }
}

#[test]
fn json_output_is_deterministic() {
    let a = call(
        &["check", &game("prisoners_dilemma.json"), "--format", "json"],
        "",
    );
    let b = call(
        &["check", &game("prisoners_dilemma.json"), "--format", "json"],
        "",
    );
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["consensus"], true);
}

#[test]
fn potential_routes() {
    let (code, v) = json(&["potential", "-"]);
    assert_eq!(code, 2, "empty stdin is an input error");
    assert!(v.is_null());

    for route in ["eq9-1", "eq8-1", "eq40"] {
        let o = call(
            &["potential", "-", "--route", route, "--format", "json"],
            ZERO,
        );
        assert_eq!(o.code, 0, "{route}: {}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        let p: Vec<f64> = serde_json::from_value(v["potential"].clone()).unwrap();
        assert!(p.iter().all(|x| x.abs() < 1e-12), "{route}: {p:?}");
    }

    let pd = game("prisoners_dilemma.json");
    let (_, base) = json(&["potential", &pd, "--route", "eq9-1"]);
    let (_, lifted) = json(&["potential", &pd, "--route", "eq9-1", "--lambda", "2"]);
    let a: Vec<f64> = serde_json::from_value(base["potential"].clone()).unwrap();
    let b: Vec<f64> = serde_json::from_value(lifted["potential"].clone()).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| (y - x - 2.0).abs() < 1e-12));
    for c in base["cross_check"].as_array().unwrap() {
        assert!(c["spread"].as_f64().unwrap() < 1e-9);
    }

    let o = call(&["potential", &game("matching_pennies.json")], "");
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("residual"));

    let o = call(
        &[
            "potential",
            &game("three_player_potential.json"),
            "--route",
            "eq9-1",
        ],
        "",
    );
    assert_eq!(o.code, 2);
}

#[test]
fn project_writes_potential_game() {
    let dir = std::env::temp_dir().join(format!("potentia-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("projected.json");
    let o = call(
        &[
            "project",
            &game("matching_pennies.json"),
            "--output",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("distance: 4"));
    let text = std::fs::read_to_string(&out).unwrap();
    let g = potentia::io::parse_game(&text).unwrap();
    assert!(g.payoffs()[0]
        .iter()
        .zip(&g.payoffs()[1])
        .all(|(a, b)| a == b));
    assert_eq!(call(&["check", out.to_str().unwrap()], "").code, 0);

    let (code, v) = json(&["project", &game("prisoners_dilemma.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["distance"], 0.0);

    assert_eq!(
        call(&["project", &game("three_player_potential.json")], "").code,
        2
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn nash_listing() {
    let (code, v) = json(&["nash", "-"]);
    assert_eq!(code, 2);
    assert!(v.is_null());
    let o = call(&["nash", "-", "--format", "json"], ZERO);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["brute_force"].as_array().unwrap().len(), 4);
    assert_eq!(v["agree"], true);

    let (code, v) = json(&["nash", &game("matching_pennies.json")]);
    assert_eq!(code, 1);
    assert!(v["brute_force"].as_array().unwrap().is_empty());
    assert!(v["potential_argmax"].is_null());

    let (code, v) = json(&["nash", &game("prisoners_dilemma.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["brute_force"], serde_json::json!(["(2,2)"]));
    assert_eq!(v["agree"], true);
}

#[test]
fn equations_dump() {
    let o = call(&["equations", "3", "2"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("(3,2): 5 minimal vs 6 pairwise"));
    assert!(o
        .stdout
        .starts_with(" 0  1  0 -1  0 -1  0  1  0 -1  0  1  0  1  0 -1\n"));

    let (_, v) = json(&["equations", "2", "3"]);
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["rows"].clone()).unwrap();
    // B_3 ⊗ B_3
    assert_eq!(rows[0], vec![1, 0, -1, 0, 0, 0, -1, 0, 1]);
    assert_eq!(rows.len(), 4);

    assert_eq!(call(&["equations", "1", "2"], "").code, 2);
    assert_eq!(call(&["equations", "40", "3"], "").code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let o = call(&["--help"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("check"));
    assert_eq!(call(&[], "").code, 2);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_potentia"))
        .args(["equations", "3", "2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["minimal"], 5);
    let out = Command::new(env!("CARGO_BIN_EXE_potentia"))
        .args(["check", &game("matching_pennies.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
