use std::process::{Command, Output};

fn gp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gp-spectra"))
        .args(args)
        .output()
        .expect("running gp-spectra")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn spectrum_of_the_quintic_example() {
    let o = gp(&[
        "spectrum", "--p", "11", "--m", "5", "--k", "5", "--method", "closed", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q"], 161051);
    let values: Vec<(String, u64)> = v["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["value"]["exact"].as_str().unwrap().to_string(),
                e["mult"].as_u64().unwrap(),
            )
        })
        .collect();
    for x in ["32210", "255", "90", "-20", "-130", "-196"] {
        assert!(
            values.iter().any(|(s, _)| s == x),
            "{x} missing from {values:?}"
        );
    }
    assert!(v["closed_forms"][0]["agrees_with_periods"]
        .as_bool()
        .unwrap_or(true));
}

#[test]
fn verified_spectrum_exits_zero() {
    let o = gp(&[
        "spectrum", "--p", "2", "--m", "4", "--k", "3", "--verify", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle"]["report"]["matched"], true);
    assert_eq!(v["flags"]["integral"], true);
}

#[test]
fn sum_graph_and_complement() {
    let o = gp(&[
        "spectrum",
        "--p",
        "3",
        "--m",
        "4",
        "--k",
        "4",
        "--variant",
        "complement",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[60]^1"));
    let o = gp(&[
        "spectrum",
        "--p",
        "13",
        "--m",
        "1",
        "--k",
        "3",
        "--variant",
        "sum",
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle"]["report"]["matched"], true);
}

#[test]
fn classify_reports_srg_and_ramanujan() {
    let o = gp(&[
        "classify", "--p", "3", "--m", "4", "--k", "5", "--verify", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = &v["srg"]["params"]["graph"];
    assert_eq!(
        (
            g["v"].as_i64(),
            g["r"].as_i64(),
            g["e"].as_i64(),
            g["d"].as_i64()
        ),
        (Some(81), Some(16), Some(7), Some(2))
    );
    assert_eq!(v["srg"]["counted"], serde_json::json!([7, 2]));
    assert_eq!(v["ramanujan"]["classification_agrees"], true);
}

#[test]
fn disconnected_graph_is_reported() {
    let o = gp(&[
        "classify", "--p", "3", "--m", "2", "--k", "4", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["flags"]["connected"], false);
    assert!(v["ramanujan"]["verdict"].is_null());
}

#[test]
fn csv_output_has_a_header() {
    let o = gp(&[
        "spectrum", "--p", "5", "--m", "1", "--k", "2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 2);
}

#[test]
fn tables_render() {
    let o = gp(&["table", "--which", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 17);
    let o = gp(&["table", "--which", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 20);
}

#[test]
fn invalid_input_exits_one() {
    assert_eq!(
        gp(&["spectrum", "--p", "4", "--m", "1", "--k", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        gp(&["spectrum", "--p", "7", "--m", "1", "--k", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(gp(&["spectrum", "--p", "7"]).status.code(), Some(1));
    assert_eq!(gp(&["bogus"]).status.code(), Some(1));
    assert_eq!(gp(&["--help"]).status.code(), Some(0));
}

#[test]
fn field_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_gp-spectra"))
        .args(["spectrum", "--p", "2", "--m", "10", "--k", "3"])
        .env("GP_SPECTRA_MAX_Q", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn edges_file_lists_every_edge_once() {
    let dir = std::env::temp_dir().join(format!("gp-spectra-edges-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("edges.txt");
    let o = gp(&[
        "spectrum",
        "--p",
        "2",
        "--m",
        "4",
        "--k",
        "3",
        "--edges",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let arcs = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .count();
    assert_eq!(arcs, 16 * 5 / 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_is_deterministic_and_clean() {
    let a = gp(&["sweep", "--max-q", "64"]);
    let b = gp(&["sweep", "--max-q", "64"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["findings"].as_array().unwrap().len(), 0);
}
