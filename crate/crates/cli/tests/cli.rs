use std::process::Command;

use delpezzo_cli::run;
use serde_json::Value;

fn json(args: &[&str]) -> (Value, i32) {
    let mut argv = vec!["delpezzo"];
    argv.extend_from_slice(args);
    argv.push("--json");
    let outcome = run(argv);
    let value = serde_json::from_str(&outcome.stdout).unwrap_or(Value::Null);
    (value, outcome.exit)
}

fn text(args: &[&str]) -> (String, String, i32) {
    let mut argv = vec!["delpezzo"];
    argv.extend_from_slice(args);
    let o = run(argv);
    (o.stdout, o.stderr, o.exit)
}

#[test]
fn enumerate_degree_three_has_27_records() {
    let (v, exit) = json(&["enumerate", "--degree", "3"]);
    assert_eq!(exit, 0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["tool_version", "command", "degrees", "claims", "payload"]
    );
    let curves = v["payload"][0]["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 27);
    assert_eq!(curves[0]["type"], "E(1)");
    assert_eq!(
        curves[0]["class"],
        serde_json::json!([0, -1, 0, 0, 0, 0, 0])
    );
    assert_eq!(curves[0]["indices"], serde_json::json!([1]));
    assert_eq!(v["claims"][0]["pass"], true);
}

#[test]
fn enumerate_csv_uses_textual_classes() {
    let (out, _, exit) = text(&["enumerate", "--degree", "8", "--csv"]);
    assert_eq!(exit, 0);
    assert_eq!(out, "degree,id,type,class\n8,0,E(1),0H - -1*E1\n");
    let (_, _, exit) = text(&["enumerate", "--csv", "--json"]);
    assert_eq!(exit, 2);
}

#[test]
fn verify_lemma_degree_one() {
    let (v, exit) = json(&["verify-lemma", "--degree", "1"]);
    assert_eq!(exit, 0);
    let curves = v["payload"][0]["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 232);
    assert!(curves.iter().all(|c| c["residual"] == 2));
}

#[test]
fn full_report_passes() {
    let (v, exit) = json(&["report"]);
    assert_eq!(exit, 0);
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.len() > 50);
    assert!(claims.iter().all(|c| c["pass"] == true));
    let names: Vec<&str> = claims.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for wanted in [
        "incidence: d1/meets_count",
        "bitangents: d2/composition",
        "double-sixes: d3/double_sixes",
        "boundary-replay: boundary",
        "count-rational: routes_agree",
        "weyl: d1/weyl_closed",
    ] {
        assert!(names.contains(&wanted), "{wanted}");
    }
}

#[test]
fn report_for_one_degree_skips_fixed_degree_sections() {
    let (v, exit) = json(&["report", "--degree", "5"]);
    assert_eq!(exit, 0);
    let names: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"enumerate: d5/count"));
    assert!(!names.iter().any(|n| n.starts_with("bitangents")));
}

#[test]
fn census_incidence_and_fixed_degree_commands() {
    let (v, exit) = json(&["census", "--degree", "2"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"][0]["census"]["conic"], 21);
    let (v, exit) = json(&["incidence", "--degree", "3"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"][0]["histogram"]["1"], 135);
    let (v, exit) = json(&["bitangents"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"]["pairs"].as_array().unwrap().len(), 28);
    let (v, exit) = json(&["double-sixes", "--degree", "3"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"]["double_sixes"].as_array().unwrap().len(), 36);
    let (v, exit) = json(&["pairs", "--degree", "7"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"][0]["count"], 2);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["enumerate", "--degree", "0"],
        vec!["enumerate", "--degree", "10"],
        vec!["enumerate", "--degree", "x"],
        vec!["frobnicate"],
        vec!["bitangents", "--degree", "3"],
        vec!["count-rational", "--max-degree", "0"],
        vec!["count-rational", "--degree", "2"],
        vec!["tame", "--f", "1,0"],
    ] {
        let (_, err, exit) = text(&args);
        assert_eq!(exit, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_with_zero() {
    let (out, _, exit) = text(&["--help"]);
    assert_eq!(exit, 0);
    assert!(out.contains("boundary-replay"));
}

#[test]
fn tame_command() {
    let (v, exit) = json(&[
        "tame", "--f", "1,0,0", "--f", "0,1,0^-1", "--g", "0,0,1", "--g", "1,1,1^-1",
    ]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"]["components"].as_array().unwrap().len(), 4);
    assert_eq!(v["claims"][0]["name"], "cocycle");
    let (v, exit) = json(&[
        "tame",
        "--f",
        "-1,2,0",
        "--f",
        "0,1/2,1^-1",
        "--g",
        "3,0,1",
        "--g",
        "1,1,1^-1",
    ]);
    assert_eq!(exit, 0, "{v}");
    let (_, err, exit) = text(&[
        "tame", "--f", "1,0,0", "--f", "0,1,0^-1", "--g", "1,1,0", "--g", "0,0,1^-1",
    ]);
    assert_eq!(exit, 2);
    assert!(err.contains("concurrent"));
}

#[test]
fn boundary_replay_defaults_and_overrides() {
    let (v, exit) = json(&["boundary-replay"]);
    assert_eq!(exit, 0);
    let p = &v["payload"];
    assert_eq!(
        (p["a"].clone(), p["b"].clone(), p["c"].clone()),
        (1.into(), (-1).into(), 0.into())
    );
    assert_eq!(p["boundary"], "T11 - T12");
    assert_eq!(p["indecomposable"], true);
    assert_eq!(p["constraints"], serde_json::json!(["c = 0", "b = -a"]));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("itable.json");
    std::fs::write(&path, r#"{"itable": [["H", "T11", 2]]}"#).unwrap();
    let (v, exit) = json(&["boundary-replay", "--itable", path.to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"]["a"], 2);
    assert_eq!(v["payload"]["boundary"], "2T11 - 2T12");

    std::fs::write(&path, r#"{"splits": false}"#).unwrap();
    let (v, _) = json(&["boundary-replay", "--itable", path.to_str().unwrap()]);
    assert_eq!(v["payload"]["boundary"], "0");
    assert_eq!(v["payload"]["indecomposable"], false);

    for bad in [
        r#"{"itable": [["E", "T11", 0]]}"#,
        r#"{"locus": "q1_and_q2"}"#,
        "not json",
    ] {
        std::fs::write(&path, bad).unwrap();
        let (_, _, exit) = text(&["boundary-replay", "--itable", path.to_str().unwrap()]);
        assert_eq!(exit, 2, "{bad}");
    }
    let (_, _, exit) = text(&["boundary-replay", "--itable", "/nonexistent/x.json"]);
    assert_eq!(exit, 2);
}

#[test]
fn count_rational_serialises_strings() {
    let (v, exit) = json(&["count-rational"]);
    assert_eq!(exit, 0);
    assert_eq!(v["payload"]["10"], "40739017561997799680");
    let keys: Vec<&str> = v["payload"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"]);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.json");
    let o = run([
        "delpezzo",
        "census",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.exit, 0);
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let (again, _, _) = text(&["census", "--json"]);
    assert_eq!(written, again);
}

#[test]
fn json_and_text_carry_the_same_data() {
    let (v, _) = json(&["census"]);
    let (t, _, _) = text(&["census"]);
    for c in v["claims"].as_array().unwrap() {
        for field in ["name", "expected", "actual"] {
            assert!(t.contains(c[field].as_str().unwrap()), "{}", c[field]);
        }
    }
    for entry in v["payload"].as_array().unwrap() {
        for (kind, n) in entry["census"].as_object().unwrap() {
            assert!(t.contains(&format!("{kind}: {n}")));
        }
    }
}

#[test]
fn binary_is_byte_stable() {
    let exe = env!("CARGO_BIN_EXE_delpezzo");
    let first = Command::new(exe)
        .args(["incidence", "--degree", "4"])
        .output()
        .unwrap();
    let second = Command::new(exe)
        .args(["incidence", "--degree", "4"])
        .output()
        .unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let bad = Command::new(exe)
        .args(["census", "--degree", "-1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
