use std::path::Path;
use std::process::{Command, Output};

use heilbronn::model::{read_lp, Var};
use serde_json::Value;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heilbronn"))
        .args(args)
        .current_dir(dir)
        .env_remove("HEILBRONN_DATA_DIR")
        .output()
        .unwrap()
}

fn out(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(o: &Output) -> Value {
    let t = out(o);
    serde_json::from_str(&t[t.find('{').unwrap()..]).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn verify_prints_seven_decimals_and_the_triple() {
    let d = tempfile::tempdir().unwrap();
    run_in(d.path(), &["known", "--n", "8", "--out", "n8.json"]);
    let o = run_in(d.path(), &["verify", "n8.json"]);
    assert!(o.status.success());
    let text = out(&o);
    assert!(text.starts_with("min area: 0.07237"), "{text}");
    let v = json_of(&o);
    assert_eq!(v["n"], 8);
    assert_eq!(v["argmin"].as_array().unwrap().len(), 3);
}

#[test]
fn collinear_file_has_zero_area() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "c.json", r#"{"n": 3, "points": [{"x": 0, "y": 0}, {"x": 0.5, "y": 0.5}, {"x": 1, "y": 1}], "meta": {}}"#);
    let o = run_in(d.path(), &["verify", "c.json"]);
    assert!(out(&o).starts_with("min area: 0.0000000"));
}

#[test]
fn malformed_input_exits_with_two() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "bad.json", "{\"points\": [");
    write(d.path(), "out.json", r#"{"points": [{"x": 0, "y": 0}, {"x": 2, "y": 0}, {"x": 0, "y": 1}]}"#);
    write(d.path(), "empty.json", r#"{"n": 0, "points": []}"#);
    for f in ["bad.json", "out.json", "empty.json", "missing.json"] {
        assert_eq!(run_in(d.path(), &["verify", f]).status.code(), Some(2), "{f}");
    }
}

#[test]
fn heuristic_bound_matches_verify_exactly() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["heuristic", "--n", "3", "--samples", "1", "--seed", "7", "--out", "h.json"]);
    assert!(o.status.success());
    let (c, meta) = {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("h.json")).unwrap()).unwrap();
        (v.clone(), v["meta"].clone())
    };
    let v = json_of(&run_in(d.path(), &["verify", "h.json"]));
    assert_eq!(v["min_area"].as_f64(), meta["min_area"].as_f64());
    assert_eq!(c["n"], 3);
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("h.run.json")).unwrap()).unwrap();
    assert_eq!(rec["command"], "heuristic");
    assert_eq!(rec["seed"], 7);
    assert_eq!(rec["outputs"]["lower"].as_f64(), meta["min_area"].as_f64());
}

#[test]
fn heuristic_is_reproducible_and_needs_a_seed() {
    let d = tempfile::tempdir().unwrap();
    for f in ["a.json", "b.json"] {
        let o = run_in(d.path(), &["heuristic", "--n", "6", "--samples", "5000", "--refine", "2000", "--seed", "3", "--out", f]);
        assert!(o.status.success());
    }
    let a = std::fs::read(d.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.path().join("b.json")).unwrap());
    assert_eq!(run_in(d.path(), &["heuristic", "--n", "6"]).status.code(), Some(2));
}

#[test]
fn default_sample_count_stays_below_the_five_point_optimum() {
    let d = tempfile::tempdir().unwrap();
    run_in(d.path(), &["heuristic", "--n", "5", "--seed", "1", "--out", "h.json"]);
    let v = json_of(&run_in(d.path(), &["verify", "h.json"]));
    assert!(v["min_area"].as_f64().unwrap() <= 0.19245);
}

#[test]
fn export_examples() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["export", "--n", "5", "--approach", "3"]).status.code(), Some(2));
    assert_eq!(run_in(d.path(), &["export", "--n", "5", "--approach", "4"]).status.code(), Some(2));
    assert_eq!(run_in(d.path(), &["export", "--n", "5", "--approach", "1", "--mask", "9"]).status.code(), Some(2));
    let o = run_in(d.path(), &["export", "--n", "5", "--approach", "3", "--bits", "10", "--relaxed", "--mask", "0"]);
    assert!(o.status.success());
    let path = out(&o).lines().next().unwrap().to_string();
    let m = read_lp(&std::fs::read_to_string(d.path().join(path)).unwrap()).unwrap();
    assert_eq!(m.variables().filter(|v| matches!(v.var, Var::Xi(..))).count(), 50);
}

#[test]
fn certify_writes_json_and_appends_csv() {
    let d = tempfile::tempdir().unwrap();
    for _ in 0..2 {
        let o = run_in(d.path(), &["certify", "--n", "3", "--tol", "1e-3", "--out", "r.json", "--record", "r.run.json"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json_of(&o)["status"], "Certified");
    }
    let csv = std::fs::read_to_string(d.path().join("results.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "n,lb,ub,nodes,seconds,status");
    assert!(lines[1].starts_with("3,0.5,0.5,") && lines[1].ends_with(",Certified"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["upper"].as_f64(), Some(0.5));
}

#[test]
fn exhausted_budget_exits_with_one() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["certify", "--n", "6", "--tol", "1e-6", "--nodes", "50"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["status"], "Bounded");
    assert!(v["lower"].as_f64().unwrap() <= 0.125 && 0.125 <= v["upper"].as_f64().unwrap());
}

#[test]
fn bounds_table_examples() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["bounds-table", "--n", "9", "--no-derive"]);
    assert!(o.status.success());
    let row2 = out(&o).lines().find(|l| l.trim_start().starts_with("2 ")).unwrap().to_string();
    let cells: Vec<&str> = row2.split_whitespace().collect();
    assert_eq!(&cells[..3], &["2", "0", "1/100"]);
    let o = run_in(d.path(), &["bounds-table", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out(&o).contains("not applicable"));
    let o = run_in(d.path(), &["bounds-table", "--n", "6"]);
    assert!(o.status.success());
    assert!(!out(&o).contains("differs"));
}

#[test]
fn plot_is_deterministic_and_highlights_the_verified_triple() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "c3.json", r#"{"n": 3, "points": [{"x": 0, "y": 0}, {"x": 1, "y": 0}, {"x": 0, "y": 1}]}"#);
    assert!(run_in(d.path(), &["plot", "c3.json", "--out", "a.svg"]).status.success());
    assert!(run_in(d.path(), &["plot", "c3.json", "--out", "b.svg"]).status.success());
    let a = std::fs::read_to_string(d.path().join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read_to_string(d.path().join("b.svg")).unwrap());
    assert_eq!(a.matches("class=\"smallest\"").count(), 1);
    assert!(a.contains("points=\"20.000,520.000 520.000,520.000 20.000,20.000\" fill=\"#e4572e\""));

    run_in(d.path(), &["known", "--n", "9", "--out", "n9.json"]);
    let p = run_in(d.path(), &["plot", "n9.json", "--out", "n9.svg"]);
    let v = json_of(&run_in(d.path(), &["verify", "n9.json"]));
    let triple: Vec<String> = v["argmin"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    assert_eq!(out(&p).trim(), format!("smallest triangle: {}", triple.join(" ")));
}

#[test]
fn plot_rejects_bad_input_and_paths() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "e.json", r#"{"points": []}"#);
    assert_eq!(run_in(d.path(), &["plot", "e.json", "--out", "e.svg"]).status.code(), Some(2));
    run_in(d.path(), &["known", "--n", "3", "--out", "k.json"]);
    assert_eq!(run_in(d.path(), &["plot", "k.json", "--out", "no/such/dir/k.svg"]).status.code(), Some(2));
}

#[test]
fn data_dir_replaces_the_stored_placements() {
    let d = tempfile::tempdir().unwrap();
    let data = d.path().join("data");
    std::fs::create_dir(&data).unwrap();
    std::fs::write(
        data.join("n5.json"),
        r#"{"n": 5, "points": [{"x": 0, "y": 0}, {"x": 1, "y": 0.1}, {"x": 0.4, "y": 0.5}, {"x": 0, "y": 0.9}, {"x": 1, "y": 1}]}"#,
    )
    .unwrap();
    std::fs::write(data.join("n6.json"), r#"{"points": [{"x": 0, "y": 0}, {"x": 1, "y": 0}, {"x": 0, "y": 1}]}"#).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_heilbronn"))
            .args(args)
            .current_dir(d.path())
            .env("HEILBRONN_DATA_DIR", &data)
            .output()
            .unwrap()
    };
    let o = run(&["certify", "--n", "5", "--nodes", "1"]);
    let v = json_of(&o);
    assert!(v["lower"].as_f64().unwrap() < 0.19, "{v}");
    assert_eq!(run(&["certify", "--n", "6", "--nodes", "1"]).status.code(), Some(2));
}
