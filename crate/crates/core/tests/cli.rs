use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transport-toric")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = cli(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

#[test]
fn analyze_birkhoff() {
    let (code, v) = json(&["analyze", "--rows", "1,1,1", "--cols", "1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["smoothness"]["is_simple"], false);
    assert_eq!(v["smoothness"]["multiple_k"], 1);
    assert_eq!(v["ideal"]["quadratic"], false);
    assert_eq!(v["subdivision"]["mode"], "fine");
}

#[test]
fn analyze_generic_margins() {
    let (code, v) = json(&["analyze", "--rows", "1,2,13", "--cols", "4,5,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["smoothness"]["is_smooth"], true);
    assert_eq!(v["triangulation"]["flag"], true);
    assert_eq!(v["triangulation"]["unimodular"], true);
    assert_eq!(v["ideal"]["triangulation_route"]["groebner_quadratic"], true);
    // Normalization is reported, here a transpose.
    assert_eq!(v["normalized_input"]["transposed"], true);
    assert_eq!(v["normalized_input"]["rows"], serde_json::json!([7, 5, 4]));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(cli(&["analyze", "--rows", "1,2", "--cols", "2"]).status.code(), Some(2));
    assert_eq!(cli(&["analyze", "--rows", "1,0", "--cols", "1"]).status.code(), Some(2));
    assert_eq!(cli(&["analyze", "--rows", "a", "--cols", "1"]).status.code(), Some(2));
    assert_eq!(cli(&["triangulate", "--rows", "1,1,1", "--cols", "1,1,1", "--mode", "medium"]).status.code(), Some(2));
    assert_eq!(cli(&["verify-paper", "--section", "nope"]).status.code(), Some(2));
    assert_eq!(cli(&["markov", "--rows", "1,1,1", "--cols", "1,1,1", "--max-degree", "2"]).status.code(), Some(2));
}

#[test]
fn one_by_two_column_is_a_point() {
    // Rows (1,1) and column (2) have equal totals: the only table is (1;1).
    let (code, v) = json(&["lattice-points", "--rows", "1,1", "--cols", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["lattice_points"]["count"], 1);
}

#[test]
fn coarse_refuses_multiples_of_b3() {
    let out = cli(&["triangulate", "--rows", "2,2,2", "--cols", "2,2,2", "--mode", "coarse"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("multiple of B3"));
}

#[test]
fn triangulate_relaxed_birkhoff() {
    let (code, v) = json(&["triangulate", "--rows", "2,1,1", "--cols", "2,1,1", "--mode", "coarse", "--order", "v"]);
    assert_eq!(code, 0);
    let t = &v["triangulation"];
    assert_eq!(t["simplex_count"], 4);
    let got: Vec<Vec<u64>> = serde_json::from_value(t["simplices_by_pull_rank"].clone()).unwrap();
    let mut want = vec![vec![0, 1, 4, 5, 6], vec![0, 1, 3, 4, 6], vec![0, 1, 2, 5, 6], vec![0, 1, 2, 3, 6]];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn triangulate_birkhoff_fine() {
    let (code, v) = json(&["triangulate", "--rows", "1,1,1", "--cols", "1,1,1", "--mode", "fine"]);
    assert_eq!(code, 0);
    assert_eq!(v["triangulation"]["simplex_count"], 3);
    assert_eq!(v["triangulation"]["flag"], false);
    assert_eq!(v["triangulation"]["regularity"]["regular"], true);
}

#[test]
fn explicit_order_file() {
    let dir = std::env::temp_dir().join(format!("tt-order-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("order.txt");
    std::fs::write(&path, "0 1 2 3 4 5\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["triangulate", "--rows", "1,1,1", "--cols", "1,1,1", "--mode", "fine", "--order", p]);
    assert_eq!(code, 0);
    assert_eq!(v["triangulation"]["pull_order"]["perm"], serde_json::json!([0, 1, 2, 3, 4, 5]));
    std::fs::write(&path, "0 1 2\n").unwrap();
    assert_eq!(cli(&["triangulate", "--rows", "1,1,1", "--cols", "1,1,1", "--mode", "fine", "--order", p]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn markov_verdicts() {
    let (code, v) = json(&["markov", "--rows", "1,1,1", "--cols", "1,1,1", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["ideal"]["verdict"], "not quadratic");
    let f = &v["ideal"]["fiber_oracle"]["fiber_oracle"]["first_failure"];
    assert_eq!(f["degree"], 3);
    assert_eq!(f["monomials"], serde_json::json!([[0, 3, 4], [1, 2, 5]]));
    for (r, c) in [("2,2,2", "2,2,2"), ("2,1,1", "2,1,1")] {
        let (code, v) = json(&["markov", "--rows", r, "--cols", c, "--max-degree", "4"]);
        assert_eq!(code, 0);
        assert_eq!(v["ideal"]["verdict"], "quadratic (verified to degree 4)");
    }
}

#[test]
fn verify_sections_pass() {
    for s in ["b3", "tables"] {
        let (code, v) = json(&["verify-paper", "--section", s]);
        assert_eq!(code, 0, "{s}");
        assert_eq!(v["paper_checks"][0]["pass"], true);
    }
    let (_, v) = json(&["verify-paper", "--section", "tables"]);
    let notes = v["paper_checks"][0]["notes"].to_string();
    assert!(notes.contains("captioned (2,2,2)(2,2,2) and cited for (2,2,1)(3,1,1)"));
    let (code, _) = json(&["verify-paper", "--section", "corpus", "--max-sum", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn lemma_section_reports_the_counterexample() {
    let out = cli(&["verify-paper", "--section", "lemma-smooth", "--max-sum", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAILED margin-condition-iff-simple"));
}

#[test]
fn output_is_byte_identical_and_sorted() {
    let args = ["analyze", "--rows", "3,2,2", "--cols", "4,2,1", "--json"];
    let a = cli(&args).stdout;
    let b = cli(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["ideal", "input", "lattice_points", "normalized_input", "paper_checks", "smoothness", "subdivision", "triangulation"]
    );
}

#[test]
fn text_is_default() {
    let out = cli(&["lattice-points", "--rows", "1,1,1", "--cols", "1,1,1"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("count: 6"));
    assert!(serde_json::from_str::<Value>(&s).is_err());
}

#[test]
fn seed_is_accepted_and_ignored() {
    let a = cli(&["subdivide", "--rows", "2,2,1", "--cols", "3,1,1", "--json"]).stdout;
    let b = cli(&["subdivide", "--rows", "2,2,1", "--cols", "3,1,1", "--json", "--seed", "7"]).stdout;
    assert_eq!(a, b);
}
