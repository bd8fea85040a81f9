use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_sosdiag");

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (code(&out), v)
}

#[test]
fn case_one_file_matches_fixture_values() {
    let (c, v) = json(&["analyze", &data("case1.txt")]);
    assert_eq!(c, 0);
    assert_eq!(v["schema"], "sosdiag.report/v1");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["hilbert"]["g"], 9);
    assert_eq!(v["betti"]["g"], 0);
    assert_eq!(v["macaulay_floor"], 5);
    assert_eq!(v["signature"], serde_json::json!([6, 3]));
    assert_eq!(v["feasible"], true);
    assert_eq!(v["connected"], true);
}

#[test]
fn case_one_ideal_file() {
    let (c, v) = json(&["analyze", "--ideal", &data("case1_ideal.txt")]);
    assert_eq!(c, 0);
    assert_eq!(v["command"], "configuration");
    assert_eq!((v["hilbert_g"].as_u64(), v["beta"].as_u64(), v["floor"].as_i64()), (Some(9), Some(0), Some(5)));
    assert_eq!(v["forced"].as_array().unwrap().len(), 6);
}

#[test]
fn binary_quadratic_has_min_rank_two() {
    let (c, v) = json(&["analyze", "x1^2 - x1 x2 + x2^2", "--n", "2", "--min-rank"]);
    assert_eq!(c, 0);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["min_rank"]["status"], "found");
    assert_eq!(v["min_rank"]["rank"], 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        &["analyze", ""][..],
        &["analyze", "x1 + x2^2"],
        &["analyze", "x1 + + x2"],
        &["analyze", "x1", "--bogus"],
        &["verify", "--degree", "9", "--mode", "exhaustive"],
        &["verify", "--degree", "9", "--mode", "random"],
        &["ballmap", "--n", "1", "--d", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
    let out = run(&["verify", "--degree", "9"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ceiling"));
}

#[test]
fn budgets_exit_three() {
    assert_eq!(code(&run(&["ballmap", "--d", "7", "--budget", "10"])), 3);
    assert_eq!(code(&run(&["analyze", &data("case1.txt"), "--min-rank", "--lp-budget", "0"])), 3);
}

#[test]
fn exhaustive_verify_passes() {
    let (c, v) = json(&["verify", "--degree", "3", "--mode", "exhaustive", "--lp"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["sweeps"].as_array().unwrap().len(), 3);
    assert_eq!(v["sweeps"][0]["examined"], 59049);
}

#[test]
fn random_verify_is_reproducible_across_workers() {
    let args = ["verify", "--degree", "4", "--mode", "random", "--samples", "100000", "--seed", "7"];
    let (c1, a) = json(&[&["--workers", "1"][..], &args].concat());
    let (c2, b) = json(&[&["--workers", "3"][..], &args].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["verdict"], "PASS");
    assert_eq!(a["digest"], b["digest"]);
    let strip = |mut v: Value| {
        for s in v["sweeps"].as_array_mut().unwrap() {
            s["timing"] = Value::Null;
            s["config"]["workers"] = Value::Null;
        }
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn ballmap_examples() {
    let (c, v) = json(&["ballmap", "--n", "2", "--d", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["outcome"]["k_min"], 3);
    assert_eq!(v["outcome"]["witness_text"], serde_json::json!(["+3 x1 x2", "+1 x1^3", "+1 x2^3"]));
    assert_eq!(v["outcome"]["components"], serde_json::json!(["sqrt(3) z1 z2", "z1^3", "z2^3"]));
    for (d, k) in [("1", 2), ("5", 4)] {
        let (c, v) = json(&["ballmap", "--n", "2", "--d", d]);
        assert_eq!(c, 0);
        assert_eq!(v["outcome"]["k_min"], k, "d = {d}");
    }
}

#[test]
fn fixtures_pass() {
    let (c, v) = json(&["fixtures"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["report"]["fixtures"].as_array().unwrap().len(), 19);
}

#[test]
fn saved_reports_render_the_same_table() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["analyze", &data("case1.txt"), "--min-rank", "--diagram"],
        &["analyze", "--ideal", &data("case1_ideal.txt")],
        &["verify", "--degree", "2", "--lp", "--seed", "5"],
        &["ballmap", "--d", "4"],
        &["fixtures"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json")).display().to_string();
        let live = run(&[&["--out", path.as_str()][..], args].concat());
        let rendered = run(&["render", &path]);
        assert_eq!(code(&rendered), code(&live));
        assert_eq!(String::from_utf8(rendered.stdout).unwrap(), String::from_utf8(live.stdout).unwrap(), "{args:?}");
    }
}

#[test]
fn edge_list_and_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.tsv");
    let out = run(&["analyze", "x1^2 - x1 x2 + x3^2", "--edges", edges.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&edges).unwrap();
    assert_eq!(text, "x1^2\tx1 x2\nx3^2\n");

    let (_, v) = json(&["analyze", &data("case1.txt")]);
    let form = dir.path().join("q.json");
    std::fs::write(&form, v["form"].to_string()).unwrap();
    let (c, w) = json(&["analyze", form.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(w, v);
}
