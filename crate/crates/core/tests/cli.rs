use std::path::PathBuf;
use std::process::{Command, Output};

fn repo(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
        .display()
        .to_string()
}

fn hallcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallcalc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(hallcalc(&["--help"]).status.code(), Some(0));
    assert_eq!(hallcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hallcalc(&["series", "macmahon"]).status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"type": "quiver", "q": 2}"#).unwrap();
    let o = hallcalc(&["verify", "hilbert", "--model", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));

    let model = repo("models/jordan_q2_n4.json");
    let o = hallcalc(&["verify", "no-such-identity", "--model", &model]);
    assert_eq!(o.status.code(), Some(2));
    let o = hallcalc(&["verify", "hilbert", "--model", &model, "--window", "box:x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hallcalc(&["hall", "mul", "--model", &model, "--left", "delta:(9)", "--right", "one"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_summary() {
    let model = repo("models/jordan_q2_n4.json");
    let o = hallcalc(&["verify", "hilbert", "--model", &model]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["identity"], "hilbert");
    assert_eq!(report["passed"], true);
    assert_eq!(stderr(&o).trim(), "hilbert: pass");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.json");
    let o = hallcalc(&["verify", "all", "--model", &model, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.ends_with(": pass")), "{}", stdout(&o));
    let batch: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(batch["reports"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_all_skips_what_the_model_lacks() {
    let o = hallcalc(&["verify", "all", "--model", &repo("models/kronecker_q2_box22.json")]);
    assert_eq!(o.status.code(), Some(0));
    let batch: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let skipped: Vec<&str> = batch["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["identity"].as_str().unwrap())
        .collect();
    assert_eq!(skipped, ["nopole", "grinah", "integration-poisson"]);
}

#[test]
fn series_commands() {
    let o = hallcalc(&["series", "macmahon", "--order", "5"]);
    assert_eq!(stdout(&o), "exponent,coefficient\n0,1\n1,1\n2,3\n3,6\n4,13\n5,24\n");

    let o = hallcalc(&["series", "dt0", "--chi", "1", "--order", "2"]);
    assert_eq!(stdout(&o), "exponent,coefficient\n0,1\n1,-1\n2,3\n");

    let o = hallcalc(&["series", "rational", "--d", "1", "--table", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["table_symmetric"], true);
    assert_eq!(v["invariant"], true);

    let o = hallcalc(&[
        "series",
        "toda",
        "--n-table",
        &repo("data/n_table_example.json"),
        "--h",
        "1",
        "--pt",
        &repo("data/pt_example.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l1 = &v["columns"][1];
    assert_eq!(l1["beta"], serde_json::json!([1]));
    assert_eq!(l1["l"], serde_json::json!({"-1": "1", "0": "3", "1": "1"}));
}

#[test]
fn hall_product_of_simples() {
    let model = repo("models/jordan_q3_n3.json");
    let o = hallcalc(&["hall", "mul", "--model", &model, "--left", "delta:(1)", "--right", "delta:(1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let two = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["degree"]["n"] == 2)
        .unwrap();
    let coeffs: Vec<(String, String)> = two["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["class_label"].as_str().unwrap().into(), c["coefficient"].as_str().unwrap().into()))
        .collect();
    // q + 1 flags in the split module, one in the nonsplit one
    assert_eq!(coeffs, [("(1,1)".to_string(), "4".to_string()), ("(2)".to_string(), "1".to_string())]);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["verify", "all", "--model", &repo("models/kronecker_balanced_q2_box22.json")];
    let (a, b) = (hallcalc(&args), hallcalc(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let t = hallcalc(&["--timings", "verify", "hilbert", "--model", &repo("models/jordan_q2_n4.json")]);
    assert!(stdout(&t).contains("duration_ms"));
}
