use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qgadget(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgadget")).args(args).output().expect("binary runs")
}

fn with_workers(workers: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgadget"))
        .env("QGADGET_WORKERS", workers)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("qgadget-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn hardy_state_count() {
    let o = qgadget(&["states", "catalog:hardy", "--count-only"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "186\n");
    let o = qgadget(&["states", "catalog:hardy", "--count-only", "--filter", "Ψ=1"]);
    assert_eq!(stdout(&o), "6\n");
    let o = qgadget(&["states", "catalog:hardy", "--count-only", "--filter", "Ψ=1", "--filter", "dd=1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn vertices_csv() {
    let path = std::env::temp_dir().join(format!("qgadget-{}-vertices.csv", std::process::id()));
    let o = qgadget(&["states", "catalog:triangle-3d", "--count-only", "--vertices", path.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], "1,2,3,4,5,6");
    assert!(rows[1..].iter().all(|r| r.split(',').all(|x| x == "0" || x == "1")));
}

#[test]
fn stdin_round_trip_through_catalog_show() {
    for format in ["mmp", "json"] {
        let shown = qgadget(&["catalog", "show", "hardy", "--format", format]);
        assert!(shown.status.success());
        let mut child = Command::new(env!("CARGO_BIN_EXE_qgadget"))
            .args(["states", "-", "--count-only"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(&shown.stdout).unwrap();
        let o = child.wait_with_output().unwrap();
        assert_eq!(stdout(&o), "186\n", "{format}");
    }
}

#[test]
fn catalog_list_names_every_fixture() {
    let o = qgadget(&["catalog", "list"]);
    let text = stdout(&o);
    for name in ["hardy", "specker-bug", "hardy-tits", "bug-tits", "hardy-indist-a", "hardy-indist-b", "bug-indist", "triangle-3d", "triangle-4d"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
}

#[test]
fn classify_pair_with_trace() {
    let o = qgadget(&["classify", "catalog:hardy", "--pair", "Ψ,dd", "--trace"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pair"]["true_implies_false"], true);
    assert_eq!(v["pair"]["trace"]["outcome"]["kind"], "contradiction");
    assert_eq!(v["quantum"]["pairs"][0]["classical"], "true_implies_false");
}

#[test]
fn classify_indistinguishable_pairs() {
    let o = qgadget(&["classify", "catalog:bug-indist"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pairs: Vec<Vec<String>> = serde_json::from_value(v["indistinguishable"].clone()).unwrap();
    assert!(pairs.contains(&vec!["a1".to_owned(), "a1'".to_owned()]));
    assert!(pairs.contains(&vec!["a8".to_owned(), "a8'".to_owned()]));
    assert_eq!(v["embeddable"], false);
}

#[test]
fn partition_with_uniform_weights() {
    let o = qgadget(&["partition", "catalog:hardy", "--uniform"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["state_count"], 186);
    assert_eq!(v["sets"]["Ψ"].as_array().unwrap().len(), 6);
    assert_eq!(v["uniform_probabilities"]["Ψ"], "1/31");
    assert_eq!(v["uniform_probabilities"]["dd"], "10/93");
}

#[test]
fn verify_rows_and_files() {
    let o = qgadget(&["verify", "catalog:hardy", "--row", "VECFIND complex"]);
    assert!(o.status.success());
    let o = qgadget(&["verify", "catalog:hardy", "--row", "Cabello 1997"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = r#"{"field":"Q","dim":4,"vectors":{"Ψ":["1","0","0","0"],"uu":["1","1","0","0"]}}"#;
    let path = temp_file("bad.json", bad);
    let o = qgadget(&["verify", "catalog:hardy", "--rep", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["non_orthogonal"][0], serde_json::json!(["uu", "Ψ"]));
    assert_eq!(stderr_json(&o)["error"], "not_faithful");
}

#[test]
fn search_outcomes() {
    let o = qgadget(&["search", "catalog:triangle-3d", "--alphabet", "0,1,-1,2,-2,3", "--dim", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "exhausted");
    assert!(v["note"].as_str().unwrap().contains("not a proof"));

    let o = qgadget(&["search", "catalog:hardy", "--alphabet", "0,1,-2,r2", "--dim", "4", "--scope", "intertwining"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["representation"]["vectors"].as_object().unwrap().len(), 9);

    let o = qgadget(&["search", "catalog:triangle-3d", "--alphabet", "0,1,-1,2,-2,3", "--dim", "3", "--budget", "10"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "budget_exceeded");
}

#[test]
fn found_representation_verifies_through_the_cli() {
    let o = qgadget(&["search", "catalog:triangle-4d", "--alphabet", "0,1,-1", "--dim", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let path = temp_file("found.json", &v["representation"].to_string());
    let o = qgadget(&["verify", "catalog:triangle-4d", "--rep", path.to_str().unwrap()]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["complete"], true);
}

#[test]
fn completion() {
    let o = qgadget(&["complete", "catalog:triangle-3d", "--row", "corners"]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "forced_duplicity");
    assert_eq!(e["data"]["pairs"], serde_json::json!([["2", "5"], ["4", "1"], ["6", "3"]]));

    let o = qgadget(&["complete", "catalog:hardy", "--row", "VECFIND r2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let path = temp_file("completed.json", &stdout(&o));
    let o = qgadget(&["verify", "catalog:hardy", "--rep", path.to_str().unwrap()]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["complete"], true, "{r}");
}

#[test]
fn hardy_csv() {
    let o = qgadget(&["hardy", "--maximize"]);
    let text = stdout(&o);
    assert!(text.contains("p_star,0.0901699"));
    assert!(text.contains("alpha_minus,0.42113") && text.contains("alpha_plus,0.90699"));
    let o = qgadget(&["hardy", "--sweep", "9"]);
    assert_eq!(stdout(&o).lines().count(), 10);
    let o = qgadget(&["hardy", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "out_of_range");
    let o = qgadget(&["hardy", "--alpha", "0.5", "--maximize"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_dot_highlights() {
    let o = qgadget(&["export-dot", "catalog:hardy", "--highlight", "Ψ,dd", "--color", "red"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph "));
    assert!(dot.contains("\"Ψ\" [width=0.45, style=filled, fillcolor=\"red\"]"));
    assert_eq!(dot.matches(" -- ").count(), 8 * 3);
}

#[test]
fn errors_are_json() {
    let o = qgadget(&["states", "catalog:nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "catalog");
    let o = qgadget(&["states"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");
    let path = temp_file("broken.mmp", "123,345\n");
    let o = qgadget(&["states", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "format");
    let o = qgadget(&["search", "catalog:hardy", "--alphabet", "1,2", "--dim", "4"]);
    assert_eq!(stderr_json(&o)["error"], "alphabet");
}

#[test]
fn output_is_identical_across_worker_counts() {
    for args in [
        &["states", "catalog:hardy-indist-a"][..],
        &["classify", "catalog:bug-indist"],
        &["search", "catalog:triangle-3d", "--alphabet", "0,1,-1,2,-2,3", "--dim", "3", "--budget", "700"],
        &["search", "catalog:hardy", "--alphabet", "0,1,-2,r2", "--dim", "4", "--scope", "intertwining"],
    ] {
        let one = with_workers("1", args);
        let many = with_workers("4", args);
        assert!(one.status.success());
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.stdout, with_workers("1", args).stdout, "{args:?}");
    }
}

#[test]
fn reproduce_single_criterion() {
    let o = qgadget(&["reproduce", "--criterion", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "criterion  1: PASS Hardy state count: 186 admissible states\n");
}
