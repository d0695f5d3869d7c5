//! End-to-end checks of the `bundles` binary: file emission, card
//! comparison, exit codes, and output routing.

use std::path::Path;
use std::process::{Command, Output};

use graph_bundles::examples::ExampleSpec;
use graph_bundles::io;

fn bundles(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bundles"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("the binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("reports are JSON")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn example_writes_the_advertised_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = bundles(dir.path(), &["example", "eg3", "--n", "5", "--i", "3"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "example");
    assert_eq!(report["results"]["stem"], "eg3_5_3");
    assert_eq!(report["results"]["total_vertices"], 30);
    let files = report["results"]["files"].as_object().unwrap();
    assert_eq!(files.len(), 5);
    for name in files.keys() {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let reloaded = io::read_connection(&dir.path().join("eg3_5_3.conn")).unwrap();
    let built = ExampleSpec::new("eg3", &[("n", 5), ("i", 3)])
        .connection()
        .unwrap();
    assert_eq!(reloaded.stored_twists(), built.stored_twists());
    assert!(reloaded.base().same_adjacency(built.base()));
    assert!(reloaded.fiber().same_adjacency(built.fiber()));
}

#[test]
fn example_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = bundles(dir.path(), &["example", "eg2", "--n", "2", "--m", "3"]);
    assert_eq!(code(&out), 2);
    let out = bundles(dir.path(), &["example", "unknown", "--n", "5"]);
    assert_eq!(code(&out), 2);
    let out = bundles(dir.path(), &["example", "eg2", "--n", "5"]);
    assert_eq!(code(&out), 2, "missing --m must be rejected");
}

#[test]
fn check_compares_against_the_card() {
    let dir = tempfile::tempdir().unwrap();
    let out = bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);
    assert_eq!(code(&out), 0);

    // Matching card discovered next to the connection: everything passes.
    let out = bundles(
        dir.path(),
        &["check", "eg2_5_3.conn", "--checks", "trivial,dvb,orbits"],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["expectations"]["all_matched"], true);
    assert_eq!(report["results"]["orbits"]["orbit_count"], 2);
    assert_eq!(report["results"]["trivial"]["trivial"], false);

    // A doctored card turns the same run into exit 1.
    let card_text = std::fs::read_to_string(dir.path().join("eg2_5_3.card.json")).unwrap();
    let mut card: serde_json::Value = serde_json::from_str(&card_text).unwrap();
    card["expected"]["trivial"] = serde_json::Value::Bool(true);
    std::fs::write(
        dir.path().join("doctored.card.json"),
        serde_json::to_string_pretty(&card).unwrap(),
    )
    .unwrap();
    let out = bundles(
        dir.path(),
        &[
            "check",
            "eg2_5_3.conn",
            "--checks",
            "trivial",
            "--card",
            "doctored.card.json",
        ],
    );
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["expectations"]["all_matched"], false);
    let entries = report["expectations"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["check"], "trivial");
    assert_eq!(entries[0]["matched"], false);

    // --no-card skips the comparison entirely.
    let out = bundles(
        dir.path(),
        &["check", "eg2_5_3.conn", "--checks", "trivial", "--no-card"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out).get("expectations").is_none());
}

#[test]
fn check_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bundles(dir.path(), &["check", "missing.conn", "--checks", "trivial"]);
    assert_eq!(code(&out), 2);

    std::fs::write(dir.path().join("broken.conn"), "base nowhere.graph\n").unwrap();
    let out = bundles(dir.path(), &["check", "broken.conn", "--checks", "trivial"]);
    assert_eq!(code(&out), 2);

    let out = bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let out = bundles(
        dir.path(),
        &["check", "eg2_5_3.conn", "--checks", "nonsense"],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));

    // A hypothesis failure is an input error, not a crash: the product has
    // a trivial connection, which theorem2 cannot separate.
    let out = bundles(dir.path(), &["example", "product", "--n", "5", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let out = bundles(
        dir.path(),
        &["check", "product_5_3.conn", "--checks", "theorem2"],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("trivial"));
}

#[test]
fn count_respects_its_length_cap() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);

    let out = bundles(
        dir.path(),
        &["count", "eg2_5_3.base.graph", "--vertex", "0", "--length", "5"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["results"]["count"], "2");

    let out = bundles(
        dir.path(),
        &["count", "eg2_5_3.base.graph", "--vertex", "0", "--length", "17"],
    );
    assert_eq!(code(&out), 3, "the default cap is 16");
    assert!(String::from_utf8_lossy(&out.stderr).contains("closed-walk length"));

    let out = bundles(
        dir.path(),
        &[
            "count",
            "eg2_5_3.base.graph",
            "--vertex",
            "0",
            "--length",
            "17",
            "--max-length",
            "20",
        ],
    );
    assert_eq!(code(&out), 0, "a raised cap admits the length");

    let out = bundles(
        dir.path(),
        &["count", "eg2_5_3.base.graph", "--vertex", "9", "--length", "3"],
    );
    assert_eq!(code(&out), 2, "vertex out of range");
}

#[test]
fn project_splits_a_bundle_walk() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);
    let out = bundles(
        dir.path(),
        &["project", "eg2_5_3.conn", "--walk", "0,3,6,9,12,0"],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["results"]["base_length"], 5);
    assert_eq!(report["results"]["fiber_length"], 0);
    assert_eq!(report["results"]["fiber_is_loop"], true);

    let out = bundles(dir.path(), &["project", "eg2_5_3.conn", "--walk", "0,7"]);
    assert_eq!(code(&out), 2, "not an edge of the total graph");
}

#[test]
fn export_dot_is_deterministic_and_labeled() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "4", "--m", "4"]);
    let first = bundles(dir.path(), &["export-dot", "eg2_4_4.bundle.graph"]);
    assert_eq!(code(&first), 0);
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(text.starts_with("graph g {"));
    assert!(text.contains("label=\"(0,0)\""));
    assert_eq!(text.matches(" -- ").count(), 40);

    let second = bundles(dir.path(), &["export-dot", "eg2_4_4.bundle.graph"]);
    assert_eq!(first.stdout, second.stdout);

    let out = bundles(
        dir.path(),
        &["export-dot", "eg2_4_4.bundle.graph", "--out", "bundle.dot"],
    );
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read(dir.path().join("bundle.dot")).unwrap();
    assert_eq!(written, first.stdout);
}

#[test]
fn verify_lemmas_reports_a_clean_sweep() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);
    let out = bundles(
        dir.path(),
        &["verify-lemmas", "eg2_5_3.conn", "--max-total", "5"],
    );
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["results"]["verified"], true);
    assert_eq!(report["results"]["mismatches"], serde_json::json!([]));
    assert!(report["results"]["pairs_checked"].as_u64().unwrap() > 0);
}

#[test]
fn reports_echo_the_seed_and_keep_quiet_by_default() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);

    let out = bundles(
        dir.path(),
        &["check", "eg2_5_3.conn", "--checks", "trivial", "--seed", "7"],
    );
    assert_eq!(code(&out), 0);
    assert!(out.stderr.is_empty(), "no stderr chatter without --timings");
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 7);
    assert!(report.get("duration_ms").is_none());

    let out = bundles(
        dir.path(),
        &["check", "eg2_5_3.conn", "--checks", "trivial", "--timings"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out).get("duration_ms").is_some());
    assert!(String::from_utf8_lossy(&out.stderr).contains("check:"));
}

#[test]
fn out_flag_routes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    bundles(dir.path(), &["example", "eg2", "--n", "5", "--m", "3"]);
    let out = bundles(
        dir.path(),
        &[
            "check",
            "eg2_5_3.conn",
            "--checks",
            "dvb",
            "--out",
            "report.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["results"]["dvb"]["is_discrete_vector_bundle"], true);
    assert_eq!(report["results"]["dvb"]["null_elements"], serde_json::json!([0]));
}
