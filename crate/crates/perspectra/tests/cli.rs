use std::path::Path;
use std::process::{Command, Output};

use perspectra::eval::{read_survey, ztest_report, ZTestOptions};
use perspectra_core::pipeline::{PipelineConfig, SearchResponse};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_perspectra"));
    c.env_remove("PERSPECTRA_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unknown_subcommand_prints_usage() {
    let o = run(&["frobnicate"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = run(&["search", "masks", "--bogus"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn ingest_missing_file_names_it() {
    let o = run(&["ingest", "missing.jsonl"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.jsonl"));
}

#[test]
fn ingest_reports_line_of_bad_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let first = perspectra::data::DEMO_CORPUS.lines().next().unwrap();
    std::fs::write(&path, format!("{first}\n{first}\n")).unwrap();
    let o = run(&["ingest", path.to_str().unwrap(), "--out", dir.path().join("i.json").to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("masks-who"), "{err}");
}

#[test]
fn search_json_on_bundled_corpus() {
    let out = stdout(&run(&["search", "Should we all get vaccinated?", "--json"]));
    let r: SearchResponse = serde_json::from_str(&out).unwrap();
    assert_eq!(r.query, "Should we all get vaccinated?");
    assert_eq!(r.k, 10);
    assert!(r.clusters.cards().count() > 0);
}

#[test]
fn ingested_snapshot_searches_like_bundled_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let trust = dir.path().join("t.txt");
    let index = dir.path().join("ix.json");
    std::fs::write(&corpus, perspectra::data::DEMO_CORPUS).unwrap();
    std::fs::write(&trust, perspectra::data::TRUSTED_SOURCES).unwrap();
    stdout(&run(&[
        "ingest",
        corpus.to_str().unwrap(),
        "--trust",
        trust.to_str().unwrap(),
        "--index",
        index.to_str().unwrap(),
    ]));
    let q = "Should wearing masks be mandatory?";
    let from_snapshot = stdout(&run(&["search", q, "--json", "--index", index.to_str().unwrap()]));
    let bundled = stdout(&run(&["search", q, "--json"]));
    assert_eq!(from_snapshot, bundled);
    let human = stdout(&run(&["search", q, "--index", index.to_str().unwrap()]));
    assert!(human.contains("== SUPPORT") && human.contains("who.int"));
}

#[test]
fn missing_snapshot_is_named() {
    let o = run(&["search", "masks", "--index", "/nonexistent/ix.json"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/ix.json"));
}

#[test]
fn config_from_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let k1 = dir.path().join("k1.toml");
    let k2 = dir.path().join("k2.toml");
    std::fs::write(&k1, "k = 1\n").unwrap();
    std::fs::write(&k2, "k = 2\n").unwrap();
    let k_of = |o: Output| serde_json::from_str::<SearchResponse>(&stdout(&o)).unwrap().k;

    let via_env = bin().env("PERSPECTRA_CONFIG", &k1).args(["search", "masks", "--json"]).output().unwrap();
    assert_eq!(k_of(via_env), 1);
    let flag_wins = bin()
        .env("PERSPECTRA_CONFIG", &k1)
        .args(["search", "masks", "--json", "--config", k2.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(k_of(flag_wins), 2);
    assert_eq!(k_of(run(&["search", "masks", "--json"])), PipelineConfig::default().k);

    std::fs::write(&k1, "alpha = 3.0\n").unwrap();
    let o = run(&["search", "masks", "--config", k1.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

fn write_survey(path: &Path) {
    let mut csv = String::from("question,response\n");
    for (q, ones) in [("organization", 69), ("informativeness", 55)] {
        for i in 0..100 {
            csv.push_str(&format!("{q},{}\n", u8::from(i < ones)));
        }
    }
    std::fs::write(path, csv).unwrap();
}

#[test]
fn eval_ztest_equals_library() {
    let dir = tempfile::tempdir().unwrap();
    let survey = dir.path().join("survey.csv");
    write_survey(&survey);
    let out = stdout(&run(&["eval", "--ztest", survey.to_str().unwrap(), "--seed", "5", "--repeats", "200"]));
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let opts = ZTestOptions { seed: 5, repeats: 200, ..Default::default() };
    let expected = serde_json::to_value(ztest_report(&read_survey(&survey).unwrap(), opts).unwrap()).unwrap();
    assert_eq!(got["ztest"], expected);
    for q in ["organization", "informativeness"] {
        assert!(got["ztest"][q]["z"].is_f64() && got["ztest"][q]["p_value"].is_f64());
    }
}

#[test]
fn eval_metric_files() {
    let dir = tempfile::tempdir().unwrap();
    let mse = dir.path().join("mse.csv");
    let rouge = dir.path().join("rouge.csv");
    std::fs::write(&mse, "pred,gold\n0,1\n1,1\n").unwrap();
    std::fs::write(&rouge, "candidate,reference\na b c d,a b c e\n").unwrap();
    let out = stdout(&run(&["eval", "--mse", mse.to_str().unwrap(), "--rouge", rouge.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mse"], 0.5);
    assert!((v["rouge2"]["f1"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(!run(&["eval"]).status.success());
}
