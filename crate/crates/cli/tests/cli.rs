use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn entcert() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entcert"));
    c.env_remove("ENTCERT_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    entcert().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn export(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let out = run(&["export", name, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn certificate(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("certificate JSON on stdout")
}

fn system_dims(cert: &Value) -> Vec<(u64, u64)> {
    cert["certificate"]["systems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["rows"].as_u64().unwrap(), s["cols"].as_u64().unwrap()))
        .collect()
}

#[test]
fn example1_certifies_at_level_one() {
    let dir = TempDir::new().unwrap();
    let input = export(dir.path(), "example1");
    for mode in ["float", "rational"] {
        let out = run(&["certify", input.to_str().unwrap(), "--r", "1", "--k", "1", "--mode", mode]);
        assert_eq!(code(&out), 0);
        let cert = certificate(&out);
        assert_eq!(system_dims(&cert), vec![(36, 36)]);
        assert_eq!(cert["certificate"]["verdict"]["status"], "certified");
        assert_eq!(cert["certificate"]["mode"], mode);
        assert_eq!(cert["input_sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn example3_size_check_and_escalation() {
    let dir = TempDir::new().unwrap();
    let input = export(dir.path(), "example3");
    let path = input.to_str().unwrap();

    let out = run(&["certify", path, "--r", "1", "--k", "1"]);
    assert_eq!(code(&out), 2);
    let cert = certificate(&out);
    assert_eq!(cert["certificate"]["systems"][0]["skipped"]["reason"], "columns_exceed_rows");

    // Every 9-dimensional subspace of 4x4 has a one-dimensional kernel at
    // level 2, so escalation only concludes at level 3.
    let out = run(&["certify", path, "--r", "1", "--k-max", "2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(certificate(&out)["certificate"]["level_used"], 2);
    let out = run(&["certify", path, "--r", "1", "--k-max", "3"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    assert_eq!(cert["certificate"]["level_used"], 3);
    assert_eq!(cert["certificate"]["levels_tried"], serde_json::json!([1, 2, 3]));
}

#[test]
fn schmidt_number_commands() {
    let dir = TempDir::new().unwrap();
    let tiles = export(dir.path(), "tiles");
    let ex5 = export(dir.path(), "example5");
    let mixed = export(dir.path(), "maximally-mixed");

    let out = run(&["schmidt-number", tiles.to_str().unwrap(), "--r", "1", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    assert_eq!(cert["certificate"]["target"]["bound"], 2);
    assert_eq!(cert["certificate"]["range"]["rank"], 4);

    let out = run(&["schmidt-number", ex5.to_str().unwrap(), "--r", "2", "--k", "1", "--mode", "rational"]);
    assert_eq!(code(&out), 0);
    assert_eq!(certificate(&out)["certificate"]["target"]["bound"], 3);

    let out = run(&["schmidt-number", mixed.to_str().unwrap(), "--r", "1", "--k", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_state_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    let text = r#"{"schema_version":1,"dims":[2,2],"mode":"rational","matrix":[
        [["1","0"],["1","0"],["0","0"],["0","0"]],
        [["0","0"],["0","0"],["0","0"],["0","0"]],
        [["0","0"],["0","0"],["0","0"],["0","0"]],
        [["0","0"],["0","0"],["0","0"],["0","0"]]]}"#;
    std::fs::write(&path, text).unwrap();
    let out = run(&["schmidt-number", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn multipartite_commands() {
    let dir = TempDir::new().unwrap();
    let bhat = export(dir.path(), "bhat-222");
    let product = export(dir.path(), "product-line-222");
    let ghz = export(dir.path(), "ghz-line-222");

    let out = run(&["ces", bhat.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(system_dims(&certificate(&out)), vec![(72, 20)]);

    for k in ["1", "2", "3"] {
        assert_eq!(code(&run(&["ces", product.to_str().unwrap(), "--k", k])), 2);
    }

    let out = run(&["ges", ghz.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    let labels: Vec<&str> =
        cert["certificate"]["systems"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, vec!["A|BC", "B|AC", "AB|C"]);
}

#[test]
fn random_files_are_deterministic_and_pipe_into_certify() {
    let a = run(&["random", "--dims", "4,4", "--dsub", "8", "--seed", "7"]);
    let b = run(&["random", "--dims", "4,4", "--dsub", "8", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let file: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(file["basis"].as_array().unwrap().len(), 8);

    let certify = |input: &[u8]| {
        let mut child = entcert()
            .args(["certify", "-", "--r", "1", "--k", "1"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(input).unwrap();
        child.wait_with_output().unwrap()
    };
    let out = certify(&a.stdout);
    assert_eq!(code(&out), 0);
    assert_eq!(certificate(&out)["input"], "-");

    let full = run(&["random", "--dims", "4,4", "--dsub", "16"]);
    assert_eq!(code(&certify(&full.stdout)), 2);
}

#[test]
fn rational_mode_is_refused_for_float_input() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["random", "--dims", "2,2", "--dsub", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run(&["certify", path.to_str().unwrap(), "--mode", "rational"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rational"));
}

#[test]
fn rational_certificate_round_trips_byte_identically() {
    let dir = TempDir::new().unwrap();
    let input = export(dir.path(), "example1");
    let cert_path = dir.path().join("cert.json");
    let out = run(&["certify", input.to_str().unwrap(), "--mode", "rational", "--out", cert_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let parsed = entcert_cli::files::CertificateFile::parse(&text).unwrap();
    assert_eq!(parsed.to_json(), text);

    let exported = std::fs::read_to_string(&input).unwrap();
    let file = entcert_cli::files::SubspaceFile::parse(&exported).unwrap();
    assert_eq!(file.to_json(), exported);
}

#[test]
fn guardrail_reports_too_large() {
    let dir = TempDir::new().unwrap();
    let input = export(dir.path(), "example1");
    let out = run(&["certify", input.to_str().unwrap(), "--k", "2", "--guardrail-rows", "100"]);
    assert_eq!(code(&out), 3);
    let cert = certificate(&out);
    assert_eq!(cert["certificate"]["verdict"]["status"], "system_too_large");
}

#[test]
fn thread_count_from_flag_and_environment() {
    let dir = TempDir::new().unwrap();
    let input = export(dir.path(), "example1");
    let out = run(&["--threads", "1", "certify", input.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = entcert().env("ENTCERT_THREADS", "2").args(["certify", input.to_str().unwrap()]).output().unwrap();
    assert_eq!(code(&out), 0);
    let out = entcert().env("ENTCERT_THREADS", "zero").args(["certify", input.to_str().unwrap()]).output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["bogus"])), 1);
    assert_eq!(code(&run(&["certify"])), 1);
    assert_eq!(code(&run(&["certify", "x.json", "--k", "1", "--k-max", "2"])), 1);
    assert_eq!(code(&run(&["certify", "/nonexistent/input.json"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn export_lists_constructions() {
    let out = run(&["export", "--list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("example1") && text.contains("bhat-233"));
    assert_eq!(code(&run(&["export", "nope"])), 1);
}

#[test]
fn bench_tables_match_reference_columns() {
    let out = run(&["bench", "--table", "1", "--max-dim", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("ok")).count(), 6);

    let out = run(&["bench", "--table", "3", "--max-dim", "12"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["bench", "--table", "2", "--max-dim", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}
