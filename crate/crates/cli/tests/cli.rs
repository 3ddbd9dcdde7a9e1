use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use logpoisson_cli::job::JobFile;
use logpoisson_cli::{run_job, CliError, Command, Format, Settings};
use serde_json::Value;

fn jobs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn job_path(name: &str) -> String {
    jobs_dir().join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_logpoisson")).args(args).output().expect("binary runs")
}

fn json(command: Command, job: &JobFile) -> Value {
    let settings = Settings { format: Format::Json, ..Settings::default() };
    serde_json::from_str(&run_job(command, job, &settings).unwrap().body).unwrap()
}

#[test]
fn example_jobs_are_canonical() {
    let mut seen = 0;
    for entry in std::fs::read_dir(jobs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path).unwrap();
            let job = JobFile::parse(&text).unwrap();
            assert_eq!(job.to_canonical(), text, "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 10);
}

#[test]
fn parsing_normalizes_subsets_and_rationals() {
    let text = r#"{"kind": "action_datum", "form": [["2/2"]], "betas": [["1"], ["1"], ["-1"], ["-1"]],
        "c": {" 2 : 3 ": "-4/8"}, "options": {"subset": [[2, 3], [1, 4], [2, 3]]}}"#;
    let job = JobFile::parse(text).unwrap();
    let again = JobFile::parse(&job.to_canonical()).unwrap();
    assert_eq!(job, again);
    let v: Value = serde_json::from_str(&job.to_canonical()).unwrap();
    assert_eq!(v["form"][0][0], "1");
    assert_eq!(v["c"]["2:3"], "-1/2");
    assert_eq!(v["options"]["subset"], serde_json::json!([[1, 4], [2, 3]]));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = JobFile::parse("{\n  \"kind\": \"cartan\",\n  \"gcm\": [[2, -1], [-1, 2]],\n  \"word\": [1, 2,]\n}")
        .unwrap_err();
    match &err {
        CliError::Parse { line, .. } => assert_eq!(*line, 4),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(err.exit_code(), 2);
    assert!(JobFile::parse(r#"{"kind": "action_datum", "form": [["1/0"]], "betas": []}"#).is_err());
}

#[test]
fn asymmetric_form_names_the_entry() {
    let job =
        JobFile::parse(r#"{"kind": "action_datum", "form": [["1", "2"], ["3", "1"]], "betas": [["1", "0"]]}"#).unwrap();
    let err = run_job(Command::Analyze, &job, &Settings::default()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("entry (1, 2) = 2"), "{err}");
}

#[test]
fn analyze_family_lists_both_weights() {
    let job = JobFile::parse(&std::fs::read_to_string(job_path("family_p1_unit.json")).unwrap()).unwrap();
    let v = json(Command::Analyze, &job);
    assert_eq!(v["s_pi0"][0]["border"], serde_json::json!([1, 4]));
    assert_eq!(v["s_pi0"][0]["theta"], serde_json::json!([-1, 2, 2, -1]));
    assert_eq!(v["s_pi0"][1]["theta"], serde_json::json!([0, -1, -1, 0]));
    assert_eq!(v["diagram"]["edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["checks"]["w1"], "pass");
    assert_eq!(v["checks"]["w2"], "pass");
}

#[test]
fn single_coordinate_has_no_weights() {
    let job = JobFile::parse(&std::fs::read_to_string(job_path("single_coordinate.json")).unwrap()).unwrap();
    assert_eq!(json(Command::Analyze, &job)["s_pi0"], serde_json::json!([]));
}

#[test]
fn cartan_a2_deformation_terms() {
    let job = JobFile::parse(&std::fs::read_to_string(job_path("cartan_a2.json")).unwrap()).unwrap();
    let v = json(Command::Deform, &job);
    let first = &v["deformation"]["orders"][1]["terms"];
    assert_eq!(first, &serde_json::json!([{"coefficient": "-2", "exponents": [0, 1, 0], "dirs": [1, 3]}]));
    assert_eq!(v["deformation"]["total"].as_array().unwrap().len(), 4);
    assert_eq!(v["checks"]["jacobi"], "pass");
}

#[test]
fn empty_subset_returns_log_canonical_part() {
    let out = cli(&["deform", "-i", &job_path("family_p2_unit.json"), "--subset", "", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["deformation"]["orders"].as_array().unwrap().len(), 2);
    assert_eq!(v["deformation"]["total"], v["deformation"]["orders"][0]["terms"]);
}

#[test]
fn coefficient_flag_overrides_file() {
    let out = cli(&["deform", "-i", &job_path("cartan_a2.json"), "--c", "1=7/3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["smoothings"][0]["coefficient"], "7/3");
    assert_eq!(v["input_echo"]["c"]["1"], "7/3");
    let bad = cli(&["deform", "-i", &job_path("cartan_a2.json"), "--c", "2=1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let missing = cli(&["analyze", "-i", "/nonexistent/job.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let capped = cli(&["deform", "-i", &job_path("family_p3_unit.json"), "--level-cap", "2"]);
    assert_eq!(capped.status.code(), Some(3), "{}", String::from_utf8_lossy(&capped.stderr));
    let ok = cli(&["check-cgl", "-i", &job_path("cartan_g2.json")]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn dot_export_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dot");
    let b = dir.path().join("b.dot");
    for target in [&a, &b] {
        let out = cli(&["export-dot", "-i", &job_path("cartan_b2.json"), "-o", target.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("graph smoothing_diagram {"));
}

#[test]
fn parallel_inputs_keep_input_order() {
    let names = ["cartan_g2.json", "family_p1_unit.json", "cartan_a2.json", "family_p3_shifted.json"];
    let mut args = vec!["deform".to_string(), "--format".into(), "json".into()];
    for n in names {
        args.push("-i".into());
        args.push(job_path(n));
    }
    let run = |jobs: &str| {
        let mut a = args.clone();
        a.extend(["--jobs".into(), jobs.into()]);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        cli(&refs)
    };
    let serial = run("1");
    let parallel = run("4");
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    let expected: String = names
        .iter()
        .map(|n| String::from_utf8(cli(&["deform", "--format", "json", "-i", &job_path(n)]).stdout).unwrap())
        .collect();
    assert_eq!(String::from_utf8(serial.stdout).unwrap(), expected);
}

#[test]
fn pfaffian_of_base_is_log_volume() {
    let out = cli(&["pfaffian", "--base", "-i", &job_path("cartan_a2_long.json"), "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v["pfaffian"],
        serde_json::json!([{"coefficient": "1", "exponents": [1, 1, 1, 1, 1, 1], "dirs": [1, 2, 3, 4, 5, 6]}])
    );
}
