use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sendovlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sendovlab"))
        .args(args)
        .env_remove("SENDOVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn crit_of_roots_of_unity() {
    let out = sendovlab(&["crit", "--zeros", "roots_of_unity:5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["header"]["command"], "crit");
    let second = r["body"]["critical_points"]["second_kind"].as_array().unwrap();
    assert_eq!(second.len(), 1);
    assert_eq!(second[0]["multiplicity"], 4);
    let (re, im) = complex(&second[0]["location"]);
    assert!(re.hypot(im) < 1e-12);
    assert!((r["body"]["sendov"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    // S = 1 is near-extremal, which is logged but is not a counterexample.
    assert_eq!(r["findings"][0]["kind"], "near_extremal");
}

#[test]
fn classify_reports_stratum() {
    let out = sendovlab(&["classify", "--zeros", "n=3 m=2; 0 0 2; 1 0 1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let body = &report(&out)["body"];
    assert_eq!(body["notation"], "3:2,1/1");
    assert_eq!((body["m"].as_u64(), body["k"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn monte_carlo_stays_below_one() {
    let out = sendovlab(&["sample", "--n", "8", "--samples", "20000", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert!(r["body"]["max"]["value"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(r["header"]["seed"], 7);
}

#[test]
fn rank_sweep_has_no_deficiency() {
    let out = sendovlab(&["rank-sweep", "--stratum", "5:1,1,1,1,1/1,1,1,1", "--samples", "1000", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let body = &report(&out)["body"];
    assert_eq!(body["deficient"].as_array().unwrap().len(), 0);
    assert_eq!(body["records"].as_array().unwrap().len(), 1000);
    assert!(body["min_ratio"].as_f64().unwrap() > 1e-8);
}

#[test]
fn reports_are_deterministic() {
    let args = ["search", "--n", "5", "--steps", "200", "--seed", "11"];
    let a = sendovlab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_sendovlab"))
        .args(args)
        .env("SENDOVLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    assert_eq!(report(&a)["body"], report(&b)["body"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    fs::write(&toml, "seed = 3\n[command.sample]\nn = 4\nsamples = 500\n").unwrap();
    let from_file = sendovlab(&["run", "--config", toml.to_str().unwrap()]);
    let from_flags = sendovlab(&["sample", "--n", "4", "--samples", "500", "--seed", "3"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(report(&from_file)["body"], report(&from_flags)["body"]);
    assert_eq!(report(&from_file)["header"], report(&from_flags)["header"]);
}

#[test]
fn unknown_config_key_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    fs::write(&toml, "seed = 3\n[command.sample]\nn = 4\nsampels = 500\n").unwrap();
    let out = sendovlab(&["run", "--config", toml.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn malformed_zeros_are_contract_errors() {
    let out = sendovlab(&["crit", "--zeros", "n=3 m=2\n0 0 1\n1 0 1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
    assert_eq!(code(&sendovlab(&["crit"])), 1);
    assert_eq!(code(&sendovlab(&["crit", "--zeros", "roots_of_unity:4", "--bogus"])), 1);
    assert_eq!(code(&sendovlab(&["sample", "--n", "1"])), 1);
}

#[test]
fn input_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zeros.txt");
    fs::write(&input, "# two zeros\nn=2 m=2\n1 0 1\n-1 0 1\n").unwrap();
    let out = sendovlab(&["disk", "--input", input.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!((report(&out)["body"]["radius"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn boundary_hit_is_a_numeric_error_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("path.dat");
    // Drive the two free zeros of z^3 - 1 onto each other.
    let out = sendovlab(&[
        "track",
        "--zeros",
        "roots_of_unity:3",
        "--to",
        "-0.5 -0.8660254037844386; -0.5 -0.8660254037844386",
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["body"]["stop"]["kind"], "boundary");
    assert_eq!(r["events"].as_array().unwrap().len(), 1);
    let rows = fs::read_to_string(&table).unwrap();
    assert!(rows.lines().filter(|l| !l.starts_with('#')).count() > 2);
}

#[test]
fn violation_exits_three_and_is_logged() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("findings.jsonl");
    let args = ["crit", "--zeros", "n=2 m=2; 2 0 1; -2 0 1", "--findings", log.to_str().unwrap()];
    assert_eq!(code(&sendovlab(&args)), 3);
    assert_eq!(code(&sendovlab(&args)), 3);
    let text = fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let finding: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(finding["kind"], "sendov_violation");
    assert_eq!(finding["value"].as_f64(), Some(2.0));
}

#[test]
fn scan_of_centroid_is_analytic() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("scan.json");
    let out = sendovlab(&[
        "scan",
        "--zeros",
        "n=4 m=3; 0.3 0.1 2; -0.4 0.2 1; 0.1 -0.5 1",
        "--resolution",
        "7",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r["body"]["grid"].as_array().unwrap().len(), 49);
    assert!(r["body"]["max_cr_residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn kkt_on_roots_of_unity() {
    let out = sendovlab(&["kkt", "--zeros", "roots_of_unity:5", "--i0", "0", "--lambda", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let body = &report(&out)["body"];
    let certs = body["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 4);
    assert!(certs.iter().all(|c| c["forms_agree"] == true));
    assert!(body["residual"]["dual_mismatch"].as_f64().unwrap() < 1e-9);
    assert!(body["fit"]["residual"].is_number());
}

#[test]
fn help_documents_stratum_notation() {
    let out = sendovlab(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("n:mu_1,...,mu_m/nu_1,...,nu_k"));
}
