//! End-to-end checks of the binary: output formats, exit codes, and the
//! instance-file round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hyperfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfactor"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("hyperfactor_cli_{}_{name}", std::process::id()))
}

#[test]
fn factor_auto_text() {
    let out = hyperfactor(&["factor", "--n", "7909787", "--algo", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("7909787 = 2069 * 3823"), "{text}");
    assert!(text.contains("z = 267, y = 1754"), "{text}");
}

#[test]
fn factor_text_and_json_agree() {
    let text_run = hyperfactor(&["factor", "--n", "7909787", "--algo", "fermat", "--lambda", "280"]);
    let json_run = hyperfactor(&[
        "factor", "--n", "7909787", "--algo", "fermat", "--lambda", "280", "--output", "json",
    ]);
    assert_eq!(text_run.status.code(), Some(0));
    assert_eq!(json_run.status.code(), Some(0));
    let text = stdout(&text_run);
    let json: serde_json::Value = serde_json::from_str(stdout(&json_run).trim()).unwrap();
    assert_eq!(json["status"], "factored");
    assert_eq!(json["divisor"], "2069");
    assert_eq!(json["cofactor"], "3823");
    assert_eq!(json["z"], "267");
    assert_eq!(json["y"], "1754");
    assert_eq!(json["modulus"], "1155");
    // identical numeric content in both modes
    assert!(text.contains("= 2069 * 3823"));
    assert!(text.contains(&format!(
        "square tests = {}",
        json["square_tests"].as_str().unwrap()
    )));
}

#[test]
fn factor_tradeoff_subcommand() {
    let out = hyperfactor(&[
        "factor",
        "--n",
        "17344343992304993085649094809",
        "--algo",
        "tradeoff",
        "--lambda",
        "55870214400",
        "--tuned",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("129411310904131 * 134024946282739"),
        "{text}"
    );
}

#[test]
fn exit_codes() {
    // input errors
    assert_eq!(hyperfactor(&["factor", "--n", "10"]).status.code(), Some(1));
    assert_eq!(hyperfactor(&["factor", "--n", "x"]).status.code(), Some(1));
    assert_eq!(
        hyperfactor(&["factor", "--n", "7909787", "--algo", "fermat"])
            .status
            .code(),
        Some(1),
        "missing --lambda must be a usage error"
    );
    // algorithmic sentinels
    assert_eq!(
        hyperfactor(&["factor", "--n", "7909787", "--algo", "fermat", "--lambda", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyperfactor(&["factor", "--n", "97", "--algo", "auto"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sieve_outputs() {
    let out = hyperfactor(&["sieve", "card", "--n", "7909787", "--m", "4620", "--k", "1"]);
    assert_eq!(stdout(&out).trim(), "40");
    let out = hyperfactor(&["sieve", "enum", "--n", "7909787", "--m", "5", "--k", "1"]);
    assert_eq!(stdout(&out).trim(), "2 3");
    let out = hyperfactor(&["sieve", "card", "--n", "7", "--m", "9", "--k", "1", "--oracle"]);
    assert_eq!(stdout(&out).trim(), "formula=2 oracle=2");
    let out = hyperfactor(&[
        "sieve", "card", "--n", "7909787", "--m", "4620", "--output", "json",
    ]);
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(json["cardinality"], "40");
}

#[test]
fn sieve_budget_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperfactor"))
        .args(["sieve", "enum", "--n", "7909787", "--m", "4620"])
        .env("HYPERFACTOR_ENUM_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn mcss_round_trip() {
    let path = temp_path("instance.json");
    let path_str = path.to_str().unwrap();

    let out = hyperfactor(&[
        "mcss", "export", "--n", "7909787", "--mode", "exact", "--u", "255255", "--v", "12673",
        "--out", path_str,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let solve = hyperfactor(&["mcss", "solve", "--instance", path_str, "--limit", "4000"]);
    assert_eq!(solve.status.code(), Some(0));
    let text = stdout(&solve);
    assert!(
        text.contains("offset 267") && text.contains("factor 2069 * 3823"),
        "{text}"
    );

    // recover the satisfied selection the solver printed and verify it
    let line = text
        .lines()
        .find(|l| l.contains("offset 267"))
        .expect("solution line");
    let inner = line
        .split('[')
        .nth(1)
        .unwrap()
        .split(']')
        .next()
        .unwrap()
        .replace(' ', "");
    let verify = hyperfactor(&["mcss", "verify", "--instance", path_str, "--selection", &inner]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("satisfied"), "{}", stdout(&verify));

    // perturb the first choice: class 0 of the exact form has k+1 offsets
    let mut parts: Vec<u64> = inner.split(',').map(|p| p.parse().unwrap()).collect();
    parts[0] = (parts[0] + 1) % 7;
    let bad: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    let verify = hyperfactor(&[
        "mcss", "verify", "--instance", path_str, "--selection", &bad.join(","),
    ]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("violated"), "{}", stdout(&verify));

    std::fs::remove_file(&path).ok();
}

#[test]
fn mcss_rejects_malformed_document() {
    let path = temp_path("broken.json");
    std::fs::write(&path, "{ \"version\": 1,").unwrap();
    let out = hyperfactor(&["mcss", "solve", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line") && err.contains("column"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn bench_emits_csv() {
    let out = hyperfactor(&[
        "bench", "--deltas", "200", "--count", "1", "--digits", "5", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algo,delta,n,modulus,candidates,seconds")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("fermat,"));
    assert!(rows[1].starts_with("tradeoff,"));
    for row in rows {
        assert_eq!(row.split(',').count(), 6, "{row}");
    }
}
