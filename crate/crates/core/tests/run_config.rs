use std::fs;

use fuzzint_core::harness::{HarnessError, RunConfig};
use fuzzint_core::run_config;

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn config_file_runs_and_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.jsonl");
    let config = format!(
        r#"{{
            "functions": {{
                "f": "sqrt(x)/2",
                "g": "x/4",
                "u": [{{"interval": "[0,1/2)", "expr": "x"}}, {{"interval": "[1/2,1]", "expr": "sqrt(x)"}}]
            }},
            "semiring": {{"type": "g", "g": "t^2", "interval": [0, 10]}},
            "checks": [
                {{"checker": "sugeno-diaz-metcalf", "name": "root-linear", "operands": ["f", "g"], "s": 2}},
                {{"checker": "pseudo-chebyshev", "operands": ["u", "g"]}},
                {{"checker": "stolarsky", "operands": ["g"], "a": 1, "b": 2}}
            ],
            "sweeps": [{{"family": "plateau-pair", "checker": "sugeno-diaz-metcalf", "trials": 3, "s": 2}}],
            "seed": 4,
            "output": {:?}
        }}"#,
        out.display().to_string()
    );
    let path = write(&dir, "run.json", &config);
    let result = run_config(&path).unwrap();
    let r = result.report("root-linear").unwrap();
    assert!((r.rhs - 0.015).abs() < 5e-4, "{}", r.rhs);
    assert_eq!(result.reports.len(), 6);
    assert_eq!(result.summary.holds + result.summary.fails + result.summary.advisory, 6);

    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("lhs").is_some() && v.get("holds").is_some(), "{line}");
    }

    let again = run_config(&path).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), text);
    assert_eq!(again.to_json_lines(), result.to_json_lines());
}

#[test]
fn empty_config_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "empty.json", r#"{"checks": []}"#);
    let result = run_config(&path).unwrap();
    assert!(result.reports.is_empty());
    assert_eq!(result.summary.holds + result.summary.fails + result.summary.advisory + result.summary.errors, 0);
}

#[test]
fn undefined_function_names_the_identifier() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "bad.json",
        r#"{"functions": {"f": "x"}, "checks": [{"checker": "sugeno-diaz-metcalf", "operands": ["f", "missing"], "s": 2}]}"#,
    );
    let e = run_config(&path).unwrap_err();
    assert!(matches!(e, HarnessError::Config { .. }));
    assert!(e.to_string().contains("'missing'") && e.to_string().contains("checks[0].operands[1]"), "{e}");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn missing_file_is_an_io_error() {
    let e = run_config(std::path::Path::new("/nonexistent/run.json")).unwrap_err();
    assert!(matches!(e, HarnessError::Io { .. }));
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn hard_errors_are_collected_not_fatal() {
    let config = RunConfig::from_json(
        r#"{
            "functions": {"f": "x", "g": "1 - x"},
            "checks": [
                {"checker": "classical-diaz-metcalf", "name": "bad-ratio", "operands": ["f", "g"], "m": 0.5, "M": 1},
                {"checker": "sugeno-diaz-metcalf", "name": "fine", "operands": ["f", "f"], "s": 2}
            ]
        }"#,
    )
    .unwrap();
    let result = config.execute(None).unwrap();
    assert!(result.has_errors());
    assert_eq!(result.summary.errors, 1);
    assert!(result.report("fine").unwrap().holds);
    assert!(result.to_json_lines().contains("\"error\""));
}

#[test]
fn checker_filter_selects_checks() {
    let config = RunConfig::from_json(
        r#"{
            "functions": {"f": "x", "g": "x^2"},
            "checks": [
                {"checker": "sugeno-diaz-metcalf", "operands": ["f", "g"], "s": 2},
                {"checker": "stolarsky", "operands": ["f"], "a": 1, "b": 1}
            ]
        }"#,
    )
    .unwrap();
    let only = config.execute(Some("stolarsky")).unwrap();
    assert_eq!(only.reports.len(), 1);
    assert_eq!(only.reports[0].name, "stolarsky-1");
    assert!(matches!(config.execute(Some("nope")), Err(HarnessError::UnknownChecker(_))));
}
