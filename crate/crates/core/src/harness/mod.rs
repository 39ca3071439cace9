//! Config-driven runs, the worked-example suite and seeded sweeps.

mod config;
mod fuzz;
pub mod random;
mod suite;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inequalities::{CheckError, CheckSpec, InequalityReport};

pub use config::{run_config, CheckEntry, Plan, RunConfig, SweepEntry};
pub use fuzz::{fuzz_sweep, fuzz_with, FuzzSpec};
pub use random::PairFamily;
pub use suite::{reproduce_paper_suite, Annotation, AnnotationStatus};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error("unknown family '{0}' (expected monotone-increasing-pair, monotone-decreasing-pair, countermonotone-pair or plateau-pair)")]
    UnknownFamily(String),
    #[error("unknown checker '{0}'")]
    UnknownChecker(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("{name}: {source}")]
    Check {
        name: String,
        #[source]
        source: CheckError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub(crate) fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Config { location: location.into(), message: message.into() }
    }

    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. }
            | HarnessError::UnknownFamily(_)
            | HarnessError::UnknownChecker(_)
            | HarnessError::NoTrials => 2,
            _ => 1,
        }
    }
}

/// A check that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub name: String,
    pub checker: String,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub advisory: usize,
    pub errors: usize,
}

/// Reports of a run, partitioned into holding, failing and advisory ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub reports: Vec<InequalityReport>,
    pub summary: Summary,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
    #[serde(default)]
    pub errors: Vec<CheckFailure>,
}

impl SuiteResult {
    pub fn new(reports: Vec<InequalityReport>, annotations: Vec<Annotation>, errors: Vec<CheckFailure>) -> Self {
        let mut summary = Summary { errors: errors.len(), ..Summary::default() };
        for r in &reports {
            if r.advisory {
                summary.advisory += 1;
            } else if r.holds {
                summary.holds += 1;
            } else {
                summary.fails += 1;
            }
        }
        SuiteResult { reports, summary, annotations, errors }
    }

    /// Runs each spec in order, collecting hard errors instead of stopping.
    pub fn run_all(specs: impl IntoIterator<Item = (String, CheckSpec)>) -> Self {
        let mut reports = Vec::new();
        let mut errors = Vec::new();
        for (name, spec) in specs {
            match spec.run() {
                Ok(r) => reports.push(r.with_name(name)),
                Err(e) => errors.push(CheckFailure { name, checker: spec.checker().to_string(), error: e.to_string() }),
            }
        }
        SuiteResult::new(reports, Vec::new(), errors)
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }

    pub fn report(&self, name: &str) -> Option<&InequalityReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    /// One JSON object per line: every report, then every annotation, then
    /// every failure.
    pub fn write_json_lines(&self, mut w: impl Write) -> Result<(), HarnessError> {
        let io = |e| HarnessError::Io { path: "<output>".into(), source: e };
        for r in &self.reports {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n").map_err(io)?;
        }
        for a in &self.annotations {
            serde_json::to_writer(&mut w, &serde_json::json!({ "annotation": a }))?;
            w.write_all(b"\n").map_err(io)?;
        }
        for e in &self.errors {
            serde_json::to_writer(&mut w, &serde_json::json!({ "error": e }))?;
            w.write_all(b"\n").map_err(io)?;
        }
        Ok(())
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Flat table with one row per report.
    pub fn write_csv(&self, w: impl Write) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["name", "checker", "lhs", "rhs", "slack", "direction", "holds", "advisory"])?;
        for r in &self.reports {
            out.write_record([
                r.name.clone(),
                r.context.checker().to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.slack.to_string(),
                r.direction.symbol().to_string(),
                r.holds.to_string(),
                r.advisory.to_string(),
            ])?;
        }
        out.flush().map_err(|e| HarnessError::Io { path: "<output>".into(), source: e })?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::random::{random_monotone, random_piecewise, random_smooth_positive, trial_rng};
    use super::*;
    use crate::exprdsl::{classify_monotonicity, comonotone, countermonotone, MonotonicityClass, RealFn, DEFAULT_GRID};

    fn annotation<'a>(s: &'a SuiteResult, entry: &str, quantity: &str) -> &'a Annotation {
        s.annotations.iter().find(|a| a.entry == entry && a.quantity == quantity).expect("annotation present")
    }

    #[test]
    fn suite_reproduces_worked_examples() {
        let s = reproduce_paper_suite().unwrap();
        assert_eq!(s.reports.len(), 7);
        assert!(!s.has_errors());
        let n = &s.summary;
        assert_eq!(n.holds + n.fails + n.advisory, s.reports.len());

        let a = annotation(&s, "classical-ratio-bound", "int_g2");
        assert_eq!(a.status, AnnotationStatus::Erratum);
        assert!((a.computed - 0.38197).abs() < 1e-5);
        assert_eq!(annotation(&s, "classical-ratio-bound", "int_f").status, AnnotationStatus::Match);
        assert_eq!(annotation(&s, "classical-ratio-bound", "rhs").status, AnnotationStatus::Match);
        let v = annotation(&s, "classical-ratio-bound", "min_slack_admissible");
        assert_eq!(v.status, AnnotationStatus::Erratum);
        assert!(v.computed > 0.0);
        let r = s.report("classical-ratio-bound-violation").unwrap();
        assert!(!r.holds && r.slack < -0.01);
        assert_eq!(annotation(&s, "classical-ratio-bound-violation", "int_g2").status, AnnotationStatus::Match);

        assert_eq!(annotation(&s, "sugeno-root-linear", "int_g_s").status, AnnotationStatus::Match);
        assert_eq!(annotation(&s, "sugeno-root-linear", "int_g_s_decimal").status, AnnotationStatus::Rounding);
        assert_eq!(annotation(&s, "sugeno-root-linear", "rhs").status, AnnotationStatus::Match);
        for q in ["int_f_s", "int_g_s", "rhs", "lhs"] {
            assert_eq!(annotation(&s, "sugeno-plateau-squared-measure", q).status, AnnotationStatus::Match, "{q}");
        }
        let r = s.report("sugeno-countermonotone").unwrap();
        assert!(r.holds && r.advisory);
        assert_eq!(annotation(&s, "sugeno-countermonotone", "int_g_s").status, AnnotationStatus::Match);

        let a = annotation(&s, "pseudo-power-generator", "lhs");
        assert_eq!(a.status, AnnotationStatus::Erratum);
        assert!((a.computed - 0.22361).abs() < 1e-5);
        let r = s.report("pseudo-power-generator").unwrap();
        assert!(r.holds && r.details["erratum"] == true);
        assert!(s.report("sup-max-plus").unwrap().holds);
    }

    #[test]
    fn config_runs_named_checks() {
        let config = RunConfig::from_json(
            r#"{
                "functions": {"f": "sqrt(x)/2", "g": {"domain": [0, 1], "expr": "x/4"}},
                "checks": [{"checker": "sugeno-diaz-metcalf", "name": "root-linear", "operands": ["f", "g"], "s": 2}]
            }"#,
        )
        .unwrap();
        let s = config.execute(None).unwrap();
        let r = s.report("root-linear").unwrap();
        assert!((r.rhs - 0.015).abs() < 5e-4);
        assert_eq!(s.summary, Summary { holds: 1, fails: 0, advisory: 0, errors: 0 });

        let empty = RunConfig::from_json(r#"{"checks": []}"#).unwrap().execute(None).unwrap();
        assert!(empty.reports.is_empty());
        assert_eq!(empty.summary, Summary::default());
        assert!(empty.to_json_lines().is_empty());
    }

    #[test]
    fn config_errors_name_their_location() {
        let e = RunConfig::from_json(r#"{"functions": {"f": "x"}, "checks": [{"checker": "stolarsky", "operands": ["h"], "a": 1, "b": 1}]}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        let text = e.to_string();
        assert!(text.contains("checks[0].operands[0]") && text.contains("'h'"), "{text}");
        assert_eq!(e.exit_code(), 2);

        let e = RunConfig::from_json("{\n  \"checks\": [1]\n}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = RunConfig::from_json(r#"{"chekcs": []}"#).unwrap_err();
        assert!(e.to_string().contains("chekcs"), "{e}");

        let bad = |json: &str| RunConfig::from_json(json).unwrap().resolve().unwrap_err().to_string();
        assert!(bad(r#"{"functions": {"f": "x"}, "checks": [{"checker": "nope", "operands": []}]}"#).contains("checks[0].checker"));
        assert!(bad(r#"{"functions": {"f": "x"}, "checks": [{"checker": "sugeno-diaz-metcalf", "operands": ["f", "f"]}]}"#)
            .contains("checks[0].s"));
        assert!(bad(r#"{"functions": {"f": "x"}, "checks": [{"checker": "pseudo-chebyshev", "operands": ["f", "f"]}]}"#)
            .contains("checks[0].semiring"));
        assert!(bad(r#"{"functions": {"f": "x +"}}"#).contains("functions.f"));
        assert!(bad(r#"{"sweeps": [{"family": "odd-pair", "checker": "stolarsky"}]}"#).contains("sweeps[0].family"));
    }

    #[test]
    fn config_writes_json_lines() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.jsonl");
        let path = dir.path().join("run.json");
        let config = serde_json::json!({
            "functions": {"u": "x", "v": "x^2"},
            "semiring": {"type": "g", "g": "t"},
            "checks": [{"checker": "pseudo-chebyshev", "operands": ["u", "v"]}],
            "sweeps": [{"family": "monotone-increasing-pair", "checker": "pseudo-chebyshev", "trials": 3}],
            "seed": 7,
            "output": out,
        });
        std::fs::write(&path, config.to_string()).unwrap();
        let s = run_config(&path).unwrap();
        assert_eq!(s.reports.len(), 4);
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text, s.to_json_lines());
        let again = run_config(&path).unwrap();
        assert_eq!(again.to_json_lines(), text);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = fuzz_sweep(PairFamily::PlateauPair, "sugeno-diaz-metcalf", 1, 42).unwrap();
        let b = fuzz_sweep(PairFamily::PlateauPair, "sugeno-diaz-metcalf", 1, 42).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        let c = fuzz_sweep(PairFamily::PlateauPair, "sugeno-diaz-metcalf", 3, 42).unwrap();
        assert_eq!(c.reports[0], a.reports[0]);
        assert!(fuzz_sweep(PairFamily::PlateauPair, "sugeno-diaz-metcalf", 0, 1).is_err());
        assert!(fuzz_sweep(PairFamily::PlateauPair, "nope", 1, 1).is_err());
        assert!("odd-pair".parse::<PairFamily>().is_err());
    }

    #[test]
    fn sweeps_by_family() {
        let s = fuzz_sweep(PairFamily::MonotoneIncreasingPair, "sugeno-diaz-metcalf", 40, 3).unwrap();
        assert_eq!(s.summary, Summary { holds: 40, ..Summary::default() }, "{:?}", s.errors);
        let s = fuzz_sweep(PairFamily::CountermonotonePair, "sugeno-diaz-metcalf", 20, 3).unwrap();
        assert_eq!(s.summary.advisory, 20);
        for checker in crate::inequalities::CHECKERS {
            let s = fuzz_sweep(PairFamily::MonotoneDecreasingPair, checker, 5, 11).unwrap();
            assert!(!s.has_errors(), "{checker}: {:?}", s.errors);
            if checker != "classical-diaz-metcalf" {
                assert_eq!(s.summary.fails, 0, "{checker}");
            }
        }
        let s = fuzz_sweep(PairFamily::MonotoneIncreasingPair, "classical-diaz-metcalf", 60, 11).unwrap();
        assert!(s.summary.fails > 0 && !s.has_errors());
        let mut csv = Vec::new();
        s.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 61);
    }

    #[test]
    fn random_operands_have_their_shape() {
        for trial in 0..200 {
            let mut rng = trial_rng(5, trial);
            let up = random_monotone(&mut rng, true, false);
            let down = random_monotone(&mut rng, false, false);
            assert_eq!(classify_monotonicity(&up, DEFAULT_GRID).unwrap(), MonotonicityClass::StrictlyIncreasing, "{up:?}");
            assert_eq!(classify_monotonicity(&down, DEFAULT_GRID).unwrap(), MonotonicityClass::StrictlyDecreasing, "{down:?}");
            assert!(countermonotone(&up, &down, DEFAULT_GRID).unwrap());
            let (p, q) = PairFamily::PlateauPair.sample(&mut rng);
            assert!(comonotone(&p, &q, DEFAULT_GRID).unwrap());
            assert!(p.segments().len() >= 2);
            for f in [&up, &down, &p, &q, &random_piecewise(&mut rng), &random_smooth_positive(&mut rng)] {
                for i in 0..=100 {
                    let v = f.eval(i as f64 / 100.0).unwrap();
                    assert!(v >= 0.0 && v.is_finite(), "{f:?} at {i}");
                }
            }
            for f in [&up, &down, &p, &q] {
                for i in 0..=50 {
                    let v = f.eval(i as f64 / 50.0).unwrap();
                    assert!(v <= 1.0, "{f:?}");
                }
            }
        }
    }
}
