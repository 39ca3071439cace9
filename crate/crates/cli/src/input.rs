//! Parsing of command-line operands: functions, measures and semirings.

use std::fs;

use fuzzint_core::exprdsl::FnDef;
use fuzzint_core::{FuzzyMeasure, Generator, PiecewiseFn, Semiring};

use crate::CliError;

/// Reads `@path` arguments from disk; anything else is taken literally.
fn literal_or_file(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| CliError::Io { path: path.to_string(), source: e }),
        None => Ok(arg.to_string()),
    }
}

/// A function given as an expression in `x`, or a JSON function definition
/// (bare string, `{"domain", "expr"}`, or a segment list).
pub fn function(arg: &str, domain: Option<(f64, f64)>) -> Result<PiecewiseFn, CliError> {
    let text = literal_or_file(arg)?;
    let (lo, hi) = domain.unwrap_or((0.0, 1.0));
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("function '{text}': {e}"));
    if text.starts_with('[') || text.starts_with('{') || text.starts_with('"') {
        let def: FnDef = serde_json::from_str(&text).map_err(|e| bad(&e))?;
        let f = match def {
            FnDef::Expr(expr) => PiecewiseFn::parse(&expr, lo, hi),
            def => PiecewiseFn::try_from(def),
        };
        return f.map_err(|e| bad(&e));
    }
    PiecewiseFn::parse(&text, lo, hi).map_err(|e| bad(&e))
}

/// `lebesgue`, `lebesgue-squared`, `distorted:<T(t)>`, or a JSON measure.
pub fn measure(arg: &str, max_len: f64) -> Result<FuzzyMeasure, CliError> {
    let text = literal_or_file(arg)?;
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("measure '{text}': {e}"));
    let mu = if text.starts_with('{') {
        serde_json::from_str::<FuzzyMeasure>(&text).map_err(|e| bad(&e))?
    } else if text == "lebesgue" {
        FuzzyMeasure::Lebesgue
    } else if text == "lebesgue-squared" {
        FuzzyMeasure::lebesgue_squared(max_len)
    } else if let Some(t) = text.strip_prefix("distorted:") {
        FuzzyMeasure::distorted(t, max_len).map_err(|e| bad(&e))?
    } else {
        return Err(bad(&"expected lebesgue, lebesgue-squared, distorted:<T> or a JSON measure"));
    };
    mu.validated_for(max_len).map_err(|e| bad(&e))
}

/// A generator expression in `t` on `[lo, hi]`, or a JSON semiring.
pub fn semiring(arg: &str, interval: (f64, f64)) -> Result<Semiring, CliError> {
    let text = literal_or_file(arg)?;
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("generator '{text}': {e}"));
    if text.starts_with('{') {
        return serde_json::from_str(&text).map_err(|e| bad(&e));
    }
    let gen = Generator::parse(&text, interval.0, interval.1).map_err(|e| bad(&e))?;
    Ok(Semiring::generated(gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fuzzint_core::RealFn;

    #[test]
    fn functions_from_text_json_and_files() {
        assert_eq!(function("x/2", None).unwrap().eval(0.5).unwrap(), 0.25);
        let f = function("x", Some((0.0, 2.0))).unwrap();
        assert_eq!(f.eval(2.0).unwrap(), 2.0);
        let pieces = r#"[{"interval": "[0,1/2)", "expr": "x"}, {"interval": "[1/2,1]", "expr": "1"}]"#;
        assert_eq!(function(pieces, None).unwrap().eval(0.75).unwrap(), 1.0);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        fs::write(&path, "sqrt(x)\n").unwrap();
        let f = function(&format!("@{}", path.display()), None).unwrap();
        assert_eq!(f.eval(0.25).unwrap(), 0.5);
        assert!(matches!(function("@/nonexistent", None), Err(CliError::Io { .. })));
        assert!(matches!(function("x +", None), Err(CliError::Input(_))));
    }

    #[test]
    fn measure_descriptors() {
        assert_eq!(measure("lebesgue", 1.0).unwrap(), FuzzyMeasure::Lebesgue);
        assert_eq!(measure("lebesgue-squared", 1.0).unwrap(), FuzzyMeasure::lebesgue_squared(1.0));
        assert_eq!(measure("distorted:t^2", 1.0).unwrap(), FuzzyMeasure::lebesgue_squared(1.0));
        assert_eq!(measure(r#"{"type":"lebesgue"}"#, 1.0).unwrap(), FuzzyMeasure::Lebesgue);
        assert!(measure("counting", 1.0).is_err());
        assert!(measure("distorted:1-t", 1.0).is_err());
    }

    #[test]
    fn semiring_descriptors() {
        assert_eq!(semiring("t^2", (0.0, f64::INFINITY)).unwrap().kind(), "g");
        assert_eq!(semiring(r#"{"type":"maxplus","lambda":4}"#, (0.0, 1.0)).unwrap().kind(), "maxplus");
        assert!(semiring("t - t^2", (0.0, 1.0)).is_err());
    }
}
