use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{fuzz_with, FuzzSpec, HarnessError, PairFamily, SuiteResult};
use crate::exprdsl::{FnDef, PiecewiseFn};
use crate::inequalities::{CheckSpec, CHECKERS, DEFAULT_LAMBDAS};
use crate::measures::{FuzzyMeasure, SupMeasureDensity};
use crate::pseudo::{Generator, Semiring};

/// One requested check: a checker applied to named functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub checker: String,
    #[serde(default)]
    pub name: Option<String>,
    pub operands: Vec<String>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default, rename = "M")]
    pub big_m: Option<f64>,
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub measure: Option<FuzzyMeasure>,
    #[serde(default)]
    pub semiring: Option<Semiring>,
}

/// A randomized sweep; `trials` and `seed` default to the config's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepEntry {
    pub family: String,
    pub checker: String,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub measure: Option<FuzzyMeasure>,
    #[serde(default)]
    pub semiring: Option<Semiring>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub functions: BTreeMap<String, FnDef>,
    /// Default measure of the Sugeno checkers.
    #[serde(default)]
    pub measure: Option<FuzzyMeasure>,
    /// Default semiring of the pseudo checkers.
    #[serde(default)]
    pub semiring: Option<Semiring>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub sweeps: Vec<SweepEntry>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn one() -> usize {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            functions: BTreeMap::new(),
            measure: None,
            semiring: None,
            checks: Vec::new(),
            sweeps: Vec::new(),
            seed: 0,
            trials: 1,
            output: None,
        }
    }
}

/// Resolved work of a config.
#[derive(Debug, Clone)]
pub struct Plan {
    pub checks: Vec<(String, CheckSpec)>,
    pub sweeps: Vec<FuzzSpec>,
}

fn operand_count(checker: &str) -> usize {
    if checker == "stolarsky" {
        1
    } else {
        2
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| {
            HarnessError::config(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Io { path: path.display().to_string(), source: e })?;
        Self::from_json(&text)
    }

    /// Validates names and parameters and builds the check specs.
    pub fn resolve(&self) -> Result<Plan, HarnessError> {
        let mut functions = BTreeMap::new();
        for (name, def) in &self.functions {
            let f = PiecewiseFn::try_from(def.clone())
                .map_err(|e| HarnessError::config(format!("functions.{name}"), e.to_string()))?;
            functions.insert(name.as_str(), f);
        }
        let mut checks = Vec::new();
        for (i, entry) in self.checks.iter().enumerate() {
            let at = |field: &str| format!("checks[{i}].{field}");
            if !CHECKERS.contains(&entry.checker.as_str()) {
                return Err(HarnessError::config(at("checker"), format!("unknown checker '{}'", entry.checker)));
            }
            let want = operand_count(&entry.checker);
            if entry.operands.len() != want {
                return Err(HarnessError::config(
                    at("operands"),
                    format!("{} takes {want} operand(s), got {}", entry.checker, entry.operands.len()),
                ));
            }
            let mut ops = Vec::new();
            for (j, name) in entry.operands.iter().enumerate() {
                let f = functions
                    .get(name.as_str())
                    .ok_or_else(|| HarnessError::config(at(&format!("operands[{j}]")), format!("undefined function '{name}'")))?;
                ops.push(f.clone());
            }
            let spec = self.build(entry, ops, &at)?;
            let name = entry.name.clone().unwrap_or_else(|| format!("{}-{i}", entry.checker));
            checks.push((name, spec));
        }
        let mut sweeps = Vec::new();
        for (i, entry) in self.sweeps.iter().enumerate() {
            let at = |field: &str| format!("sweeps[{i}].{field}");
            let family: PairFamily =
                entry.family.parse().map_err(|e: HarnessError| HarnessError::config(at("family"), e.to_string()))?;
            if !CHECKERS.contains(&entry.checker.as_str()) {
                return Err(HarnessError::config(at("checker"), format!("unknown checker '{}'", entry.checker)));
            }
            let trials = entry.trials.unwrap_or(self.trials);
            if trials == 0 {
                return Err(HarnessError::config(at("trials"), "trials must be at least 1"));
            }
            sweeps.push(FuzzSpec {
                family,
                checker: entry.checker.clone(),
                trials,
                seed: entry.seed.unwrap_or(self.seed),
                s: entry.s,
                phi: entry.phi.clone(),
                measure: entry.measure.clone().or_else(|| self.measure.clone()),
                semiring: entry.semiring.clone(),
            });
        }
        Ok(Plan { checks, sweeps })
    }

    fn build(
        &self,
        e: &CheckEntry,
        ops: Vec<PiecewiseFn>,
        at: &dyn Fn(&str) -> String,
    ) -> Result<CheckSpec, HarnessError> {
        let need = |v: Option<f64>, field: &str| v.ok_or_else(|| HarnessError::config(at(field), "missing parameter"));
        let measure = || e.measure.clone().or_else(|| self.measure.clone()).unwrap_or(FuzzyMeasure::Lebesgue);
        let semiring = |kind: &str| -> Result<Semiring, HarnessError> {
            let sr = match (&e.semiring, &self.semiring) {
                (Some(sr), _) => sr.clone(),
                (None, Some(sr)) if sr.kind() == kind => sr.clone(),
                (None, _) if kind == "supmeasure" => Semiring::sup_measure(
                    SupMeasureDensity::new(PiecewiseFn::constant(0.0, 0.0, 1.0).expect("constant density")),
                    Generator::exponential(),
                ),
                (None, _) => return Err(HarnessError::config(at("semiring"), "missing semiring")),
            };
            if sr.kind() != kind {
                return Err(HarnessError::config(
                    at("semiring"),
                    format!("{} needs a '{kind}' semiring, got '{}'", e.checker, sr.kind()),
                ));
            }
            Ok(sr)
        };
        let mut ops = ops.into_iter();
        let f = ops.next().expect("operand count checked");
        let mut second = || ops.next().expect("operand count checked");
        Ok(match e.checker.as_str() {
            "classical-diaz-metcalf" => CheckSpec::ClassicalDiazMetcalf {
                f,
                g: second(),
                measure: measure(),
                m: need(e.m, "m")?,
                big_m: need(e.big_m, "M")?,
            },
            "sugeno-diaz-metcalf" => CheckSpec::SugenoDiazMetcalf { f, g: second(), s: need(e.s, "s")?, measure: measure() },
            "pseudo-diaz-metcalf" => {
                CheckSpec::PseudoDiazMetcalf { f, h: second(), s: need(e.s, "s")?, semiring: semiring("g")? }
            }
            "sup-diaz-metcalf" => CheckSpec::SupDiazMetcalf {
                f,
                h: second(),
                s: need(e.s, "s")?,
                semiring: semiring("supmeasure")?,
                lambdas: e.lambdas.clone().unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec()),
            },
            "phi-diaz-metcalf" => CheckSpec::PhiDiazMetcalf {
                f,
                h: second(),
                s: need(e.s, "s")?,
                semiring: semiring("g")?,
                phi: e.phi.clone().ok_or_else(|| HarnessError::config(at("phi"), "missing parameter"))?,
            },
            "pseudo-chebyshev" => CheckSpec::PseudoChebyshev { u: f, v: second(), semiring: semiring("g")? },
            "stolarsky" => CheckSpec::Stolarsky { f, a: need(e.a, "a")?, b: need(e.b, "b")? },
            other => return Err(HarnessError::UnknownChecker(other.to_string())),
        })
    }

    /// Runs the checks (only those of `checker`, when given) and sweeps.
    pub fn execute(&self, checker: Option<&str>) -> Result<SuiteResult, HarnessError> {
        if let Some(c) = checker {
            if !CHECKERS.contains(&c) {
                return Err(HarnessError::UnknownChecker(c.to_string()));
            }
        }
        let plan = self.resolve()?;
        let wanted = |name: &str| checker.is_none_or(|c| c == name);
        let mut result =
            SuiteResult::run_all(plan.checks.into_iter().filter(|(_, spec)| wanted(spec.checker())));
        for sweep in plan.sweeps.iter().filter(|s| wanted(&s.checker)) {
            let r = fuzz_with(sweep)?;
            result.reports.extend(r.reports);
            result.errors.extend(r.errors);
        }
        Ok(SuiteResult::new(result.reports, result.annotations, result.errors))
    }

    pub fn write_output(&self, result: &SuiteResult) -> Result<(), HarnessError> {
        if let Some(path) = &self.output {
            let io = |e| HarnessError::Io { path: path.display().to_string(), source: e };
            let file = fs::File::create(path).map_err(io)?;
            let mut w = std::io::BufWriter::new(file);
            result.write_json_lines(&mut w)?;
            std::io::Write::flush(&mut w).map_err(io)?;
        }
        Ok(())
    }
}

/// Loads, validates and runs a config file, writing its JSON-lines report
/// to the configured output path.
pub fn run_config(path: &Path) -> Result<SuiteResult, HarnessError> {
    let config = RunConfig::load(path)?;
    let result = config.execute(None)?;
    config.write_output(&result)?;
    Ok(result)
}
