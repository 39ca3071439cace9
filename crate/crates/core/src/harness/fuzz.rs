use rand::Rng;
use serde::{Deserialize, Serialize};

use super::random::{pick, trial_rng};
use super::{HarnessError, PairFamily, SuiteResult};
use crate::exprdsl::{sample_grid, BinaryOp, Expr, PiecewiseFn, RealFn, DEFAULT_GRID};
use crate::inequalities::{CheckSpec, CHECKERS, DEFAULT_LAMBDAS};
use crate::measures::{FuzzyMeasure, SupMeasureDensity};
use crate::pseudo::{Generator, Semiring};

/// A seeded sweep of one checker over one operand family. Unset
/// parameters are drawn per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSpec {
    pub family: PairFamily,
    pub checker: String,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub measure: Option<FuzzyMeasure>,
    #[serde(default)]
    pub semiring: Option<Semiring>,
}

impl FuzzSpec {
    pub fn new(family: PairFamily, checker: &str, trials: usize, seed: u64) -> Self {
        FuzzSpec { family, checker: checker.to_string(), trials, seed, s: None, phi: None, measure: None, semiring: None }
    }
}

pub fn fuzz_sweep(family: PairFamily, checker: &str, trials: usize, seed: u64) -> Result<SuiteResult, HarnessError> {
    fuzz_with(&FuzzSpec::new(family, checker, trials, seed))
}

/// Runs trial `i` with its own stream `(seed, i)`; reports come in trial order.
pub fn fuzz_with(spec: &FuzzSpec) -> Result<SuiteResult, HarnessError> {
    if spec.trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    if !CHECKERS.contains(&spec.checker.as_str()) {
        return Err(HarnessError::UnknownChecker(spec.checker.clone()));
    }
    let specs = (0..spec.trials).map(|i| {
        let mut rng = trial_rng(spec.seed, i as u64);
        let (f, h) = spec.family.sample(&mut rng);
        (format!("{}/{}/{i}", spec.family, spec.checker), trial_spec(spec, f, h, &mut rng))
    });
    Ok(SuiteResult::run_all(specs.collect::<Vec<_>>()))
}

fn power_semiring(rng: &mut impl Rng) -> Semiring {
    let p = pick(rng, &[1.0, 2.0, 3.0]);
    Semiring::generated(Generator::power(p).expect("power generator"))
}

fn shifted(f: &PiecewiseFn, by: f64) -> PiecewiseFn {
    f.map_exprs(|e| Expr::binary(BinaryOp::Add, e.clone(), Expr::constant(by))).expect("shift keeps segments valid")
}

/// Tightest ratio bounds `m ≤ f/g ≤ M` on the grid the checker verifies.
fn ratio_bounds(f: &PiecewiseFn, g: &PiecewiseFn) -> (f64, f64) {
    let mut xs = sample_grid(f, f.domain(), DEFAULT_GRID);
    xs.extend(g.knots());
    let ratios = xs.into_iter().filter_map(|x| Some(f.eval(x).ok()? / g.eval(x).ok()?));
    ratios.fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

fn trial_spec(spec: &FuzzSpec, f: PiecewiseFn, h: PiecewiseFn, rng: &mut impl Rng) -> CheckSpec {
    let s = spec.s.unwrap_or_else(|| pick(rng, &[1.5, 2.0, 3.0]));
    let measure = spec.measure.clone().unwrap_or(FuzzyMeasure::Lebesgue);
    let semiring = |rng: &mut _| spec.semiring.clone().unwrap_or_else(|| power_semiring(rng));
    match spec.checker.as_str() {
        "classical-diaz-metcalf" => {
            let (f, g) = (shifted(&f, 0.5), shifted(&h, 0.5));
            let (m, big_m) = ratio_bounds(&f, &g);
            CheckSpec::ClassicalDiazMetcalf { f, g, measure, m: m * (1.0 - 1e-9), big_m: big_m * (1.0 + 1e-9) }
        }
        "sugeno-diaz-metcalf" => CheckSpec::SugenoDiazMetcalf { f, g: h, s, measure },
        "pseudo-diaz-metcalf" => CheckSpec::PseudoDiazMetcalf { f, h, s, semiring: semiring(rng) },
        "sup-diaz-metcalf" => CheckSpec::SupDiazMetcalf {
            f,
            h,
            s,
            semiring: spec.semiring.clone().unwrap_or_else(|| {
                Semiring::sup_measure(
                    SupMeasureDensity::new(PiecewiseFn::constant(0.0, 0.0, 1.0).expect("constant density")),
                    Generator::exponential(),
                )
            }),
            lambdas: DEFAULT_LAMBDAS.to_vec(),
        },
        "phi-diaz-metcalf" => CheckSpec::PhiDiazMetcalf {
            f,
            h,
            s,
            semiring: semiring(rng),
            phi: spec.phi.clone().unwrap_or_else(|| "t^2".into()),
        },
        "pseudo-chebyshev" => CheckSpec::PseudoChebyshev { u: f, v: h, semiring: semiring(rng) },
        "stolarsky" => {
            let a = pick(rng, &[0.5, 1.0, 1.5, 2.0, 3.0]);
            let b = pick(rng, &[0.5, 1.0, 1.5, 2.0, 3.0]);
            CheckSpec::Stolarsky { f, a, b }
        }
        other => unreachable!("checker '{other}' validated above"),
    }
}
