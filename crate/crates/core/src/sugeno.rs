//! Sugeno integrals `sup_α min(α, μ(A ∩ {f ≥ α}))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprdsl::{classify_on, EvalError, MonotonicityClass, RealFn, DEFAULT_GRID};
use crate::measures::{FuzzyMeasure, Interval, IntervalUnion, LevelSets, MeasureError};
use crate::numeric::{bisect, linspace, maximize, piece_spans};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_ORACLE_N: usize = 100_000;
const NONNEG_PROBES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Crossing,
    FixedPoint,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SugenoResult {
    pub value: f64,
    pub alpha_star: f64,
    pub method: Method,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SugenoError {
    #[error("integrand is negative ({value}) at x = {x}")]
    Negative { x: f64, value: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("oracle grid needs at least 100 points, got {0}")]
    BadGrid(usize),
    #[error("expected a {expected:?} function on [0, {a}], found {found:?}")]
    NotMonotone { expected: MonotonicityClass, found: MonotonicityClass, a: f64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn check_nonnegative<F: RealFn + ?Sized>(f: &F, a: &IntervalUnion) -> Result<(), SugenoError> {
    for s in piece_spans(&f.knots(), a, true) {
        for x in linspace(Interval::new(s.lo, s.hi), NONNEG_PROBES) {
            let v = f.eval_piece(s.piece, x)?;
            if v < 0.0 {
                return Err(SugenoError::Negative { x, value: v });
            }
        }
    }
    Ok(())
}

/// `h(α) = μ(A ∩ {f ≥ α})`.
struct LevelMeasure<'a, F: ?Sized> {
    sets: LevelSets<'a, F>,
    mu: &'a FuzzyMeasure,
}

impl<F: RealFn + ?Sized> LevelMeasure<'_, F> {
    fn h(&self, alpha: f64) -> Result<f64, SugenoError> {
        Ok(self.mu.of_length(self.sets.length(alpha)?)?)
    }
}

/// Sugeno integral of `f` over `a` by bisection on the crossing of `h(α)`
/// with `α`.
///
/// `h` is nonincreasing, so `{α : h(α) ≥ α}` is an initial segment of
/// `[0, μ(A)]`. With the final bracket `[lo, hi]` the integral lies in
/// `[max(lo, h(hi)), hi]`; the lower end is returned.
pub fn sugeno_integral<F: RealFn + ?Sized>(
    f: &F,
    a: &IntervalUnion,
    mu: &FuzzyMeasure,
    tol: f64,
) -> Result<SugenoResult, SugenoError> {
    if !(tol > 0.0) {
        return Err(SugenoError::BadTolerance(tol));
    }
    check_nonnegative(f, a)?;
    let lm = LevelMeasure { sets: LevelSets::new(f, a)?, mu };
    let top = mu.measure(a)?;
    let done = |value: f64, alpha_star: f64| SugenoResult { value, alpha_star, method: Method::Crossing, tol };
    if top == 0.0 {
        return Ok(done(0.0, 0.0));
    }
    let h_top = lm.h(top)?;
    if h_top >= top {
        return Ok(done(top, top));
    }
    let (lo, hi) = bisect(|alpha| Ok::<_, SugenoError>(lm.h(alpha)? >= alpha), 0.0, top, 0.25 * tol)?;
    let h_hi = lm.h(hi)?;
    Ok(if h_hi > lo { done(h_hi, hi) } else { done(lo, lo) })
}

/// Brute-force Sugeno integral: the maximum of `min(α, h(α))` over a
/// uniform grid of `n` levels on `[0, sup f]` together with every value `f`
/// takes at a segment end. Always a lower bound of the exact value.
pub fn sugeno_oracle<F: RealFn + ?Sized>(
    f: &F,
    a: &IntervalUnion,
    mu: &FuzzyMeasure,
    n: usize,
) -> Result<SugenoResult, SugenoError> {
    if n < 100 {
        return Err(SugenoError::BadGrid(n));
    }
    check_nonnegative(f, a)?;
    let spans = piece_spans(&f.knots(), a, true);
    let mut best = SugenoResult { value: 0.0, alpha_star: 0.0, method: Method::Oracle, tol: 0.0 };
    if spans.is_empty() {
        return Ok(best);
    }
    let (sup_f, _) = maximize(f, &spans)?;
    let lm = LevelMeasure { sets: LevelSets::new(f, a)?, mu };
    let mut levels: Vec<f64> = (0..n).map(|i| sup_f * i as f64 / (n - 1) as f64).collect();
    levels.extend(lm.sets.edge_values().iter().copied().filter(|v| *v >= 0.0));
    levels.sort_by(f64::total_cmp);
    // Levels at or below the best value cannot improve it, and once
    // h(α) ≤ best no larger level can either, since h is nonincreasing.
    for alpha in levels {
        if alpha <= best.value {
            continue;
        }
        let h = lm.h(alpha)?;
        let v = alpha.min(h);
        if v > best.value {
            best.value = v;
            best.alpha_star = alpha;
        }
        if h <= best.value {
            break;
        }
    }
    best.tol = sup_f / n as f64;
    Ok(best)
}

fn require_class<F: RealFn + ?Sized>(f: &F, a: f64, expected: MonotonicityClass) -> Result<(), SugenoError> {
    let found = classify_on(f, Interval::new(0.0, a), DEFAULT_GRID)?;
    if found != expected {
        return Err(SugenoError::NotMonotone { expected, found, a });
    }
    check_nonnegative(f, &IntervalUnion::interval(0.0, a))
}

/// Root of the strictly decreasing `d` on `[0, a]`, or `a` when `d(a) ≥ 0`.
fn decreasing_root(d: impl Fn(f64) -> Result<f64, EvalError>, a: f64, tol: f64) -> Result<f64, SugenoError> {
    if !(tol > 0.0) {
        return Err(SugenoError::BadTolerance(tol));
    }
    if d(a)? >= 0.0 {
        return Ok(a);
    }
    let (lo, hi) = bisect(|p| Ok::<_, EvalError>(d(p)? >= 0.0), 0.0, a, 1e-3 * tol)?;
    Ok(if d(lo)?.abs() <= d(hi)?.abs() { lo } else { hi })
}

/// Solves `f(a − p) = p` for a continuous strictly increasing `f ≥ 0`:
/// the Sugeno integral of `f` over `[0, a]` under Lebesgue measure.
pub fn fixed_point_increasing<F: RealFn + ?Sized>(f: &F, a: f64, tol: f64) -> Result<f64, SugenoError> {
    require_class(f, a, MonotonicityClass::StrictlyIncreasing)?;
    decreasing_root(|p| Ok(f.eval((a - p).max(0.0))? - p), a, tol)
}

/// Solves `f(p) = p` for a continuous strictly decreasing `f ≥ 0`.
pub fn fixed_point_decreasing<F: RealFn + ?Sized>(f: &F, a: f64, tol: f64) -> Result<f64, SugenoError> {
    require_class(f, a, MonotonicityClass::StrictlyDecreasing)?;
    decreasing_root(|p| Ok(f.eval(p)? - p), a, tol)
}

/// Sugeno integral over `[0, a]` under Lebesgue measure through whichever
/// fixed-point characterisation applies to `f`.
pub fn sugeno_fixed_point<F: RealFn + ?Sized>(f: &F, a: f64, tol: f64) -> Result<SugenoResult, SugenoError> {
    let p = match classify_on(f, Interval::new(0.0, a), DEFAULT_GRID)? {
        MonotonicityClass::StrictlyIncreasing => fixed_point_increasing(f, a, tol)?,
        MonotonicityClass::StrictlyDecreasing => fixed_point_decreasing(f, a, tol)?,
        found => {
            return Err(SugenoError::NotMonotone { expected: MonotonicityClass::StrictlyIncreasing, found, a });
        }
    };
    Ok(SugenoResult { value: p, alpha_star: p, method: Method::FixedPoint, tol })
}
