use serde::{Deserialize, Serialize};

use super::func::RealFn;
use super::{EvalError, FnError};
use crate::measures::Interval;

/// Default grid size for monotonicity and comonotonicity decisions.
pub const DEFAULT_GRID: usize = 257;
/// Allowed negative product in the pairwise comonotonicity test.
pub const TOL_COMONO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotonicityClass {
    StrictlyIncreasing,
    StrictlyDecreasing,
    Constant,
    NonMonotone,
}

/// Uniform grid of `n` points on `iv` merged with every knot inside it.
pub fn sample_grid<F: RealFn + ?Sized>(f: &F, iv: Interval, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { iv.hi } else { iv.lo + iv.width() * i as f64 / (n - 1) as f64 })
        .collect();
    xs.extend(f.knots().into_iter().filter(|k| *k >= iv.lo && *k <= iv.hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

pub fn classify_monotonicity<F: RealFn + ?Sized>(f: &F, grid_n: usize) -> Result<MonotonicityClass, EvalError> {
    classify_on(f, f.domain(), grid_n)
}

/// Classification restricted to a sub-interval of the domain.
pub fn classify_on<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid_n: usize,
) -> Result<MonotonicityClass, EvalError> {
    let values = sample_grid(f, iv, grid_n)
        .into_iter()
        .map(|x| f.eval(x))
        .collect::<Result<Vec<_>, _>>()?;
    let (mut up, mut down, mut flat) = (true, true, true);
    for w in values.windows(2) {
        up &= w[1] > w[0];
        down &= w[1] < w[0];
        flat &= w[1] == w[0];
    }
    Ok(if up {
        MonotonicityClass::StrictlyIncreasing
    } else if down {
        MonotonicityClass::StrictlyDecreasing
    } else if flat {
        MonotonicityClass::Constant
    } else {
        MonotonicityClass::NonMonotone
    })
}

fn paired_values<F: RealFn + ?Sized, G: RealFn + ?Sized>(
    f: &F,
    g: &G,
    grid_n: usize,
) -> Result<Vec<(f64, f64)>, FnError> {
    let (df, dg) = (f.domain(), g.domain());
    if df != dg {
        return Err(FnError::DomainMismatch { left: (df.lo, df.hi), right: (dg.lo, dg.hi) });
    }
    let mut xs = sample_grid(f, df, grid_n);
    xs.extend(g.knots());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter().map(|x| Ok((f.eval(x)?, g.eval(x)?))).collect()
}

/// `(f(x) - f(y)) (g(x) - g(y)) >= -TOL_COMONO` for every pair of grid points.
pub fn comonotone<F: RealFn + ?Sized, G: RealFn + ?Sized>(f: &F, g: &G, grid_n: usize) -> Result<bool, FnError> {
    let v = paired_values(f, g, grid_n)?;
    Ok(all_pairs(&v, |p| p >= -TOL_COMONO))
}

/// `(f(x) - f(y)) (g(x) - g(y)) <= TOL_COMONO` for every pair of grid points.
pub fn countermonotone<F: RealFn + ?Sized, G: RealFn + ?Sized>(
    f: &F,
    g: &G,
    grid_n: usize,
) -> Result<bool, FnError> {
    let v = paired_values(f, g, grid_n)?;
    Ok(all_pairs(&v, |p| p <= TOL_COMONO))
}

fn all_pairs(v: &[(f64, f64)], ok: impl Fn(f64) -> bool) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| ok((a.0 - b.0) * (a.1 - b.1))))
}
