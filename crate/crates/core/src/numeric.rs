//! Numerical building blocks shared by the integral modules.

use crate::exprdsl::{EvalError, RealFn};
use crate::measures::{Interval, IntervalUnion};

/// Sub-interval of a union that lies inside a single analytic piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PieceSpan {
    pub piece: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Splits `union` along `knots`. Degenerate spans are dropped unless
/// `keep_points` is set.
pub fn piece_spans(knots: &[f64], union: &IntervalUnion, keep_points: bool) -> Vec<PieceSpan> {
    let mut out = Vec::new();
    for part in union.parts() {
        for (piece, w) in knots.windows(2).enumerate() {
            let lo = part.lo.max(w[0]);
            let hi = part.hi.min(w[1]);
            if lo < hi || (keep_points && lo == hi && part.lo == part.hi) {
                out.push(PieceSpan { piece, lo, hi });
            }
        }
    }
    out
}

/// Spans of the whole domain of `f`.
pub fn domain_spans<F: RealFn + ?Sized>(f: &F) -> Vec<PieceSpan> {
    let knots = f.knots();
    knots.windows(2).enumerate().map(|(piece, w)| PieceSpan { piece, lo: w[0], hi: w[1] }).collect()
}

/// Shrinks `[lo, hi]` with `pred(lo) == true`, `pred(hi) == false` until the
/// bracket is at most `tol` wide. Returns the final bracket.
pub fn bisect<E>(
    mut pred: impl FnMut(f64) -> Result<bool, E>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64), E> {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Bracketing regula falsi (Illinois variant) on `v`, where `v(lo) = v_lo`
/// and `v(hi) = v_hi` fall on opposite sides of the split `v ≥ 0` / `v < 0`.
/// Returns a bracket at most `tol` wide whose ends keep the sides of `lo` and
/// `hi`. Falls back to bisection when an endpoint stalls.
pub fn falsi<E>(
    mut v: impl FnMut(f64) -> Result<f64, E>,
    mut lo: f64,
    mut hi: f64,
    mut v_lo: f64,
    mut v_hi: f64,
    tol: f64,
) -> Result<(f64, f64), E> {
    let lo_side = v_lo >= 0.0;
    let mut last_side = 0i8;
    let mut slow = 0;
    for _ in 0..200 {
        let width = hi - lo;
        if width <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let mut x = (lo * v_hi - hi * v_lo) / (v_hi - v_lo);
        if slow >= 2 || !(x > lo && x < hi) {
            x = mid;
            slow = 0;
        }
        let vx = v(x)?;
        if (vx >= 0.0) == lo_side {
            lo = x;
            v_lo = vx;
            if last_side == -1 {
                v_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            v_hi = vx;
            if last_side == 1 {
                v_lo *= 0.5;
            }
            last_side = 1;
        }
        if hi - lo > 0.5 * width {
            slow += 1;
        } else {
            slow = 0;
        }
    }
    Ok((lo, hi))
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn golden_max(
    f: &impl Fn(f64) -> Result<f64, EvalError>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64), EvalError> {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if b - a <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (fc, c) } else { (fd, d) })
}

fn max_on_grid<F: RealFn + ?Sized>(f: &F, spans: &[PieceSpan], n: usize) -> Result<(f64, f64), EvalError> {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for s in spans {
        let eval = |x: f64| f.eval_piece(s.piece, x);
        if s.lo == s.hi {
            let v = eval(s.lo)?;
            if v > best.0 {
                best = (v, s.lo);
            }
            continue;
        }
        let h = (s.hi - s.lo) / n as f64;
        let xs = |i: usize| if i == n { s.hi } else { s.lo + h * i as f64 };
        let vals = (0..=n).map(|i| eval(xs(i))).collect::<Result<Vec<_>, _>>()?;
        let (imax, vmax) = vals
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let mut cand = (vmax, xs(imax));
        let a = xs(imax.saturating_sub(1));
        let b = xs((imax + 1).min(n));
        if b > a {
            let polished = golden_max(&eval, a, b)?;
            if polished.0 > cand.0 {
                cand = polished;
            }
        }
        if cand.0 > best.0 {
            best = cand;
        }
    }
    Ok(best)
}

/// Supremum of `f` over the closure of `spans`, by a refined grid with a
/// golden-section polish around the best cell. Returns `(sup, argmax)`.
pub fn maximize<F: RealFn + ?Sized>(f: &F, spans: &[PieceSpan]) -> Result<(f64, f64), EvalError> {
    let mut n = 32;
    let mut best = max_on_grid(f, spans, n)?;
    while n < 1 << 14 {
        n *= 2;
        let next = max_on_grid(f, spans, n)?;
        let change = (next.0 - best.0).abs();
        best = if next.0 >= best.0 { next } else { best };
        if change < 1e-9 {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("quadrature on [{lo}, {hi}] did not converge with {panels} panels")]
    NoConvergence { lo: f64, hi: f64, panels: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Largest panel count before giving up.
pub const MAX_PANELS: usize = 1 << 20;
const REL_TOL: f64 = 1e-10;
const ABS_TOL: f64 = 1e-15;

/// Composite Simpson quadrature of `f` on `[lo, hi]` with panel doubling.
///
/// The rule is applied after the substitution `x = lo + w (3u² - 2u³)`, whose
/// vanishing derivative at both ends tames algebraic endpoint singularities
/// such as `sqrt(x)` at 0. Returns the Richardson-corrected value and the
/// final panel count.
pub fn simpson(
    f: impl Fn(f64) -> Result<f64, EvalError>,
    lo: f64,
    hi: f64,
    min_panels: usize,
) -> Result<(f64, usize), QuadError> {
    let w = hi - lo;
    if w == 0.0 {
        return Ok((0.0, 0));
    }
    let phi = |u: f64| -> Result<f64, EvalError> {
        let x = (lo + w * u * u * (3.0 - 2.0 * u)).clamp(lo, hi);
        Ok(f(x)? * 6.0 * w * u * (1.0 - u))
    };
    let mut n = min_panels.max(4).next_power_of_two();
    let mut even = 0.0;
    let mut odd = 0.0;
    for k in 1..n {
        let v = phi(k as f64 / n as f64)?;
        if k % 2 == 0 {
            even += v;
        } else {
            odd += v;
        }
    }
    let mut prev = (4.0 * odd + 2.0 * even) / (3.0 * n as f64);
    let mut doublings = 0;
    loop {
        even += odd;
        n *= 2;
        odd = 0.0;
        for k in (1..n).step_by(2) {
            odd += phi(k as f64 / n as f64)?;
        }
        let cur = (4.0 * odd + 2.0 * even) / (3.0 * n as f64);
        let delta = cur - prev;
        doublings += 1;
        if doublings >= 2 && delta.abs() <= REL_TOL * cur.abs() + ABS_TOL {
            return Ok((cur + delta / 15.0, n));
        }
        if n >= MAX_PANELS {
            return Err(QuadError::NoConvergence { lo, hi, panels: n });
        }
        prev = cur;
    }
}

/// Integral of `f` over `spans`, piece by piece.
pub fn integrate_spans<F: RealFn + ?Sized>(
    f: &F,
    spans: &[PieceSpan],
    min_panels: usize,
) -> Result<(f64, usize), QuadError> {
    let mut total = 0.0;
    let mut panels = 0;
    for s in spans {
        let (v, n) = simpson(|x| f.eval_piece(s.piece, x), s.lo, s.hi, min_panels)?;
        total += v;
        panels = panels.max(n);
    }
    Ok((total, panels))
}

/// Uniform grid of `n` intervals' endpoints on `iv`.
pub fn linspace(iv: Interval, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| if i == n { iv.hi } else { iv.lo + iv.width() * i as f64 / n as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprdsl::{ClosureFn, PiecewiseFn};

    #[test]
    fn simpson_handles_sqrt_endpoint() {
        let (v, _) = simpson(|x| Ok(x.sqrt()), 0.0, 1.0, 16).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12, "{v}");
        let (v, _) = simpson(|x| Ok(x.powf(1.0 / 3.0)), 0.0, 2.0, 16).unwrap();
        assert!((v - 0.75 * 2f64.powf(4.0 / 3.0)).abs() < 1e-11, "{v}");
        let (v, _) = simpson(|x| Ok(x.exp()), -1.0, 3.0, 16).unwrap();
        assert!((v - (3f64.exp() - (-1f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn maximize_finds_interior_peak() {
        let f = ClosureFn::new(0.0, 1.0, |x| x * (1.0 - x));
        let (v, at) = maximize(&f, &domain_spans(&f)).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
        assert!((at - 0.5).abs() < 1e-6);
    }

    #[test]
    fn spans_split_on_knots() {
        let f = PiecewiseFn::from_pieces(&[("[0,0.25]", "x"), ("(0.25,0.5)", "1"), ("[0.5,1]", "x")]).unwrap();
        let u = IntervalUnion::new([Interval::new(0.1, 0.3), Interval::new(0.6, 0.6), Interval::new(0.7, 2.0)]);
        let spans = piece_spans(&f.knots(), &u, false);
        assert_eq!(
            spans,
            vec![
                PieceSpan { piece: 0, lo: 0.1, hi: 0.25 },
                PieceSpan { piece: 1, lo: 0.25, hi: 0.3 },
                PieceSpan { piece: 2, lo: 0.7, hi: 1.0 },
            ]
        );
        assert_eq!(piece_spans(&f.knots(), &u, true).len(), 4);
    }
}
