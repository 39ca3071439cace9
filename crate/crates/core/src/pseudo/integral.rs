use serde::{Deserialize, Serialize};

use super::semiring::check_lambda;
use super::{Generator, PseudoError, Semiring};
use crate::exprdsl::{EvalError, Func, RealFn};
use crate::measures::{Interval, IntervalUnion};
use crate::numeric::{domain_spans, linspace, maximize, piece_spans, simpson, PieceSpan};

/// Smallest panel count accepted for a segment.
pub const MIN_PANELS: usize = 16;
const RANGE_PROBES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoIntegralResult {
    pub value: f64,
    pub quadrature_n: usize,
    pub semiring: Semiring,
}

/// `x ↦ op(f(x))` borrowing `f`, for quadrature and maximisation.
struct Composed<'a, F: ?Sized> {
    f: &'a F,
    op: &'a (dyn Fn(f64) -> f64 + Sync),
}

impl<F: RealFn + ?Sized> RealFn for Composed<'_, F> {
    fn domain(&self) -> Interval {
        self.f.domain()
    }
    fn knots(&self) -> Vec<f64> {
        self.f.knots()
    }
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        Ok((self.op)(self.f.eval_piece(piece, x)?))
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        Ok((self.op)(self.f.eval(x)?))
    }
}

fn spans_of<F: RealFn + ?Sized>(f: &F, iv: Interval) -> Result<Vec<PieceSpan>, PseudoError> {
    let d = f.domain();
    if iv.lo < d.lo || iv.hi > d.hi || !(iv.lo <= iv.hi) {
        return Err(PseudoError::Interval { lo: iv.lo, hi: iv.hi, dlo: d.lo, dhi: d.hi });
    }
    Ok(piece_spans(&f.knots(), &IntervalUnion::from(iv), false))
}

/// Verifies on a grid that `f` takes values in the generator's interval.
fn check_values<F: RealFn + ?Sized>(gen: &Generator, f: &F, spans: &[PieceSpan]) -> Result<(), PseudoError> {
    for s in spans {
        for x in linspace(Interval::new(s.lo, s.hi), RANGE_PROBES) {
            gen.check_range(f.eval_piece(s.piece, x)?)?;
        }
    }
    Ok(())
}

fn check_panels(n: usize) -> Result<(), PseudoError> {
    if n < MIN_PANELS {
        return Err(PseudoError::BadPanels(n));
    }
    Ok(())
}

/// `∫ g(f)` over spans and the largest panel count used.
fn integrate_g<F: RealFn + ?Sized>(
    gen: &Generator,
    f: &F,
    spans: &[PieceSpan],
    n: usize,
) -> Result<(f64, usize), PseudoError> {
    let mut total = 0.0;
    let mut panels = 0;
    for s in spans {
        let (v, k) = simpson(|x| Ok(gen.raw(f.eval_piece(s.piece, x)?.clamp(gen.interval().0, gen.interval().1))), s.lo, s.hi, n)?;
        total += v;
        panels = panels.max(k);
    }
    if !total.is_finite() {
        return Err(PseudoError::Overflow);
    }
    Ok((total, panels))
}

/// `g⁻¹(∫_c^d g(f(x)) dx)` for a generated semiring.
pub fn g_integral<F: RealFn + ?Sized>(
    sr: &Semiring,
    f: &F,
    interval: Interval,
    n: usize,
) -> Result<PseudoIntegralResult, PseudoError> {
    let Semiring::GGenerated(gen) = sr else {
        return Err(PseudoError::WrongSemiring { expected: "g", found: sr.kind() });
    };
    check_panels(n)?;
    let spans = spans_of(f, interval)?;
    check_values(gen, f, &spans)?;
    let (total, quadrature_n) = integrate_g(gen, f, &spans, n)?;
    Ok(PseudoIntegralResult { value: gen.inverse(total)?, quadrature_n, semiring: sr.clone() })
}

/// `sup_x (f(x) ⊙ ψ(x))` over the common domain.
pub fn sup_integral(f: &Func, sr: &Semiring) -> Result<PseudoIntegralResult, PseudoError> {
    let Semiring::SupMeasure { psi, gen } = sr else {
        return Err(PseudoError::WrongSemiring { expected: "supmeasure", found: sr.kind() });
    };
    let spans = domain_spans(f);
    check_values(gen, f, &spans)?;
    let psi_f = psi.psi.to_func();
    check_values(gen, &psi_f, &domain_spans(&psi_f))?;
    let g = gen.clone();
    let prod = f.zip(&psi_f, move |a, b| Ok(g.mul_unchecked(a, b)))?;
    let (sup, _) = maximize(&prod, &domain_spans(&prod))?;
    Ok(PseudoIntegralResult { value: gen.check_range(sup)?, quadrature_n: 0, semiring: sr.clone() })
}

/// The `g^λ`-integral `(g^λ)⁻¹(∫ g(f)^λ)`, evaluated as
/// `g⁻¹(exp((L + ln ∫ exp(λ ln g(f) − L)) / λ))` with `L = λ max ln g(f)`.
fn lambda_integral<F: RealFn + ?Sized>(
    gen: &Generator,
    f: &F,
    spans: &[PieceSpan],
    lambda: f64,
    n: usize,
) -> Result<(f64, usize), PseudoError> {
    let (lo, hi) = gen.interval();
    let ln_g = |v: f64| gen.ln_apply(v.clamp(lo, hi)).unwrap_or(f64::NAN);
    let lg = Composed { f, op: &ln_g };
    let peaks = spans.iter().map(|s| maximize(&lg, std::slice::from_ref(s))).collect::<Result<Vec<_>, _>>()?;
    let peak = peaks.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY || spans.is_empty() {
        return Ok((gen.zero().ok_or(PseudoError::Overflow)?, 0));
    }
    if !peak.is_finite() {
        return Err(PseudoError::Overflow);
    }
    let shift = lambda * peak;
    let mut total = 0.0;
    let mut panels = 0;
    for (s, &(_, at)) in spans.iter().zip(&peaks) {
        for (lo, hi) in graded_pieces(s.lo, s.hi, at, 1e-3 / lambda) {
            let (v, k) = simpson(|x| Ok((lambda * lg.eval_piece(s.piece, x)? - shift).exp()), lo, hi, n)?;
            total += v;
            panels = panels.max(k);
        }
    }
    Ok((gen.inverse_ln((shift + total.ln()) / lambda)?, panels))
}

/// Cuts `[lo, hi]` at `c` and at `c ± (hi − lo) 4^-k` down to `min_width`,
/// so a peak of width about `1/λ` at `c` is resolved.
fn graded_pieces(lo: f64, hi: f64, c: f64, min_width: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![lo, hi, c.clamp(lo, hi)];
    let mut d = hi - lo;
    while d >= min_width {
        d *= 0.25;
        cuts.extend([c - d, c + d].into_iter().filter(|x| *x > lo && *x < hi));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect()
}

/// `g^λ`-integrals of `f` over `interval` for an increasing list of `λ`.
/// As `λ → ∞` they approach the sup-integral with the neutral density.
pub fn lambda_limit_integral<F: RealFn + ?Sized>(
    gen: &Generator,
    f: &F,
    interval: Interval,
    lambdas: &[f64],
) -> Result<Vec<f64>, PseudoError> {
    let spans = spans_of(f, interval)?;
    check_values(gen, f, &spans)?;
    for (i, &l) in lambdas.iter().enumerate() {
        check_lambda(l)?;
        if i > 0 && l <= lambdas[i - 1] {
            return Err(PseudoError::BadLambda(format!("λ schedule must increase, got {} after {}", l, lambdas[i - 1])));
        }
    }
    lambdas.iter().map(|&l| Ok(lambda_integral(gen, f, &spans, l, MIN_PANELS)?.0)).collect()
}

/// Pseudo-integral of `f` over `interval` in any semiring: the g-integral,
/// the `g^λ`-integral, or the sup-integral restricted to the interval.
pub fn pseudo_integral(sr: &Semiring, f: &Func, interval: Interval, n: usize) -> Result<PseudoIntegralResult, PseudoError> {
    match sr {
        Semiring::GGenerated(_) => g_integral(sr, f, interval, n),
        Semiring::MaxPlusFamily { gen, lambda } => {
            check_panels(n)?;
            let spans = spans_of(f, interval)?;
            check_values(gen, f, &spans)?;
            let (value, quadrature_n) = lambda_integral(gen, f, &spans, *lambda, n)?;
            Ok(PseudoIntegralResult { value, quadrature_n, semiring: sr.clone() })
        }
        Semiring::SupMeasure { psi, gen } => {
            let spans = spans_of(f, interval)?;
            check_values(gen, f, &spans)?;
            let psi_f = psi.psi.to_func();
            let g = gen.clone();
            let prod = f.zip(&psi_f, move |a, b| Ok(g.mul_unchecked(a, b)))?;
            let spans = piece_spans(&prod.knots(), &IntervalUnion::from(interval), true);
            let (sup, _) = maximize(&prod, &spans)?;
            Ok(PseudoIntegralResult { value: gen.check_range(sup)?, quadrature_n: 0, semiring: sr.clone() })
        }
    }
}
