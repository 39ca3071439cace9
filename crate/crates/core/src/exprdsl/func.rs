use std::sync::Arc;

use super::{EvalError, FnError};
use crate::measures::Interval;

/// A real function on a closed interval that is analytic on finitely many
/// pieces.
///
/// `knots()` returns `a = k0 < k1 < ... < kn = b`; piece `i` is the open
/// interval `(k_i, k_{i+1})` and `eval_piece(i, x)` evaluates its closed form
/// anywhere on the closure. Numerical routines work piece by piece through
/// `eval_piece`, while `eval` applies the boundary conventions of the
/// concrete function.
pub trait RealFn: Send + Sync {
    fn domain(&self) -> Interval;
    fn knots(&self) -> Vec<f64>;
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError>;
    fn eval(&self, x: f64) -> Result<f64, EvalError>;
}

/// Index of the piece of `knots` whose closure contains `x`, preferring the
/// piece to the right at an interior knot.
pub(crate) fn locate(knots: &[f64], x: f64) -> usize {
    let pieces = knots.len() - 1;
    let i = knots.partition_point(|k| *k <= x);
    i.saturating_sub(1).min(pieces - 1)
}

pub(crate) fn check_in_domain(d: Interval, x: f64) -> Result<(), EvalError> {
    if x >= d.lo && x <= d.hi {
        Ok(())
    } else {
        Err(EvalError::OutOfDomain { x, lo: d.lo, hi: d.hi })
    }
}

fn merge_knots(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut k: Vec<f64> = a.iter().chain(b).copied().collect();
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

type UnaryMap = dyn Fn(f64) -> Result<f64, EvalError> + Send + Sync;
type BinaryMap = dyn Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync;

/// Shared handle to any [`RealFn`], with pointwise combinators.
#[derive(Clone)]
pub struct Func(Arc<dyn RealFn>);

impl std::fmt::Debug for Func {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.domain();
        write!(f, "Func([{}, {}], {} pieces)", d.lo, d.hi, self.knots().len() - 1)
    }
}

impl Func {
    pub fn new(f: impl RealFn + 'static) -> Self {
        Func(Arc::new(f))
    }

    /// `x ↦ op(f(x))`.
    pub fn map(&self, op: impl Fn(f64) -> Result<f64, EvalError> + Send + Sync + 'static) -> Func {
        Func::new(Mapped { inner: self.clone(), op: Box::new(op) })
    }

    /// `x ↦ op(f(x), g(x))` on the common refinement of both knot sets.
    pub fn zip(
        &self,
        other: &Func,
        op: impl Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    ) -> Result<Func, FnError> {
        let (da, db) = (self.domain(), other.domain());
        if da != db {
            return Err(FnError::DomainMismatch { left: (da.lo, da.hi), right: (db.lo, db.hi) });
        }
        let (ka, kb) = (self.knots(), other.knots());
        let knots = merge_knots(&ka, &kb);
        let pieces = knots
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (locate(&ka, mid), locate(&kb, mid))
            })
            .collect();
        Ok(Func::new(Zipped { left: self.clone(), right: other.clone(), knots, pieces, op: Box::new(op) }))
    }

    /// Ordinary power `f(x)^s` of a nonnegative function.
    pub fn powf(&self, s: f64) -> Func {
        self.map(move |v| {
            if v < 0.0 {
                return Err(EvalError::Domain { op: "pow", value: v });
            }
            Ok(if s == 1.0 { v } else { v.powf(s) })
        })
    }

    pub fn mul(&self, other: &Func) -> Result<Func, FnError> {
        self.zip(other, |a, b| Ok(a * b))
    }

    /// `x ↦ f(a + b - x)`.
    pub fn reflect(&self) -> Func {
        let d = self.domain();
        let inner = self.knots();
        let mut knots: Vec<f64> = inner.iter().rev().map(|k| d.lo + d.hi - k).collect();
        let last = knots.len() - 1;
        knots[0] = d.lo;
        knots[last] = d.hi;
        let pieces = inner.len() - 1;
        Func::new(Reparam {
            inner: self.clone(),
            knots,
            forward: Box::new(move |x| (d.lo + d.hi - x).clamp(d.lo, d.hi)),
            piece_map: Box::new(move |i| pieces - 1 - i),
            domain: d,
        })
    }

    /// `x ↦ f(x^(1/k))` for a function on a nonnegative domain, `k > 0`.
    pub fn compose_root(&self, k: f64) -> Result<Func, FnError> {
        let d = self.domain();
        if d.lo < 0.0 || k <= 0.0 || !k.is_finite() {
            return Err(FnError::Invalid(format!(
                "root reparametrisation needs a nonnegative domain and k > 0 (domain [{}, {}], k = {k})",
                d.lo, d.hi
            )));
        }
        let knots: Vec<f64> = self.knots().iter().map(|t| t.powf(k)).collect();
        let domain = Interval::new(knots[0], *knots.last().expect("nonempty"));
        let inv = 1.0 / k;
        Ok(Func::new(Reparam {
            inner: self.clone(),
            knots,
            forward: Box::new(move |x: f64| x.powf(inv).clamp(d.lo, d.hi)),
            piece_map: Box::new(|i| i),
            domain,
        }))
    }
}

impl RealFn for Func {
    fn domain(&self) -> Interval {
        self.0.domain()
    }
    fn knots(&self) -> Vec<f64> {
        self.0.knots()
    }
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        self.0.eval_piece(piece, x)
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.0.eval(x)
    }
}

struct Mapped {
    inner: Func,
    op: Box<UnaryMap>,
}

impl RealFn for Mapped {
    fn domain(&self) -> Interval {
        self.inner.domain()
    }
    fn knots(&self) -> Vec<f64> {
        self.inner.knots()
    }
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        finite((self.op)(self.inner.eval_piece(piece, x)?)?, x)
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        finite((self.op)(self.inner.eval(x)?)?, x)
    }
}

struct Zipped {
    left: Func,
    right: Func,
    knots: Vec<f64>,
    pieces: Vec<(usize, usize)>,
    op: Box<BinaryMap>,
}

impl RealFn for Zipped {
    fn domain(&self) -> Interval {
        self.left.domain()
    }
    fn knots(&self) -> Vec<f64> {
        self.knots.clone()
    }
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        let (i, j) = self.pieces[piece];
        finite((self.op)(self.left.eval_piece(i, x)?, self.right.eval_piece(j, x)?)?, x)
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        finite((self.op)(self.left.eval(x)?, self.right.eval(x)?)?, x)
    }
}

struct Reparam {
    inner: Func,
    knots: Vec<f64>,
    forward: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    piece_map: Box<dyn Fn(usize) -> usize + Send + Sync>,
    domain: Interval,
}

impl RealFn for Reparam {
    fn domain(&self) -> Interval {
        self.domain
    }
    fn knots(&self) -> Vec<f64> {
        self.knots.clone()
    }
    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        self.inner.eval_piece((self.piece_map)(piece), (self.forward)(x))
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        check_in_domain(self.domain, x)?;
        self.inner.eval((self.forward)(x))
    }
}

fn finite(v: f64, x: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { x })
    }
}

/// Wraps a plain closure as a single-piece function. Mostly for tests and
/// oracles.
pub struct ClosureFn<F> {
    domain: Interval,
    f: F,
}

impl<F: Fn(f64) -> f64 + Send + Sync> ClosureFn<F> {
    pub fn new(lo: f64, hi: f64, f: F) -> Self {
        ClosureFn { domain: Interval::new(lo, hi), f }
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> RealFn for ClosureFn<F> {
    fn domain(&self) -> Interval {
        self.domain
    }
    fn knots(&self) -> Vec<f64> {
        vec![self.domain.lo, self.domain.hi]
    }
    fn eval_piece(&self, _piece: usize, x: f64) -> Result<f64, EvalError> {
        finite((self.f)(x), x)
    }
    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        check_in_domain(self.domain, x)?;
        finite((self.f)(x), x)
    }
}
