use serde::{Deserialize, Serialize};

use super::func::{check_in_domain, locate, Func, RealFn};
use super::parser::{parse_constant, parse_expr};
use super::{EvalError, Expr, FnError};
use crate::measures::Interval;

/// One piece of a piecewise definition: an interval with explicit endpoint
/// closedness and the expression valid on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub expr: Expr,
}

impl Segment {
    pub fn closed(lo: f64, hi: f64, expr: Expr) -> Self {
        Segment { lo, hi, lo_closed: true, hi_closed: true, expr }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Interval text in the config form, e.g. `[0.25,0.5)`.
    pub fn interval_text(&self) -> String {
        format!(
            "{}{:?},{:?}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Parses `"[lo,hi)"`, `"[lo,hi]"`, `"(lo,hi)"` or `"(lo,hi]"`. Bounds may be
/// constant expressions such as `1/4`.
pub fn parse_interval(text: &str) -> Result<(f64, f64, bool, bool), FnError> {
    let bad = || FnError::BadInterval(text.to_string());
    let t = text.trim();
    let open = t.chars().next().ok_or_else(bad)?;
    let close = t.chars().last().ok_or_else(bad)?;
    let lo_closed = match open {
        '[' => true,
        '(' => false,
        _ => return Err(bad()),
    };
    let hi_closed = match close {
        ']' => true,
        ')' => false,
        _ => return Err(bad()),
    };
    let inner = &t[1..t.len() - 1];
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let lo = parse_constant(a.trim()).map_err(|_| bad())?;
    let hi = parse_constant(b.trim()).map_err(|_| bad())?;
    Ok((lo, hi, lo_closed, hi_closed))
}

/// A function on `[a, b]` given by finitely many segments that tile the
/// domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FnDef", into = "FnDef")]
pub struct PiecewiseFn {
    segments: Vec<Segment>,
    knots: Vec<f64>,
}

const PROBES_PER_SEGMENT: usize = 9;

impl PiecewiseFn {
    pub fn new(segments: Vec<Segment>) -> Result<Self, FnError> {
        let first = segments.first().ok_or(FnError::Empty)?;
        let last = segments.last().expect("nonempty");
        if !first.lo_closed {
            return Err(FnError::Gap { at: first.lo });
        }
        if !last.hi_closed {
            return Err(FnError::Gap { at: last.hi });
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.lo < s.hi) || !s.lo.is_finite() || !s.hi.is_finite() {
                return Err(FnError::Invalid(format!("segment {i} has an empty or non-finite interval")));
            }
        }
        for w in segments.windows(2) {
            if w[0].hi < w[1].lo {
                return Err(FnError::Gap { at: w[0].hi });
            }
            if w[0].hi > w[1].lo {
                return Err(FnError::Overlap { at: w[1].lo });
            }
            if !w[0].hi_closed && !w[1].lo_closed {
                return Err(FnError::Gap { at: w[0].hi });
            }
        }
        for (i, s) in segments.iter().enumerate() {
            for k in 0..PROBES_PER_SEGMENT {
                let x = s.lo + (s.hi - s.lo) * k as f64 / (PROBES_PER_SEGMENT - 1) as f64;
                if let Err(source) = s.expr.eval(x) {
                    return Err(FnError::NotFinite { segment: i, x, source });
                }
            }
        }
        let mut knots: Vec<f64> = segments.iter().map(|s| s.lo).collect();
        knots.push(last.hi);
        Ok(PiecewiseFn { segments, knots })
    }

    /// Single expression on the closed interval `[lo, hi]`.
    pub fn single(expr: Expr, lo: f64, hi: f64) -> Result<Self, FnError> {
        Self::new(vec![Segment::closed(lo, hi, expr)])
    }

    /// Parses a single expression on `[lo, hi]`.
    pub fn parse(text: &str, lo: f64, hi: f64) -> Result<Self, FnError> {
        Self::single(parse_expr(text)?, lo, hi)
    }

    /// Builds from `(interval text, expression text)` pairs.
    pub fn from_pieces(pieces: &[(&str, &str)]) -> Result<Self, FnError> {
        let segments = pieces
            .iter()
            .map(|(iv, ex)| {
                let (lo, hi, lo_closed, hi_closed) = parse_interval(iv)?;
                Ok(Segment { lo, hi, lo_closed, hi_closed, expr: parse_expr(ex)? })
            })
            .collect::<Result<Vec<_>, FnError>>()?;
        Self::new(segments)
    }

    pub fn constant(k: f64, lo: f64, hi: f64) -> Result<Self, FnError> {
        Self::single(Expr::Const(k), lo, hi)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn to_func(&self) -> Func {
        Func::new(self.clone())
    }

    /// Applies `map` to every segment expression, keeping the intervals.
    pub fn map_exprs(&self, map: impl Fn(&Expr) -> Expr) -> Result<Self, FnError> {
        Self::new(self.segments.iter().map(|s| Segment { expr: map(&s.expr), ..s.clone() }).collect())
    }
}

impl RealFn for PiecewiseFn {
    fn domain(&self) -> Interval {
        Interval::new(self.knots[0], *self.knots.last().expect("nonempty"))
    }

    fn knots(&self) -> Vec<f64> {
        self.knots.clone()
    }

    fn eval_piece(&self, piece: usize, x: f64) -> Result<f64, EvalError> {
        self.segments[piece].expr.eval(x)
    }

    fn eval(&self, x: f64) -> Result<f64, EvalError> {
        check_in_domain(self.domain(), x)?;
        let guess = locate(&self.knots, x);
        // A knot claimed by both neighbours goes to the one listed first.
        let seg = if guess > 0 && self.segments[guess - 1].contains(x) { guess - 1 } else { guess };
        self.segments[seg].expr.eval(x)
    }
}

impl From<PiecewiseFn> for Func {
    fn from(f: PiecewiseFn) -> Self {
        Func::new(f)
    }
}

/// Serialized form of a segment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentDef {
    pub interval: String,
    pub expr: String,
}

/// Config form of a function: a bare expression on `[0, 1]`, an expression
/// with an explicit domain, or an ordered list of segments.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FnDef {
    Expr(String),
    WithDomain { domain: [f64; 2], expr: String },
    Segments(Vec<SegmentDef>),
}

impl TryFrom<FnDef> for PiecewiseFn {
    type Error = FnError;

    fn try_from(def: FnDef) -> Result<Self, FnError> {
        match def {
            FnDef::Expr(text) => PiecewiseFn::parse(&text, 0.0, 1.0),
            FnDef::WithDomain { domain, expr } => PiecewiseFn::parse(&expr, domain[0], domain[1]),
            FnDef::Segments(segs) => {
                let pieces: Vec<(&str, &str)> =
                    segs.iter().map(|s| (s.interval.as_str(), s.expr.as_str())).collect();
                PiecewiseFn::from_pieces(&pieces)
            }
        }
    }
}

impl From<PiecewiseFn> for FnDef {
    fn from(f: PiecewiseFn) -> Self {
        FnDef::Segments(
            f.segments
                .iter()
                .map(|s| SegmentDef { interval: s.interval_text(), expr: s.expr.to_string() })
                .collect(),
        )
    }
}
