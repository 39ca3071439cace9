use super::{Interval, IntervalUnion, MeasureError};
use crate::exprdsl::{EvalError, RealFn};
use crate::numeric::{falsi, piece_spans};

/// Root tolerance for level-set boundaries.
pub const TOL_ROOT: f64 = 1e-12;
const CELLS_PER_SPAN: usize = 32;

#[derive(Debug, Clone, Copy)]
struct Cell {
    piece: usize,
    lo: f64,
    hi: f64,
    flo: f64,
    fhi: f64,
    constant: bool,
}

/// Precomputed sampling of `f` over a set `A` answering `{x ∈ A : f(x) ≥ α}`
/// queries for many `α`.
///
/// Each analytic piece is cut into cells that are treated as monotone; the
/// boundary inside a straddling cell is found by bisection. Constant pieces
/// are included or excluded as a whole.
pub struct LevelSets<'a, F: ?Sized> {
    f: &'a F,
    cells: Vec<Cell>,
    edge_values: Vec<f64>,
}

impl<'a, F: RealFn + ?Sized> LevelSets<'a, F> {
    pub fn new(f: &'a F, a: &IntervalUnion) -> Result<Self, MeasureError> {
        let d = f.domain();
        if let Some(h) = a.hull() {
            if h.lo < d.lo || h.hi > d.hi {
                return Err(MeasureError::OutsideDomain { lo: d.lo, hi: d.hi });
            }
        }
        let mut cells = Vec::new();
        let mut edge_values = Vec::new();
        for span in piece_spans(&f.knots(), a, false) {
            let n = CELLS_PER_SPAN;
            let w = span.hi - span.lo;
            let xs: Vec<f64> =
                (0..=n).map(|i| if i == n { span.hi } else { span.lo + w * i as f64 / n as f64 }).collect();
            let vals = xs.iter().map(|x| f.eval_piece(span.piece, *x)).collect::<Result<Vec<_>, _>>()?;
            let constant = vals.iter().all(|v| *v == vals[0]);
            edge_values.push(vals[0]);
            edge_values.push(vals[n]);
            for i in 0..n {
                cells.push(Cell {
                    piece: span.piece,
                    lo: xs[i],
                    hi: xs[i + 1],
                    flo: vals[i],
                    fhi: vals[i + 1],
                    constant,
                });
            }
        }
        Ok(LevelSets { f, cells, edge_values })
    }

    /// Bracket of the crossing of `α` inside a straddling cell.
    fn boundary(&self, c: &Cell, alpha: f64) -> Result<(f64, f64), EvalError> {
        let v = |x| Ok::<_, EvalError>(self.f.eval_piece(c.piece, x)? - alpha);
        falsi(v, c.lo, c.hi, c.flo - alpha, c.fhi - alpha, TOL_ROOT)
    }

    /// `{f ≥ α}` restricted to one cell.
    fn cell_part(&self, c: &Cell, alpha: f64) -> Result<Option<Interval>, EvalError> {
        if c.constant {
            return Ok((c.flo >= alpha).then(|| Interval::new(c.lo, c.hi)));
        }
        let (lo_in, hi_in) = (c.flo >= alpha, c.fhi >= alpha);
        Ok(match (lo_in, hi_in) {
            (true, true) => Some(Interval::new(c.lo, c.hi)),
            (false, false) => None,
            (true, false) => {
                let (l, _) = self.boundary(c, alpha)?;
                Some(Interval::new(c.lo, l))
            }
            (false, true) => {
                let (_, h) = self.boundary(c, alpha)?;
                Some(Interval::new(h, c.hi))
            }
        })
    }

    pub fn at(&self, alpha: f64) -> Result<IntervalUnion, EvalError> {
        let mut parts = Vec::new();
        for c in &self.cells {
            if let Some(iv) = self.cell_part(c, alpha)? {
                parts.push(iv);
            }
        }
        Ok(IntervalUnion::new(parts))
    }

    /// Lebesgue length of `{f ≥ α}` without materializing the union.
    pub fn length(&self, alpha: f64) -> Result<f64, EvalError> {
        let mut total = 0.0;
        for c in &self.cells {
            if let Some(iv) = self.cell_part(c, alpha)? {
                total += iv.width();
            }
        }
        Ok(total)
    }

    /// Largest sampled value (a lower bound for `sup f` over `A`).
    pub fn max_sampled(&self) -> f64 {
        self.cells.iter().map(|c| c.flo.max(c.fhi)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_sampled(&self) -> f64 {
        self.cells.iter().map(|c| c.flo.min(c.fhi)).fold(f64::INFINITY, f64::min)
    }

    /// One-sided values of every piece at the ends of its spans.
    pub fn edge_values(&self) -> &[f64] {
        &self.edge_values
    }
}

/// `{x ∈ A : f(x) ≥ α}`.
pub fn level_set<F: RealFn + ?Sized>(f: &F, alpha: f64, a: &IntervalUnion) -> Result<IntervalUnion, MeasureError> {
    Ok(LevelSets::new(f, a)?.at(alpha)?)
}
