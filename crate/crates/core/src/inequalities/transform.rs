use super::CheckError;
use crate::exprdsl::{parse_expr_in, EvalError, Expr};
use crate::pseudo::Generator;

const PROBES: usize = 257;
const COMMUTE_PROBES: usize = 100;

/// Continuous strictly increasing map `φ` of a value interval into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    expr: Expr,
    lo: f64,
    hi: f64,
}

/// Finite part of `[lo, hi]` used for probing.
fn window(lo: f64, hi: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + 4.0),
        (false, true) => (hi - 4.0, hi),
        (false, false) => (-2.0, 2.0),
    }
}

impl Transform {
    pub fn parse(text: &str, lo: f64, hi: f64) -> Result<Self, CheckError> {
        let expr = parse_expr_in(text, "t").map_err(|e| CheckError::Precondition(format!("φ(t) = {text}: {e}")))?;
        let phi = Transform { expr, lo, hi };
        let (a, b) = window(lo, hi);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..PROBES {
            let t = a + (b - a) * i as f64 / (PROBES - 1) as f64;
            let v = phi.apply(t)?;
            if v <= prev {
                return Err(CheckError::Precondition(format!("φ(t) = {text} is not strictly increasing near t = {t}")));
            }
            if v < lo || v > hi {
                return Err(CheckError::Precondition(format!("φ(t) = {text} leaves [{lo}, {hi}] at t = {t}")));
            }
            prev = v;
        }
        Ok(phi)
    }

    pub fn is_identity(&self) -> bool {
        self.expr == Expr::Var
    }

    pub fn text(&self) -> String {
        self.expr.display_with("t").to_string()
    }

    pub fn apply(&self, t: f64) -> Result<f64, EvalError> {
        self.expr.eval(t)
    }

    /// `φ⁻¹(y)` by bisection, widening the bracket on infinite ends.
    pub fn inverse(&self, y: f64) -> Result<f64, CheckError> {
        if self.is_identity() {
            return Ok(y);
        }
        let (mut a, mut b) = window(self.lo, self.hi);
        while self.apply(a)? > y {
            if a <= self.lo || !a.is_finite() {
                return Err(CheckError::Precondition(format!("{y} is below the range of φ")));
            }
            a = (a - 2.0 * (b - a)).max(self.lo);
        }
        while self.apply(b)? < y {
            if b >= self.hi || !b.is_finite() {
                return Err(CheckError::Precondition(format!("{y} is above the range of φ")));
            }
            b = (b + 2.0 * (b - a)).min(self.hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if b - a <= 1e-14 * (1.0 + mid.abs()) || mid <= a || mid >= b {
                break;
            }
            if self.apply(mid)? < y {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Checks `φ(x ⊙ y) = φ(x) ⊙ φ(y)` on probe pairs from the interval.
    pub fn check_commutes(&self, gen: &Generator) -> Result<(), CheckError> {
        let (a, b) = window(self.lo, self.hi);
        let side = (COMMUTE_PROBES as f64).sqrt().ceil() as usize;
        for i in 0..side {
            for j in 0..side {
                let x = a + (b - a) * (i as f64 + 0.5) / side as f64;
                let y = a + (b - a) * (j as f64 + 0.5) / side as f64;
                let Ok(xy) = gen.mul(x, y) else { continue };
                let left = self.apply(xy)?;
                let Ok(right) = gen.mul(self.apply(x)?, self.apply(y)?) else {
                    return Err(CheckError::Precondition(format!("φ(x) ⊙ φ(y) undefined at x = {x}, y = {y}")));
                };
                if (left - right).abs() > 1e-9 * left.abs().max(1.0) {
                    return Err(CheckError::Precondition(format!(
                        "φ(t) = {} does not commute with ⊙ at x = {x}, y = {y}: {left} vs {right}",
                        self.text()
                    )));
                }
            }
        }
        Ok(())
    }
}
