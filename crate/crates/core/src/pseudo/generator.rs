use serde::{Deserialize, Serialize};

use super::PseudoError;
use crate::exprdsl::{parse_expr_in, BinaryOp, Expr, UnaryOp};

/// Inverse tolerance for generators without a closed-form inverse.
pub const TOL_INV: f64 = 1e-12;
const MONO_PROBES: usize = 257;
const INVERSE_PROBES: usize = 100;

/// Closed-form families recognised from the generator's expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `t^p`
    Power(f64),
    /// `exp(p t)`
    Exp(f64),
    General,
}

fn recognise(e: &Expr) -> Family {
    match e {
        Expr::Var => Family::Power(1.0),
        Expr::Pow(b, p) if **b == Expr::Var => Family::Power(p.value()),
        Expr::Unary(UnaryOp::Exp, inner) => match &**inner {
            Expr::Var => Family::Exp(1.0),
            Expr::Binary(BinaryOp::Mul, a, b) => match (&**a, &**b) {
                (Expr::Const(p), Expr::Var) | (Expr::Var, Expr::Const(p)) => Family::Exp(*p),
                _ => Family::General,
            },
            _ => Family::General,
        },
        _ => Family::General,
    }
}

/// Continuous strictly monotone `g : [lo, hi] → [0, ∞)` generating a
/// pseudo-addition and pseudo-multiplication. Either end may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    expr: Expr,
    lo: f64,
    hi: f64,
    family: Family,
    increasing: bool,
}

impl Generator {
    pub fn new(expr: Expr, lo: f64, hi: f64) -> Result<Self, PseudoError> {
        let text = expr.display_with("t").to_string();
        let invalid = |why: String| PseudoError::InvalidGenerator(format!("g(t) = {text} on [{lo}, {hi}]: {why}"));
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(invalid("empty value interval".into()));
        }
        let family = recognise(&expr);
        match family {
            Family::Power(p) if p == 0.0 => return Err(invalid("exponent 0 is not monotone".into())),
            Family::Power(p) if lo < 0.0 || (p < 0.0 && lo <= 0.0) => {
                return Err(invalid("power generators need a positive value interval".into()));
            }
            Family::Exp(p) if p == 0.0 => return Err(invalid("exp(0 t) is not monotone".into())),
            Family::General if !lo.is_finite() || !hi.is_finite() => {
                return Err(invalid("only closed-form generators may have infinite ends".into()));
            }
            _ => {}
        }
        let increasing = match family {
            Family::Power(p) | Family::Exp(p) => p > 0.0,
            Family::General => expr.eval(hi).map_err(|e| invalid(e.to_string()))? > expr.eval(lo).map_err(|e| invalid(e.to_string()))?,
        };
        let g = Generator { expr, lo, hi, family, increasing };
        let (plo, phi) = g.probe_interval();
        let probes: Vec<f64> =
            (0..MONO_PROBES).map(|i| plo + (phi - plo) * i as f64 / (MONO_PROBES - 1) as f64).collect();
        let mut prev: Option<f64> = None;
        for &t in &probes {
            let v = g.expr.eval(t).map_err(|e| invalid(e.to_string()))?;
            if v < 0.0 {
                return Err(invalid(format!("negative value {v} at t = {t}")));
            }
            if let Some(p) = prev {
                if (g.increasing && v <= p) || (!g.increasing && v >= p) {
                    return Err(invalid(format!("not strictly monotone near t = {t}")));
                }
            }
            prev = Some(v);
        }
        for i in 0..INVERSE_PROBES {
            let t = plo + (phi - plo) * (i as f64 + 0.5) / INVERSE_PROBES as f64;
            let back = g.inverse(g.apply(t)?)?;
            if (back - t).abs() > 1e-9 * t.abs().max(1.0) {
                return Err(invalid(format!("inverse round trip gives {back} for t = {t}")));
            }
        }
        Ok(g)
    }

    /// Parses `text` in the variable `t`.
    pub fn parse(text: &str, lo: f64, hi: f64) -> Result<Self, PseudoError> {
        Self::new(parse_expr_in(text, "t")?, lo, hi)
    }

    /// `g(t) = t` on `[0, ∞)`.
    pub fn identity() -> Self {
        Self::parse("t", 0.0, f64::INFINITY).expect("identity generator")
    }

    /// `g(t) = t^p` on `[0, ∞)`.
    pub fn power(p: f64) -> Result<Self, PseudoError> {
        Self::new(Expr::pow(Expr::Var, crate::exprdsl::Exponent::from_f64(p)), 0.0, f64::INFINITY)
    }

    /// `g(t) = e^t` on the whole line, whose powers give the max-plus family.
    pub fn exponential() -> Self {
        Self::parse("exp(t)", f64::NEG_INFINITY, f64::INFINITY).expect("exponential generator")
    }

    /// Finite window of the value interval used for validation probes.
    fn probe_interval(&self) -> (f64, f64) {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo + 20.0),
            (false, true) => (self.hi - 20.0, self.hi),
            (false, false) => (-10.0, 10.0),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub(crate) fn check_range(&self, t: f64) -> Result<f64, PseudoError> {
        let slack = if t.is_finite() { 1e-12 * t.abs().max(1.0) } else { 0.0 };
        if t.is_nan() || t < self.lo - slack || t > self.hi + slack {
            return Err(PseudoError::Range { value: t, lo: self.lo, hi: self.hi });
        }
        Ok(t.clamp(self.lo, self.hi))
    }

    /// `g(t)` without range checks.
    pub(crate) fn raw(&self, t: f64) -> f64 {
        match self.family {
            Family::Power(p) if p == 1.0 => t,
            Family::Power(p) if p == p.trunc() && p.abs() <= 64.0 => t.powi(p as i32),
            Family::Power(p) => t.powf(p),
            Family::Exp(p) => (p * t).exp(),
            Family::General => self.expr.eval(t).unwrap_or(f64::NAN),
        }
    }

    pub fn apply(&self, t: f64) -> Result<f64, PseudoError> {
        let t = self.check_range(t)?;
        let v = match self.family {
            Family::General => self.expr.eval(t)?,
            _ => self.raw(t),
        };
        if v.is_nan() {
            return Err(PseudoError::Range { value: t, lo: self.lo, hi: self.hi });
        }
        Ok(v)
    }

    /// `ln g(t)`, exact for the closed-form families.
    pub fn ln_apply(&self, t: f64) -> Result<f64, PseudoError> {
        let t = self.check_range(t)?;
        Ok(match self.family {
            Family::Power(p) => p * t.ln(),
            Family::Exp(p) => p * t,
            Family::General => self.expr.eval(t)?.ln(),
        })
    }

    /// Values g takes at the two ends of the interval (in the closed-form
    /// cases the limits, possibly 0 or ∞).
    fn end_values(&self) -> (f64, f64) {
        (self.raw(self.lo), self.raw(self.hi))
    }

    /// `g⁻¹(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64, PseudoError> {
        if y.is_nan() || y < 0.0 {
            return Err(PseudoError::InverseRange { y });
        }
        let t = match self.family {
            Family::Power(p) if p == 1.0 => y,
            Family::Power(p) if p == 2.0 => y.sqrt(),
            Family::Power(p) => y.powf(1.0 / p),
            Family::Exp(p) => y.ln() / p,
            Family::General => self.general_inverse(|t| self.raw(t), y)?,
        };
        self.check_range(t)
    }

    /// `g⁻¹(exp(l))`, for values of `g` too large or small to represent.
    pub fn inverse_ln(&self, l: f64) -> Result<f64, PseudoError> {
        let t = match self.family {
            Family::Power(p) => (l / p).exp(),
            Family::Exp(p) => l / p,
            Family::General => self.general_inverse(|t| self.raw(t).ln(), l)?,
        };
        self.check_range(t)
    }

    fn general_inverse(&self, g: impl Fn(f64) -> f64, y: f64) -> Result<f64, PseudoError> {
        let (ga, gb) = (g(self.lo), g(self.hi));
        let (min, max) = if self.increasing { (ga, gb) } else { (gb, ga) };
        let slack = 1e-12 * y.abs().max(1.0);
        if y < min - slack || y > max + slack {
            return Err(PseudoError::InverseRange { y });
        }
        let (mut lo, mut hi) = (self.lo, self.hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= TOL_INV * (1.0 + mid.abs()) || mid <= lo || mid >= hi {
                break;
            }
            if (g(mid) < y) == self.increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Range of `g` over the value interval.
    pub fn range(&self) -> (f64, f64) {
        let (a, b) = self.end_values();
        if self.increasing {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn add(&self, x: f64, y: f64) -> Result<f64, PseudoError> {
        self.inverse(self.apply(x)? + self.apply(y)?)
    }

    pub fn mul(&self, x: f64, y: f64) -> Result<f64, PseudoError> {
        self.inverse(self.apply(x)? * self.apply(y)?)
    }

    /// `g⁻¹(g(x) g(y))` evaluated through logarithms, with no range check
    /// on the inputs.
    pub(crate) fn mul_unchecked(&self, x: f64, y: f64) -> f64 {
        match self.family {
            Family::Power(_) => x * y,
            Family::Exp(_) => x + y,
            Family::General => self.inverse(self.raw(x) * self.raw(y)).unwrap_or(f64::NAN),
        }
    }

    /// Neutral element of ⊕, when g attains 0.
    pub fn zero(&self) -> Option<f64> {
        let (min, _) = self.range();
        (min == 0.0).then(|| if self.increasing { self.lo } else { self.hi })
    }

    /// Neutral element of ⊙, when g attains 1.
    pub fn one(&self) -> Option<f64> {
        self.inverse(1.0).ok()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GeneratorRepr {
    pub g: String,
    #[serde(default = "default_interval")]
    pub interval: [Option<f64>; 2],
}

fn default_interval() -> [Option<f64>; 2] {
    [Some(0.0), None]
}

impl GeneratorRepr {
    pub fn build(&self) -> Result<Generator, PseudoError> {
        let lo = self.interval[0].unwrap_or(f64::NEG_INFINITY);
        let hi = self.interval[1].unwrap_or(f64::INFINITY);
        Generator::parse(&self.g, lo, hi)
    }
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&Generator> for GeneratorRepr {
    fn from(g: &Generator) -> Self {
        GeneratorRepr {
            g: g.expr.display_with("t").to_string(),
            interval: [finite_or_none(g.lo), finite_or_none(g.hi)],
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GeneratorRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GeneratorRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
