use serde::{Deserialize, Serialize};

use super::{IntervalUnion, MeasureError};
use crate::exprdsl::{parse_expr_in, Expr, PiecewiseFn, RealFn};
use crate::numeric::{maximize, piece_spans};

const DISTORTION_PROBES: usize = 257;

/// `μ(A) = T(m(A))` for a continuous nondecreasing `T` with `T(0) = 0`,
/// validated on `[0, max_len]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distortion {
    expr: Expr,
    max_len: f64,
}

impl Distortion {
    pub fn new(expr: Expr, max_len: f64) -> Result<Self, MeasureError> {
        let invalid = |why: String| MeasureError::InvalidMeasure(format!("distortion {}: {why}", expr.display_with("t")));
        let t0 = expr.eval(0.0).map_err(|e| invalid(e.to_string()))?;
        if t0.abs() > 1e-12 {
            return Err(invalid(format!("T(0) = {t0}, expected 0")));
        }
        let mut prev = t0;
        for i in 1..DISTORTION_PROBES {
            let t = max_len * i as f64 / (DISTORTION_PROBES - 1) as f64;
            let v = expr.eval(t).map_err(|e| invalid(e.to_string()))?;
            if v < 0.0 {
                return Err(invalid(format!("negative value {v} at t = {t}")));
            }
            if v < prev - 1e-15 * prev.abs().max(1.0) {
                return Err(invalid(format!("decreasing near t = {t}")));
            }
            prev = v;
        }
        Ok(Distortion { expr, max_len })
    }

    pub fn parse(text: &str, max_len: f64) -> Result<Self, MeasureError> {
        let expr = parse_expr_in(text, "t").map_err(|e| MeasureError::InvalidMeasure(e.to_string()))?;
        Self::new(expr, max_len)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn max_len(&self) -> f64 {
        self.max_len
    }
}

/// Monotone set function on interval unions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub enum FuzzyMeasure {
    Lebesgue,
    Distorted(Distortion),
}

impl FuzzyMeasure {
    /// Square of the Lebesgue measure, validated on lengths up to `max_len`.
    pub fn lebesgue_squared(max_len: f64) -> Self {
        FuzzyMeasure::Distorted(Distortion::parse("t^2", max_len).expect("t^2 is a valid distortion"))
    }

    pub fn distorted(text: &str, max_len: f64) -> Result<Self, MeasureError> {
        Ok(FuzzyMeasure::Distorted(Distortion::parse(text, max_len)?))
    }

    /// Re-validates a distortion for sets up to length `max_len`.
    pub fn validated_for(&self, max_len: f64) -> Result<Self, MeasureError> {
        match self {
            FuzzyMeasure::Lebesgue => Ok(FuzzyMeasure::Lebesgue),
            FuzzyMeasure::Distorted(d) if d.max_len >= max_len => Ok(self.clone()),
            FuzzyMeasure::Distorted(d) => Ok(FuzzyMeasure::Distorted(Distortion::new(d.expr.clone(), max_len)?)),
        }
    }

    /// Measure of a set of total Lebesgue length `len`.
    pub fn of_length(&self, len: f64) -> Result<f64, MeasureError> {
        match self {
            FuzzyMeasure::Lebesgue => Ok(len),
            FuzzyMeasure::Distorted(d) => {
                if len > d.max_len * (1.0 + 1e-12) {
                    return Err(MeasureError::InvalidMeasure(format!(
                        "length {len} beyond the validated range [0, {}]",
                        d.max_len
                    )));
                }
                let v = d.expr.eval(len)?;
                if v < 0.0 {
                    return Err(MeasureError::InvalidMeasure(format!("negative value {v} at t = {len}")));
                }
                Ok(v)
            }
        }
    }

    pub fn measure(&self, u: &IntervalUnion) -> Result<f64, MeasureError> {
        self.of_length(u.total_length())
    }
}

pub fn measure(mu: &FuzzyMeasure, u: &IntervalUnion) -> Result<f64, MeasureError> {
    mu.measure(u)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum MeasureRepr {
    Lebesgue,
    Distorted {
        #[serde(rename = "T")]
        t: String,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        max_len: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

impl TryFrom<MeasureRepr> for FuzzyMeasure {
    type Error = MeasureError;

    fn try_from(r: MeasureRepr) -> Result<Self, MeasureError> {
        match r {
            MeasureRepr::Lebesgue => Ok(FuzzyMeasure::Lebesgue),
            MeasureRepr::Distorted { t, max_len } => FuzzyMeasure::distorted(&t, max_len),
        }
    }
}

impl From<FuzzyMeasure> for MeasureRepr {
    fn from(m: FuzzyMeasure) -> Self {
        match m {
            FuzzyMeasure::Lebesgue => MeasureRepr::Lebesgue,
            FuzzyMeasure::Distorted(d) => MeasureRepr::Distorted { t: d.expr.display_with("t").to_string(), max_len: d.max_len },
        }
    }
}

/// Density `ψ` of a sup-measure `m(A) = sup_{x ∈ A} ψ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupMeasureDensity {
    pub psi: PiecewiseFn,
}

impl SupMeasureDensity {
    pub fn new(psi: PiecewiseFn) -> Self {
        SupMeasureDensity { psi }
    }
}

/// `sup ψ` over the closure of `u` (ψ is continuous, so this is the
/// essential supremum).
pub fn ess_sup(psi: &SupMeasureDensity, u: &IntervalUnion) -> Result<f64, MeasureError> {
    if u.is_empty() {
        return Err(MeasureError::EmptySet);
    }
    let d = psi.psi.domain();
    let clipped = u.intersect_interval(d);
    if clipped != *u {
        return Err(MeasureError::OutsideDomain { lo: d.lo, hi: d.hi });
    }
    let spans = piece_spans(&psi.psi.knots(), u, true);
    Ok(maximize(&psi.psi, &spans)?.0)
}
