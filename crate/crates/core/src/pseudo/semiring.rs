use serde::{Deserialize, Serialize};

use super::generator::GeneratorRepr;
use super::{Generator, PseudoError};
use crate::exprdsl::{FnDef, PiecewiseFn};
use crate::measures::SupMeasureDensity;

/// Pseudo-arithmetic context of an integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SemiringRepr", into = "SemiringRepr")]
pub enum Semiring {
    /// `x ⊕ y = g⁻¹(g(x) + g(y))`, `x ⊙ y = g⁻¹(g(x) g(y))`.
    GGenerated(Generator),
    /// Member `g^λ` of a family whose limit is idempotent: `⊕ = max`, and
    /// `⊙` generated by `g` (for `g = e^t`, ordinary `+`).
    MaxPlusFamily { gen: Generator, lambda: f64 },
    /// `⊕ = max` with the sup-measure of density `ψ` and `⊙` generated by `g`.
    SupMeasure { psi: SupMeasureDensity, gen: Generator },
}

impl Semiring {
    pub fn generated(gen: Generator) -> Self {
        Semiring::GGenerated(gen)
    }

    pub fn max_plus(lambda: f64) -> Result<Self, PseudoError> {
        Self::max_family(Generator::exponential(), lambda)
    }

    pub fn max_family(gen: Generator, lambda: f64) -> Result<Self, PseudoError> {
        check_lambda(lambda)?;
        Ok(Semiring::MaxPlusFamily { gen, lambda })
    }

    pub fn sup_measure(psi: SupMeasureDensity, gen: Generator) -> Self {
        Semiring::SupMeasure { psi, gen }
    }

    pub fn generator(&self) -> &Generator {
        match self {
            Semiring::GGenerated(g) => g,
            Semiring::MaxPlusFamily { gen, .. } | Semiring::SupMeasure { gen, .. } => gen,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Semiring::GGenerated(_) => "g",
            Semiring::MaxPlusFamily { .. } => "maxplus",
            Semiring::SupMeasure { .. } => "supmeasure",
        }
    }

    pub fn pseudo_add(&self, x: f64, y: f64) -> Result<f64, PseudoError> {
        match self {
            Semiring::GGenerated(g) => g.add(x, y),
            _ => {
                let g = self.generator();
                Ok(g.check_range(x)?.max(g.check_range(y)?))
            }
        }
    }

    pub fn pseudo_mul(&self, x: f64, y: f64) -> Result<f64, PseudoError> {
        self.generator().mul(x, y)
    }

    /// Neutral element of ⊕.
    pub fn zero(&self) -> Option<f64> {
        match self {
            Semiring::GGenerated(g) => g.zero(),
            _ => Some(self.generator().interval().0),
        }
    }

    /// Neutral element of ⊙.
    pub fn one(&self) -> Option<f64> {
        self.generator().one()
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<(), PseudoError> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(PseudoError::BadLambda(format!("λ must be positive and finite, got {lambda}")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum SemiringRepr {
    G {
        g: String,
        #[serde(default = "nonnegative")]
        interval: [Option<f64>; 2],
    },
    Maxplus {
        lambda: f64,
        #[serde(default = "exp_text")]
        g: String,
        #[serde(default = "whole_line")]
        interval: [Option<f64>; 2],
    },
    Supmeasure {
        psi: FnDef,
        #[serde(default = "exp_text")]
        g: String,
        #[serde(default = "whole_line")]
        interval: [Option<f64>; 2],
    },
}

fn nonnegative() -> [Option<f64>; 2] {
    [Some(0.0), None]
}

fn whole_line() -> [Option<f64>; 2] {
    [None, None]
}

fn exp_text() -> String {
    "exp(t)".into()
}

impl TryFrom<SemiringRepr> for Semiring {
    type Error = PseudoError;

    fn try_from(r: SemiringRepr) -> Result<Self, PseudoError> {
        match r {
            SemiringRepr::G { g, interval } => Ok(Semiring::GGenerated(GeneratorRepr { g, interval }.build()?)),
            SemiringRepr::Maxplus { lambda, g, interval } => {
                Semiring::max_family(GeneratorRepr { g, interval }.build()?, lambda)
            }
            SemiringRepr::Supmeasure { psi, g, interval } => {
                let psi = PiecewiseFn::try_from(psi)?;
                Ok(Semiring::SupMeasure { psi: SupMeasureDensity::new(psi), gen: GeneratorRepr { g, interval }.build()? })
            }
        }
    }
}

impl From<Semiring> for SemiringRepr {
    fn from(s: Semiring) -> Self {
        match s {
            Semiring::GGenerated(g) => {
                let GeneratorRepr { g, interval } = GeneratorRepr::from(&g);
                SemiringRepr::G { g, interval }
            }
            Semiring::MaxPlusFamily { gen, lambda } => {
                let GeneratorRepr { g, interval } = GeneratorRepr::from(&gen);
                SemiringRepr::Maxplus { lambda, g, interval }
            }
            Semiring::SupMeasure { psi, gen } => {
                let GeneratorRepr { g, interval } = GeneratorRepr::from(&gen);
                SemiringRepr::Supmeasure { psi: psi.psi.into(), g, interval }
            }
        }
    }
}
