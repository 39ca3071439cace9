//! Seeded random operands.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::exprdsl::PiecewiseFn;

/// Rounds to three decimals so that printed constants parse back exactly.
fn r3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// RNG of one trial: the seed selects the key, the trial index the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Increasing shape `P(t) = Σ c t^p / Σ c` on `[0, 1]` with `P(0) = 0`, `P(1) = 1`,
/// written in terms of `t`.
fn shape(rng: &mut impl Rng, t: &str) -> String {
    let terms = rng.gen_range(1..=4);
    let mut num = Vec::new();
    let mut den = Vec::new();
    for _ in 0..terms {
        let c = r3(rng.gen_range(0.05..1.0));
        let p = r3(rng.gen_range(0.5..3.0));
        num.push(format!("{c}*{t}^{p}"));
        den.push(format!("{c}"));
    }
    format!("({})/({})", num.join(" + "), den.join(" + "))
}

fn sorted_cuts(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| r3(rng.gen_range(lo..hi))).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn assemble(knots: &[f64], exprs: &[String]) -> PiecewiseFn {
    let last = exprs.len() - 1;
    let pieces: Vec<(String, String)> = exprs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let close = if i == last { ']' } else { ')' };
            (format!("[{},{}{close}", knots[i], knots[i + 1]), e.clone())
        })
        .collect();
    let refs: Vec<(&str, &str)> = pieces.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    PiecewiseFn::from_pieces(&refs).expect("generated segments tile [0, 1]")
}

/// Continuous monotone function on `[0, 1]` with 1 to 3 segments, each a
/// normalised sum of 1 to 4 terms `c t^p` (`c > 0`, `p ∈ [0.5, 3]`), and values
/// in `[0, 1]`. Decreasing functions reflect the local parameter. With
/// `plateau`, one segment is constant.
pub fn random_monotone(rng: &mut impl Rng, increasing: bool, plateau: bool) -> PiecewiseFn {
    let segments = if plateau { rng.gen_range(2..=3) } else { rng.gen_range(1..=3) };
    let mut knots = vec![0.0];
    knots.extend(sorted_cuts(rng, segments - 1, 0.1, 0.9));
    knots.push(1.0);
    let segments = knots.len() - 1;
    let rising = if plateau { segments - 1 } else { segments };
    let lo = r3(rng.gen_range(0.0..0.3));
    let hi = r3(rng.gen_range(0.7..1.0));
    let mut levels = vec![lo];
    levels.extend(sorted_cuts(rng, rising - 1, lo + 0.01, hi - 0.01));
    levels.push(hi);
    while levels.len() < rising + 1 {
        levels.insert(1, r3(0.5 * (levels[0] + levels[1])));
    }
    if plateau {
        let i = rng.gen_range(0..segments);
        levels.insert(i, levels[i]);
    }
    if !increasing {
        levels.reverse();
    }
    let exprs: Vec<String> = (0..segments)
        .map(|i| {
            let (a, b) = (knots[i], knots[i + 1]);
            let (ya, yb) = (levels[i], levels[i + 1]);
            let w = r3(b - a);
            if ya == yb {
                format!("{ya}")
            } else if increasing {
                let t = format!("abs((x - {a})/{w})");
                format!("{ya} + {}*{}", r3(yb - ya), shape(rng, &t))
            } else {
                let t = format!("abs(({b} - x)/{w})");
                format!("{yb} + {}*{}", r3(ya - yb), shape(rng, &t))
            }
        })
        .collect();
    assemble(&knots, &exprs)
}

/// Nonnegative piecewise function on `[0, 1]` of polynomial and root
/// segments, not necessarily monotone or continuous.
pub fn random_piecewise(rng: &mut impl Rng) -> PiecewiseFn {
    let mut knots = vec![0.0];
    let segments = rng.gen_range(1..=3);
    knots.extend(sorted_cuts(rng, segments - 1, 0.1, 0.9));
    knots.push(1.0);
    let exprs: Vec<String> = (0..knots.len() - 1)
        .map(|_| {
            let c0 = r3(rng.gen_range(0.0..1.0));
            let c1 = r3(rng.gen_range(-1.0..1.0));
            if rng.gen_bool(0.5) {
                let c2 = r3(rng.gen_range(-1.0..1.0));
                format!("abs({c0} + {c1}*x + {c2}*x^2)")
            } else {
                let k = r3(rng.gen_range(0.0..1.0));
                let p = r3(rng.gen_range(0.3..2.0));
                format!("abs({c0} + {c1}*abs(x - {k})^{p})")
            }
        })
        .collect();
    assemble(&knots, &exprs)
}

/// Smooth function on `[0, 1]` bounded below by 0.2: a bump on a linear trend.
pub fn random_smooth_positive(rng: &mut impl Rng) -> PiecewiseFn {
    let a = r3(rng.gen_range(0.2..0.5));
    let b = r3(rng.gen_range(0.0..0.5));
    let c = r3(rng.gen_range(0.5..6.0));
    let d = r3(rng.gen_range(0.0..0.3));
    let k = r3(rng.gen_range(0.0..1.0));
    PiecewiseFn::parse(&format!("{a} + {b}*exp(-{c}*(x - {k})^2) + {d}*x"), 0.0, 1.0)
        .expect("smooth positive function parses")
}

/// Operand families for randomized sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairFamily {
    MonotoneIncreasingPair,
    MonotoneDecreasingPair,
    CountermonotonePair,
    PlateauPair,
}

impl PairFamily {
    pub const ALL: [PairFamily; 4] = [
        PairFamily::MonotoneIncreasingPair,
        PairFamily::MonotoneDecreasingPair,
        PairFamily::CountermonotonePair,
        PairFamily::PlateauPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairFamily::MonotoneIncreasingPair => "monotone-increasing-pair",
            PairFamily::MonotoneDecreasingPair => "monotone-decreasing-pair",
            PairFamily::CountermonotonePair => "countermonotone-pair",
            PairFamily::PlateauPair => "plateau-pair",
        }
    }

    pub fn sample(self, rng: &mut impl Rng) -> (PiecewiseFn, PiecewiseFn) {
        match self {
            PairFamily::MonotoneIncreasingPair => (random_monotone(rng, true, false), random_monotone(rng, true, false)),
            PairFamily::MonotoneDecreasingPair => {
                (random_monotone(rng, false, false), random_monotone(rng, false, false))
            }
            PairFamily::CountermonotonePair => {
                let up = random_monotone(rng, true, false);
                let down = random_monotone(rng, false, false);
                if rng.gen_bool(0.5) {
                    (up, down)
                } else {
                    (down, up)
                }
            }
            PairFamily::PlateauPair => {
                let increasing = rng.gen_bool(0.5);
                (random_monotone(rng, increasing, true), random_monotone(rng, increasing, true))
            }
        }
    }
}

impl fmt::Display for PairFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairFamily {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        PairFamily::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| HarnessError::UnknownFamily(s.to_string()))
    }
}

/// Uniform choice from a slice.
pub(crate) fn pick<T: Copy>(rng: &mut impl Rng, items: &[T]) -> T {
    *items.choose(rng).expect("nonempty choice")
}
