//! Level sets as interval unions, and fuzzy measures evaluated on them.

mod interval;
mod level;
mod measure;

use thiserror::Error;

use crate::exprdsl::EvalError;

pub use interval::{Interval, IntervalUnion};
pub use level::{level_set, LevelSets, TOL_ROOT};
pub use measure::{ess_sup, measure, Distortion, FuzzyMeasure, SupMeasureDensity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("set extends outside the function domain [{lo}, {hi}]")]
    OutsideDomain { lo: f64, hi: f64 },
    #[error("supremum over the empty set is undefined")]
    EmptySet,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprdsl::{PiecewiseFn, RealFn};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn unit() -> IntervalUnion {
        IntervalUnion::interval(0.0, 1.0)
    }

    #[test]
    fn union_normalizes() {
        let u = IntervalUnion::new([
            Interval::new(0.5, 0.7),
            Interval::new(0.0, 0.2),
            Interval::new(0.2, 0.3),
            Interval::new(0.6, 0.9),
            Interval::new(1.0, 0.5),
        ]);
        assert_eq!(u.parts(), &[Interval::new(0.0, 0.3), Interval::new(0.5, 0.9)]);
        assert!(close(u.total_length(), 0.7, 1e-15));
        assert!(u.contains(0.25) && !u.contains(0.4));
        let v = IntervalUnion::interval(0.25, 0.6);
        assert_eq!(u.intersect(&v).parts(), &[Interval::new(0.25, 0.3), Interval::new(0.5, 0.6)]);
        assert!(u.union(&v).is_superset_of(&u));
        assert!(!v.is_superset_of(&u));
    }

    #[test]
    fn level_set_examples() {
        let f = PiecewiseFn::parse("x^2/4", 0.0, 1.0).unwrap();
        let ls = level_set(&f, 0.04, &unit()).unwrap();
        assert_eq!(ls.parts().len(), 1);
        assert!(close(ls.parts()[0].lo, 0.4, 1e-11) && ls.parts()[0].hi == 1.0);

        let g = PiecewiseFn::parse("x^3", 0.0, 1.0).unwrap();
        assert_eq!(level_set(&g, 0.0, &unit()).unwrap(), unit());

        let g2 = PiecewiseFn::from_pieces(&[("[0,1/2)", "x^2"), ("[1/2,1]", "x")]).unwrap();
        let ls = level_set(&g2, 0.25, &unit()).unwrap();
        assert_eq!(ls.parts().len(), 1);
        assert!(close(ls.parts()[0].lo, 0.5, 1e-11) && ls.parts()[0].hi == 1.0);

        // plateau included whole at its own value
        let f2 = PiecewiseFn::from_pieces(&[("[0,1/4]", "x"), ("(1/4,1/2)", "1/2"), ("[1/2,1]", "x")]).unwrap();
        let ls = level_set(&f2, 0.5, &unit()).unwrap();
        assert!(close(ls.total_length(), 0.75, 1e-12));
        let ls = level_set(&f2, 0.5 + 1e-9, &unit()).unwrap();
        assert!(close(ls.total_length(), 0.5 - 1e-9, 1e-11));
    }

    #[test]
    fn level_set_rejects_sets_outside_domain() {
        let f = PiecewiseFn::parse("x", 0.0, 1.0).unwrap();
        assert!(matches!(
            level_set(&f, 0.5, &IntervalUnion::interval(0.5, 1.5)),
            Err(MeasureError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn measure_examples() {
        let half = IntervalUnion::interval(0.25, 0.75);
        assert_eq!(measure(&FuzzyMeasure::Lebesgue, &half).unwrap(), 0.5);
        let sq = FuzzyMeasure::lebesgue_squared(1.0);
        assert_eq!(measure(&sq, &IntervalUnion::interval(0.25, 1.0)).unwrap(), 9.0 / 16.0);
        for mu in [FuzzyMeasure::Lebesgue, sq] {
            assert_eq!(measure(&mu, &IntervalUnion::empty()).unwrap(), 0.0);
        }
    }

    #[test]
    fn invalid_distortions_are_rejected() {
        assert!(matches!(FuzzyMeasure::distorted("t+1", 1.0), Err(MeasureError::InvalidMeasure(_))));
        assert!(matches!(FuzzyMeasure::distorted("t-t^2", 1.0), Err(MeasureError::InvalidMeasure(_))));
        assert!(matches!(FuzzyMeasure::distorted("neg(t)", 1.0), Err(MeasureError::InvalidMeasure(_))));
        let ok = FuzzyMeasure::distorted("2*t - t^2", 1.0).unwrap();
        assert!(ok.validated_for(2.0).is_err());
        assert!(ok.of_length(1.5).is_err());
    }

    #[test]
    fn measure_serde_forms() {
        let m: FuzzyMeasure = serde_json::from_str(r#"{"type":"distorted","T":"t^2"}"#).unwrap();
        assert_eq!(m, FuzzyMeasure::lebesgue_squared(1.0));
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"type":"distorted","T":"t^2"}"#);
        let l: FuzzyMeasure = serde_json::from_str(r#"{"type":"lebesgue"}"#).unwrap();
        assert_eq!(l, FuzzyMeasure::Lebesgue);
        assert!(serde_json::from_str::<FuzzyMeasure>(r#"{"type":"distorted","T":"1-t"}"#).is_err());
    }

    #[test]
    fn ess_sup_examples() {
        let id = SupMeasureDensity::new(PiecewiseFn::parse("x", 0.0, 1.0).unwrap());
        assert_eq!(ess_sup(&id, &unit()).unwrap(), 1.0);
        let bump = SupMeasureDensity::new(PiecewiseFn::parse("x*(1-x)", 0.0, 1.0).unwrap());
        assert!(close(ess_sup(&bump, &unit()).unwrap(), 0.25, 1e-12));
        let c = SupMeasureDensity::new(PiecewiseFn::constant(0.3, 0.0, 1.0).unwrap());
        assert_eq!(ess_sup(&c, &IntervalUnion::interval(0.1, 0.2)).unwrap(), 0.3);
        assert_eq!(ess_sup(&c, &IntervalUnion::empty()), Err(MeasureError::EmptySet));
    }

    fn random_union(rng: &mut ChaCha8Rng) -> IntervalUnion {
        let k = rng.gen_range(1..5);
        IntervalUnion::new((0..k).map(|_| {
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            Interval::new(a.min(b), a.max(b))
        }))
    }

    /// Random subset: every part shrunk toward a random inner point.
    fn shrink(u: &IntervalUnion, rng: &mut ChaCha8Rng) -> IntervalUnion {
        let mut out = Vec::new();
        for p in u.parts() {
            if rng.gen_bool(0.8) {
                let a = rng.gen_range(p.lo..=p.hi);
                let b = rng.gen_range(p.lo..=p.hi);
                out.push(Interval::new(a.min(b), a.max(b)));
            }
        }
        IntervalUnion::new(out)
    }

    #[test]
    fn monotone_on_nested_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let measures = [
            FuzzyMeasure::Lebesgue,
            FuzzyMeasure::lebesgue_squared(1.0),
            FuzzyMeasure::distorted("sqrt(t)", 1.0).unwrap(),
        ];
        for mu in &measures {
            for _ in 0..500 {
                let b = random_union(&mut rng);
                let a = shrink(&b, &mut rng);
                assert!(b.is_superset_of(&a));
                assert!(mu.measure(&a).unwrap() <= mu.measure(&b).unwrap());
            }
        }
    }

    #[test]
    fn lebesgue_is_sum_of_lengths() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let u = random_union(&mut rng);
            let direct: f64 = u.parts().iter().map(|p| p.hi - p.lo).sum();
            assert!(close(FuzzyMeasure::Lebesgue.measure(&u).unwrap(), direct, 1e-15));
        }
    }

    fn random_piecewise(rng: &mut ChaCha8Rng) -> PiecewiseFn {
        let cut: f64 = rng.gen_range(0.2..0.8);
        let piece = |rng: &mut ChaCha8Rng| {
            let c: f64 = rng.gen_range(0.1..1.0);
            let p: f64 = rng.gen_range(0.5..3.0);
            let d: f64 = rng.gen_range(0.0..0.5);
            if rng.gen_bool(0.5) {
                format!("{c:?}*x^{p:?} + {d:?}")
            } else {
                format!("{c:?}*(1.5-x)^{p:?} + {d:?}")
            }
        };
        let (a, b) = (piece(rng), piece(rng));
        PiecewiseFn::from_pieces(&[(&format!("[0,{cut:?})"), &a), (&format!("[{cut:?},1]"), &b)]).unwrap()
    }

    #[test]
    fn level_sets_shrink_as_alpha_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let f = random_piecewise(&mut rng);
            let ls = LevelSets::new(&f, &unit()).unwrap();
            for _ in 0..20 {
                let a: f64 = rng.gen_range(0.0..1.5);
                let b: f64 = rng.gen_range(0.0..1.5);
                let (lo, hi) = (a.min(b), a.max(b));
                let small = ls.at(hi).unwrap();
                let big = ls.at(lo).unwrap();
                assert!(big.is_superset_of(&small), "α={lo},{hi}");
            }
        }
    }

    #[test]
    fn level_sets_agree_with_pointwise_membership() {
        let mut fns = vec![
            PiecewiseFn::parse("x/2", 0.0, 1.0).unwrap(),
            PiecewiseFn::parse("x^2/4", 0.0, 1.0).unwrap(),
            PiecewiseFn::parse("x^3/64", 0.0, 1.0).unwrap(),
            PiecewiseFn::parse("(1/(x+1))^3", 0.0, 1.0).unwrap(),
            PiecewiseFn::parse("(x+1)^3", 0.0, 1.0).unwrap(),
            PiecewiseFn::from_pieces(&[("[0,1/4]", "x"), ("(1/4,1/2)", "1/2"), ("[1/2,1]", "x")]).unwrap(),
            PiecewiseFn::from_pieces(&[("[0,1/2)", "x^2"), ("[1/2,1]", "x")]).unwrap(),
            PiecewiseFn::parse("x*(1-x)", 0.0, 1.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        fns.extend((0..10).map(|_| random_piecewise(&mut rng)));
        for f in &fns {
            let ls = LevelSets::new(f, &unit()).unwrap();
            for alpha in [0.01, 0.1, 0.2, 0.25, 0.3, 0.5, 0.7, 1.0, 1.3] {
                let set = ls.at(alpha).unwrap();
                let near_edge = |x: f64| set.parts().iter().any(|p| (x - p.lo).abs() < 1e-9 || (x - p.hi).abs() < 1e-9);
                for i in 0..10_000 {
                    let x = (i as f64 + 0.5) / 10_000.0;
                    if near_edge(x) {
                        continue;
                    }
                    assert_eq!(f.eval(x).unwrap() >= alpha, set.contains(x), "x={x} α={alpha}");
                }
            }
        }
    }
}
