use super::{CheckError, CheckSpec, Direction, InequalityReport, Transform};
use crate::exprdsl::{classify_monotonicity, comonotone, countermonotone, sample_grid, Func, MonotonicityClass, PiecewiseFn, RealFn, DEFAULT_GRID};
use crate::measures::{FuzzyMeasure, IntervalUnion, SupMeasureDensity};
use crate::pseudo::{g_integral, lambda_limit_integral, sup_integral, Generator, Semiring};
use crate::sugeno::{sugeno_integral, DEFAULT_TOL};

/// λ schedule reported by the sup checker when none is given.
pub const DEFAULT_LAMBDAS: [f64; 5] = [1.0, 4.0, 16.0, 64.0, 256.0];
const QUAD_N: usize = 64;

pub(super) fn run(spec: &CheckSpec) -> Result<InequalityReport, CheckError> {
    match spec {
        CheckSpec::ClassicalDiazMetcalf { f, g, measure, m, big_m } => classical(spec, f, g, measure, *m, *big_m),
        CheckSpec::SugenoDiazMetcalf { f, g, s, measure } => sugeno_dm(spec, f, g, *s, measure),
        CheckSpec::PseudoDiazMetcalf { f, h, s, semiring } => pseudo_dm(spec, f, h, *s, semiring, None),
        CheckSpec::SupDiazMetcalf { f, h, s, semiring, lambdas } => sup_dm(spec, f, h, *s, semiring, lambdas),
        CheckSpec::PhiDiazMetcalf { f, h, s, semiring, phi } => phi_dm(spec, f, h, *s, semiring, phi),
        CheckSpec::PseudoChebyshev { u, v, semiring } => pseudo_dm(spec, u, v, 1.0, semiring, None),
        CheckSpec::Stolarsky { f, a, b } => stolarsky(spec, f, *a, *b),
    }
}

pub fn check_classical_diaz_metcalf(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    mu: &FuzzyMeasure,
    m_bound: f64,
    big_m_bound: f64,
) -> Result<InequalityReport, CheckError> {
    CheckSpec::ClassicalDiazMetcalf { f: f.clone(), g: g.clone(), measure: mu.clone(), m: m_bound, big_m: big_m_bound }
        .run()
}

pub fn check_sugeno_diaz_metcalf(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    s: f64,
    mu: &FuzzyMeasure,
) -> Result<InequalityReport, CheckError> {
    CheckSpec::SugenoDiazMetcalf { f: f.clone(), g: g.clone(), s, measure: mu.clone() }.run()
}

pub fn check_pseudo_diaz_metcalf(
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    sr: &Semiring,
) -> Result<InequalityReport, CheckError> {
    CheckSpec::PseudoDiazMetcalf { f: f.clone(), h: h.clone(), s, semiring: sr.clone() }.run()
}

pub fn check_sup_diaz_metcalf(
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    gen: &Generator,
    psi: &SupMeasureDensity,
    lambdas: &[f64],
) -> Result<InequalityReport, CheckError> {
    CheckSpec::SupDiazMetcalf {
        f: f.clone(),
        h: h.clone(),
        s,
        semiring: Semiring::sup_measure(psi.clone(), gen.clone()),
        lambdas: lambdas.to_vec(),
    }
    .run()
}

pub fn check_phi_diaz_metcalf(
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    sr: &Semiring,
    phi: &str,
) -> Result<InequalityReport, CheckError> {
    CheckSpec::PhiDiazMetcalf { f: f.clone(), h: h.clone(), s, semiring: sr.clone(), phi: phi.to_string() }.run()
}

pub fn check_pseudo_chebyshev(u: &PiecewiseFn, v: &PiecewiseFn, sr: &Semiring) -> Result<InequalityReport, CheckError> {
    CheckSpec::PseudoChebyshev { u: u.clone(), v: v.clone(), semiring: sr.clone() }.run()
}

pub fn check_stolarsky(f: &PiecewiseFn, a: f64, b: f64) -> Result<InequalityReport, CheckError> {
    CheckSpec::Stolarsky { f: f.clone(), a, b }.run()
}

fn sugeno_of(f: &Func, mu: &FuzzyMeasure) -> Result<f64, CheckError> {
    let d = f.domain();
    let mu = mu.validated_for(d.width())?;
    Ok(sugeno_integral(f, &IntervalUnion::from(d), &mu, DEFAULT_TOL)?.value)
}

fn check_exponent(s: f64) -> Result<(), CheckError> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(CheckError::BadParameter(format!("exponent s must be positive and finite, got {s}")))
    }
}

fn require_comonotone<F: RealFn + ?Sized, G: RealFn + ?Sized>(
    report: &mut InequalityReport,
    f: &F,
    g: &G,
) -> Result<(), CheckError> {
    let co = comonotone(f, g, DEFAULT_GRID)?;
    report.detail("comonotone", co);
    if !co {
        report.advise("operands are not comonotone");
    }
    Ok(())
}

fn require_s_above_one(report: &mut InequalityReport, s: f64) {
    if s <= 1.0 {
        report.advise(format!("exponent s = {s} is not above 1"));
    }
}

fn classical(
    spec: &CheckSpec,
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    mu: &FuzzyMeasure,
    m: f64,
    big_m: f64,
) -> Result<InequalityReport, CheckError> {
    if !(m > 0.0 && m <= big_m && big_m.is_finite()) {
        return Err(CheckError::BadParameter(format!("ratio bounds need 0 < m <= M < inf, got m = {m}, M = {big_m}")));
    }
    let d = f.domain();
    if d != g.domain() {
        return Err(CheckError::Precondition("f and g live on different domains".into()));
    }
    let mut xs = sample_grid(f, d, DEFAULT_GRID);
    xs.extend(g.knots());
    for x in xs {
        let (fv, gv) = (f.eval(x)?, g.eval(x)?);
        let eps = 1e-12 * fv.abs().max(1.0);
        if gv < 0.0 || m * gv > fv + eps || fv > big_m * gv + eps {
            return Err(CheckError::Precondition(format!(
                "0 <= m g <= f <= M g fails at x = {x}: f = {fv}, g = {gv}, m = {m}, M = {big_m}"
            )));
        }
    }
    let (ff, gf) = (f.to_func(), g.to_func());
    let f2 = sugeno_of(&ff.powf(2.0), mu)?;
    let g2 = sugeno_of(&gf.powf(2.0), mu)?;
    let fg = sugeno_of(&ff.mul(&gf)?, mu)?;
    let factor = (big_m + m).powi(2) / (4.0 * big_m * m);
    let mut r = InequalityReport::new(spec.clone(), f2 * g2, factor * fg * fg, Direction::Le);
    r.detail("int_f2", f2);
    r.detail("int_g2", g2);
    r.detail("int_fg", fg);
    r.detail("factor", factor);
    r.detail("rhs_linear_factor", (big_m + m) / (4.0 * big_m * m) * fg * fg);
    Ok(r)
}

fn sugeno_dm(
    spec: &CheckSpec,
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    s: f64,
    mu: &FuzzyMeasure,
) -> Result<InequalityReport, CheckError> {
    check_exponent(s)?;
    let (ff, gf) = (f.to_func(), g.to_func());
    let fs = sugeno_of(&ff.powf(s), mu)?;
    let gs = sugeno_of(&gf.powf(s), mu)?;
    let fgs = sugeno_of(&ff.mul(&gf)?.powf(s), mu)?;
    let mut r = InequalityReport::new(spec.clone(), fs * gs, fgs, Direction::Le);
    r.detail("int_f_s", fs);
    r.detail("int_g_s", gs);
    r.detail("int_fg_s", fgs);
    require_comonotone(&mut r, f, g)?;
    require_s_above_one(&mut r, s);
    Ok(r)
}

fn generated(sr: &Semiring) -> Result<&Generator, CheckError> {
    match sr {
        Semiring::GGenerated(g) => Ok(g),
        other => Err(CheckError::BadParameter(format!("a generated semiring is required, got '{}'", other.kind()))),
    }
}

/// `x ↦ f(x)^s ⊙ h(x)^s`.
fn pseudo_product(gen: &Generator, f: &Func, h: &Func) -> Result<Func, CheckError> {
    let g = gen.clone();
    Ok(f.zip(h, move |a, b| Ok(g.mul_unchecked(a, b)))?)
}

fn pseudo_dm(
    spec: &CheckSpec,
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    sr: &Semiring,
    phi: Option<&Transform>,
) -> Result<InequalityReport, CheckError> {
    check_exponent(s)?;
    let gen = generated(sr)?;
    let d = f.domain();
    let (fs, hs) = (f.to_func().powf(s), h.to_func().powf(s));
    let integral = |u: &Func| -> Result<f64, CheckError> {
        match phi {
            Some(p) if !p.is_identity() => {
                let p2 = p.clone();
                let v = g_integral(sr, &u.map(move |t| p2.apply(t)), d, QUAD_N)?.value;
                p.inverse(v)
            }
            _ => Ok(g_integral(sr, u, d, QUAD_N)?.value),
        }
    };
    let lhs = integral(&pseudo_product(gen, &fs, &hs)?)?;
    let (i_f, i_h) = (integral(&fs)?, integral(&hs)?);
    let rhs = gen.mul(i_f, i_h)?;

    let co = comonotone(f, h, DEFAULT_GRID)?;
    let counter = !co && countermonotone(f, h, DEFAULT_GRID)?;
    let direction = if phi.is_some() && counter { Direction::Le } else { Direction::Ge };
    let mut r = InequalityReport::new(spec.clone(), lhs, rhs, direction);
    let (kf, kh) = if matches!(spec, CheckSpec::PseudoChebyshev { .. }) { ("int_u", "int_v") } else { ("int_f_s", "int_h_s") };
    r.detail(kf, i_f);
    r.detail(kh, i_h);
    r.detail("comonotone", co);
    if phi.is_some() {
        r.detail("countermonotone", counter);
        if !co && !counter {
            r.advise("operands are neither comonotone nor countermonotone");
        }
    } else if !co {
        r.advise("operands are not comonotone");
    }
    if !matches!(spec, CheckSpec::PseudoChebyshev { .. }) {
        require_s_above_one(&mut r, s);
    }
    Ok(r)
}

fn sup_dm(
    spec: &CheckSpec,
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    sr: &Semiring,
    lambdas: &[f64],
) -> Result<InequalityReport, CheckError> {
    check_exponent(s)?;
    let Semiring::SupMeasure { psi, gen } = sr else {
        return Err(CheckError::BadParameter(format!("a sup-measure semiring is required, got '{}'", sr.kind())));
    };
    let (fs, hs) = (f.to_func().powf(s), h.to_func().powf(s));
    let prod = pseudo_product(gen, &fs, &hs)?;
    let lhs = sup_integral(&prod, sr)?.value;
    let (sf, sh) = (sup_integral(&fs, sr)?.value, sup_integral(&hs, sr)?.value);
    let rhs = gen.mul(sf, sh)?;

    let psi_f = psi.psi.to_func();
    let d = f.domain();
    let lambda_seq = |u: &Func| -> Result<Vec<f64>, CheckError> {
        Ok(lambda_limit_integral(gen, &pseudo_product(gen, u, &psi_f)?, d, lambdas)?)
    };
    let lam_lhs = lambda_seq(&prod)?;
    let lam_rhs = lambda_seq(&fs)?
        .into_iter()
        .zip(lambda_seq(&hs)?)
        .map(|(a, b)| gen.mul(a, b))
        .collect::<Result<Vec<_>, _>>()?;

    let mut r = InequalityReport::new(spec.clone(), lhs, rhs, Direction::Ge);
    r.detail("sup_f_s", sf);
    r.detail("sup_h_s", sh);
    r.detail("lambdas", lambdas.to_vec());
    r.detail("lambda_lhs", lam_lhs);
    r.detail("lambda_rhs", lam_rhs);
    require_comonotone(&mut r, f, h)?;
    require_s_above_one(&mut r, s);
    Ok(r)
}

fn phi_dm(
    spec: &CheckSpec,
    f: &PiecewiseFn,
    h: &PiecewiseFn,
    s: f64,
    sr: &Semiring,
    phi: &str,
) -> Result<InequalityReport, CheckError> {
    let gen = generated(sr)?;
    if !gen.is_increasing() {
        return Err(CheckError::Precondition("the generator must be increasing".into()));
    }
    let (lo, hi) = gen.interval();
    let transform = Transform::parse(phi, lo, hi)?;
    transform.check_commutes(gen)?;
    pseudo_dm(spec, f, h, s, sr, Some(&transform))
}

fn stolarsky(spec: &CheckSpec, f: &PiecewiseFn, a: f64, b: f64) -> Result<InequalityReport, CheckError> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CheckError::BadParameter(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let ff = f.to_func();
    let lebesgue = FuzzyMeasure::Lebesgue;
    let at = |k: f64| -> Result<f64, CheckError> { sugeno_of(&ff.compose_root(k)?, &lebesgue) };
    let (ia, ib) = (at(a)?, at(b)?);
    let mut r = InequalityReport::new(spec.clone(), at(a + b)?, ia * ib, Direction::Ge);
    r.detail("int_f_a", ia);
    r.detail("int_f_b", ib);
    let d = f.domain();
    if d.lo != 0.0 || d.hi != 1.0 {
        r.advise(format!("f is defined on [{}, {}] rather than [0, 1]", d.lo, d.hi));
    }
    if classify_monotonicity(f, DEFAULT_GRID)? != MonotonicityClass::StrictlyDecreasing {
        r.advise("f is not strictly decreasing");
    }
    let outside = sample_grid(f, d, DEFAULT_GRID).into_iter().map(|x| f.eval(x)).collect::<Result<Vec<_>, _>>()?;
    if outside.iter().any(|v| !(0.0..=1.0).contains(v)) {
        r.advise("f leaves [0, 1]");
    }
    Ok(r)
}
