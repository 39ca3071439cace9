use std::fmt;

use super::EvalError;

/// Unary operators. All but `Neg` are written as named calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sqrt,
    Exp,
    Ln,
    Abs,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "neg" => UnaryOp::Neg,
            "sqrt" => UnaryOp::Sqrt,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "abs" => UnaryOp::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Constant exponent of a power node.
///
/// Integer and `p/q` exponents are kept exact so that odd roots of negative
/// bases are well defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    /// `num/den` in lowest terms, `den >= 1`.
    Rational { num: i64, den: u64 },
    /// Any other finite, non-integer real exponent.
    Real(f64),
}

impl Exponent {
    pub fn integer(n: i64) -> Self {
        Exponent::Rational { num: n, den: 1 }
    }

    /// Builds a reduced rational exponent. Returns `None` for a zero denominator.
    pub fn rational(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1);
        let sign = if (num < 0) != (den < 0) { -1 } else { 1 };
        let num = sign * (num.unsigned_abs() / g) as i64;
        let den = den.unsigned_abs() / g;
        Some(Exponent::Rational { num, den })
    }

    /// Classifies a real exponent, keeping integer values exact.
    pub fn from_f64(v: f64) -> Self {
        if v.fract() == 0.0 && v.abs() < 9.0e15 {
            Exponent::integer(v as i64)
        } else {
            Exponent::Real(v)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Rational { num, den } => num as f64 / den as f64,
            Exponent::Real(v) => v,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Expression tree over a single real variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Self {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, exp: Exponent) -> Self {
        Expr::Pow(Box::new(base), exp)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Evaluates at `x`. Every intermediate value is checked, so a NaN or an
    /// infinity never escapes as a value.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Unary(op, e) => {
                let a = e.eval(x)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::Domain { op: "sqrt", value: a });
                        }
                        a.sqrt()
                    }
                    UnaryOp::Ln => {
                        if a <= 0.0 {
                            return Err(EvalError::Domain { op: "ln", value: a });
                        }
                        a.ln()
                    }
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::Domain { op: "division", value: b });
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(base, exp) => power(base.eval(x)?, *exp)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { x })
        }
    }

    /// Replaces every occurrence of the variable with `with`.
    pub fn substitute(&self, with: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => with.clone(),
            Expr::Unary(op, e) => Expr::unary(*op, e.substitute(with)),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.substitute(with), b.substitute(with)),
            Expr::Pow(e, p) => Expr::pow(e.substitute(with), *p),
        }
    }

    /// Pretty-printer using `var` as the variable name.
    pub fn display_with(&self, var: &'static str) -> Printer<'_> {
        Printer { expr: self, var }
    }
}

/// `base^exp` with sign-aware odd roots.
pub fn power(base: f64, exp: Exponent) -> Result<f64, EvalError> {
    match exp {
        Exponent::Rational { num, den } => {
            if base == 0.0 {
                return match num.signum() {
                    1 => Ok(0.0),
                    0 => Ok(1.0),
                    _ => Err(EvalError::Domain { op: "pow", value: base }),
                };
            }
            if den == 1 {
                return Ok(match i32::try_from(num) {
                    Ok(n) => base.powi(n),
                    Err(_) => base.powf(num as f64),
                });
            }
            let e = num as f64 / den as f64;
            if base > 0.0 {
                Ok(base.powf(e))
            } else if den % 2 == 1 {
                let mag = (-base).powf(e);
                Ok(if num % 2 != 0 { -mag } else { mag })
            } else {
                Err(EvalError::Domain { op: "even root", value: base })
            }
        }
        Exponent::Real(e) => {
            if base > 0.0 {
                Ok(base.powf(e))
            } else if base == 0.0 && e > 0.0 {
                Ok(0.0)
            } else {
                Err(EvalError::Domain { op: "pow", value: base })
            }
        }
    }
}

/// Fully parenthesised printer; its output parses back to the same tree.
pub struct Printer<'a> {
    expr: &'a Expr,
    var: &'static str,
}

impl Printer<'_> {
    fn sub<'b>(&self, e: &'b Expr) -> Printer<'b> {
        Printer { expr: e, var: self.var }
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c.is_sign_negative() {
        write!(f, "(-{:?})", -c)
    } else {
        write!(f, "{c:?}")
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => f.write_str(self.var),
            Expr::Unary(op, e) => write!(f, "{}({})", op.name(), self.sub(e)),
            Expr::Binary(op, a, b) => {
                write!(f, "({} {} {})", self.sub(a), op.symbol(), self.sub(b))
            }
            Expr::Pow(base, exp) => {
                match base.as_ref() {
                    Expr::Var | Expr::Unary(..) | Expr::Binary(..) => write!(f, "{}", self.sub(base))?,
                    Expr::Const(c) if *c >= 0.0 => write_const(f, *c)?,
                    _ => write!(f, "({})", self.sub(base))?,
                }
                match exp {
                    Exponent::Rational { num, den: 1 } if *num >= 0 => write!(f, "^{num}"),
                    Exponent::Rational { num, den: 1 } => write!(f, "^({num})"),
                    Exponent::Rational { num, den } => write!(f, "^({num}/{den})"),
                    Exponent::Real(v) => {
                        f.write_str("^")?;
                        write_const(f, *v)
                    }
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with("x").fmt(f)
    }
}
