//! Recursive-descent parser for the function language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' unary)?            right-associative, constant exponent
//! atom   := number | VAR | func '(' expr ')' | '(' expr ')'
//! func   := 'sqrt' | 'exp' | 'ln' | 'abs' | 'neg'
//! ```

use super::ast::{BinaryOp, Exponent, Expr, UnaryOp};
use super::ParseError;

/// Parses an expression in the variable `x`.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_expr_in(text, "x")
}

/// Parses an expression whose single variable is spelled `var`.
pub fn parse_expr_in(text: &str, var: &str) -> Result<Expr, ParseError> {
    if let Some(offset) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(ParseError::NonAscii { offset });
    }
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, var };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseError::Syntax {
            offset: p.pos,
            message: format!("unexpected '{}'", p.src[p.pos] as char),
        });
    }
    Ok(e)
}

/// Parses a constant expression such as `1/4` or `sqrt(2)/2`.
pub fn parse_constant(text: &str) -> Result<f64, ParseError> {
    let e = parse_expr(text)?;
    if !e.is_constant() {
        return Err(ParseError::NotConstant { text: text.to_string() });
    }
    e.eval(0.0).map_err(|err| ParseError::Syntax { offset: 0, message: err.to_string() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax { offset: self.pos, message }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(match self.unary()? {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::unary(UnaryOp::Neg, e),
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let exp = self.unary()?;
        let exp = classify_exponent(&exp).ok_or(ParseError::NonConstantExponent { offset: at })?;
        Ok(Expr::pow(base, exp))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if name == self.var {
                    return Ok(Expr::Var);
                }
                match UnaryOp::from_name(name) {
                    Some(op) => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::unary(op, arg))
                    }
                    None => Err(ParseError::UnknownIdentifier { name: name.to_string(), offset: start }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                digits(self);
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| ParseError::Syntax { offset: start, message: format!("bad number '{text}'") })
    }
}

fn integer_const(e: &Expr) -> Option<i64> {
    match e {
        Expr::Const(c) if c.fract() == 0.0 && c.abs() < 9.0e15 => Some(*c as i64),
        _ => None,
    }
}

/// Turns a parsed exponent into an exact rational when it is written as one.
fn classify_exponent(e: &Expr) -> Option<Exponent> {
    if !e.is_constant() {
        return None;
    }
    if let Expr::Binary(BinaryOp::Div, a, b) = e {
        if let (Some(p), Some(q)) = (integer_const(a), integer_const(b)) {
            if q != 0 {
                return Exponent::rational(p, q);
            }
        }
    }
    e.eval(0.0).ok().map(Exponent::from_f64)
}
