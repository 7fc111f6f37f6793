//! Closed-form scalar expressions and their evaluation as Taylor jets.
//!
//! The grammar (documented in `docs/grammar.md`) is ordinary infix
//! arithmetic over a declared variable list: `+ - * / ^` with `^`
//! right-associative, unary minus, parentheses, and the functions
//! `exp log sqrt sin cos tanh atan`. Evaluation produces a [`TaylorJet`],
//! i.e. the value together with all partial derivatives up to the
//! requested order at the base point.

pub mod jet;

pub use jet::{jet_space, JetError, JetSpace, TaylorJet, MAX_DIM, MAX_ORDER};

use std::sync::Arc;

/// Built-in scalar functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tanh,
    Atan,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            "atan" => Func::Atan,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Atan => "atan",
        }
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Abstract syntax tree of a scalar expression over a declared variable
/// list. Variables are stored by index into that list.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parse errors, with byte offsets into the source text.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

/// Evaluation errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite result in evaluation")]
    NonFinite,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
}

impl From<JetError> for EvalError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::Domain(msg) => EvalError::Domain(msg),
            JetError::NonFinite => EvalError::NonFinite,
        }
    }
}

/// Parse `text` over the declared variable names.
pub fn parse(text: &str, variables: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: variables,
    };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(ParseError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax {
            offset: p.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // Right-associative; the exponent may carry a unary minus.
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Syntax {
                        offset: self.pos,
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("unexpected character `{}`", c as char),
            }),
            None => Err(ParseError::Syntax {
                offset: self.pos,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut saw_digit = false;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
            saw_digit = true;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            return Err(ParseError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 32) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            let mut exp_digit = false;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
                exp_digit = true;
            }
            if !exp_digit {
                // `1e` followed by a non-digit: not an exponent after all.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => Err(ParseError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            }),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name).ok_or_else(|| ParseError::UnknownIdentifier {
                name: name.to_string(),
                offset: start,
            })?;
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    message: "expected `)` after function argument".into(),
                });
            }
            self.pos += 1;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        match self.vars.iter().position(|v| *v == name) {
            Some(idx) => Ok(Expr::Var(idx)),
            None => Err(ParseError::UnknownIdentifier {
                name: name.to_string(),
                offset: start,
            }),
        }
    }
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(idx: usize) -> Expr {
        Expr::Var(idx)
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Add, Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Sub, Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Mul, Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Div, Box::new(self), Box::new(rhs))
    }

    pub fn pow(self, rhs: Expr) -> Expr {
        Expr::Bin(BinOp::Pow, Box::new(self), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    /// Value of a variable-free subtree, if it is one.
    pub fn const_value(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Var(_) => None,
            Expr::Neg(e) => e.const_value().map(|v| -v),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.const_value()?, b.const_value()?);
                Some(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                })
            }
            Expr::Call(f, e) => {
                let v = e.const_value()?;
                Some(match f {
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                    Func::Sqrt => v.sqrt(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tanh => v.tanh(),
                    Func::Atan => v.atan(),
                })
            }
        }
    }

    /// Number of variable leaves referring to `idx`.
    pub fn var_leaf_count(&self, idx: usize) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(i) => usize::from(*i == idx),
            Expr::Neg(e) => e.var_leaf_count(idx),
            Expr::Bin(_, a, b) => a.var_leaf_count(idx) + b.var_leaf_count(idx),
            Expr::Call(_, e) => e.var_leaf_count(idx),
        }
    }

    /// Render back to grammar text with the given variable names.
    pub fn to_text(&self, names: &[String]) -> String {
        fn prec(e: &Expr) -> u8 {
            match e {
                Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 4,
                Expr::Neg(_) => 3,
                Expr::Bin(BinOp::Pow, ..) => 3,
                Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
                Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            }
        }
        fn go(e: &Expr, names: &[String], parent: u8, out: &mut String) {
            let mine = prec(e);
            let wrap = mine < parent;
            if wrap {
                out.push('(');
            }
            match e {
                Expr::Num(v) => {
                    if *v < 0.0 {
                        out.push_str(&format!("({v})"));
                    } else {
                        out.push_str(&format!("{v}"));
                    }
                }
                Expr::Var(i) => out.push_str(&names[*i]),
                Expr::Neg(inner) => {
                    out.push('-');
                    go(inner, names, 4, out);
                }
                Expr::Bin(op, a, b) => {
                    let (sym, la, ra) = match op {
                        BinOp::Add => ("+", 1, 1),
                        BinOp::Sub => ("-", 1, 2),
                        BinOp::Mul => ("*", 2, 2),
                        BinOp::Div => ("/", 2, 3),
                        BinOp::Pow => ("^", 4, 3),
                    };
                    go(a, names, la, out);
                    out.push_str(sym);
                    go(b, names, ra, out);
                }
                Expr::Call(f, arg) => {
                    out.push_str(f.name());
                    out.push('(');
                    go(arg, names, 0, out);
                    out.push(')');
                }
            }
            if wrap {
                out.push(')');
            }
        }
        let mut out = String::new();
        go(self, names, 0, &mut out);
        out
    }
}

/// Evaluate an expression as a Taylor jet at `base`, truncated at `order`.
pub fn eval_jet(e: &Expr, base: &[f64], order: usize) -> Result<TaylorJet, EvalError> {
    if base.is_empty() || base.len() > MAX_DIM {
        return Err(EvalError::UnsupportedShape(format!(
            "jet evaluation supports 1..={MAX_DIM} coordinates, got {}",
            base.len()
        )));
    }
    if order > MAX_ORDER {
        return Err(EvalError::UnsupportedShape(format!(
            "jet order {order} exceeds maximum {MAX_ORDER}"
        )));
    }
    let space = jet_space(base.len(), order);
    let base: Arc<[f64]> = base.to_vec().into();
    let jet = eval_rec(e, space, &base)?;
    if !jet.is_finite() {
        return Err(EvalError::NonFinite);
    }
    Ok(jet)
}

fn eval_rec(
    e: &Expr,
    space: &'static JetSpace,
    base: &Arc<[f64]>,
) -> Result<TaylorJet, EvalError> {
    Ok(match e {
        Expr::Num(v) => TaylorJet::constant(space, base.clone(), *v),
        Expr::Var(i) => TaylorJet::variable(space, base.clone(), *i),
        Expr::Neg(inner) => eval_rec(inner, space, base)?.neg(),
        Expr::Bin(op, a, b) => {
            if *op == BinOp::Pow {
                return eval_pow(a, b, space, base);
            }
            let ja = eval_rec(a, space, base)?;
            let jb = eval_rec(b, space, base)?;
            match op {
                BinOp::Add => ja.add(&jb),
                BinOp::Sub => ja.sub(&jb),
                BinOp::Mul => ja.mul(&jb),
                BinOp::Div => ja.try_div(&jb)?,
                BinOp::Pow => unreachable!(),
            }
        }
        Expr::Call(f, arg) => {
            let j = eval_rec(arg, space, base)?;
            match f {
                Func::Exp => j.exp(),
                Func::Log => j.try_ln()?,
                Func::Sqrt => j.try_sqrt()?,
                Func::Sin => j.sin(),
                Func::Cos => j.cos(),
                Func::Tanh => j.tanh(),
                Func::Atan => j.atan(),
            }
        }
    })
}

/// Powers: integer constant exponents use repeated truncated
/// multiplication (exact for polynomials); everything else goes through
/// exp(b · log a).
fn eval_pow(
    a: &Expr,
    b: &Expr,
    space: &'static JetSpace,
    base: &Arc<[f64]>,
) -> Result<TaylorJet, EvalError> {
    let ja = eval_rec(a, space, base)?;
    if let Some(c) = b.const_value() {
        if c.fract() == 0.0 && c.abs() <= 1e9 {
            return Ok(ja.powi(c as i64)?);
        }
        return Ok(ja.try_powf(c)?);
    }
    let jb = eval_rec(b, space, base)?;
    Ok(jb.mul(&ja.try_ln()?).exp())
}

/// Plain value of an expression at a point (order-0 jet).
pub fn eval_value(e: &Expr, point: &[f64]) -> Result<f64, EvalError> {
    Ok(eval_jet(e, point, 0)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomial_over_declared_variables() {
        let e = parse("x^2 + y1*y2", &["x", "y1", "y2"]).unwrap();
        assert_eq!(e.var_leaf_count(0), 1);
        assert_eq!(e.var_leaf_count(1), 1);
        assert_eq!(e.var_leaf_count(2), 1);
    }

    #[test]
    fn undeclared_variable_is_reported_by_name() {
        let err = parse("exp(phi)*x", &["x", "y1"]).unwrap_err();
        match err {
            ParseError::UnknownIdentifier { name, .. } => assert_eq!(name, "phi"),
            other => panic!("expected UnknownIdentifier, got {other:?}"),
        }
    }

    #[test]
    fn parses_ball_conformal_factor() {
        let e = parse("1/(1 - (y1^2 + y2^2))", &["y1", "y2"]).unwrap();
        let v = eval_value(&e, &[0.5, 0.0]).unwrap();
        assert!((v - 1.0 / 0.75).abs() < 1e-15);
    }

    #[test]
    fn syntax_error_carries_offset() {
        let err = parse("x + * y1", &["x", "y1"]).unwrap_err();
        match err {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 4),
            other => panic!("expected Syntax, got {other:?}"),
        }
    }

    #[test]
    fn bilinear_jet_coefficients() {
        let e = parse("x*y1", &["x", "y1"]).unwrap();
        let j = eval_jet(&e, &[2.0, 3.0], 2).unwrap();
        assert_eq!(j.value(), 6.0);
        assert_eq!(j.partial(&[1, 0]), 3.0);
        assert_eq!(j.partial(&[0, 1]), 2.0);
        assert_eq!(j.coeff(&[1, 1]), 1.0);
        assert_eq!(j.coeff(&[2, 0]), 0.0);
    }

    #[test]
    fn exp_jet_is_its_own_series() {
        let e = parse("exp(x)", &["x"]).unwrap();
        let j = eval_jet(&e, &[0.0], 4).unwrap();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (k, want) in expect.iter().enumerate() {
            assert!((j.coeffs()[k] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn pow_with_negative_integer_exponent() {
        let e = parse("x^-2", &["x"]).unwrap();
        let j = eval_jet(&e, &[2.0], 1).unwrap();
        assert!((j.value() - 0.25).abs() < 1e-15);
        assert!((j.partial(&[1]) + 0.25).abs() < 1e-15); // d/dx x^{-2} = −2x^{-3}
    }

    #[test]
    fn fractional_power_requires_positive_base() {
        let e = parse("x^1.5", &["x"]).unwrap();
        assert!(eval_jet(&e, &[4.0], 2).is_ok());
        assert!(matches!(
            eval_jet(&e, &[-4.0], 2),
            Err(EvalError::Domain(_))
        ));
    }

    #[test]
    fn log_of_nonpositive_is_domain_error() {
        let e = parse("log(x)", &["x"]).unwrap();
        assert!(matches!(eval_jet(&e, &[0.0], 1), Err(EvalError::Domain(_))));
    }

    #[test]
    fn roundtrip_printer_preserves_semantics() {
        let names: Vec<String> = vec!["x".into(), "y1".into()];
        let texts = [
            "x^2 + y1*x - 3/(x+2)",
            "-x^2",
            "exp(x*y1) - sqrt(x+3)*tanh(y1)",
            "2^3^2",
            "x^-2 + 1.5e-3",
        ];
        for t in texts {
            let e = parse(t, &["x", "y1"]).unwrap();
            let printed = e.to_text(&names);
            let e2 = parse(&printed, &["x", "y1"]).unwrap();
            for p in [[1.3, 0.4], [0.2, -1.1], [2.5, 0.9]] {
                let a = eval_value(&e, &p).unwrap();
                let b = eval_value(&e2, &p).unwrap();
                assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{t}: {a} vs {b}");
            }
        }
    }
}
