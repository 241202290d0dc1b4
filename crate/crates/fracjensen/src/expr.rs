//! Parser and evaluator for scalar functions of one real variable.
//!
//! The grammar is deliberately small: constants, the variable `x`, the binary
//! operators `+ - * / ^` (with `^` binding tightest and right-associative),
//! unary minus, and the functions `exp`, `log`, `sin`, `cos`, `sqrt`, `abs`
//! and the two-argument `pow`. A handful of named catalog entries (`square`,
//! `cube`, ...) expand to fixed trees so tests and job files can refer to
//! them by stable names.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Expression tree for a function of the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

enum Kind {
    Ast(Arc<Expr>),
    Native(Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>),
}

impl Clone for Kind {
    fn clone(&self) -> Self {
        match self {
            Kind::Ast(e) => Kind::Ast(e.clone()),
            Kind::Native(f) => Kind::Native(f.clone()),
        }
    }
}

/// An immutable, thread-safe real function of one real variable.
#[derive(Clone)]
pub struct ScalarFunction {
    source: String,
    kind: Kind,
    domain_hint: Option<(f64, f64)>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("source", &self.source)
            .finish()
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Ast(e) => write!(f, "{e}"),
            Kind::Native(_) => write!(f, "{}", self.source),
        }
    }
}

impl ScalarFunction {
    /// Parses an expression. A bare identifier other than `x` is resolved
    /// against the builtin catalog.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                msg: "empty expression".into(),
            });
        }
        let ast = Parser::new(text).parse()?;
        Ok(ScalarFunction {
            source: text.to_string(),
            kind: Kind::Ast(Arc::new(ast)),
            domain_hint: None,
        })
    }

    /// Wraps a native closure; `name` is used for display only.
    pub fn native<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        ScalarFunction {
            source: name.to_string(),
            kind: Kind::Native(Arc::new(f)),
            domain_hint: None,
        }
    }

    /// Looks up a catalog entry by name.
    pub fn builtin(name: &str) -> Option<Self> {
        let text = catalog_source(name)?;
        let mut f = ScalarFunction::parse(text).expect("catalog entries parse");
        f.source = name.to_string();
        Some(f)
    }

    pub fn with_domain_hint(mut self, lo: f64, hi: f64) -> Self {
        self.domain_hint = Some((lo, hi));
        self
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn domain_hint(&self) -> Option<(f64, f64)> {
        self.domain_hint
    }

    pub fn ast(&self) -> Option<&Expr> {
        match &self.kind {
            Kind::Ast(e) => Some(e),
            Kind::Native(_) => None,
        }
    }

    /// Evaluates at `x`. Never returns a non-finite value: points outside
    /// the mathematical domain yield a `Domain` error instead.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match &self.kind {
            Kind::Ast(e) => eval_expr(e, x)?,
            Kind::Native(f) => f(x)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "{} is not finite at x = {x}",
                self.source
            )))
        }
    }

    /// Central difference (f(x+h) - f(x-h)) / (2h).
    pub fn numeric_derivative(&self, x: f64, h: f64) -> Result<f64> {
        if h <= 0.0 {
            return Err(Error::Domain("step h must be positive".into()));
        }
        Ok((self.eval(x + h)? - self.eval(x - h)?) / (2.0 * h))
    }
}

fn catalog_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "square" => "x^2",
        "cube" => "x^3",
        "abs" => "abs(x)",
        "exp" => "exp(x)",
        "neg_square" => "-x^2",
        _ => return None,
    })
}

fn eval_expr(e: &Expr, x: f64) -> Result<f64> {
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::Var => x,
        Expr::Neg(a) => -eval_expr(a, x)?,
        Expr::Bin(op, a, b) => {
            let a = eval_expr(a, x)?;
            let b = eval_expr(b, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(Error::Domain(format!("division by zero at x = {x}")));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if a < 0.0 && b.fract() != 0.0 {
                        return Err(Error::Domain(format!(
                            "negative base {a} with non-integer exponent {b}"
                        )));
                    }
                    a.powf(b)
                }
            }
        }
        Expr::Call(f, a) => {
            let a = eval_expr(a, x)?;
            match f {
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(Error::Domain(format!("log of non-positive value {a}")));
                    }
                    a.ln()
                }
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(Error::Domain(format!("sqrt of negative value {a}")));
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
            }
        }
    })
}

// Precedence levels used by both the parser and the printer:
// 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, needed: bool) -> fmt::Result {
            if needed {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                paren(f, a, prec(a) < 4)
            }
            Expr::Bin(op, a, b) => match op {
                BinOp::Add => {
                    write!(f, "{a} + ")?;
                    paren(f, b, prec(b) < 2)
                }
                BinOp::Sub => {
                    write!(f, "{a} - ")?;
                    paren(f, b, prec(b) < 2)
                }
                BinOp::Mul => {
                    paren(f, a, prec(a) < 2)?;
                    write!(f, "*")?;
                    paren(f, b, prec(b) < 3)
                }
                BinOp::Div => {
                    paren(f, a, prec(a) < 2)?;
                    write!(f, "/")?;
                    paren(f, b, prec(b) < 5)
                }
                BinOp::Pow => {
                    paren(f, a, prec(a) < 5)?;
                    write!(f, "^")?;
                    paren(f, b, prec(b) < 3)
                }
            },
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            toks: Vec::new(),
            pos: 0,
        }
    }

    fn lex(&mut self) -> Result<()> {
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    i += 1;
                    continue;
                }
                '+' => self.toks.push((Tok::Plus, start)),
                '-' => self.toks.push((Tok::Minus, start)),
                '*' => self.toks.push((Tok::Star, start)),
                '/' => self.toks.push((Tok::Slash, start)),
                '^' => self.toks.push((Tok::Caret, start)),
                '(' => self.toks.push((Tok::LParen, start)),
                ')' => self.toks.push((Tok::RParen, start)),
                ',' => self.toks.push((Tok::Comma, start)),
                '0'..='9' => {
                    let mut j = i;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j] == b'.' {
                        j += 1;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                    if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                        let mut k = j + 1;
                        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                            k += 1;
                        }
                        if k < bytes.len() && bytes[k].is_ascii_digit() {
                            j = k;
                            while j < bytes.len() && bytes[j].is_ascii_digit() {
                                j += 1;
                            }
                        }
                    }
                    let v: f64 = self.text[i..j].parse().map_err(|_| Error::Syntax {
                        offset: start,
                        msg: format!("invalid number `{}`", &self.text[i..j]),
                    })?;
                    self.toks.push((Tok::Num(v), start));
                    i = j;
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < bytes.len()
                        && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    self.toks
                        .push((Tok::Ident(self.text[i..j].to_string()), start));
                    i = j;
                    continue;
                }
                other => {
                    return Err(Error::Syntax {
                        offset: start,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, o)| *o)
            .unwrap_or(self.text.len())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let off = self.offset();
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Syntax {
                offset: off,
                msg: format!("expected {t:?}, found {got:?}"),
            }),
        }
    }

    fn parse(mut self) -> Result<Expr> {
        self.lex()?;
        let e = self.additive()?;
        if self.pos != self.toks.len() {
            return Err(Error::Syntax {
                offset: self.offset(),
                msg: "trailing input".into(),
            });
        }
        Ok(e)
    }

    fn additive(&mut self) -> Result<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.multiplicative()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.multiplicative()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let e = self.unary()?;
            return Ok(Expr::Neg(Box::new(e)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            // `^` is right-associative and its exponent admits unary minus.
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let e = self.additive()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.peek() {
                    self.bump();
                    if name == "pow" {
                        let a = self.additive()?;
                        self.expect(Tok::Comma)?;
                        let b = self.additive()?;
                        self.expect(Tok::RParen)?;
                        return Ok(Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b)));
                    }
                    let func = match name.as_str() {
                        "exp" => Func::Exp,
                        "log" => Func::Log,
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "sqrt" => Func::Sqrt,
                        "abs" => Func::Abs,
                        _ => return Err(Error::UnknownIdentifier(name)),
                    };
                    let a = self.additive()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(func, Box::new(a)))
                } else if name == "x" {
                    Ok(Expr::Var)
                } else if let Some(src) = catalog_source(&name) {
                    Ok(Parser::new(src).parse().expect("catalog entries parse"))
                } else {
                    Err(Error::UnknownIdentifier(name))
                }
            }
            other => Err(Error::Syntax {
                offset: off,
                msg: format!("expected an operand, found {other:?}"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> ScalarFunction {
        ScalarFunction::parse(s).unwrap()
    }

    #[test]
    fn parse_forces_precedence() {
        let f = parse("x^2");
        assert_eq!(
            f.ast().unwrap(),
            &Expr::Bin(
                BinOp::Pow,
                Box::new(Expr::Var),
                Box::new(Expr::Const(2.0))
            )
        );
        let g = parse("log(x)/x");
        assert_eq!(
            g.ast().unwrap(),
            &Expr::Bin(
                BinOp::Div,
                Box::new(Expr::Call(Func::Log, Box::new(Expr::Var))),
                Box::new(Expr::Var)
            )
        );
    }

    #[test]
    fn unary_plus_is_a_syntax_error_with_offset() {
        match ScalarFunction::parse("2*+x") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(
            ScalarFunction::parse("foo(x)"),
            Err(Error::UnknownIdentifier(n)) if n == "foo"
        ));
        assert!(matches!(
            ScalarFunction::parse("y + 1"),
            Err(Error::UnknownIdentifier(n)) if n == "y"
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ beats unary minus beats * / beats + -
        assert_eq!(parse("-x^2").eval(3.0).unwrap(), -9.0);
        assert_eq!(parse("2+3*4").eval(0.0).unwrap(), 14.0);
        assert_eq!(parse("2^3^2").eval(0.0).unwrap(), 512.0); // right-assoc
        assert_eq!(parse("8-4-2").eval(0.0).unwrap(), 2.0); // left-assoc
        assert_eq!(parse("16/4/2").eval(0.0).unwrap(), 2.0);
        assert_eq!(parse("x^-1").eval(4.0).unwrap(), 0.25);
        assert_eq!(parse("pow(x, 3)").eval(2.0).unwrap(), 8.0);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(parse("x^2").eval(3.0).unwrap(), 9.0);
        assert_eq!(parse("log(x)").eval(1.0).unwrap(), 0.0);
        assert!(matches!(
            parse("log(x)").eval(-1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(parse("1/x").eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(
            parse("x^0.5").eval(-2.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn catalog_entries() {
        assert_eq!(ScalarFunction::builtin("square").unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(ScalarFunction::builtin("cube").unwrap().eval(-2.0).unwrap(), -8.0);
        assert_eq!(ScalarFunction::builtin("neg_square").unwrap().eval(2.0).unwrap(), -4.0);
        assert_eq!(ScalarFunction::builtin("abs").unwrap().eval(-1.5).unwrap(), 1.5);
        assert!(ScalarFunction::builtin("nope").is_none());
        // bare catalog names also parse inside expressions
        assert_eq!(parse("square").eval(3.0).unwrap(), 9.0);
    }

    #[test]
    fn numeric_derivative_examples() {
        let f = parse("x^2");
        assert!((f.numeric_derivative(1.0, 1e-5).unwrap() - 2.0).abs() < 1e-9);
        let c = parse("5");
        assert!(c.numeric_derivative(0.3, 1e-5).unwrap().abs() < 1e-12);
        let e = parse("exp(x)");
        assert!((e.numeric_derivative(0.0, 1e-5).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn concurrent_eval_is_safe() {
        let f = std::sync::Arc::new(parse("exp(x) + x^2"));
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let f = f.clone();
                std::thread::spawn(move || f.eval(i as f64).unwrap())
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap().is_finite());
        }
    }

    // Strategy producing random expression trees, rendered to text.
    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0..10.0f64).prop_map(Expr::Const),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Add,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Sub,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Mul,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Div,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), (1.0..4.0f64).prop_map(|v| Expr::Const(v.round())))
                    .prop_map(|(a, b)| Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Call(Func::Sin, Box::new(a))),
                inner.prop_map(|a| Expr::Call(Func::Abs, Box::new(a))),
            ]
        })
    }

    proptest! {
        // Round-trip stability: print then re-parse yields an identical tree.
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            let reparsed = ScalarFunction::parse(&text).unwrap();
            prop_assert_eq!(reparsed.ast().unwrap(), &e);
        }

        // Polynomials of degree <= 6 agree with Horner evaluation.
        #[test]
        fn horner_agreement(coeffs in proptest::collection::vec(-10.0..10.0f64, 1..=7),
                            x in -3.0..3.0f64) {
            let mut text = String::new();
            for (k, c) in coeffs.iter().enumerate() {
                if k > 0 {
                    text.push_str(" + ");
                }
                text.push_str(&format!("({c})*x^{k}"));
            }
            let f = ScalarFunction::parse(&text).unwrap();
            let horner = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let got = f.eval(x).unwrap();
            // relative to the magnitude of the evaluation, so cancellation
            // between monomials does not make the bound vacuous
            let scale = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.abs() * x.abs().powi(k as i32))
                .sum::<f64>()
                .max(1.0);
            prop_assert!((got - horner).abs() <= 1e-14 * scale,
                "got {got}, horner {horner}");
        }
    }
}
