//! A small expression language for classes: `c1^2 * W^(n-2)`, `(2*L + H)^2`, ...
//!
//! Grammar (precedence `^` > unary `-` > `*` > `+ -`, all left-associative):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' atom)*
//! atom    := symbol | 'n' | integer | integer '/' integer | '(' sum ')'
//! ```
//!
//! Symbols are `L`, `H`, `c1`, `c2` and `W` (the class `αL + βH`).
//! Exponents must evaluate to nonnegative integers in terms of `n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{chern_classes_x, multiply, power, GradedClass, RingError};
use crate::exact::{format_rational, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    L,
    H,
    C1,
    C2,
    W,
}

impl Symbol {
    fn name(self) -> &'static str {
        match self {
            Symbol::L => "L",
            Symbol::H => "H",
            Symbol::C1 => "c1",
            Symbol::C2 => "c2",
            Symbol::W => "W",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassExpr {
    Symbol(Symbol),
    Literal(Rational),
    Dim,
    Neg(Box<ClassExpr>),
    Add(Box<ClassExpr>, Box<ClassExpr>),
    Sub(Box<ClassExpr>, Box<ClassExpr>),
    Mul(Box<ClassExpr>, Box<ClassExpr>),
    Pow(Box<ClassExpr>, Box<ClassExpr>),
}

impl ClassExpr {
    pub fn mentions(&self, sym: Symbol) -> bool {
        match self {
            ClassExpr::Symbol(s) => *s == sym,
            ClassExpr::Literal(_) | ClassExpr::Dim => false,
            ClassExpr::Neg(e) => e.mentions(sym),
            ClassExpr::Add(a, b) | ClassExpr::Sub(a, b) | ClassExpr::Mul(a, b) | ClassExpr::Pow(a, b) => {
                a.mentions(sym) || b.mentions(sym)
            }
        }
    }
}

/// Structural rendering, e.g. `mul(pow(c1, 2), pow(W, sub(n, 2)))`.
impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Symbol(s) => write!(f, "{}", s.name()),
            ClassExpr::Literal(r) => write!(f, "{}", format_rational(r)),
            ClassExpr::Dim => write!(f, "n"),
            ClassExpr::Neg(e) => write!(f, "neg({e})"),
            ClassExpr::Add(a, b) => write!(f, "add({a}, {b})"),
            ClassExpr::Sub(a, b) => write!(f, "sub({a}, {b})"),
            ClassExpr::Mul(a, b) => write!(f, "mul({a}, {b})"),
            ClassExpr::Pow(a, b) => write!(f, "pow({a}, {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol {name:?} at offset {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("exponent must be an integer expression in n: {0}")]
    BadExponent(String),
    #[error("negative exponent {0}")]
    NegativeExponent(BigInt),
    #[error("W requires alpha > 0 and beta > 0")]
    NonPositiveKahler,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let p = BigInt::from_str(&src[start..i]).expect("digits");
                let mut q = BigInt::from(1);
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    let dstart = i + 1;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    q = BigInt::from_str(&src[dstart..i]).expect("digits");
                    if q.is_zero() {
                        return Err(DslError::Syntax { offset: dstart, message: "zero denominator".into() });
                    }
                }
                out.push((Tok::Num(Rational::new(p, q)), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(DslError::Syntax { offset: start, message: format!("unexpected character {ch:?}") });
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn sum(&mut self) -> Result<ClassExpr, DslError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ClassExpr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ClassExpr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<ClassExpr, DslError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = ClassExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ClassExpr, DslError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ClassExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ClassExpr, DslError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            base = ClassExpr::Pow(Box::new(base), Box::new(self.atom()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ClassExpr, DslError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(ClassExpr::Literal(r))
            }
            Tok::Ident(name) => {
                let offset = self.offset();
                self.bump();
                let sym = match name.as_str() {
                    "n" => return Ok(ClassExpr::Dim),
                    "L" => Symbol::L,
                    "H" => Symbol::H,
                    "c1" => Symbol::C1,
                    "c2" => Symbol::C2,
                    "W" => Symbol::W,
                    _ => return Err(DslError::UnknownSymbol { name, offset }),
                };
                Ok(ClassExpr::Symbol(sym))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input"),
            other => self.error(format!("unexpected token {}", describe(&other))),
        }
    }
}

fn describe(tok: &Tok) -> &'static str {
    match tok {
        Tok::Ident(_) => "identifier",
        Tok::Num(_) => "number",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

pub fn parse_class_expr(src: &str) -> Result<ClassExpr, DslError> {
    let toks = tokenize(src)?;
    let mut parser = Parser { toks, pos: 0 };
    if *parser.peek() == Tok::End {
        return parser.error("empty expression");
    }
    let expr = parser.sum()?;
    if *parser.peek() != Tok::End {
        let what = describe(parser.peek());
        return parser.error(format!("unexpected {what}"));
    }
    Ok(expr)
}

struct Env<'a> {
    dim: u32,
    alpha: &'a Rational,
    beta: &'a Rational,
    chern: (GradedClass, GradedClass),
}

/// Exponent values: integers built from literals and `n` only.
fn eval_exponent(e: &ClassExpr, dim: u32) -> Result<Rational, DslError> {
    let bad = || DslError::BadExponent(e.to_string());
    Ok(match e {
        ClassExpr::Literal(r) => r.clone(),
        ClassExpr::Dim => int(i64::from(dim)),
        ClassExpr::Symbol(_) => return Err(bad()),
        ClassExpr::Neg(a) => -eval_exponent(a, dim)?,
        ClassExpr::Add(a, b) => eval_exponent(a, dim)? + eval_exponent(b, dim)?,
        ClassExpr::Sub(a, b) => eval_exponent(a, dim)? - eval_exponent(b, dim)?,
        ClassExpr::Mul(a, b) => eval_exponent(a, dim)? * eval_exponent(b, dim)?,
        ClassExpr::Pow(..) => return Err(bad()),
    })
}

fn eval(e: &ClassExpr, env: &Env<'_>) -> Result<GradedClass, DslError> {
    let dim = env.dim;
    Ok(match e {
        ClassExpr::Symbol(Symbol::L) => GradedClass::l(dim)?,
        ClassExpr::Symbol(Symbol::H) => GradedClass::h(dim)?,
        ClassExpr::Symbol(Symbol::C1) => env.chern.0.clone(),
        ClassExpr::Symbol(Symbol::C2) => env.chern.1.clone(),
        ClassExpr::Symbol(Symbol::W) => {
            if !env.alpha.is_positive() || !env.beta.is_positive() {
                return Err(DslError::NonPositiveKahler);
            }
            GradedClass::kahler(dim, env.alpha, env.beta)?
        }
        ClassExpr::Literal(r) => GradedClass::scalar(dim, r.clone()),
        ClassExpr::Dim => GradedClass::scalar(dim, int(i64::from(dim))),
        ClassExpr::Neg(a) => eval(a, env)?.scale(&int(-1)),
        ClassExpr::Add(a, b) => eval(a, env)?.add(&eval(b, env)?)?,
        ClassExpr::Sub(a, b) => eval(a, env)?.sub(&eval(b, env)?)?,
        ClassExpr::Mul(a, b) => multiply(&eval(a, env)?, &eval(b, env)?)?,
        ClassExpr::Pow(base, exp) => {
            let k = eval_exponent(exp, dim)?;
            if !k.is_integer() {
                return Err(DslError::BadExponent(exp.to_string()));
            }
            let k = k.to_integer();
            if k.is_negative() {
                return Err(DslError::NegativeExponent(k));
            }
            let base = eval(base, env)?;
            // scalars may carry large exponents; graded classes overflow quickly
            if base.degree() == 0 {
                let k = k.to_usize().ok_or_else(|| DslError::BadExponent(exp.to_string()))?;
                GradedClass::scalar(dim, num_traits::pow(base.scalar_part().clone(), k))
            } else {
                let k = k.to_u32().unwrap_or(u32::MAX);
                power(&base, k)?
            }
        }
    })
}

/// Evaluates `e` in dimension `dim` with `W = αL + βH`.
pub fn eval_class_expr(
    e: &ClassExpr,
    dim: u32,
    alpha: &Rational,
    beta: &Rational,
) -> Result<GradedClass, DslError> {
    let chern = chern_classes_x(dim)?;
    eval(e, &Env { dim, alpha, beta, chern })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::top_evaluate;

    fn top(src: &str, n: u32, a: i64, b: i64) -> Rational {
        let e = parse_class_expr(src).unwrap();
        top_evaluate(&eval_class_expr(&e, n, &int(a), &int(b)).unwrap()).unwrap()
    }

    #[test]
    fn parses_structure() {
        assert_eq!(parse_class_expr("c1^2 * W^(n-2)").unwrap().to_string(), "mul(pow(c1, 2), pow(W, sub(n, 2)))");
        assert_eq!(parse_class_expr("(2*L + H)^2").unwrap().to_string(), "pow(add(mul(2, L), H), 2)");
        assert_eq!(parse_class_expr("L - H - H").unwrap().to_string(), "sub(sub(L, H), H)");
        assert_eq!(parse_class_expr("-L^2").unwrap().to_string(), "neg(pow(L, 2))");
        assert_eq!(parse_class_expr("3/7*W").unwrap().to_string(), "mul(3/7, W)");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_class_expr("c1 ** 2"),
            Err(DslError::Syntax { offset: 4, message: "unexpected token '*'".into() })
        );
        assert!(matches!(parse_class_expr("(L + H"), Err(DslError::Syntax { offset: 6, .. })));
        assert!(matches!(parse_class_expr(""), Err(DslError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_class_expr("L $ H"), Err(DslError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_class_expr("L H"), Err(DslError::Syntax { offset: 2, .. })));
        assert_eq!(
            parse_class_expr("L * c3"),
            Err(DslError::UnknownSymbol { name: "c3".into(), offset: 4 })
        );
        // case-sensitive symbols
        assert!(matches!(parse_class_expr("l"), Err(DslError::UnknownSymbol { .. })));
    }

    #[test]
    fn evaluates_lemma_quantities() {
        assert_eq!(top("c1^2 * W^(n-2)", 3, 1, 1), int(37));
        assert_eq!(top("W^n", 2, 1, 1), int(3));
        assert_eq!(top("c2 * W^(n-2)", 3, 1, 1), int(15));
        assert_eq!(top("c1 * W^(n-1)", 3, 1, 1), int(22));
        for n in 2..7 {
            assert_eq!(top("H^n", n, 1, 1), int(0));
        }
    }

    #[test]
    fn evaluation_errors() {
        let e = parse_class_expr("W^n").unwrap();
        assert_eq!(eval_class_expr(&e, 3, &int(1), &int(0)), Err(DslError::NonPositiveKahler));
        let e = parse_class_expr("L^(n-4)").unwrap();
        assert_eq!(eval_class_expr(&e, 3, &int(1), &int(1)), Err(DslError::NegativeExponent(BigInt::from(-1))));
        let e = parse_class_expr("L^(n+1)").unwrap();
        assert!(matches!(eval_class_expr(&e, 3, &int(1), &int(1)), Err(DslError::Ring(RingError::DegreeOverflow { .. }))));
        let e = parse_class_expr("L^H").unwrap();
        assert!(matches!(eval_class_expr(&e, 3, &int(1), &int(1)), Err(DslError::BadExponent(_))));
        let e = parse_class_expr("L + 1").unwrap();
        assert!(matches!(eval_class_expr(&e, 3, &int(1), &int(1)), Err(DslError::Ring(RingError::Inhomogeneous(1, 0)))));
        // H^n without W needs no positivity
        let e = parse_class_expr("H^n").unwrap();
        assert!(eval_class_expr(&e, 3, &int(-1), &int(0)).unwrap().is_zero());
    }

    #[test]
    fn scalars_and_n() {
        let e = parse_class_expr("n^2 * (L*H)").unwrap();
        let c = eval_class_expr(&e, 2, &int(1), &int(1)).unwrap();
        assert_eq!(top_evaluate(&c).unwrap(), int(4));
    }
}
