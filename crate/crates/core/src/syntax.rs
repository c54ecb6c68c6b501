//! Text grammar for polynomials, factored polynomials and operators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*          -- '*' optional in factored input
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | 'd_' IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are lowercase (`[a-z][a-z0-9_]*`) and may not start with
//! `d_`; `d_v` is the derivation in `v`. The names `s` and `t` are the
//! parameters.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{is_parameter, MPoly, Rational, AUX_PARAM, PARAM};
use crate::error::{Error, Result};
use crate::star::FactoredPoly;
use crate::weyl::WeylOp;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Partial(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            'a'..='z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word.strip_prefix("d_") {
                    Some("") => return Err(Error::syntax(start, "`d_` needs a variable name")),
                    Some(v) if v.starts_with("d_") => {
                        return Err(Error::syntax(start, format!("invalid derivation `{word}`")))
                    }
                    Some(v) if is_parameter(v) => {
                        return Err(Error::syntax(start, format!("cannot differentiate in parameter `{v}`")))
                    }
                    Some(v) => Tok::Partial(v.to_string()),
                    None => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(Error::syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Parsed expression before interpretation as a polynomial or operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Partial(String),
    Param(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
    Neg(Box<Expr>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    implicit_mul: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Some(Tok::LParen | Tok::Ident(_) | Tok::Int(_) | Tok::Partial(_)) => {
                    if !self.implicit_mul {
                        return Err(Error::syntax(self.offset(), "expected `*` between factors"));
                    }
                    factors.push(self.unary()?);
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let e = u32::try_from(&n).map_err(|_| Error::syntax(at, "exponent too large"))?;
                Ok(Expr::Power(Box::new(base), e))
            }
            _ => Err(Error::syntax(at, "exponent must be a nonnegative integer")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let at = self.offset();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(Expr::Num(Rational::new(n, d))),
                        Some(Tok::Int(_)) => Err(Error::syntax(at, "zero denominator")),
                        _ => Err(Error::syntax(at, "expected an integer denominator")),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(v)) if is_parameter(&v) => Ok(Expr::Param(v)),
            Some(Tok::Ident(v)) => Ok(Expr::Var(v)),
            Some(Tok::Partial(v)) => Ok(Expr::Partial(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let at = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::syntax(at, "expected `)`")),
                }
            }
            Some(_) => Err(Error::syntax(at, "unexpected token")),
            None => Err(Error::syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str, implicit_mul: bool) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), implicit_mul };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

fn check_declared(v: &str, declared: Option<&[String]>) -> Result<()> {
    match declared {
        Some(d) if !d.iter().any(|w| w == v) => Err(Error::UndeclaredVariable(v.to_string())),
        _ => Ok(()),
    }
}

fn to_poly(e: &Expr, declared: Option<&[String]>) -> Result<MPoly> {
    Ok(match e {
        Expr::Num(r) => MPoly::constant(r.clone()),
        Expr::Var(v) => {
            check_declared(v, declared)?;
            MPoly::var(v)
        }
        Expr::Param(v) => MPoly::var(v),
        Expr::Partial(v) => return Err(Error::syntax(0, format!("derivation `d_{v}` in a polynomial"))),
        Expr::Sum(ts) => {
            let mut acc = MPoly::zero();
            for t in ts {
                acc = &acc + &to_poly(t, declared)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = MPoly::one();
            for f in fs {
                acc = &acc * &to_poly(f, declared)?;
            }
            acc
        }
        Expr::Power(b, k) => to_poly(b, declared)?.pow(*k),
        Expr::Neg(b) => -to_poly(b, declared)?,
    })
}

fn to_op(e: &Expr, declared: Option<&[String]>) -> Result<WeylOp> {
    Ok(match e {
        Expr::Num(r) => WeylOp::scalar(r.clone()),
        Expr::Var(v) => {
            check_declared(v, declared)?;
            WeylOp::x(v)
        }
        Expr::Partial(v) => {
            check_declared(v, declared)?;
            WeylOp::d(v)
        }
        Expr::Param(_) => WeylOp::param(),
        Expr::Sum(ts) => {
            let mut acc = WeylOp::zero();
            for t in ts {
                acc = &acc + &to_op(t, declared)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = WeylOp::one();
            for f in fs {
                acc = &acc * &to_op(f, declared)?;
            }
            acc
        }
        Expr::Power(b, k) => to_op(b, declared)?.pow(*k),
        Expr::Neg(b) => -to_op(b, declared)?,
    })
}

/// Polynomial over any variables, `s` and `t` included.
pub fn parse_poly(text: &str) -> Result<MPoly> {
    to_poly(&parse_expr(text, false)?, None)
}

/// Polynomial whose variables must be in `declared` (parameters are always allowed).
pub fn parse_poly_in(text: &str, declared: &[String]) -> Result<MPoly> {
    to_poly(&parse_expr(text, false)?, Some(declared))
}

/// Operator; both `s` and `t` denote the single central parameter.
pub fn parse_operator(text: &str) -> Result<WeylOp> {
    to_op(&parse_expr(text, false)?, None)
}

/// Operator whose variables and derivations must be in `declared`.
pub fn parse_operator_in(text: &str, declared: &[String]) -> Result<WeylOp> {
    to_op(&parse_expr(text, false)?, Some(declared))
}

fn collect_factors(e: &Expr, mult: u32, out: &mut Vec<(Expr, u32)>) {
    match e {
        Expr::Product(fs) => fs.iter().for_each(|f| collect_factors(f, mult, out)),
        Expr::Power(b, k) => collect_factors(b, mult * k, out),
        other => out.push((other.clone(), mult)),
    }
}

/// A product of monic linear factors such as `(s+1/2)(s+7/6)` or `(t+1)^2*t`.
///
/// Returns the polynomial and the variable it is written in, if any.
pub fn parse_factored(text: &str) -> Result<(FactoredPoly, Option<String>)> {
    let expr = parse_expr(text, true)?;
    let mut factors = Vec::new();
    collect_factors(&expr, 1, &mut factors);
    let mut var: Option<String> = None;
    let mut roots = Vec::new();
    for (factor, mult) in factors {
        let p = to_poly(&factor, None)?;
        if mult == 0 {
            continue;
        }
        if let Some(c) = p.constant_value() {
            if c.is_one() {
                continue;
            }
            return Err(Error::syntax(0, format!("constant factor {c}: factored input must be monic")));
        }
        let v = match p.vars() {
            [v] => v.clone(),
            _ => return Err(Error::syntax(0, format!("factor `{p}` is not univariate"))),
        };
        if var.as_ref().is_some_and(|w| *w != v) {
            return Err(Error::syntax(0, "factors use different variables"));
        }
        let coeffs = p.univariate_coeffs(&v).unwrap();
        if coeffs.len() > 2 {
            return Err(Error::NonRationalRoot(p.to_string()));
        }
        if !coeffs[1].is_one() {
            return Err(Error::syntax(0, format!("factor `{p}` is not monic")));
        }
        roots.push((coeffs[0].clone(), mult));
        var = Some(v);
    }
    Ok((FactoredPoly::from_factors(roots), var))
}

/// Canonical text of a factored polynomial in the parameter `s`.
pub fn print_factored(p: &FactoredPoly) -> String {
    p.display_in(PARAM).to_string()
}

/// Canonical text of a factored polynomial in the auxiliary parameter `t`.
pub fn print_factored_aux(p: &FactoredPoly) -> String {
    p.display_in(AUX_PARAM).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn cusp_polynomial() {
        let h = parse_poly("x^2 + y^3").unwrap();
        assert_eq!(h, &MPoly::var("x").pow(2) + &MPoly::var("y").pow(3));
        assert_eq!(parse_poly(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn factored_input() {
        let (p, v) = parse_factored("(s+1/2)*(s+7/6)").unwrap();
        assert_eq!(p, FactoredPoly::from_factors([(rat(1, 2), 1), (rat(7, 6), 1)]));
        assert_eq!(v.as_deref(), Some("s"));

        let (p, v) = parse_factored("(t+1/3)(t+2/3)").unwrap();
        assert_eq!(p.to_string(), "(s+1/3)(s+2/3)");
        assert_eq!(v.as_deref(), Some("t"));

        let (p, _) = parse_factored("(s-1/2)^2 s (s+1)").unwrap();
        assert_eq!(p, FactoredPoly::from_factors([(rat(-1, 2), 2), (rat(0, 1), 1), (rat(1, 1), 1)]));

        let (p, v) = parse_factored("1").unwrap();
        assert!(p.is_one() && v.is_none());
    }

    #[test]
    fn factored_rejections() {
        assert!(matches!(parse_factored("(s^2+1)"), Err(Error::NonRationalRoot(_))));
        assert!(matches!(parse_factored("(2s+1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_factored("(s+1)(t+1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_factored("2(s+1)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn cusp_operator() {
        let p = parse_operator("1/2*(x*d_x + 1)*s").unwrap();
        let expected = &(&WeylOp::scalar(rat(1, 2))
            * &(&(&WeylOp::x("x") * &WeylOp::d("x")) + &WeylOp::one()))
            * &WeylOp::param();
        assert_eq!(p, expected);
        assert_eq!(parse_operator("d_x*x").unwrap().to_string(), "x*d_x + 1");
        assert_eq!(parse_operator("t").unwrap(), WeylOp::param());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + * y") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("X"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("d_x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_operator("d_s"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(x+1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn declarations() {
        let vars = vec!["x".to_string()];
        assert!(parse_operator_in("x*d_x + s", &vars).is_ok());
        assert!(matches!(parse_operator_in("d_y", &vars), Err(Error::UndeclaredVariable(v)) if v == "y"));
        assert!(matches!(parse_poly_in("x + y", &vars), Err(Error::UndeclaredVariable(_))));
    }
}
