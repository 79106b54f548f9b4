//! A small language for continued-fraction ladders.
//!
//! ```text
//! # Touchard's fraction
//! b = 1 + v;
//! a(i) = (1 - q^i)*v
//! ```
//!
//! `a(i)` must be a product of a ladder part free of the series variable and
//! a weight part `v^k` (or `z^k`), `k ≥ 1`. Exponents are integers, `i`, `d`
//! or a parenthesized integer-linear combination of them. A `param d = n`
//! statement gives `d` a default value.

pub mod ast;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{BiPoly, LaurentPoly, QCoeff, Var};
use crate::contfrac::CFSpec;
use ast::{Expr, ExprKind, Symbol};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {col}: {message}")]
pub struct DslError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl DslError {
    pub(crate) fn new(kind: ErrorKind, pos: Pos, message: String) -> Self {
        DslError { kind, line: pos.line, col: pos.col, message }
    }
}

/// A parsed `.cf` document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecDoc {
    pub b_expr: Expr,
    pub a_expr: Expr,
    /// The factors of `a_expr` free of the series variable.
    pub ladder_expr: Expr,
    /// The factors of `a_expr` that are powers of the series variable.
    pub weight_expr: Expr,
    pub weight_power: usize,
    pub params: BTreeMap<String, i64>,
    pub var: Var,
}

pub fn parse_spec(text: &str) -> Result<SpecDoc, DslError> {
    parser::parse(text)
}

struct Env<'a> {
    i: Option<i64>,
    params: &'a BTreeMap<String, i64>,
}

impl Env<'_> {
    fn lookup(&self, s: Symbol) -> Option<i64> {
        match s {
            Symbol::I => self.i,
            Symbol::D => self.params.get("d").copied(),
            _ => None,
        }
    }
}

fn unbound(pos: Pos, s: Symbol) -> DslError {
    DslError::new(ErrorKind::Semantic, pos, format!("unbound parameter `{s}`"))
}

fn eval(e: &Expr, env: &Env) -> Result<BiPoly, DslError> {
    Ok(match &e.kind {
        ExprKind::Int(n) => BiPoly::from_q(LaurentPoly::constant(QCoeff::from_bigint((*n).into()))),
        ExprKind::Sym(Symbol::Q) => BiPoly::monomial(1, 1, 0),
        ExprKind::Sym(s) if s.is_series_var() => BiPoly::var_pow(1),
        ExprKind::Sym(s) => {
            let n = env.lookup(*s).ok_or_else(|| unbound(e.pos, *s))?;
            BiPoly::from_q(LaurentPoly::constant(n))
        }
        ExprKind::Neg(x) => -&eval(x, env)?,
        ExprKind::Add(a, b) => &eval(a, env)? + &eval(b, env)?,
        ExprKind::Sub(a, b) => &eval(a, env)? - &eval(b, env)?,
        ExprKind::Mul(a, b) => &eval(a, env)? * &eval(b, env)?,
        ExprKind::Pow(base, exp) => {
            let k = exp.eval(&|s| env.lookup(s)).map_err(|s| unbound(e.pos, s))?;
            let b = eval(base, env)?;
            if k >= 0 {
                let k = u32::try_from(k)
                    .map_err(|_| DslError::new(ErrorKind::Semantic, e.pos, format!("exponent {k} is too large")))?;
                b.pow(k)
            } else {
                let inv = b
                    .as_q_only()
                    .and_then(|p| p.as_monomial().and_then(|(c, x)| Some(LaurentPoly::monomial(c.recip()?, -x))))
                    .ok_or_else(|| {
                        DslError::new(
                            ErrorKind::Semantic,
                            e.pos,
                            format!("negative exponent {k} needs a nonzero monomial in q as its base, found `{b}`"),
                        )
                    })?;
                BiPoly::from_q(inv.pow(k.unsigned_abs() as u32))
            }
        }
    })
}

impl SpecDoc {
    fn merged(&self, overrides: &BTreeMap<String, i64>) -> BTreeMap<String, i64> {
        let mut m = self.params.clone();
        m.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
        m
    }

    /// The partial denominator, checked to have constant term 1.
    pub fn eval_b(&self, params: &BTreeMap<String, i64>) -> Result<BiPoly, DslError> {
        let params = self.merged(params);
        let b = eval(&self.b_expr, &Env { i: None, params: &params })?;
        if !b.coeff(0).is_one() {
            return Err(DslError::new(
                ErrorKind::Semantic,
                self.b_expr.pos,
                format!("`b` must have constant term 1, found `{}`", b.coeff(0)),
            ));
        }
        Ok(b)
    }

    pub fn weight(&self) -> BiPoly {
        BiPoly::var_pow(self.weight_power)
    }

    /// The ladder coefficient at level `i` with the weight factor removed.
    pub fn eval_ladder(&self, i: i64, params: &BTreeMap<String, i64>) -> Result<LaurentPoly, DslError> {
        let params = self.merged(params);
        let p = eval(&self.ladder_expr, &Env { i: Some(i), params: &params })?;
        Ok(p.as_q_only().expect("ladder part is free of the series variable"))
    }

    /// Builds the continued fraction this document describes.
    pub fn to_cf_spec(&self, name: &str, params: &BTreeMap<String, i64>) -> Result<CFSpec, DslError> {
        let b = self.eval_b(params)?;
        self.eval_ladder(1, params)?;
        let doc = self.clone();
        let params = self.merged(params);
        let spec = CFSpec::new(name, self.var, b, self.weight(), move |i| {
            doc.eval_ladder(i as i64, &params).map_err(|e| e.to_string())
        })
        .map_err(|e| DslError::new(ErrorKind::Semantic, self.a_expr.pos, e.to_string()))?;
        Ok(spec)
    }
}

/// Pretty-printed form, which parses back to the same trees.
impl fmt::Display for SpecDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in &self.params {
            writeln!(f, "param {name} = {value};")?;
        }
        writeln!(f, "b = {};", self.b_expr)?;
        writeln!(f, "a(i) = {};", self.a_expr)
    }
}

/// `eval_ladder` as a free function.
pub fn eval_ladder(doc: &SpecDoc, i: i64, params: &BTreeMap<String, i64>) -> Result<LaurentPoly, DslError> {
    doc.eval_ladder(i, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn none() -> BTreeMap<String, i64> {
        BTreeMap::new()
    }

    #[test]
    fn touchard_doc() {
        let doc = parse_spec("b = 1+v; a(i) = (1-q^i)*v").unwrap();
        assert_eq!(doc.var, Var::V);
        assert_eq!(doc.weight_power, 1);
        assert_eq!(doc.eval_ladder(3, &none()).unwrap(), lp(&[(0, 1), (3, -1)]));
        assert_eq!(doc.eval_b(&none()).unwrap(), &BiPoly::one() + &BiPoly::var_pow(1));
    }

    #[test]
    fn motzkin_doc() {
        let doc = parse_spec("b = 1-z; a(i) = (1-q^i)*z^2").unwrap();
        assert_eq!(doc.var, Var::Z);
        assert_eq!(doc.weight_power, 2);
        assert_eq!(doc.eval_ladder(1, &none()).unwrap(), lp(&[(0, 1), (1, -1)]));
    }

    #[test]
    fn unbalanced_paren() {
        let e = parse_spec("b = 1+v; a(i) = (1-q^i").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert_eq!((e.line, e.col), (1, 23));
    }

    #[test]
    fn general_d_and_squared() {
        let doc = parse_spec("b = 1+v; a(i) = (1-q^i)*(1-q^(i+d-1))*v").unwrap();
        let mut params = BTreeMap::new();
        params.insert("d".to_string(), 2);
        assert_eq!(doc.eval_ladder(1, &params).unwrap(), &lp(&[(0, 1), (1, -1)]) * &lp(&[(0, 1), (2, -1)]));
        let e = doc.eval_ladder(1, &none()).unwrap_err();
        assert!(e.message.contains("unbound parameter `d`"), "{e}");

        let sq = parse_spec("b = 1+v; a(i) = (1-q^i)^2*v").unwrap();
        assert_eq!(sq.eval_ladder(2, &none()).unwrap(), lp(&[(0, 1), (2, -2), (4, 1)]));
    }

    #[test]
    fn negative_exponents() {
        let doc = parse_spec("b = 1+v; a(i) = (1-q^(0-i))*v").unwrap();
        assert_eq!(doc.eval_ladder(2, &none()).unwrap(), lp(&[(-2, -1), (0, 1)]));
        let doc = parse_spec("b = 1+v; a(i) = (1-q)^(1-i)*v").unwrap();
        assert!(doc.eval_ladder(1, &none()).is_ok());
        let e = doc.eval_ladder(3, &none()).unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Semantic, 1, 22));
        let doc = parse_spec("b = 1+v; a(i) = (2*q)^(0-i)*v").unwrap();
        assert_eq!(doc.eval_ladder(2, &none()).unwrap(), LaurentPoly::monomial(QCoeff::ratio(1, 4), -2));
    }

    #[test]
    fn pretty_print_round_trip() {
        let doc = parse_spec("param d=3; b = 1 + v; a(i) = -(1-q^i)*(1-(q^(i+2*d-1)))*q*v^2 # c\n;").unwrap();
        let printed = doc.to_string();
        assert_eq!(printed, "param d = 3;\nb = 1 + v;\na(i) = -(1 - q^i)*(1 - q^(i + 2*d - 1))*q*v^2;\n");
        assert_eq!(parse_spec(&printed).unwrap(), doc);
    }

    #[test]
    fn cf_spec_matches_builtin() {
        let doc = parse_spec("b = 1+v; a(i) = (1-q^i)*v").unwrap();
        let spec = doc.to_cf_spec("touchard", &none()).unwrap();
        let r = crate::contfrac::stable_expansion(&spec, 5).unwrap();
        let builtin = crate::contfrac::stable_expansion(&crate::contfrac::builtin::touchard(), 5).unwrap();
        assert_eq!(r, builtin);
    }

    #[test]
    fn b_constant_term() {
        let e = parse_spec("b = 2+v; a(i) = (1-q^i)*v").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Semantic, 1, 6));
        let e = parse_spec("b = v; a(i) = v").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
    }
}
