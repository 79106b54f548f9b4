use std::collections::BTreeMap;

use super::ast::{Exponent, Expr, ExprKind, LinearTerm, Sign, Symbol};
use super::lexer::{tokenize, Tok, Token};
use super::{DslError, ErrorKind, Pos, SpecDoc};
use crate::arith::Var;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    B,
    A,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    ctx: Ctx,
    series_var: Option<Symbol>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, DslError> {
        let t = self.peek();
        if t.tok == want {
            Ok(self.bump())
        } else {
            Err(syntax(t.pos, format!("expected {what}, found {}", t.tok.describe())))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let t = self.peek().clone();
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match t.tok {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(make(Box::new(lhs), Box::new(rhs)), t.pos);
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::Star {
            let pos = self.bump().pos;
            let rhs = self.factor()?;
            lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            let pos = self.bump().pos;
            let inner = self.factor()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            let pos = self.bump().pos;
            let e = self.exponent()?;
            if self.peek().tok == Tok::Caret {
                return Err(syntax(self.peek().pos, "exponents cannot be chained; parenthesize the base".into()));
            }
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), e), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Expr::new(ExprKind::Int(n), t.pos)),
            Tok::Sym(s) => {
                self.check_symbol(s, t.pos)?;
                Ok(Expr::new(ExprKind::Sym(s), t.pos))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.peek();
                if close.tok != Tok::RParen {
                    return Err(syntax(
                        close.pos,
                        format!("expected `)` to close `(` at line {}, column {}, found {}", t.pos.line, t.pos.col, close.tok.describe()),
                    ));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(syntax(t.pos, format!("expected a number, symbol or `(`, found {}", other.describe()))),
        }
    }

    fn check_symbol(&mut self, s: Symbol, pos: Pos) -> Result<(), DslError> {
        if s == Symbol::I && self.ctx == Ctx::B {
            return Err(semantic(pos, "the level index `i` cannot appear in `b`".into()));
        }
        if s.is_series_var() {
            match self.series_var {
                Some(prev) if prev != s => {
                    return Err(semantic(pos, format!("series variable `{s}` mixed with `{prev}`")));
                }
                _ => self.series_var = Some(s),
            }
        }
        Ok(())
    }

    fn exponent_symbol(&self, s: Symbol, pos: Pos) -> Result<Symbol, DslError> {
        match s {
            Symbol::I if self.ctx == Ctx::B => Err(semantic(pos, "the level index `i` cannot appear in `b`".into())),
            Symbol::I | Symbol::D => Ok(s),
            _ => Err(semantic(pos, format!("exponents may only use `i` and `d`, found `{s}`"))),
        }
    }

    fn exponent(&mut self) -> Result<Exponent, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(Exponent::Int(n)),
            Tok::Sym(s) => Ok(Exponent::Sym(self.exponent_symbol(s, t.pos)?)),
            Tok::LParen => {
                let mut terms = vec![(Sign::Plus, self.linear_term()?)];
                loop {
                    let sign = match self.peek().tok {
                        Tok::Plus => Sign::Plus,
                        Tok::Minus => Sign::Minus,
                        Tok::RParen => {
                            self.bump();
                            return Ok(Exponent::Linear(terms));
                        }
                        _ => {
                            let p = self.peek();
                            return Err(syntax(p.pos, format!("expected `+`, `-` or `)` in exponent, found {}", p.tok.describe())));
                        }
                    };
                    self.bump();
                    terms.push((sign, self.linear_term()?));
                }
            }
            other => Err(syntax(t.pos, format!("expected an exponent, found {}", other.describe()))),
        }
    }

    fn linear_term(&mut self) -> Result<LinearTerm, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                if self.peek().tok != Tok::Star {
                    return Ok(LinearTerm::Int(n));
                }
                self.bump();
                let s = self.bump();
                match s.tok {
                    Tok::Sym(sym) => Ok(LinearTerm::Scaled(n, self.exponent_symbol(sym, s.pos)?)),
                    other => Err(syntax(s.pos, format!("expected `i` or `d` after `*`, found {}", other.describe()))),
                }
            }
            Tok::Sym(s) => Ok(LinearTerm::Sym(self.exponent_symbol(s, t.pos)?)),
            other => Err(syntax(t.pos, format!("expected an integer or `i`/`d` in exponent, found {}", other.describe()))),
        }
    }
}

fn syntax(pos: Pos, message: String) -> DslError {
    DslError::new(ErrorKind::Syntax, pos, message)
}

fn semantic(pos: Pos, message: String) -> DslError {
    DslError::new(ErrorKind::Semantic, pos, message)
}

fn flatten_product(e: &Expr, out: &mut Vec<Expr>) {
    match &e.kind {
        ExprKind::Mul(a, b) => {
            flatten_product(a, out);
            flatten_product(b, out);
        }
        _ => out.push(e.clone()),
    }
}

fn product(factors: Vec<Expr>, pos: Pos) -> Expr {
    factors
        .into_iter()
        .reduce(|acc, f| {
            let p = f.pos;
            Expr::new(ExprKind::Mul(Box::new(acc), Box::new(f)), p)
        })
        .unwrap_or_else(|| Expr::new(ExprKind::Int(1), pos))
}

/// Power of the series variable carried by a weight factor, if it is one.
fn weight_power(f: &Expr, var: Symbol) -> Result<Option<usize>, DslError> {
    if !f.mentions(var) {
        return Ok(None);
    }
    match &f.kind {
        ExprKind::Sym(s) if *s == var => Ok(Some(1)),
        ExprKind::Pow(base, e) if base.kind == ExprKind::Sym(var) => match e.eval(&|_| None) {
            Ok(k) if k >= 1 => Ok(Some(k as usize)),
            Ok(k) => Err(semantic(f.pos, format!("weight exponent must be at least 1, found {k}"))),
            Err(_) => Err(semantic(f.pos, "weight exponent must not depend on `i` or `d`".into())),
        },
        _ => Err(semantic(
            f.pos,
            format!("`{var}` may only appear in a(i) as a separate weight factor `{var}` or `{var}^k`"),
        )),
    }
}

pub(crate) fn parse(text: &str) -> Result<SpecDoc, DslError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, ctx: Ctx::B, series_var: None };
    let mut b: Option<(Expr, Pos)> = None;
    let mut a: Option<(Expr, Pos)> = None;
    let mut params = BTreeMap::new();

    loop {
        let head = p.bump();
        match head.tok {
            Tok::KwB => {
                if b.is_some() {
                    return Err(semantic(head.pos, "duplicate `b` statement".into()));
                }
                p.expect(Tok::Eq, "`=`")?;
                p.ctx = Ctx::B;
                b = Some((p.expr()?, head.pos));
            }
            Tok::KwA => {
                if a.is_some() {
                    return Err(semantic(head.pos, "duplicate `a(i)` statement".into()));
                }
                p.expect(Tok::LParen, "`(`")?;
                p.expect(Tok::Sym(Symbol::I), "`i`")?;
                p.expect(Tok::RParen, "`)`")?;
                p.expect(Tok::Eq, "`=`")?;
                p.ctx = Ctx::A;
                a = Some((p.expr()?, head.pos));
            }
            Tok::KwParam => {
                let name = p.bump();
                match name.tok {
                    Tok::Sym(Symbol::D) => {}
                    Tok::Sym(s) => return Err(semantic(name.pos, format!("only `d` can be a parameter, found `{s}`"))),
                    other => return Err(syntax(name.pos, format!("expected a parameter name, found {}", other.describe()))),
                }
                p.expect(Tok::Eq, "`=`")?;
                let value = p.bump();
                let Tok::Int(n) = value.tok else {
                    return Err(syntax(value.pos, format!("expected an integer, found {}", value.tok.describe())));
                };
                let n = i64::try_from(n).map_err(|_| semantic(value.pos, "parameter value too large".into()))?;
                if params.insert("d".to_string(), n).is_some() {
                    return Err(semantic(head.pos, "duplicate parameter `d`".into()));
                }
            }
            other => {
                return Err(syntax(head.pos, format!("expected `b`, `a` or `param`, found {}", other.describe())));
            }
        }
        let sep = p.bump();
        match sep.tok {
            Tok::Semi if p.peek().tok == Tok::Eof => break,
            Tok::Semi => continue,
            Tok::Eof => break,
            other => return Err(syntax(sep.pos, format!("expected `;` or end of input, found {}", other.describe()))),
        }
    }

    let end = p.peek().pos;
    let (b_expr, _) = b.ok_or_else(|| semantic(end, "missing `b = …` statement".into()))?;
    let (a_expr, a_pos) = a.ok_or_else(|| semantic(end, "missing `a(i) = …` statement".into()))?;
    let var_sym = p.series_var.ok_or_else(|| semantic(a_pos, "a(i) needs a weight factor `v^k` or `z^k` (k ≥ 1)".into()))?;

    let mut factors = Vec::new();
    flatten_product(&a_expr, &mut factors);
    let (mut ladder, mut weight, mut power) = (Vec::new(), Vec::new(), 0usize);
    for f in factors {
        match weight_power(&f, var_sym)? {
            Some(k) => {
                power += k;
                weight.push(f);
            }
            None => ladder.push(f),
        }
    }
    if power == 0 {
        return Err(semantic(a_pos, format!("a(i) needs a weight factor `{var_sym}^k` with k ≥ 1; a weight with a constant term is not allowed")));
    }

    let var = if var_sym == Symbol::V { Var::V } else { Var::Z };
    let doc = SpecDoc {
        ladder_expr: product(ladder, a_expr.pos),
        weight_expr: product(weight, a_expr.pos),
        weight_power: power,
        b_expr,
        a_expr,
        params,
        var,
    };
    if !doc.b_expr.mentions(Symbol::D) || doc.params.contains_key("d") {
        doc.eval_b(&BTreeMap::new())?;
    }
    Ok(doc)
}
