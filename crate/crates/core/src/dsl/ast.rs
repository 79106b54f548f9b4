use std::fmt;

use super::Pos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Q,
    V,
    Z,
    I,
    D,
}

impl Symbol {
    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "q" => Symbol::Q,
            "v" => Symbol::V,
            "z" => Symbol::Z,
            "i" => Symbol::I,
            "d" => Symbol::D,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Q => "q",
            Symbol::V => "v",
            Symbol::Z => "z",
            Symbol::I => "i",
            Symbol::D => "d",
        }
    }

    pub fn is_series_var(self) -> bool {
        matches!(self, Symbol::V | Symbol::Z)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An expression node. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(u64),
    Sym(Symbol),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

/// Integer-valued exponent, linear in `i` and `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(u64),
    Sym(Symbol),
    /// Parenthesized `lterm (± lterm)*`; the first term is always positive.
    Linear(Vec<(Sign, LinearTerm)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearTerm {
    Int(u64),
    Sym(Symbol),
    Scaled(u64, Symbol),
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    /// Calls `f` on every symbol in the tree, exponents included.
    pub fn visit_symbols(&self, f: &mut impl FnMut(Symbol)) {
        match &self.kind {
            ExprKind::Int(_) => {}
            ExprKind::Sym(s) => f(*s),
            ExprKind::Neg(x) => x.visit_symbols(f),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
            ExprKind::Pow(b, e) => {
                b.visit_symbols(f);
                e.visit_symbols(f);
            }
        }
    }

    pub fn mentions(&self, sym: Symbol) -> bool {
        let mut found = false;
        self.visit_symbols(&mut |s| found |= s == sym);
        found
    }

    fn level(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) => 2,
            ExprKind::Neg(..) | ExprKind::Pow(..) => 3,
            ExprKind::Int(_) | ExprKind::Sym(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Sym(s) => write!(f, "{s}"),
            ExprKind::Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 3)
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self.kind, ExprKind::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            ExprKind::Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)
            }
            ExprKind::Pow(b, e) => {
                b.write_at(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl Exponent {
    fn visit_symbols(&self, f: &mut impl FnMut(Symbol)) {
        match self {
            Exponent::Int(_) => {}
            Exponent::Sym(s) => f(*s),
            Exponent::Linear(terms) => {
                for (_, t) in terms {
                    match t {
                        LinearTerm::Int(_) => {}
                        LinearTerm::Sym(s) | LinearTerm::Scaled(_, s) => f(*s),
                    }
                }
            }
        }
    }

    /// Value under an assignment of the exponent symbols.
    pub fn eval(&self, lookup: &impl Fn(Symbol) -> Option<i64>) -> Result<i64, Symbol> {
        let sym = |s: Symbol| lookup(s).ok_or(s);
        match self {
            Exponent::Int(n) => Ok(*n as i64),
            Exponent::Sym(s) => sym(*s),
            Exponent::Linear(terms) => {
                let mut acc = 0i64;
                for (sign, t) in terms {
                    let x = match t {
                        LinearTerm::Int(n) => *n as i64,
                        LinearTerm::Sym(s) => sym(*s)?,
                        LinearTerm::Scaled(n, s) => *n as i64 * sym(*s)?,
                    };
                    acc += if *sign == Sign::Minus { -x } else { x };
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(n) => write!(f, "{n}"),
            Exponent::Sym(s) => write!(f, "{s}"),
            Exponent::Linear(terms) => {
                f.write_str("(")?;
                for (k, (sign, t)) in terms.iter().enumerate() {
                    if k > 0 {
                        f.write_str(if *sign == Sign::Minus { " - " } else { " + " })?;
                    }
                    match t {
                        LinearTerm::Int(n) => write!(f, "{n}")?,
                        LinearTerm::Sym(s) => write!(f, "{s}")?,
                        LinearTerm::Scaled(n, s) => write!(f, "{n}*{s}")?,
                    }
                }
                f.write_str(")")
            }
        }
    }
}
