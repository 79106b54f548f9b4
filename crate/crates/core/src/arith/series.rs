//! Truncated power series in one formal variable with Laurent-polynomial
//! coefficients.
//!
//! A series of order `N` carries exactly the coefficients of `x^0..=x^N`.
//! Binary operations require matching variables and produce a result of
//! order `min(a.order, b.order)`.

use std::fmt;
use std::str::FromStr;

use super::{ArithError, LaurentPoly, QCoeff};

/// Default q-degree bound for inverting a non-monomial constant term.
pub const DEFAULT_QMAX: u32 = 256;

/// Tag for the formal variable a series is expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    V,
    Z,
    T,
    X,
    Y,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::V => "v",
            Var::Z => "z",
            Var::T => "t",
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "v" => Ok(Var::V),
            "z" => Ok(Var::Z),
            "t" => Ok(Var::T),
            "x" => Ok(Var::X),
            "y" => Ok(Var::Y),
            _ => Err(format!("unknown series variable `{s}` (expected one of v, z, t, x, y)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    var: Var,
    coeffs: Vec<LaurentPoly>,
}

/// How the constant term of a divisor gets inverted.
enum ConstInverse {
    Monomial { c_inv: QCoeff, shift: i64 },
    Truncated { c0: LaurentPoly, inv: LaurentPoly, qmax: i64 },
}

impl ConstInverse {
    fn new(c0: &LaurentPoly, qmax: u32) -> Result<Self, ArithError> {
        if let Some((c, e)) = c0.as_monomial() {
            return Ok(ConstInverse::Monomial { c_inv: c.recip().expect("nonzero"), shift: -e });
        }
        let inv = c0.inverse_series(qmax)?;
        Ok(ConstInverse::Truncated { c0: c0.clone(), inv, qmax: qmax as i64 })
    }

    fn apply(&self, p: &LaurentPoly) -> LaurentPoly {
        match self {
            ConstInverse::Monomial { c_inv, shift } => p.scale(c_inv).shift(*shift),
            ConstInverse::Truncated { c0, inv, qmax } => match p.div_exact(c0) {
                Ok(exact) => exact,
                Err(_) => (p * inv).truncate_above(*qmax),
            },
        }
    }
}

impl TruncSeries {
    pub fn zero(var: Var, order: usize) -> Self {
        TruncSeries { var, coeffs: vec![LaurentPoly::zero(); order + 1] }
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, LaurentPoly::one(), order)
    }

    pub fn constant(var: Var, c: LaurentPoly, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    /// `c·x^power`; zero if `power > order`.
    pub fn monomial(var: Var, c: LaurentPoly, power: usize, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The series `x` itself.
    pub fn variable(var: Var, order: usize) -> Self {
        Self::monomial(var, LaurentPoly::one(), 1, order)
    }

    /// Order is `coeffs.len() - 1`. Panics on an empty vector.
    pub fn from_coeffs(var: Var, coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        TruncSeries { var, coeffs }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// Coefficient of `x^k`. Panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> &LaurentPoly {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the order of a truncated series");
        TruncSeries { var: self.var, coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Relabels the variable.
    pub fn with_var(&self, var: Var) -> Self {
        TruncSeries { var, coeffs: self.coeffs.clone() }
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        TruncSeries { var: self.var, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn eval_q_at_one(&self) -> Self {
        self.map_coeffs(|c| LaurentPoly::constant(c.eval_at_one()))
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        self.map_coeffs(|c| c * p)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn mul_var_pow(&self, k: usize) -> Self {
        let mut out = Self::zero(self.var, self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= self.order() {
                out.coeffs[i + k] = c.clone();
            }
        }
        out
    }

    fn check_var(&self, rhs: &TruncSeries) -> Result<(), ArithError> {
        if self.var == rhs.var {
            Ok(())
        } else {
            Err(ArithError::VariableMismatch { left: self.var, right: rhs.var })
        }
    }

    pub fn add(&self, rhs: &TruncSeries) -> Result<Self, ArithError> {
        self.check_var(rhs)?;
        let n = self.order().min(rhs.order());
        Ok(TruncSeries { var: self.var, coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() })
    }

    pub fn sub(&self, rhs: &TruncSeries) -> Result<Self, ArithError> {
        self.check_var(rhs)?;
        let n = self.order().min(rhs.order());
        Ok(TruncSeries { var: self.var, coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() })
    }

    pub fn mul(&self, rhs: &TruncSeries) -> Result<Self, ArithError> {
        self.check_var(rhs)?;
        let n = self.order().min(rhs.order());
        let zero = LaurentPoly::zero();
        let out = (0..=n)
            .map(|k| LaurentPoly::sum_of_products(&zero, (0..=k).map(|i| (&self.coeffs[i], &rhs.coeffs[k - i]))))
            .collect();
        Ok(TruncSeries { var: self.var, coeffs: out })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.var, self.order());
        for _ in 0..n {
            acc = acc.mul(self).expect("same variable");
        }
        acc
    }

    pub fn div(&self, rhs: &TruncSeries) -> Result<Self, ArithError> {
        self.div_with_qmax(rhs, DEFAULT_QMAX)
    }

    /// Series division. The divisor's constant term must be a monomial
    /// (exact inversion) or have a nonzero `q^0` coefficient and no negative
    /// exponents. In the second case each step first tries exact polynomial
    /// division; when that fails the constant is inverted as a power series
    /// in `q` and the coefficient is only correct modulo `q^(qmax+1)`.
    pub fn div_with_qmax(&self, rhs: &TruncSeries, qmax: u32) -> Result<Self, ArithError> {
        self.check_var(rhs)?;
        let d0 = &rhs.coeffs[0];
        if d0.is_zero() {
            return Err(ArithError::NonInvertible { constant: d0.to_string() });
        }
        let inv = ConstInverse::new(d0, qmax)?;
        let n = self.order().min(rhs.order());
        let neg: Vec<LaurentPoly> = rhs.coeffs[..=n].iter().map(|d| -d).collect();
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let acc = LaurentPoly::sum_of_products(&self.coeffs[k], neg[1..=k].iter().zip(out[..k].iter().rev()));
            out.push(inv.apply(&acc));
        }
        Ok(TruncSeries { var: self.var, coeffs: out })
    }

    pub fn arith(&self, op: BinOp, rhs: &TruncSeries) -> Result<Self, ArithError> {
        match op {
            BinOp::Add => self.add(rhs),
            BinOp::Sub => self.sub(rhs),
            BinOp::Mul => self.mul(rhs),
            BinOp::Div => self.div(rhs),
        }
    }

    /// `self(inner(y))` where `y` is `inner`'s variable. Coefficients up to
    /// `min(self.order, inner.order)` are exact.
    pub fn compose(&self, inner: &TruncSeries) -> Result<Self, ArithError> {
        if !inner.coeffs[0].is_zero() {
            return Err(ArithError::NonZeroConstant { constant: inner.coeffs[0].to_string() });
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(inner.var, self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = &acc.coeffs[0] + &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse: the series `g` with `self(g(x)) = x`.
    /// Needs a zero constant term and a monomial coefficient of `x`.
    pub fn reversion(&self) -> Result<Self, ArithError> {
        if !self.coeffs[0].is_zero() {
            return Err(ArithError::NonZeroConstant { constant: self.coeffs[0].to_string() });
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(self.var, 0));
        }
        let lin = ConstInverse::new(&self.coeffs[1], DEFAULT_QMAX)?;
        if !matches!(lin, ConstInverse::Monomial { .. }) {
            return Err(ArithError::NonInvertible { constant: self.coeffs[1].to_string() });
        }
        let mut g = Self::monomial(self.var, lin.apply(&LaurentPoly::one()), 1, n);
        for k in 2..=n {
            let err = self.compose(&g)?.coeffs[k].clone();
            if !err.is_zero() {
                g.coeffs[k] = &g.coeffs[k] - &lin.apply(&err);
            }
        }
        Ok(g)
    }

    /// First power at which two series (compared up to the smaller order)
    /// differ.
    pub fn first_difference(&self, rhs: &TruncSeries) -> Option<usize> {
        let n = self.order().min(rhs.order());
        (0..=n).find(|&k| self.coeffs[k] != rhs.coeffs[k])
    }

    /// One line per power: `v^k: <polynomial>`.
    pub fn render_lines(&self, label: Var) -> Vec<String> {
        self.coeffs.iter().enumerate().map(|(k, c)| format!("{label}^{k}: {c}")).collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{k}", self.var)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({self})")
    }
}
