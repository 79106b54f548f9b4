//! Polynomials in one series variable whose coefficients are Laurent
//! polynomials in `q`. Used where a quantity is an exact polynomial in the
//! series variable (Pochhammer products, partial denominators, the
//! coefficient-wise functional equations) rather than a truncated series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{LaurentPoly, QCoeff, TruncSeries, Var};

/// `Σ_k p_k(q) x^k`, stored densely in `k` with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    coeffs: Vec<LaurentPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_q(LaurentPoly::one())
    }

    pub fn from_q(p: LaurentPoly) -> Self {
        Self::from_coeffs(vec![p])
    }

    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        let mut b = BiPoly { coeffs };
        b.trim();
        b
    }

    /// `c·q^qexp·x^xexp`.
    pub fn monomial(c: impl Into<QCoeff>, qexp: i64, xexp: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); xexp + 1];
        coeffs[xexp] = LaurentPoly::monomial(c, qexp);
        Self::from_coeffs(coeffs)
    }

    /// `x^k`.
    pub fn var_pow(k: usize) -> Self {
        Self::monomial(1, 0, k)
    }

    /// Reads a truncated series as the exact polynomial of its stored terms.
    pub fn from_series(s: &TruncSeries) -> Self {
        Self::from_coeffs(s.coeffs().to_vec())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power of the variable with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> LaurentPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// `Some(p)` when the polynomial does not involve the series variable.
    pub fn as_q_only(&self) -> Option<LaurentPoly> {
        match self.coeffs.len() {
            0 => Some(LaurentPoly::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// `Some((p, k))` when the polynomial is `p(q)·x^k`.
    pub fn as_single_power(&self) -> Option<(LaurentPoly, usize)> {
        let k = self.valuation()?;
        (k + 1 == self.coeffs.len()).then(|| (self.coeffs[k].clone(), k))
    }

    pub fn scale_q(&self, p: &LaurentPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * p).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_series(&self, var: Var, order: usize) -> TruncSeries {
        let coeffs = (0..=order).map(|k| self.coeff(k)).collect();
        TruncSeries::from_coeffs(var, coeffs)
    }

    /// Value at `q = 1`, as a polynomial in the series variable.
    pub fn eval_q_at_one(&self) -> BiPoly {
        Self::from_coeffs(self.coeffs.iter().map(|c| LaurentPoly::constant(c.eval_at_one())).collect())
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![LaurentPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        BiPoly::from_coeffs(out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $f(self, rhs: BiPoly) -> BiPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $f(self, rhs: &BiPoly) -> BiPoly {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl From<LaurentPoly> for BiPoly {
    fn from(p: LaurentPoly) -> Self {
        BiPoly::from_q(p)
    }
}

/// Flattened terms, ascending by power of `v` then by power of `q`.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            for (e, x) in c.terms() {
                let mut mono = super::laurent::q_monomial(*e);
                let v = match k {
                    0 => String::new(),
                    1 => "v".to_string(),
                    _ => format!("v^{k}"),
                };
                if !v.is_empty() {
                    mono = if mono.is_empty() { v } else { format!("{mono}*{v}") };
                }
                super::laurent::write_term(f, x, &mono, first)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_display() {
        // (1 + q·v)(1 + q^3·v)
        let a = &BiPoly::one() + &BiPoly::monomial(1, 1, 1);
        let b = &BiPoly::one() + &BiPoly::monomial(1, 3, 1);
        let p = &a * &b;
        assert_eq!(p.to_string(), "1 + q*v + q^3*v + q^4*v^2");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_q_at_one().to_string(), "1 + 2*v + v^2");
    }

    #[test]
    fn cancellation_trims() {
        let a = BiPoly::monomial(2, -1, 3);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(a.as_single_power(), Some((LaurentPoly::monomial(2, -1), 3)));
        assert_eq!(BiPoly::var_pow(2).valuation(), Some(2));
    }
}
