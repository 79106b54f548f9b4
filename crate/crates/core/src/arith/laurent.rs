//! Sparse Laurent polynomials in `q` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ArithError, QCoeff};

/// Products whose exponent span is at most this many times the number of
/// term pairs are accumulated in a dense buffer.
const DENSE_SPAN_FACTOR: usize = 8;

/// A finite sum `Σ c_e q^e` with `e ∈ ℤ`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so two values
/// are equal exactly when their term lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, QCoeff)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(QCoeff::ONE)
    }

    pub fn constant(c: impl Into<QCoeff>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·q^e`.
    pub fn monomial(c: impl Into<QCoeff>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(QCoeff::ONE, e)
    }

    /// `1 - c·q^e`, the shape of every Pochhammer factor.
    pub fn one_minus(c: impl Into<QCoeff>, e: i64) -> Self {
        Self::one() - Self::monomial(c, e)
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<QCoeff>,
    {
        let mut map: BTreeMap<i64, QCoeff> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += &c.into();
        }
        LaurentPoly { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Dense coefficients starting at `q^offset`.
    pub fn from_dense(offset: i64, coeffs: impl IntoIterator<Item = QCoeff>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (offset + k as i64, c))
            .collect();
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(i64, QCoeff)] {
        &self.terms
    }

    /// Number of nonzero terms; emptiness is [`Self::is_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(0, c)] if c.is_one())
    }

    pub fn coeff(&self, e: i64) -> QCoeff {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => QCoeff::ZERO,
        }
    }

    /// Coefficient of `q^0`.
    pub fn constant_term(&self) -> QCoeff {
        self.coeff(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// `Some((c, e))` when the polynomial is the single term `c·q^e`.
    pub fn as_monomial(&self) -> Option<(&QCoeff, i64)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((c, *e)),
            _ => None,
        }
    }

    pub fn has_nonnegative_exponents(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `q ↦ q^k`.
    pub fn substitute_q_pow(&self, k: i64) -> Self {
        assert!(k != 0, "q -> q^0 collapses the polynomial; use eval");
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> QCoeff {
        let mut acc = QCoeff::ZERO;
        for (_, c) in &self.terms {
            acc += c;
        }
        acc
    }

    /// Drops every term with exponent above `max_exp`.
    pub fn truncate_above(&self, max_exp: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().filter(|(e, _)| *e <= max_exp).cloned().collect() }
    }

    /// Euclidean division by `divisor`, treating both as ordinary polynomials
    /// after shifting to the lowest exponent. The remainder has degree span
    /// strictly below the divisor's, and `self = quot·divisor + rem`.
    pub fn div_rem(&self, divisor: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly), ArithError> {
        let (d_lo, d_hi) = match (divisor.min_exp(), divisor.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(ArithError::DivisionByZero),
        };
        let (n_lo, n_hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Ok((Self::zero(), Self::zero())),
        };
        let d_span = (d_hi - d_lo) as usize;
        let n_span = (n_hi - n_lo) as usize;
        if n_span < d_span {
            return Ok((Self::zero(), self.clone()));
        }
        // Dense little-endian buffers relative to each lowest exponent.
        let mut rem = vec![QCoeff::ZERO; n_span + 1];
        for (e, c) in &self.terms {
            rem[(e - n_lo) as usize] = c.clone();
        }
        let den: Vec<(usize, &QCoeff)> =
            divisor.terms.iter().map(|(e, c)| ((e - d_lo) as usize, c)).collect();
        let lead = divisor.terms.last().map(|(_, c)| c).expect("nonzero divisor");
        let lead_inv = lead.recip().expect("nonzero leading coefficient");
        let mut quot = vec![QCoeff::ZERO; n_span - d_span + 1];
        for k in (0..=n_span - d_span).rev() {
            let top = &rem[k + d_span];
            if top.is_zero() {
                continue;
            }
            let factor = top * &lead_inv;
            for (off, c) in &den {
                let slot = &mut rem[k + off];
                *slot -= &(&factor * c);
            }
            quot[k] = factor;
        }
        let quot = Self::from_dense(n_lo - d_lo, quot);
        let rem = Self::from_dense(n_lo, rem);
        Ok((quot, rem))
    }

    /// Exact quotient; fails when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
        let (quot, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(ArithError::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() })
        }
    }

    /// Inverse as a power series in `q`, valid modulo `q^(qmax+1)`.
    ///
    /// Requires a nonzero constant coefficient and no negative exponents.
    pub fn inverse_series(&self, qmax: u32) -> Result<LaurentPoly, ArithError> {
        let c0 = self.constant_term();
        if c0.is_zero() || !self.has_nonnegative_exponents() {
            return Err(ArithError::NonInvertible { constant: self.to_string() });
        }
        let c0_inv = c0.recip().expect("nonzero");
        let n = qmax as usize;
        let mut inv = vec![QCoeff::ZERO; n + 1];
        inv[0] = c0_inv.clone();
        for k in 1..=n {
            let mut acc = QCoeff::ZERO;
            for (e, c) in &self.terms {
                let e = *e as usize;
                if e == 0 || e > k {
                    continue;
                }
                acc.add_mul(c, &inv[k - e]);
            }
            inv[k] = -(&acc * &c0_inv);
        }
        Ok(Self::from_dense(0, inv))
    }

    /// `base + Σ a·b` over `pairs`, accumulated in one buffer.
    pub fn sum_of_products<'a>(
        base: &LaurentPoly,
        pairs: impl IntoIterator<Item = (&'a LaurentPoly, &'a LaurentPoly)>,
    ) -> LaurentPoly {
        let pairs: Vec<_> = pairs.into_iter().filter(|(a, b)| !a.is_zero() && !b.is_zero()).collect();
        if pairs.is_empty() {
            return base.clone();
        }
        let mut lo = base.min_exp().unwrap_or(i64::MAX);
        let mut hi = base.max_exp().unwrap_or(i64::MIN);
        let mut work = base.len();
        for (a, b) in &pairs {
            lo = lo.min(a.min_exp().unwrap() + b.min_exp().unwrap());
            hi = hi.max(a.max_exp().unwrap() + b.max_exp().unwrap());
            work = work.saturating_add(a.len() * b.len());
        }
        let span = (hi - lo + 1) as usize;
        if span > work.saturating_mul(DENSE_SPAN_FACTOR) {
            return pairs.iter().fold(base.clone(), |acc, (a, b)| &acc + &(*a * *b));
        }
        if let Some(p) = Self::sum_of_small_products(base, &pairs, lo, span) {
            return p;
        }
        let mut acc = vec![QCoeff::ZERO; span];
        for (e, c) in &base.terms {
            acc[(e - lo) as usize] = c.clone();
        }
        for (a, b) in &pairs {
            let off = a.min_exp().unwrap() + b.min_exp().unwrap() - lo;
            let (a_lo, b_lo) = (a.min_exp().unwrap(), b.min_exp().unwrap());
            for (ea, ca) in &a.terms {
                let base = off + ea - a_lo;
                for (eb, cb) in &b.terms {
                    acc[(base + eb - b_lo) as usize].add_mul(ca, cb);
                }
            }
        }
        Self::from_dense(lo, acc)
    }

    /// [`Self::sum_of_products`] in `i128`, when every input coefficient is
    /// an `i64` and no partial sum overflows.
    fn sum_of_small_products(
        base: &LaurentPoly,
        pairs: &[(&LaurentPoly, &LaurentPoly)],
        lo: i64,
        span: usize,
    ) -> Option<LaurentPoly> {
        let all_small = |p: &LaurentPoly| p.terms.iter().all(|(_, c)| c.as_i64().is_some());
        if !all_small(base) || !pairs.iter().all(|(a, b)| all_small(a) && all_small(b)) {
            return None;
        }
        let small = |c: &QCoeff| i128::from(c.as_i64().expect("checked above"));
        let mut acc = vec![0i128; span];
        for (e, c) in &base.terms {
            acc[(e - lo) as usize] = small(c);
        }
        for (a, b) in pairs {
            for (ea, ca) in &a.terms {
                let ca = small(ca);
                for (eb, cb) in &b.terms {
                    let slot = &mut acc[(ea + eb - lo) as usize];
                    *slot = slot.checked_add(ca * small(cb))?;
                }
            }
        }
        Some(Self::from_dense(
            lo,
            acc.into_iter().map(|n| match i64::try_from(n) {
                Ok(m) => QCoeff::from_int(m),
                Err(_) => QCoeff::from_bigint(n.into()),
            }),
        ))
    }

    fn mul_impl(&self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if let Some((c, e)) = rhs.as_monomial() {
            return LaurentPoly { terms: self.terms.iter().map(|(x, d)| (x + e, d * c)).collect() };
        }
        if let Some((c, e)) = self.as_monomial() {
            return LaurentPoly { terms: rhs.terms.iter().map(|(x, d)| (x + e, c * d)).collect() };
        }
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + rhs.max_exp().unwrap();
        let span = (hi - lo + 1) as usize;
        let pairs = self.len() * rhs.len();
        if span <= pairs.saturating_mul(DENSE_SPAN_FACTOR) {
            Self::sum_of_products(&Self::zero(), [(self, rhs)])
        } else {
            let mut map: BTreeMap<i64, QCoeff> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    map.entry(ea + eb).or_default().add_mul(ca, cb);
                }
            }
            LaurentPoly { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
        }
    }

    fn merge(&self, rhs: &LaurentPoly, negate_rhs: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.len() + rhs.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate_rhs { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_rhs { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly { terms: out }
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl From<i64> for LaurentPoly {
    fn from(n: i64) -> Self {
        LaurentPoly::constant(n)
    }
}

impl From<QCoeff> for LaurentPoly {
    fn from(c: QCoeff) -> Self {
        LaurentPoly::constant(c)
    }
}

/// Writes one signed term. `first` controls whether a leading `+` is dropped.
pub(crate) fn write_term(
    f: &mut impl fmt::Write,
    c: &QCoeff,
    monomial: &str,
    first: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if monomial.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        f.write_str(monomial)
    } else {
        write!(f, "{abs}*{monomial}")
    }
}

pub(crate) fn q_monomial(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{e}"),
    }
}

/// Terms ascending by exponent, e.g. `1 - 2*q + q^2`, `-q^-2 + 3/2*q`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            write_term(f, c, &q_monomial(*e), k == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::q_pow(1)
    }

    #[test]
    fn difference_of_squares() {
        let a = LaurentPoly::one() - q();
        let b = LaurentPoly::one() + q();
        assert_eq!(&a * &b, LaurentPoly::one_minus(1, 2));
    }

    #[test]
    fn exponent_cancellation() {
        assert_eq!(LaurentPoly::q_pow(-1) * q(), LaurentPoly::one());
    }

    #[test]
    fn binomial_square() {
        let a = LaurentPoly::one() - q();
        assert_eq!(a.pow(2), LaurentPoly::from_terms([(0, 1), (1, -2), (2, 1)]));
        assert_eq!(&a * &a, a.pow(2));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let a = LaurentPoly::one() + q();
        let b = &a - &a;
        assert!(b.is_zero());
        assert_eq!(b, LaurentPoly::zero());
        assert_eq!(LaurentPoly::from_terms([(3, 1), (3, -1)]), LaurentPoly::zero());
    }

    #[test]
    fn sparse_product_path() {
        // Span far larger than the number of term pairs forces the map path.
        let a = LaurentPoly::from_terms([(0, 1), (1000, 1)]);
        let b = LaurentPoly::from_terms([(0, 1), (-1000, -1)]);
        assert_eq!(&a * &b, LaurentPoly::from_terms([(-1000, -1), (1000, 1)]));
    }

    #[test]
    fn long_division() {
        let num = LaurentPoly::one_minus(1, 6);
        let den = LaurentPoly::one_minus(1, 2);
        let quot = num.div_exact(&den).unwrap();
        assert_eq!(quot, LaurentPoly::from_terms([(0, 1), (2, 1), (4, 1)]));
        let (quot, rem) = LaurentPoly::from_terms([(-3, 1), (0, 2)]).div_rem(&(LaurentPoly::one() + q())).unwrap();
        assert_eq!(&(&quot * &(LaurentPoly::one() + q())) + &rem, LaurentPoly::from_terms([(-3, 1), (0, 2)]));
        assert!(LaurentPoly::one().div_exact(&(LaurentPoly::one() - q())).is_err());
        assert!(matches!(LaurentPoly::one().div_rem(&LaurentPoly::zero()), Err(ArithError::DivisionByZero)));
    }

    #[test]
    fn series_inverse() {
        let inv = (LaurentPoly::one() - q()).inverse_series(5).unwrap();
        assert_eq!(inv, LaurentPoly::from_terms((0..=5).map(|e| (e, 1))));
        assert!(q().inverse_series(5).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::from_terms([(0, 1), (1, -2), (2, 1)]).to_string(), "1 - 2*q + q^2");
        assert_eq!(LaurentPoly::monomial(-1, 6).to_string(), "-q^6");
        let p = LaurentPoly::from_terms([(-2, QCoeff::from_int(-1)), (1, QCoeff::ratio(3, 2))]);
        assert_eq!(p.to_string(), "-q^-2 + 3/2*q");
    }

    #[test]
    fn eval_and_substitute() {
        let p = LaurentPoly::from_terms([(0, 1), (1, 2), (3, 3)]);
        assert_eq!(p.eval_at_one(), QCoeff::from_int(6));
        assert_eq!(p.substitute_q_pow(2), LaurentPoly::from_terms([(0, 1), (2, 2), (6, 3)]));
    }
}
