//! Formal quotients of polynomials, compared by cross-multiplication.

use std::fmt;

use super::{ArithError, BiPoly, LaurentPoly};

/// The ring operations `RatFun` needs from its numerator/denominator type.
pub trait PolyRing: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
}

impl PolyRing for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl PolyRing for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// `num / den` with no gcd reduction. Equality is `a.num·b.den == b.num·a.den`.
#[derive(Clone)]
pub struct RatFun<P> {
    num: P,
    den: P,
}

/// Rational function in `q`.
pub type QRatFun = RatFun<LaurentPoly>;
/// Rational function in `q` and one series variable.
pub type BiRatFun = RatFun<BiPoly>;

impl<P: PolyRing> RatFun<P> {
    pub fn new(num: P, den: P) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: P) -> Self {
        RatFun { num: p, den: P::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(P::zero())
    }

    pub fn num(&self) -> &P {
        &self.num
    }

    pub fn den(&self) -> &P {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RatFun { num: self.num.add(&rhs.num), den: self.den.clone() };
        }
        RatFun {
            num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RatFun { num: self.num.sub(&rhs.num), den: self.den.clone() };
        }
        RatFun {
            num: self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RatFun { num: self.num.mul(&rhs.num), den: self.den.mul(&rhs.den) }
    }

    pub fn mul_poly(&self, p: &P) -> Self {
        RatFun { num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, ArithError> {
        if rhs.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(RatFun { num: self.num.mul(&rhs.den), den: self.den.mul(&rhs.num) })
    }

    pub fn neg(&self) -> Self {
        RatFun { num: P::zero().sub(&self.num), den: self.den.clone() }
    }

    /// Both sides of the cross-multiplied comparison, `(a.num·b.den, b.num·a.den)`.
    pub fn cross(&self, rhs: &Self) -> (P, P) {
        (self.num.mul(&rhs.den), rhs.num.mul(&self.den))
    }
}

impl QRatFun {
    /// The polynomial this quotient represents, if the division is exact.
    pub fn to_poly(&self) -> Result<LaurentPoly, ArithError> {
        self.num.div_exact(&self.den)
    }
}

impl<P: PolyRing> PartialEq for RatFun<P> {
    fn eq(&self, rhs: &Self) -> bool {
        let (l, r) = self.cross(rhs);
        l == r
    }
}

impl<P: PolyRing> fmt::Display for RatFun<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<P: PolyRing> fmt::Debug for RatFun<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn factorization_equality() {
        let a = QRatFun::new(lp(&[(0, 1), (2, -1)]), lp(&[(0, 1), (1, -1)])).unwrap();
        let b = QRatFun::from_poly(lp(&[(0, 1), (1, 1)]));
        assert_eq!(a, b);
        assert_eq!(a.to_poly().unwrap(), lp(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn common_factor() {
        let a = QRatFun::from_poly(lp(&[(1, 1)]));
        let b = QRatFun::new(lp(&[(2, 1)]), lp(&[(1, 1)])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_functions() {
        let a = QRatFun::new(LaurentPoly::one(), lp(&[(0, 1), (1, -1)])).unwrap();
        let b = QRatFun::new(LaurentPoly::one(), lp(&[(0, 1), (2, -1)])).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(QRatFun::new(LaurentPoly::one(), LaurentPoly::zero()), Err(ArithError::ZeroDenominator)));
        assert!(QRatFun::from_poly(LaurentPoly::one()).div(&QRatFun::zero()).is_err());
    }

    #[test]
    fn field_operations() {
        // 1/(1-q) - 1 = q/(1-q)
        let one_minus_q = lp(&[(0, 1), (1, -1)]);
        let a = QRatFun::new(LaurentPoly::one(), one_minus_q.clone()).unwrap();
        let b = a.sub(&QRatFun::from_poly(LaurentPoly::one()));
        assert_eq!(b, QRatFun::new(lp(&[(1, 1)]), one_minus_q.clone()).unwrap());
        let c = b.div(&a).unwrap();
        assert_eq!(c, QRatFun::from_poly(lp(&[(1, 1)])));
        assert_eq!(a.add(&a.neg()), QRatFun::zero());
        assert_eq!(a.mul(&QRatFun::from_poly(one_minus_q)), QRatFun::from_poly(LaurentPoly::one()));
    }
}
