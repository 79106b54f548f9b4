//! Exact rational scalars.
//!
//! Almost every coefficient that shows up in practice is a small integer, so
//! `QCoeff` keeps those in an `i64` and only promotes to `BigRational` on
//! overflow or when a genuine fraction appears. A value that is an integer
//! fitting in `i64` is always stored in the small form, which keeps derived
//! equality and hashing structural.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64),
    Big(Box<BigRational>),
}

/// An arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QCoeff(Repr);

impl QCoeff {
    pub const ZERO: QCoeff = QCoeff(Repr::Small(0));
    pub const ONE: QCoeff = QCoeff(Repr::Small(1));

    pub fn from_int(n: i64) -> Self {
        QCoeff(Repr::Small(n))
    }

    /// `num / den`, reduced. Panics when `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_big(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.denom().is_one() {
            if let Some(n) = r.numer().to_i64() {
                return QCoeff(Repr::Small(n));
            }
        }
        QCoeff(Repr::Big(Box::new(r)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n) => BigRational::from_integer((*n).into()),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n) => (*n).into(),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    /// Always positive.
    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_) => BigInt::one(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_) => true,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n) => Some(*n),
            Repr::Big(_) => None,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_div(&self, rhs: &QCoeff) -> Option<QCoeff> {
        if rhs.is_zero() {
            return None;
        }
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if a.checked_rem(*b) == Some(0) {
                if let Some(q) = a.checked_div(*b) {
                    return Some(QCoeff::from_int(q));
                }
            }
        }
        Some(Self::from_big(self.to_big() / rhs.to_big()))
    }

    pub fn recip(&self) -> Option<QCoeff> {
        QCoeff::ONE.checked_div(self)
    }

    /// `self += a * b` without intermediate clones on the fast path.
    pub fn add_mul(&mut self, a: &QCoeff, b: &QCoeff) {
        if let (Repr::Small(s), Repr::Small(x), Repr::Small(y)) = (&mut self.0, &a.0, &b.0) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(r) = s.checked_add(p) {
                    *s = r;
                    return;
                }
            }
        }
        *self = &*self + &(a * b);
    }
}

impl Default for QCoeff {
    fn default() -> Self {
        QCoeff::ZERO
    }
}

impl From<i64> for QCoeff {
    fn from(n: i64) -> Self {
        QCoeff::from_int(n)
    }
}

impl From<i32> for QCoeff {
    fn from(n: i32) -> Self {
        QCoeff::from_int(n as i64)
    }
}

impl From<BigInt> for QCoeff {
    fn from(n: BigInt) -> Self {
        QCoeff::from_bigint(n)
    }
}

impl From<BigRational> for QCoeff {
    fn from(r: BigRational) -> Self {
        QCoeff::from_big(r)
    }
}

impl Zero for QCoeff {
    fn zero() -> Self {
        QCoeff::ZERO
    }
    fn is_zero(&self) -> bool {
        QCoeff::is_zero(self)
    }
}

impl One for QCoeff {
    fn one() -> Self {
        QCoeff::ONE
    }
}

impl<'a> Add<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                return QCoeff::from_int(s);
            }
        }
        QCoeff::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_sub(*b) {
                return QCoeff::from_int(s);
            }
        }
        QCoeff::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_mul(*b) {
                return QCoeff::from_int(s);
            }
        }
        QCoeff::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Div<&'a QCoeff> for &'a QCoeff {
    type Output = QCoeff;
    /// Panics on division by zero.
    fn div(self, rhs: &QCoeff) -> QCoeff {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        match &self.0 {
            Repr::Small(n) => match n.checked_neg() {
                Some(m) => QCoeff::from_int(m),
                None => QCoeff::from_big(-self.to_big()),
            },
            Repr::Big(r) => QCoeff::from_big(-(**r).clone()),
        }
    }
}

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<QCoeff> for QCoeff {
            type Output = QCoeff;
            fn $f(self, rhs: QCoeff) -> QCoeff {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a QCoeff> for QCoeff {
            type Output = QCoeff;
            fn $f(self, rhs: &QCoeff) -> QCoeff {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&QCoeff> for QCoeff {
    fn add_assign(&mut self, rhs: &QCoeff) {
        if let (Repr::Small(a), Repr::Small(b)) = (&mut self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                *a = s;
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&QCoeff> for QCoeff {
    fn sub_assign(&mut self, rhs: &QCoeff) {
        if let (Repr::Small(a), Repr::Small(b)) = (&mut self.0, &rhs.0) {
            if let Some(s) = a.checked_sub(*b) {
                *a = s;
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n) => write!(f, "{n}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = QCoeff::from_int(i64::MAX);
        let sum = &big + &QCoeff::ONE;
        assert!(sum.as_i64().is_none());
        let back = &sum - &QCoeff::ONE;
        assert_eq!(back, big);
        assert_eq!(back.as_i64(), Some(i64::MAX));
    }

    #[test]
    fn fractions_reduce() {
        let a = QCoeff::ratio(6, 4);
        assert_eq!(a.to_string(), "3/2");
        assert_eq!(a.denom(), BigInt::from(2));
        let b = &a * &QCoeff::from_int(2);
        assert_eq!(b, QCoeff::from_int(3));
        assert_eq!(QCoeff::ratio(0, -7), QCoeff::ZERO);
        assert_eq!(QCoeff::ratio(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn add_mul_matches_naive() {
        let mut acc = QCoeff::from_int(5);
        acc.add_mul(&QCoeff::from_int(i64::MAX), &QCoeff::from_int(3));
        let expected = &QCoeff::from_int(5) + &(&QCoeff::from_int(i64::MAX) * &QCoeff::from_int(3));
        assert_eq!(acc, expected);
        let mut r = QCoeff::ratio(1, 3);
        r.add_mul(&QCoeff::ratio(1, 2), &QCoeff::from_int(2));
        assert_eq!(r, QCoeff::ratio(4, 3));
    }

    #[test]
    fn division() {
        assert!(QCoeff::ONE.checked_div(&QCoeff::ZERO).is_none());
        assert_eq!(QCoeff::from_int(6).checked_div(&QCoeff::from_int(3)), Some(QCoeff::from_int(2)));
        assert_eq!(QCoeff::from_int(1).checked_div(&QCoeff::from_int(3)), Some(QCoeff::ratio(1, 3)));
        assert_eq!(QCoeff::from_int(i64::MIN).checked_div(&QCoeff::from_int(-1)).unwrap().to_string(), "9223372036854775808");
    }
}
