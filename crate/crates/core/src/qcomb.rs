//! q-Pochhammer symbols, Gaussian binomial coefficients and triangular
//! q-powers.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::arith::{BiPoly, LaurentPoly, QCoeff, TruncSeries, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcombError {
    #[error("Gaussian binomial with negative upper index {n} is not supported")]
    NegativeUpperIndex { n: i64 },
}

/// The base `x = scalar·q^qexp·v^vexp` of a Pochhammer symbol `(x; q^step)_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMonomialBase {
    pub scalar: QCoeff,
    pub qexp: i64,
    pub vexp: u32,
}

impl QMonomialBase {
    pub fn new(scalar: impl Into<QCoeff>, qexp: i64, vexp: u32) -> Self {
        QMonomialBase { scalar: scalar.into(), qexp, vexp }
    }

    /// `q^e`.
    pub fn q_power(e: i64) -> Self {
        Self::new(1, e, 0)
    }

    fn times_q_pow(&self, e: i64) -> BiPoly {
        BiPoly::monomial(self.scalar.clone(), self.qexp + e, self.vexp as usize)
    }
}

/// `∏_{j<n} (1 - x·q^{step·j})` as an exact polynomial in `v`.
pub fn q_pochhammer_poly(x: &QMonomialBase, step: u32, n: usize) -> BiPoly {
    let mut acc = BiPoly::one();
    for j in 0..n {
        let factor = &BiPoly::one() - &x.times_q_pow(step as i64 * j as i64);
        acc = &acc * &factor;
    }
    acc
}

/// `(x; q^step)_n` as a series in `v` of order `n·vexp`, which holds the
/// product exactly.
pub fn q_pochhammer(x: &QMonomialBase, step: u32, n: usize) -> TruncSeries {
    q_pochhammer_poly(x, step, n).to_series(Var::V, n * x.vexp as usize)
}

/// `(c·q^e; q^step)_n` for a base free of `v`.
pub fn q_pochhammer_q(c: impl Into<QCoeff>, e: i64, step: u32, n: usize) -> LaurentPoly {
    let c = c.into();
    let mut acc = LaurentPoly::one();
    for j in 0..n {
        acc = &acc * &LaurentPoly::one_minus(c.clone(), e + step as i64 * j as i64);
    }
    acc
}

/// `(q;q)_n`.
pub fn q_factorial(n: usize) -> LaurentPoly {
    q_pochhammer_q(1, 1, 1, n)
}

/// `[n choose k]_q`, zero outside `0 ≤ k ≤ n`.
///
/// Computed as the exact quotient `(q;q)_n / ((q;q)_k (q;q)_{n-k})`.
pub fn gauss_binom(n: i64, k: i64) -> Result<LaurentPoly, QcombError> {
    if n < 0 {
        return Err(QcombError::NegativeUpperIndex { n });
    }
    if k < 0 || k > n {
        return Ok(LaurentPoly::zero());
    }
    let k = k.min(n - k) as usize;
    let n = n as usize;
    // (q^{n-k+1};q)_k / (q;q)_k
    let num = q_pochhammer_q(1, (n - k + 1) as i64, 1, k);
    let den = q_factorial(k);
    Ok(num.div_exact(&den).expect("(q;q)_k divides (q^{n-k+1};q)_k"))
}

/// Which triangular number to put in the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangular {
    /// `binom(k, 2)`
    Lower,
    /// `binom(k+1, 2)`
    Upper,
}

pub fn triangular(k: i64, t: Triangular) -> i64 {
    match t {
        Triangular::Lower => k * (k - 1) / 2,
        Triangular::Upper => k * (k + 1) / 2,
    }
}

/// `q^{binom(k,2)}` or `q^{binom(k+1,2)}`.
pub fn q_triangular(k: u64, t: Triangular) -> LaurentPoly {
    LaurentPoly::q_pow(triangular(k as i64, t))
}

/// Ordinary binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}
