//! Closed forms, sums and recurrences, each built directly from its formula
//! and never from a continued fraction.

use crate::arith::{ArithError, BiPoly, BiRatFun, LaurentPoly, QCoeff, QRatFun, TruncSeries, Var};
use crate::qcomb::{binomial, gauss_binom, q_factorial, q_pochhammer_poly, q_pochhammer_q, triangular, QMonomialBase, Triangular};

use super::IdentityError;

fn gauss(n: i64, k: i64) -> LaurentPoly {
    gauss_binom(n, k).expect("upper index is nonnegative in every sum here")
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn mono(c: i64, e: i64) -> LaurentPoly {
    LaurentPoly::monomial(c, e)
}

fn big(n: num_bigint::BigInt) -> LaurentPoly {
    LaurentPoly::constant(QCoeff::from_bigint(n))
}

/// `Σ_{|n|≤m} (-1)^n q^{-n^2}`.
fn theta_partial(m: i64) -> LaurentPoly {
    LaurentPoly::from_terms((-m..=m).map(|n| (-n * n, sign(n))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GFKind {
    Catalan,
    Motzkin,
    Schroeder,
}

/// Right-hand side of the defining equation `g = rhs(g)`.
fn gf_step(kind: GFKind, g: &TruncSeries) -> TruncSeries {
    let order = g.order();
    let one = TruncSeries::one(Var::Z, order);
    let g2 = g.mul(g).expect("same variable");
    let rhs = match kind {
        GFKind::Catalan => one.add(&g2.mul_var_pow(1)),
        GFKind::Motzkin => one.add(&g.mul_var_pow(1)).and_then(|s| s.add(&g2.mul_var_pow(2))),
        GFKind::Schroeder => one.add(&g.mul_var_pow(1)).and_then(|s| s.add(&g2.mul_var_pow(1))),
    };
    rhs.expect("same variable")
}

/// `rhs(g) - g` for the defining equation of `kind`.
pub fn gf_residual(kind: GFKind, g: &TruncSeries) -> TruncSeries {
    gf_step(kind, g).sub(g).expect("same variable")
}

/// The power-series root with constant term 1 of `C = 1 + zC^2`,
/// `M = 1 + zM + z^2M^2` or `S = 1 + zS + zS^2`, by fixed-point iteration.
pub fn series_gf(kind: GFKind, order: usize) -> TruncSeries {
    let mut g = TruncSeries::one(Var::Z, order);
    for _ in 0..=order {
        g = gf_step(kind, &g);
    }
    assert!(gf_residual(kind, &g).is_zero(), "fixed point reached after order+1 steps");
    g
}

pub(crate) fn touchard_rhs_tweaked(var: Var, order: usize, tweak: bool) -> TruncSeries {
    let tri = if tweak { Triangular::Lower } else { Triangular::Upper };
    let coeffs = (0..=order as i64).map(|k| mono(sign(k), triangular(k, tri))).collect();
    TruncSeries::from_coeffs(var, coeffs)
}

/// `Σ_k (-1)^k q^{binom(k+1,2)} x^k`.
pub fn touchard_rhs_in(var: Var, order: usize) -> TruncSeries {
    touchard_rhs_tweaked(var, order, false)
}

pub fn series_touchard_rhs(order: usize) -> TruncSeries {
    touchard_rhs_in(Var::V, order)
}

/// `s_i = Σ_n (-1)^n [n+i, i] q^{binom(n+1,2)} v^n`, with `s_{-1} = 1`.
pub fn series_s(i: i64, order: usize) -> TruncSeries {
    assert!(i >= -1, "s_i is defined for i ≥ -1");
    if i == -1 {
        return TruncSeries::one(Var::V, order);
    }
    let coeffs = (0..=order as i64)
        .map(|n| gauss(n + i, i).scale(&QCoeff::from_int(sign(n))).shift(triangular(n, Triangular::Upper)))
        .collect();
    TruncSeries::from_coeffs(Var::V, coeffs)
}

pub(crate) fn touchard_z_form_rhs_tweaked(order: usize, tweak: bool) -> Result<TruncSeries, ArithError> {
    let c = series_gf(GFKind::Catalan, order);
    let one = TruncSeries::one(Var::Z, order);
    let one_minus_c = one.sub(&c)?;
    let tri = if tweak { Triangular::Lower } else { Triangular::Upper };
    let mut sum = TruncSeries::zero(Var::Z, order);
    let mut power = one.clone();
    for k in 0..=order as i64 {
        sum = sum.add(&power.scale(&LaurentPoly::q_pow(triangular(k, tri))))?;
        power = power.mul(&one_minus_c)?;
    }
    sum.div(&one.sub(&c.mul_var_pow(1))?)
}

/// `1/(1 - zC(z)) · Σ_k q^{binom(k+1,2)} (1 - C(z))^k`.
pub fn touchard_z_form_rhs(order: usize) -> Result<TruncSeries, ArithError> {
    touchard_z_form_rhs_tweaked(order, false)
}

pub(crate) fn motzkin_rhs_tweaked(order: usize, tweak: bool) -> TruncSeries {
    let m = series_gf(GFKind::Motzkin, order);
    let tri = if tweak { Triangular::Lower } else { Triangular::Upper };
    let mut sum = TruncSeries::zero(Var::Z, order);
    for k in 0..=(order / 2) as i64 {
        let term = m.pow(2 * k as u32 + 1).mul_var_pow(2 * k as usize).scale(&mono(sign(k), triangular(k, tri)));
        sum = sum.add(&term).expect("same variable");
    }
    sum
}

/// `Σ_k (-1)^k q^{binom(k+1,2)} z^{2k} M(z)^{2k+1}`.
pub fn motzkin_rhs(order: usize) -> TruncSeries {
    motzkin_rhs_tweaked(order, false)
}

pub(crate) fn schroeder_rhs_tweaked(order: usize, tweak: bool) -> TruncSeries {
    let s = series_gf(GFKind::Schroeder, order);
    let mut sum = TruncSeries::zero(Var::Z, order);
    for k in 0..=order as i64 {
        let power = if tweak { 2 * k } else { 2 * k + 1 } as u32;
        let term = s.pow(power).mul_var_pow(k as usize).scale(&mono(sign(k), triangular(k, Triangular::Upper)));
        sum = sum.add(&term).expect("same variable");
    }
    sum
}

/// `Σ_k (-1)^k q^{binom(k+1,2)} z^k S(z)^{2k+1}`.
pub fn schroeder_rhs(order: usize) -> TruncSeries {
    schroeder_rhs_tweaked(order, false)
}

/// `y = z/(1-z)^2` as a series in `z`.
pub fn catalan_substitution(order: usize) -> TruncSeries {
    let one = TruncSeries::one(Var::Z, order);
    let one_minus_z = one.sub(&TruncSeries::variable(Var::Z, order)).expect("same variable");
    TruncSeries::variable(Var::Z, order).div(&one_minus_z.pow(2)).expect("unit constant term")
}

/// `1/(v;q)_n` (or `1/(vq;q)_n` when `qexp = 1`) as a series in `v`.
fn inverse_v_pochhammer(qexp: i64, n: usize, order: usize) -> TruncSeries {
    let p = q_pochhammer_poly(&QMonomialBase::new(1, qexp, 1), 1, n).to_series(Var::V, order);
    TruncSeries::one(Var::V, order).div(&p).expect("constant term 1")
}

pub(crate) fn cauchy_coefficient_tweaked(big_n: usize, tweak: bool) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for n in 0..=big_n {
        let inv = inverse_v_pochhammer(0, n, big_n);
        let e = (n * n) as i64 - if tweak { 0 } else { n as i64 };
        let cleared = q_pochhammer_q(1, n as i64 + 1, 1, big_n - n);
        acc = &acc + &(&inv.coeff(big_n - n).shift(e) * &cleared);
    }
    acc
}

/// `(q;q)_N [v^N] Σ_n v^n q^{n^2-n}/((q;q)_n (v;q)_n)`; Cauchy's sum says this is 1.
pub fn cauchy_coefficient(big_n: usize) -> LaurentPoly {
    cauchy_coefficient_tweaked(big_n, false)
}

/// Terms of `Σ_{k=1}^n q^{k^2+ik}/(q;q)_k [n-1,k-1]`.
pub(crate) fn coeff_ext_lhs_terms(n: i64, i: i64) -> Vec<QRatFun> {
    (1..=n)
        .map(|k| QRatFun::new(gauss(n - 1, k - 1).shift(k * k + i * k), q_factorial(k as usize)).expect("nonzero"))
        .collect()
}

/// Terms of `Σ_{k=0}^n (-1)^k q^{binom(k,2)}/(q;q)_{n-k} [k+i,i]`.
pub(crate) fn coeff_ext_rhs_terms(n: i64, i: i64, tweak: bool) -> Vec<QRatFun> {
    let top = if tweak { 1 } else { 0 };
    (0..=n)
        .map(|k| {
            let num = gauss(k + i + top, i).scale(&QCoeff::from_int(sign(k))).shift(triangular(k, Triangular::Lower));
            QRatFun::new(num, q_factorial((n - k) as usize)).expect("nonzero")
        })
        .collect()
}

/// Terms of `Σ_{k=1}^n q^{k^2}/(q;q)_k [n-1,k-1]`.
pub(crate) fn coeff_main_lhs_terms(n: i64) -> Vec<QRatFun> {
    (1..=n)
        .map(|k| QRatFun::new(&gauss(n - 1, k - 1) * &LaurentPoly::q_pow(k * k), q_factorial(k as usize)).expect("nonzero"))
        .collect()
}

/// Terms of `Σ_{k=0}^n (-1)^k q^{binom(k,2)}/(q;q)_{n-k}`.
pub(crate) fn coeff_main_rhs_terms(n: i64, tweak: bool) -> Vec<QRatFun> {
    let flip = if tweak { -1 } else { 1 };
    (0..=n)
        .map(|k| {
            let num = mono(flip * sign(k), triangular(k, Triangular::Lower));
            QRatFun::new(num, q_factorial((n - k) as usize)).expect("nonzero")
        })
        .collect()
}

pub fn sum_terms(terms: &[QRatFun]) -> QRatFun {
    terms.iter().fold(QRatFun::zero(), |acc, t| acc.add(t))
}

/// `den · Σ terms`, dividing term by term; fails if any division is inexact.
pub fn clear_terms(terms: &[QRatFun], den: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
    let mut acc = LaurentPoly::zero();
    for t in terms {
        acc = &acc + &t.mul_poly(den).to_poly()?;
    }
    Ok(acc)
}

/// Both sides of the coefficient identity behind Touchard's fraction, as
/// rational functions in `q`.
pub fn coeff_main_sides(n: i64) -> (QRatFun, QRatFun) {
    (sum_terms(&coeff_main_lhs_terms(n)), sum_terms(&coeff_main_rhs_terms(n, false)))
}

/// Both sides of the shifted coefficient identity.
pub fn coeff_ext_sides(n: i64, i: i64) -> (QRatFun, QRatFun) {
    (sum_terms(&coeff_ext_lhs_terms(n, i)), sum_terms(&coeff_ext_rhs_terms(n, i, false)))
}

/// The two sides of the main coefficient identity multiplied by `(q;q)_n`.
pub fn coeff_main_cleared(n: i64) -> Result<(LaurentPoly, LaurentPoly), ArithError> {
    let den = q_factorial(n as usize);
    Ok((clear_terms(&coeff_main_lhs_terms(n), &den)?, clear_terms(&coeff_main_rhs_terms(n, false), &den)?))
}

/// `coeff_identity_main(n)`: true iff the cleared sides agree.
pub fn coeff_identity_main(n: i64) -> bool {
    coeff_main_cleared(n).is_ok_and(|(l, r)| l == r)
}

/// `coeff_identity_ext(n, i)`: true iff the cleared sides agree.
pub fn coeff_identity_ext(n: i64, i: i64) -> bool {
    let den = q_factorial(n as usize);
    match (clear_terms(&coeff_ext_lhs_terms(n, i), &den), clear_terms(&coeff_ext_rhs_terms(n, i, false), &den)) {
        (Ok(l), Ok(r)) => l == r,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// `T(n)` for one side of the main coefficient identity, as `P_n/(q;q)_n`.
pub fn zeilberger_term(side: Side, n: i64) -> QRatFun {
    let den = q_factorial(n as usize);
    let terms = match side {
        Side::Lhs => coeff_main_lhs_terms(n),
        Side::Rhs => coeff_main_rhs_terms(n, false),
    };
    QRatFun::new(clear_terms(&terms, &den).expect("(q;q)_k divides (q;q)_n"), den).expect("nonzero")
}

pub(crate) fn zeilberger_residual_tweaked(side: Side, n: i64, tweak: bool) -> QRatFun {
    let c0 = &mono(1, n + 1) - &mono(1, 1);
    let mut c1 = LaurentPoly::from_terms([(2 * n + 3, 1), (n + 2, -1), (1, 1), (n + 1, -1)]);
    if !tweak {
        c1 = &c1 + &LaurentPoly::one();
    }
    let c2 = &mono(1, n + 2) - &LaurentPoly::one();
    zeilberger_term(side, n)
        .mul_poly(&c0)
        .add(&zeilberger_term(side, n + 1).mul_poly(&c1))
        .add(&zeilberger_term(side, n + 2).mul_poly(&c2))
}

/// `(q^{n+1}-q)T(n) + (q^{2n+3}-q^{n+2}+q-q^{n+1}+1)T(n+1) + (q^{n+2}-1)T(n+2)`.
pub fn zeilberger_residual(side: Side, n: i64) -> QRatFun {
    zeilberger_residual_tweaked(side, n, false)
}

/// True iff the recurrence annihilates `T` for `1 ≤ n ≤ n_max`.
pub fn verify_zeilberger_recursion(side: Side, n_max: i64) -> bool {
    (1..=n_max).all(|n| zeilberger_residual(side, n).is_zero())
}

/// `(q;q)_N · B(q^m)` to order `N` in `v`, where
/// `B(t) = Σ_n v^n q^{n^2} t^n / ((q;q)_n (vq;q)_n)`.
pub fn b_series_cleared(m: i64, order: usize) -> TruncSeries {
    let mut acc = TruncSeries::zero(Var::V, order);
    for n in 0..=order {
        let ni = n as i64;
        let c = q_pochhammer_q(1, ni + 1, 1, order - n).shift(ni * ni + m * ni);
        let term = inverse_v_pochhammer(1, n, order).mul_var_pow(n).scale(&c);
        acc = acc.add(&term).expect("same variable");
    }
    acc
}

/// `B(q^{i+1})/B(1)` to order `order`.
pub fn b_quotient(i: i64, order: usize) -> Result<TruncSeries, ArithError> {
    b_series_cleared(i + 1, order).div(&b_series_cleared(0, order))
}

pub(crate) fn riordan_tweaked(n: i64, tweak: bool) -> LaurentPoly {
    let off = if tweak { 2 } else { 1 };
    let mut acc = LaurentPoly::zero();
    for k in 0..=n {
        let c = binomial(2 * n, n - k) - binomial(2 * n, n - k - off);
        acc = &acc + &big(c).scale(&QCoeff::from_int(sign(k))).shift(triangular(k, Triangular::Upper));
    }
    acc
}

/// `Σ_{k=0}^n (-1)^k q^{binom(k+1,2)} [binom(2n,n-k) - binom(2n,n-k-1)]`,
/// which is `T_n(q)(1-q)^n`.
pub fn riordan_coefficients(n: i64) -> LaurentPoly {
    riordan_tweaked(n, false)
}

pub(crate) fn squared_closed_form_tweaked(n: i64, tweak: bool) -> LaurentPoly {
    theta_partial(n).shift(if tweak { n * n } else { n * (n + 1) })
}

/// `q^{N(N+1)} Σ_{|n|≤N} (-1)^n q^{-n^2}`.
pub fn squared_closed_form(n: i64) -> LaurentPoly {
    let p = squared_closed_form_tweaked(n, false);
    assert!(p.has_nonnegative_exponents(), "N(N+1) - n^2 ≥ N for |n| ≤ N");
    p
}

pub(crate) fn squared_z_tweaked(n: i64, tweak: bool) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for k in 0..=n {
        let c = binomial(2 * n, n - k) - binomial(2 * n, n - k - 1);
        let e = if tweak { k * k } else { k * (k + 1) };
        acc = &acc + &(&big(c) * &theta_partial(k).shift(e));
    }
    acc
}

/// `Σ_k [binom(2N,N-k) - binom(2N,N-k-1)] q^{k(k+1)} Σ_{|j|≤k} (-1)^j q^{-j^2}`.
pub fn squared_z_coeffs(n: i64) -> LaurentPoly {
    squared_z_tweaked(n, false)
}

/// `s_{i,N} = q^{N(N+1)} Σ_{|n|≤N} [i+N-n,i][i+N+n,i] q^{-n^2} (-1)^n`, with
/// `s_{-1,N} = [N = 0]`.
pub fn s_squared_coeff(i: i64, big_n: i64) -> LaurentPoly {
    assert!(i >= -1, "defined for i ≥ -1");
    if i == -1 {
        return if big_n == 0 { LaurentPoly::one() } else { LaurentPoly::zero() };
    }
    let mut acc = LaurentPoly::zero();
    for n in -big_n..=big_n {
        let g = &gauss(i + big_n - n, i) * &gauss(i + big_n + n, i);
        acc = &acc + &g.scale(&QCoeff::from_int(sign(n))).shift(-n * n);
    }
    acc.shift(big_n * (big_n + 1))
}

pub fn series_s_squared(i: i64, order: usize) -> TruncSeries {
    let s = TruncSeries::from_coeffs(Var::V, (0..=order as i64).map(|n| s_squared_coeff(i, n)).collect());
    assert!(s.coeffs().iter().all(|c| c.has_nonnegative_exponents()));
    s
}

pub(crate) fn bonus_coeff_tweaked(i: i64, big_n: i64, tweak: bool) -> LaurentPoly {
    assert!(i >= 0, "defined for i ≥ 0");
    if i == 0 {
        return if big_n == 0 { LaurentPoly::one() } else { LaurentPoly::zero() };
    }
    let low = if tweak { i } else { i - 1 };
    let mut acc = LaurentPoly::zero();
    for n in -big_n..=big_n {
        let g = &gauss(i + big_n - n - 1, low) * &gauss(i + big_n + n - 1, low);
        acc = &acc + &g.scale(&QCoeff::from_int(sign(n))).shift(-n * n);
    }
    acc.shift(big_n * (big_n + 1))
}

/// `B(q^i)/B(1)` for the squared ladder:
/// `Σ_N v^N q^{N(N+1)} Σ_{|n|≤N} [i+N-n-1,i-1][i+N+n-1,i-1] q^{-n^2} (-1)^n`.
pub fn squared_bonus(i: i64, order: usize) -> TruncSeries {
    TruncSeries::from_coeffs(Var::V, (0..=order as i64).map(|n| bonus_coeff_tweaked(i, n, false)).collect())
}

pub(crate) fn squared_bonus_tweaked(i: i64, order: usize, tweak: bool) -> TruncSeries {
    TruncSeries::from_coeffs(Var::V, (0..=order as i64).map(|n| bonus_coeff_tweaked(i, n, tweak)).collect())
}

pub(crate) fn cigler_s_recurrence_tweaked(i: usize, tweak: bool) -> BiPoly {
    let one_plus_v = &BiPoly::one() + &BiPoly::var_pow(1);
    let mut prev = BiPoly::one();
    if i == 0 {
        return prev;
    }
    let mut cur = one_plus_v.clone();
    for j in 2..=i as i64 {
        let e = if tweak { -j } else { 1 - j };
        let a = BiPoly::from_q(LaurentPoly::one_minus(1, e).pow(2));
        let next = &(&one_plus_v * &cur) - &(&(&a * &BiPoly::var_pow(1)) * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `S_i = (1+v)S_{i-1} - (1-q^{1-i})^2 v S_{i-2}`, `S_0 = 1`, `S_1 = 1+v`.
pub fn cigler_s_recurrence(i: usize) -> BiPoly {
    cigler_s_recurrence_tweaked(i, false)
}

/// `S_i = Σ_{N=0}^i v^N q^{2N^2-2Ni} Σ_{|n|≤N} (-1)^n [i,N-n][i,N+n]`.
pub fn cigler_s_closed(i: usize) -> BiPoly {
    let i = i as i64;
    let coeffs = (0..=i)
        .map(|big_n| {
            let mut acc = LaurentPoly::zero();
            for n in -big_n..=big_n {
                let g = &gauss(i, big_n - n) * &gauss(i, big_n + n);
                acc = &acc + &g.scale(&QCoeff::from_int(sign(n)));
            }
            acc.shift(2 * big_n * big_n - 2 * big_n * i)
        })
        .collect();
    BiPoly::from_coeffs(coeffs)
}

pub(crate) fn schroeder_type_numerator_tweaked(big_n: i64, tweak: bool) -> LaurentPoly {
    let extra = if tweak { 2 } else { 1 };
    let mut first = LaurentPoly::zero();
    let mut second = LaurentPoly::zero();
    for n in -big_n..=big_n {
        let s = QCoeff::from_int(sign(n));
        first = &first + &LaurentPoly::one_minus(1, n + big_n + extra).scale(&s).shift(-n * (n + 1));
        second = &second + &LaurentPoly::one_minus(1, n + big_n).scale(&s).shift(-n * n);
    }
    &first.shift(big_n * (big_n + 1)) - &second.shift(big_n * big_n)
}

/// `(1-q)[v^N]F(1)` for the fraction with `a_i = (1-q^i)(1-q^{i+1})`:
/// `q^{N(N+1)} Σ_{|n|≤N} (1-q^{n+N+1})(-1)^n q^{-n(n+1)} - q^{N^2} Σ_{|n|≤N} (1-q^{n+N})(-1)^n q^{-n^2}`.
pub fn schroeder_type_numerator(big_n: i64) -> LaurentPoly {
    schroeder_type_numerator_tweaked(big_n, false)
}

/// The numerators divided exactly by `1-q`.
pub fn schroeder_type_closed_form(order: usize) -> Result<TruncSeries, ArithError> {
    let one_minus_q = LaurentPoly::one_minus(1, 1);
    let coeffs = (0..=order as i64)
        .map(|n| schroeder_type_numerator(n).div_exact(&one_minus_q))
        .collect::<Result<Vec<_>, _>>()?;
    assert!(coeffs.iter().all(|c| c.has_nonnegative_exponents()));
    Ok(TruncSeries::from_coeffs(Var::V, coeffs))
}

pub(crate) fn general_d_coeff_tweaked(d: i64, big_n: i64, tweak: bool) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for j in 0..=(d - 1).min(2 * big_n) {
        let outer = d * (big_n - j) + triangular(j, Triangular::Lower) + j + if tweak { 1 } else { 0 };
        let g = gauss(d - 1, j);
        for n in 0..=(2 * big_n - j) {
            let e = outer + n * (1 - d) + n * (2 * big_n - j - n);
            let term = (&g * &gauss(n + d - 1, d - 1)).scale(&QCoeff::from_int(sign(big_n + n))).shift(e);
            acc = &acc + &term;
        }
    }
    acc
}

/// `[v^N]F(1)` for the fraction with `a_i = (1-q^i)(1-q^{i+d-1})`, `d ≥ 2`:
/// `(-1)^N Σ_{j=0}^{min(d-1,2N)} q^{binom(j,2)+j+d(N-j)} [d-1,j]
///  Σ_{n=0}^{2N-j} (-1)^n [n+d-1,d-1] q^{n(1-d)+n(2N-j-n)}`.
///
/// This is the expansion of `F(1) = Σ_n (q^d;q)_n (1-x q^{d/2}) y^n / ((q;q)_n (1-x q^{1+d/2+n})(1-x q^{d/2+n}))`
/// with `x = i√v`, `y = -x q^{1-d/2}`, carried out in full.
pub fn general_d_closed_form(d: i64, order: usize) -> Result<TruncSeries, IdentityError> {
    if d < 2 {
        return Err(IdentityError::UnsupportedParameter(format!("general-d closed form needs d ≥ 2, got {d}")));
    }
    let coeffs = (0..=order as i64).map(|n| general_d_coeff_tweaked(d, n, false)).collect();
    Ok(TruncSeries::from_coeffs(Var::V, coeffs))
}

/// The double sum exactly as usually displayed for this fraction:
/// `Σ_{1≤n≤2N} (q^d;q)_n (-1)^{N+n} q^{n(2N-n)+Nd-nd} / ((1-q)(q;q)_{n-1})
///  + Σ_{0≤n≤2N} (q^d;q)_n (1-q^{n+1}) (-1)^{N+n} q^{(1+n)(2N-n)+Nd-nd} / ((1-q)(q;q)_n)`.
///
/// It does not agree with the fraction; see [`general_d_closed_form`].
/// Fails if a coefficient is not a Laurent polynomial.
pub fn general_d_closed_form_as_printed(d: i64, order: usize) -> Result<TruncSeries, IdentityError> {
    if d < 2 {
        return Err(IdentityError::UnsupportedParameter(format!("general-d closed form needs d ≥ 2, got {d}")));
    }
    let one_minus_q = LaurentPoly::one_minus(1, 1);
    let mut coeffs = Vec::with_capacity(order + 1);
    for big_n in 0..=order as i64 {
        let mut terms = Vec::new();
        for n in 1..=2 * big_n {
            let num = q_pochhammer_q(1, d, 1, n as usize)
                .scale(&QCoeff::from_int(sign(big_n + n)))
                .shift(n * (2 * big_n - n) + big_n * d - n * d);
            terms.push(QRatFun::new(num, &one_minus_q * &q_factorial(n as usize - 1)).expect("nonzero"));
        }
        for n in 0..=2 * big_n {
            let num = (&q_pochhammer_q(1, d, 1, n as usize) * &LaurentPoly::one_minus(1, n + 1))
                .scale(&QCoeff::from_int(sign(big_n + n)))
                .shift((1 + n) * (2 * big_n - n) + big_n * d - n * d);
            terms.push(QRatFun::new(num, &one_minus_q * &q_factorial(n as usize)).expect("nonzero"));
        }
        let den = &one_minus_q * &q_factorial((2 * big_n) as usize);
        let cleared = clear_terms(&terms, &den)?;
        coeffs.push(cleared.div_exact(&den)?);
    }
    Ok(TruncSeries::from_coeffs(Var::V, coeffs))
}

/// The fractions whose partial-denominator sequence is checked through a
/// first-order functional equation `(1 - c·t)β(t) = (1+v)β(qt) - (1-qt)vβ(q^2t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaFamily {
    /// `β_n = v^n q^{n^2}/((q;q)_n (vq;q)_n)`, `c = 0`; the `t`-coefficients
    /// of `B(t) = (1+v)B(qt) - (1-qt)vB(q^2t)`.
    Touchard,
    /// `β_n = (-vq;q^2)_n/((q;q)_n (vq;q)_n)`, `c = 1`.
    Squared,
    /// `β_n = q^n(-v;q^2)_n/((q;q)_n (vq;q)_n)`, `c = q`.
    SchroederType,
    /// `β_n = q^{(d-1)n}(-vq^{2-d};q^2)_n/((q;q)_n (vq;q)_n)`, `c = q^{d-1}`.
    GeneralD(u32),
}

impl BetaFamily {
    fn c(self) -> LaurentPoly {
        match self {
            BetaFamily::Touchard => LaurentPoly::zero(),
            BetaFamily::Squared => LaurentPoly::one(),
            BetaFamily::SchroederType => LaurentPoly::q_pow(1),
            BetaFamily::GeneralD(d) => LaurentPoly::q_pow(d as i64 - 1),
        }
    }
}

fn beta_numerator(family: BetaFamily, n: usize, tweak: bool) -> BiPoly {
    let ni = n as i64;
    let t = i64::from(tweak);
    match family {
        BetaFamily::Touchard => BiPoly::monomial(1, ni * ni, n),
        BetaFamily::Squared => q_pochhammer_poly(&QMonomialBase::new(-1, 1 - t, 1), 2, n),
        BetaFamily::SchroederType => {
            q_pochhammer_poly(&QMonomialBase::new(-1, 0, 1), 2, n).scale_q(&LaurentPoly::q_pow(ni + t * ni.min(1)))
        }
        BetaFamily::GeneralD(d) => {
            let d = d as i64;
            q_pochhammer_poly(&QMonomialBase::new(-1, 2 - d + t, 1), 2, n).scale_q(&LaurentPoly::q_pow((d - 1) * ni))
        }
    }
}

/// `D_n/D_{n-1}` for the denominator `D_n = (q;q)_n (vq;q)_n`, `n ≥ 1`.
fn beta_den_step(family: BetaFamily, n: usize, tweak: bool) -> BiPoly {
    let ni = n as i64;
    let shift = if family == BetaFamily::Touchard && tweak { 1 } else { 0 };
    &BiPoly::from_q(LaurentPoly::one_minus(1, ni)) * &(&BiPoly::one() - &BiPoly::monomial(1, ni - shift, 1))
}

pub(crate) fn beta_coefficient_tweaked(family: BetaFamily, n: usize, tweak: bool) -> BiRatFun {
    let den = (1..=n).fold(BiPoly::one(), |acc, k| &acc * &beta_den_step(family, k, tweak));
    BiRatFun::new(beta_numerator(family, n, tweak), den).expect("nonzero")
}

/// The `n`-th coefficient of `β(t)`.
pub fn beta_coefficient(family: BetaFamily, n: usize) -> BiRatFun {
    beta_coefficient_tweaked(family, n, false)
}

/// `(1+v)q^n - vq^{2n}`, the factor of `β_n` on the right at `t^n`.
fn functional_diag(n: i64) -> BiPoly {
    let one_plus_v = &BiPoly::one() + &BiPoly::var_pow(1);
    &one_plus_v.scale_q(&LaurentPoly::q_pow(n)) - &BiPoly::monomial(1, 2 * n, 1)
}

pub(crate) fn functional_sides_tweaked(family: BetaFamily, n: usize, tweak: bool) -> (BiRatFun, BiRatFun) {
    let ni = n as i64;
    let beta_n = beta_coefficient_tweaked(family, n, tweak);
    let mut lhs = beta_n.clone();
    let mut rhs = beta_n.mul_poly(&functional_diag(ni));
    if n >= 1 {
        let beta_prev = beta_coefficient_tweaked(family, n - 1, tweak);
        lhs = lhs.sub(&beta_prev.mul_poly(&BiPoly::from_q(family.c())));
        rhs = rhs.add(&beta_prev.mul_poly(&BiPoly::monomial(1, 2 * ni - 1, 1)));
    }
    (lhs, rhs)
}

/// `[t^n]` of both sides: `β_n - c·β_{n-1}` and
/// `(1+v)q^n β_n - v q^{2n} β_n + v q^{2n-1} β_{n-1}`.
pub fn functional_sides(family: BetaFamily, n: usize) -> (BiRatFun, BiRatFun) {
    functional_sides_tweaked(family, n, false)
}

pub(crate) fn functional_sides_cleared_tweaked(family: BetaFamily, n: usize, tweak: bool) -> (BiPoly, BiPoly) {
    let ni = n as i64;
    let num_n = beta_numerator(family, n, tweak);
    let mut rhs = &num_n * &functional_diag(ni);
    let mut lhs = num_n;
    if n >= 1 {
        let prev = &beta_numerator(family, n - 1, tweak) * &beta_den_step(family, n, tweak);
        lhs = &lhs - &prev.scale_q(&family.c());
        rhs = &rhs + &(&prev * &BiPoly::monomial(1, 2 * ni - 1, 1));
    }
    (lhs, rhs)
}

/// [`functional_sides`] multiplied by `(q;q)_n (vq;q)_n`.
pub fn functional_sides_cleared(family: BetaFamily, n: usize) -> (BiPoly, BiPoly) {
    functional_sides_cleared_tweaked(family, n, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn ints(s: &TruncSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.constant_term().as_i64().unwrap()).collect()
    }

    #[test]
    fn generating_functions() {
        assert_eq!(ints(&series_gf(GFKind::Catalan, 5)), [1, 1, 2, 5, 14, 42]);
        assert_eq!(ints(&series_gf(GFKind::Motzkin, 5)), [1, 1, 2, 4, 9, 21]);
        assert_eq!(ints(&series_gf(GFKind::Schroeder, 4)), [1, 2, 6, 22, 90]);
        for kind in [GFKind::Catalan, GFKind::Motzkin, GFKind::Schroeder] {
            assert!(gf_residual(kind, &series_gf(kind, 20)).is_zero());
        }
    }

    #[test]
    fn touchard_rhs_examples() {
        let s = series_touchard_rhs(3);
        assert_eq!(s.coeffs(), [lp(&[(0, 1)]), lp(&[(1, -1)]), lp(&[(3, 1)]), lp(&[(6, -1)])]);
        assert_eq!(series_touchard_rhs(0), TruncSeries::one(Var::V, 0));
        let at_one: Vec<_> = s.eval_q_at_one().coeffs().iter().map(|c| c.constant_term().as_i64().unwrap()).collect();
        assert_eq!(at_one, [1, -1, 1, -1]);
    }

    #[test]
    fn s_examples() {
        assert_eq!(series_s(0, 2), series_touchard_rhs(2));
        assert_eq!(series_s(-1, 4), TruncSeries::one(Var::V, 4));
        assert_eq!(series_s(1, 1).coeff(1), &lp(&[(1, -1), (2, -1)]));
    }

    #[test]
    fn coefficient_identity_examples() {
        // n = 1: q/(1-q) on both sides
        let (l, r) = coeff_main_sides(1);
        let expected = QRatFun::new(lp(&[(1, 1)]), lp(&[(0, 1), (1, -1)])).unwrap();
        assert_eq!(l, expected);
        assert_eq!(r, expected);
        assert!(coeff_identity_main(2));
        let (l, r) = coeff_main_sides(2);
        assert_eq!(l, r);
        assert!(coeff_identity_ext(3, 2));
        let (l, r) = coeff_ext_sides(3, 2);
        assert_eq!(l, r);
        // sign-flipped right-hand side
        let flipped = sum_terms(&coeff_main_rhs_terms(1, true));
        assert_ne!(coeff_main_sides(1).0, flipped);
        // perturbed Gaussian binomial index
        let den = q_factorial(3);
        let bad = clear_terms(&coeff_ext_rhs_terms(3, 2, true), &den).unwrap();
        assert_ne!(clear_terms(&coeff_ext_lhs_terms(3, 2), &den).unwrap(), bad);
    }

    #[test]
    fn ext_at_zero_is_main() {
        for n in 1..=15 {
            let den = q_factorial(n as usize);
            let (ml, mr) = coeff_main_cleared(n).unwrap();
            assert_eq!(clear_terms(&coeff_ext_lhs_terms(n, 0), &den).unwrap(), ml);
            assert_eq!(clear_terms(&coeff_ext_rhs_terms(n, 0, false), &den).unwrap(), mr);
        }
    }

    #[test]
    fn zeilberger() {
        assert!(verify_zeilberger_recursion(Side::Lhs, 8));
        assert!(verify_zeilberger_recursion(Side::Rhs, 8));
        assert!(!zeilberger_residual_tweaked(Side::Lhs, 1, true).is_zero());
    }

    #[test]
    fn riordan_examples() {
        assert_eq!(riordan_coefficients(0), LaurentPoly::one());
        assert_eq!(riordan_coefficients(1), lp(&[(0, 1), (1, -1)]));
        let r4 = riordan_coefficients(4);
        assert!(r4.div_exact(&LaurentPoly::one_minus(1, 1).pow(4)).is_ok());
    }

    #[test]
    fn squared_examples() {
        assert_eq!(squared_closed_form(0), LaurentPoly::one());
        assert_eq!(squared_closed_form(1), lp(&[(1, -2), (2, 1)]));
        for n in 0..=12 {
            assert!(squared_closed_form(n).has_nonnegative_exponents());
        }
        assert_eq!(squared_z_coeffs(0), LaurentPoly::one());
        assert_eq!(squared_z_coeffs(1), lp(&[(0, 1), (1, -2), (2, 1)]));
        assert_eq!(series_s_squared(0, 1).coeffs(), [LaurentPoly::one(), lp(&[(1, -2), (2, 1)])]);
        assert_eq!(series_s_squared(-1, 3), TruncSeries::one(Var::V, 3));
        // i = 1, N = 1: q^2 ([2,1][2,1]·1 - 2·[1,1][3,1] q^{-1})
        let g21 = lp(&[(0, 1), (1, 1)]);
        let g31 = lp(&[(0, 1), (1, 1), (2, 1)]);
        let expected = (&(&g21 * &g21) - &g31.scale(&QCoeff::from_int(2)).shift(-1)).shift(2);
        assert_eq!(s_squared_coeff(1, 1), expected);
    }

    #[test]
    fn bonus_is_shifted_s() {
        for i in 1..=4 {
            assert_eq!(squared_bonus(i, 6), series_s_squared(i - 1, 6));
        }
        assert_eq!(squared_bonus(1, 5).coeffs()[..], (0..=5).map(squared_closed_form).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn cigler() {
        assert_eq!(cigler_s_closed(0), BiPoly::one());
        assert_eq!(cigler_s_closed(1), &BiPoly::one() + &BiPoly::var_pow(1));
        let two = &(&BiPoly::one() + &BiPoly::var_pow(1)).pow(2) - &BiPoly::monomial(1, 0, 1).scale_q(&LaurentPoly::one_minus(1, -1).pow(2));
        assert_eq!(cigler_s_recurrence(2), two);
        assert_eq!(cigler_s_closed(2), two);
        let binom = (&BiPoly::one() + &BiPoly::var_pow(1)).pow(3);
        assert_eq!(cigler_s_closed(3).eval_q_at_one(), binom);
    }

    #[test]
    fn schroeder_type_and_general_d() {
        let st = schroeder_type_closed_form(6).unwrap();
        assert_eq!(st.coeff(0), &LaurentPoly::one());
        assert!(st.coeffs().iter().all(|c| c.has_nonnegative_exponents()));
        assert_eq!(general_d_closed_form(2, 6).unwrap(), st);
        assert_eq!(general_d_closed_form(2, 0).unwrap(), TruncSeries::one(Var::V, 0));
        assert!(general_d_closed_form(1, 3).is_err());
    }

    #[test]
    fn printed_general_d_display_disagrees() {
        for d in 2..=4 {
            let fixed = general_d_closed_form(d, 2).unwrap();
            let printed = general_d_closed_form_as_printed(d, 2).unwrap();
            assert_eq!(printed.first_difference(&fixed), Some(1), "d={d}");
        }
    }

    #[test]
    fn b_quotient_matches_s() {
        for i in 0..=3 {
            assert_eq!(b_quotient(i, 6).unwrap(), series_s(i, 6), "i={i}");
        }
    }

    #[test]
    fn functional_equations() {
        for family in [BetaFamily::Touchard, BetaFamily::Squared, BetaFamily::SchroederType, BetaFamily::GeneralD(3)] {
            for n in 0..=5 {
                let (l, r) = functional_sides(family, n);
                assert_eq!(l, r, "{family:?} n={n}");
            }
            let (l, r) = functional_sides_tweaked(family, 1, true);
            assert_ne!(l, r, "{family:?}");
            for n in 0..=5 {
                let (l, r) = functional_sides_cleared(family, n);
                assert_eq!(l, r, "{family:?} n={n}");
            }
            let (l, r) = functional_sides_cleared_tweaked(family, 1, true);
            assert_ne!(l, r, "{family:?}");
        }
    }

    #[test]
    fn cauchy_sum() {
        for n in 0..=8 {
            assert_eq!(cauchy_coefficient(n), LaurentPoly::one(), "N={n}");
        }
        assert_ne!(cauchy_coefficient_tweaked(1, true), LaurentPoly::one());
    }
}
