use std::time::Instant;

use crate::arith::{BiPoly, LaurentPoly, TruncSeries, Var};
use crate::contfrac::{builtin, shifted_spec, stable_expansion, CFSpec};
use crate::qcomb::gauss_binom;

use super::builders::*;
use super::{CheckReport, Coefficient, IdentityError, Mismatch, Status};

pub(crate) struct Outcome {
    pub mismatch: Option<Mismatch>,
    pub depth_used: usize,
}

type CheckFn = fn(usize, bool) -> Result<Outcome, IdentityError>;

/// Order a check runs at when none is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefaultOrder {
    /// Series identities, to order 16.
    Series,
    /// Coefficient identities, for `n ≤ 20`.
    Coefficient,
    /// The `(i, N)` grid of `recu2`, `N ≤ 8`.
    Grid,
}

impl DefaultOrder {
    pub fn value(self) -> usize {
        match self {
            DefaultOrder::Series => 16,
            DefaultOrder::Coefficient => 20,
            DefaultOrder::Grid => 8,
        }
    }
}

pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub default_order: DefaultOrder,
    pub(crate) run: CheckFn,
}

const fn entry(id: &'static str, description: &'static str, default_order: DefaultOrder, run: CheckFn) -> CatalogEntry {
    CatalogEntry { id, description, default_order, run }
}

use DefaultOrder::{Coefficient as Coef, Grid, Series};

static CATALOG: [CatalogEntry; 28] = [
    entry("touchard-main", "1/(1+v-(1-q)v/(1+v-(1-q^2)v/…)) = Σ (-1)^k q^binom(k+1,2) v^k", Series, touchard_main),
    entry("touchard-z-form", "z-form fraction = 1/(1-zC) Σ q^binom(k+1,2) (1-C)^k", Series, touchard_z_form),
    entry("cauchy", "Σ v^n q^(n^2-n)/((q;q)_n (v;q)_n) = Σ v^n/(q;q)_n, per coefficient", Series, cauchy),
    entry("coeff-main", "Σ q^(k^2)/(q;q)_k [n-1,k-1] = Σ (-1)^k q^binom(k,2)/(q;q)_(n-k)", Coef, coeff_main),
    entry("coeff-ext", "coefficient identity with q^(k^2+ik) and [k+i,i], i ≤ 6", Coef, coeff_ext),
    entry("zeil-lhs", "three-term recurrence for the left sum", Coef, zeil_lhs),
    entry("zeil-rhs", "three-term recurrence for the right sum", Coef, zeil_rhs),
    entry("extension-quotient", "B(q^(i+1))/B(1) = s_i and shifted fraction = s_i/s_(i-1), i ≤ 6", Series, extension_quotient),
    entry("recu1", "(1+v)s_i - (1-q^(i+1)) v s_(i+1) = s_(i-1), i ≤ 8", Series, recu1_check),
    entry("gauss-basic-recursion", "[n+i,i] - q^i [n+i-1,i] = [n+i-1,i-1]", Coef, gauss_basic_recursion),
    entry("b-functional", "B(t) = (1+v)B(qt) - (1-qt)vB(q^2t) per power of t", Series, b_functional),
    entry("motzkin-cf", "Motzkin fraction = Σ (-1)^k q^binom(k+1,2) z^(2k) M^(2k+1)", Series, motzkin_cf),
    entry("motzkin-reduction", "Motzkin fraction at z = v/(1+v+v^2) over (1+v+v^2) = Touchard at x = v^2", Series, motzkin_reduction),
    entry("schroeder-cf", "Schröder fraction = Σ (-1)^k q^binom(k+1,2) z^k S^(2k+1)", Series, schroeder_cf),
    entry("schroeder-aux", "(1-z)S(1-yC(y)) = 1 and zS^2 = C(y) - 1 at y = z/(1-z)^2", Series, schroeder_aux),
    entry("riordan", "(1-q)^n [z^n] z-form fraction = Σ (-1)^k q^binom(k+1,2) [binom(2n,n-k) - binom(2n,n-k-1)]", Series, riordan),
    entry("squared-cf", "ladder (1-q^i)^2: [v^N] = q^(N(N+1)) Σ (-1)^n q^(-n^2)", Series, squared_cf),
    entry("squared-z", "ladder (1-q^i)^2 in z: Catalan-weighted double sum", Series, squared_z),
    entry("squared-b-functional", "(1-t)β(t) = (1+v)β(qt) - (1-qt)vβ(q^2t), β_n = (-vq;q^2)_n/((q;q)_n(vq;q)_n)", Series, squared_b_functional),
    entry("squared-ext", "shifted squared fraction = bonus double-sum quotient, i ≤ 6", Series, squared_ext),
    entry("recu2", "s_(i,N) + s_(i,N-1) - (1-q^(i+1))^2 s_(i+1,N-1) - s_(i-1,N) = 0, i ≤ 6", Grid, recu2_check),
    entry("cigler-S", "S_i by recurrence = closed form, and (1+v)^i at q = 1", Series, cigler_s),
    entry("schroeder-type", "ladder (1-q^i)(1-q^(i+1)): closed form over 1-q", Series, schroeder_type),
    entry("schroeder-type-b", "(1-qt)β(t) = (1+v)β(qt) - (1-qt)vβ(q^2t), β_n = q^n(-v;q^2)_n/((q;q)_n(vq;q)_n)", Series, schroeder_type_b),
    entry("general-d-2", "ladder (1-q^i)(1-q^(i+1)): general-d closed form and β check", Series, general_d2),
    entry("general-d-3", "ladder (1-q^i)(1-q^(i+2)): general-d closed form and β check", Series, general_d3),
    entry("general-d-4", "ladder (1-q^i)(1-q^(i+3)): general-d closed form and β check", Series, general_d4),
    entry("general-d-5", "ladder (1-q^i)(1-q^(i+4)): general-d closed form and β check", Series, general_d5),
];

pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub(crate) fn timed(
    id: &str,
    order: usize,
    f: impl FnOnce() -> Result<Outcome, IdentityError>,
) -> Result<CheckReport, IdentityError> {
    let start = Instant::now();
    let outcome = f()?;
    Ok(CheckReport {
        id: id.to_string(),
        order,
        status: if outcome.mismatch.is_none() { Status::Pass } else { Status::Fail },
        first_mismatch: outcome.mismatch,
        depth_used: outcome.depth_used,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Collects the first mismatch and the deepest convergent used.
struct Run {
    depth: usize,
}

impl Run {
    fn new() -> Self {
        Run { depth: 0 }
    }

    fn expand(&mut self, spec: &CFSpec, order: usize) -> Result<TruncSeries, IdentityError> {
        let r = stable_expansion(spec, order)?;
        if !r.stabilized {
            return Err(IdentityError::NotStabilized(spec.name().to_string()));
        }
        self.depth = self.depth.max(r.depth_used);
        Ok(r.series)
    }

    fn done(self, mismatch: Option<Mismatch>) -> Result<Outcome, IdentityError> {
        Ok(Outcome { mismatch, depth_used: self.depth })
    }

    fn pass(self) -> Result<Outcome, IdentityError> {
        self.done(None)
    }
}

fn series_mismatch(context: &str, lhs: &TruncSeries, rhs: &TruncSeries) -> Option<Mismatch> {
    lhs.first_difference(rhs).map(|k| Mismatch {
        power: k,
        context: context.to_string(),
        lhs: lhs.coeff(k).clone().into(),
        rhs: rhs.coeff(k).clone().into(),
    })
}

fn poly_mismatch<C: PartialEq + Into<Coefficient>>(power: usize, context: String, lhs: C, rhs: C) -> Option<Mismatch> {
    (lhs != rhs).then(|| Mismatch { power, context, lhs: lhs.into(), rhs: rhs.into() })
}

macro_rules! bail {
    ($run:expr, $m:expr) => {
        if let Some(m) = $m {
            return $run.done(Some(m));
        }
    };
}

fn touchard_main(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let lhs = run.expand(&builtin::touchard(), order)?;
    let m = series_mismatch("", &lhs, &touchard_rhs_tweaked(Var::V, order, tweak));
    run.done(m)
}

fn touchard_z_form(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let lhs = run.expand(&builtin::touchard_z(), order)?;
    let m = series_mismatch("", &lhs, &touchard_z_form_rhs_tweaked(order, tweak)?);
    run.done(m)
}

fn cauchy(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    for n in 0..=order {
        bail!(run, poly_mismatch(n, String::new(), cauchy_coefficient_tweaked(n, tweak), LaurentPoly::one()));
    }
    run.pass()
}

fn coeff_main(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    for n in 1..=order as i64 {
        let den = crate::qcomb::q_factorial(n as usize);
        let lhs = clear_terms(&coeff_main_lhs_terms(n), &den)?;
        let rhs = clear_terms(&coeff_main_rhs_terms(n, tweak), &den)?;
        bail!(run, poly_mismatch(n as usize, String::new(), lhs, rhs));
    }
    run.pass()
}

fn coeff_ext(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    for i in 0..=6 {
        for n in 1..=order as i64 {
            let den = crate::qcomb::q_factorial(n as usize);
            let lhs = clear_terms(&coeff_ext_lhs_terms(n, i), &den)?;
            let rhs = clear_terms(&coeff_ext_rhs_terms(n, i, tweak), &den)?;
            bail!(run, poly_mismatch(n as usize, format!("i={i}"), lhs, rhs));
        }
    }
    run.pass()
}

fn zeil(side: Side, order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    for n in 1..=order as i64 {
        let r = zeilberger_residual_tweaked(side, n, tweak);
        if !r.is_zero() {
            return run.done(poly_mismatch(n as usize, String::new(), r.num().clone(), LaurentPoly::zero()));
        }
    }
    run.pass()
}

fn zeil_lhs(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    zeil(Side::Lhs, order, tweak)
}

fn zeil_rhs(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    zeil(Side::Rhs, order, tweak)
}

fn extension_quotient(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let bump = usize::from(tweak);
    let mut prev = series_s(-1, order);
    for i in 0..=6usize {
        let s = series_s(i as i64, order);
        let ratio = b_quotient((i + bump) as i64, order)?;
        bail!(run, series_mismatch(&format!("B(q^{})/B(1), i={i}", i + 1), &ratio, &s));
        let shifted = run.expand(&shifted_spec(&builtin::touchard(), i + bump), order)?;
        bail!(run, series_mismatch(&format!("shifted fraction, i={i}"), &shifted, &s.div(&prev)?));
        prev = s;
    }
    run.pass()
}

pub(crate) fn recu1(i_max: usize, order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    let one_plus_v = BiPoly::from_coeffs(vec![LaurentPoly::one(), LaurentPoly::one()]).to_series(Var::V, order);
    let mut s_prev = series_s(-1, order);
    let mut s_cur = series_s(0, order);
    for i in 0..=i_max as i64 {
        let s_next = series_s(i + 1, order);
        let a = LaurentPoly::one_minus(1, if tweak { i } else { i + 1 });
        let lhs = one_plus_v.mul(&s_cur)?.sub(&s_next.mul_var_pow(1).scale(&a))?;
        bail!(run, series_mismatch(&format!("i={i}"), &lhs, &s_prev));
        s_prev = std::mem::replace(&mut s_cur, s_next);
    }
    run.pass()
}

fn recu1_check(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    recu1(8, order, tweak)
}

fn gauss_basic_recursion(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    let g = |n: i64, k: i64| gauss_binom(n, k).expect("nonnegative upper index");
    for i in 1..=order as i64 {
        for n in 1..=order as i64 {
            let shift = if tweak { i - 1 } else { i };
            let lhs = &g(n + i, i) - &g(n + i - 1, i).shift(shift);
            bail!(run, poly_mismatch(n as usize, format!("i={i}"), lhs, g(n + i - 1, i - 1)));
        }
    }
    run.pass()
}

fn functional(family: BetaFamily, order: usize, tweak: bool) -> Option<Mismatch> {
    (0..=order).find_map(|n| {
        let (lhs, rhs) = functional_sides_cleared_tweaked(family, n, tweak);
        poly_mismatch(n, "t-coefficient times (q;q)_n (vq;q)_n".to_string(), lhs, rhs)
    })
}

fn b_functional(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    Run::new().done(functional(BetaFamily::Touchard, order, tweak))
}

fn motzkin_cf(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let lhs = run.expand(&builtin::motzkin(), order)?;
    let m = series_mismatch("", &lhs, &motzkin_rhs_tweaked(order, tweak));
    run.done(m)
}

fn motzkin_reduction(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let m = run.expand(&builtin::motzkin(), order)?;
    let trinomial = BiPoly::from_coeffs(vec![LaurentPoly::one(); 3]).to_series(Var::V, order);
    let sub_den = if tweak {
        BiPoly::from_coeffs(vec![LaurentPoly::one(), LaurentPoly::constant(2), LaurentPoly::one()]).to_series(Var::V, order)
    } else {
        trinomial.clone()
    };
    let z = TruncSeries::variable(Var::V, order).div(&sub_den)?;
    let lhs = m.compose(&z)?.div(&trinomial)?;
    let t = run.expand(&builtin::touchard_in(Var::X), order / 2)?;
    let mut spread = vec![LaurentPoly::zero(); order + 1];
    for (k, c) in t.coeffs().iter().enumerate() {
        spread[2 * k] = c.clone();
    }
    let m = series_mismatch("", &lhs, &TruncSeries::from_coeffs(Var::V, spread));
    run.done(m)
}

fn schroeder_cf(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let lhs = run.expand(&builtin::schroeder(), order)?;
    let m = series_mismatch("", &lhs, &schroeder_rhs_tweaked(order, tweak));
    run.done(m)
}

fn schroeder_aux(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    let one = TruncSeries::one(Var::Z, order);
    let z = TruncSeries::variable(Var::Z, order);
    let y = if tweak { z.div(&one.sub(&z)?)? } else { catalan_substitution(order) };
    let c_y = series_gf(GFKind::Catalan, order).compose(&y)?;
    let s = series_gf(GFKind::Schroeder, order);
    let first = one.sub(&z)?.mul(&s)?.mul(&one.sub(&y.mul(&c_y)?)?)?;
    bail!(run, series_mismatch("(1-z)S(1-yC(y)) = 1", &first, &one));
    let lhs = s.pow(2).mul_var_pow(1);
    let m = series_mismatch("zS^2 = C(y) - 1", &lhs, &c_y.sub(&one)?);
    run.done(m)
}

fn riordan(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let t = run.expand(&builtin::touchard_z(), order)?;
    let one_minus_q = LaurentPoly::one_minus(1, 1);
    for n in 0..=order {
        let r = riordan_tweaked(n as i64, tweak);
        bail!(run, poly_mismatch(n, "(1-q)^n T_n".to_string(), r.clone(), t.coeff(n).clone()));
        let (_, rem) = r.div_rem(&one_minus_q.pow(n as u32))?;
        bail!(run, poly_mismatch(n, "remainder mod (1-q)^n".to_string(), rem, LaurentPoly::zero()));
    }
    run.pass()
}

fn coefficientwise(
    run: Run,
    series: &TruncSeries,
    context: &str,
    closed: impl Fn(i64) -> LaurentPoly,
) -> Result<Outcome, IdentityError> {
    for (n, c) in series.coeffs().iter().enumerate() {
        bail!(run, poly_mismatch(n, context.to_string(), c.clone(), closed(n as i64)));
    }
    run.pass()
}

fn squared_cf(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let f = run.expand(&builtin::squared(), order)?;
    coefficientwise(run, &f, "", |n| squared_closed_form_tweaked(n, tweak))
}

fn squared_z(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let f = run.expand(&builtin::squared_z(), order)?;
    coefficientwise(run, &f, "", |n| squared_z_tweaked(n, tweak))
}

fn squared_b_functional(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    Run::new().done(functional(BetaFamily::Squared, order, tweak))
}

fn squared_ext(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let mut prev = squared_bonus_tweaked(0, order, tweak);
    for i in 1..=6usize {
        let cur = squared_bonus_tweaked(i as i64, order, tweak);
        let shifted = run.expand(&shifted_spec(&builtin::squared(), i - 1), order)?;
        bail!(run, series_mismatch(&format!("i={i}"), &shifted, &cur.div(&prev)?));
        prev = cur;
    }
    run.pass()
}

pub(crate) fn recu2(i_max: usize, n_max: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    let i_max = i_max as i64;
    // s[i + 1][N] for -1 ≤ i ≤ i_max + 1
    let table: Vec<Vec<LaurentPoly>> =
        (-1..=i_max + 1).map(|i| (0..=n_max as i64).map(|n| s_squared_coeff(i, n)).collect()).collect();
    let s = |i: i64, n: usize| &table[(i + 1) as usize][n];
    for i in 0..=i_max {
        let a = LaurentPoly::one_minus(1, i + 1);
        let a = if tweak { a } else { a.pow(2) };
        for n in 1..=n_max {
            let residual = &(&(s(i, n) + s(i, n - 1)) - &(&a * s(i + 1, n - 1))) - s(i - 1, n);
            bail!(run, poly_mismatch(n, format!("i={i}"), residual, LaurentPoly::zero()));
        }
    }
    run.pass()
}

fn recu2_check(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    recu2(6, order, tweak)
}

fn cigler_s(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let run = Run::new();
    let one_plus_v = &BiPoly::one() + &BiPoly::var_pow(1);
    for i in 0..=order {
        let closed = cigler_s_closed(i);
        bail!(run, poly_mismatch(i, "recurrence".to_string(), cigler_s_recurrence_tweaked(i, tweak), closed.clone()));
        bail!(run, poly_mismatch(i, "q=1".to_string(), closed.eval_q_at_one(), one_plus_v.pow(i as u32)));
    }
    run.pass()
}

fn schroeder_type(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let f = run.expand(&builtin::schroeder_type(), order)?;
    let one_minus_q = LaurentPoly::one_minus(1, 1);
    for (n, c) in f.coeffs().iter().enumerate() {
        let numerator = schroeder_type_numerator_tweaked(n as i64, tweak);
        bail!(run, poly_mismatch(n, "(1-q)[v^N]".to_string(), &one_minus_q * c, numerator));
    }
    run.pass()
}

fn schroeder_type_b(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    Run::new().done(functional(BetaFamily::SchroederType, order, tweak))
}

fn general_d(d: u32, order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    let mut run = Run::new();
    let f = run.expand(&builtin::general_d(d), order)?;
    for (n, c) in f.coeffs().iter().enumerate() {
        bail!(run, poly_mismatch(n, "closed form".to_string(), c.clone(), general_d_coeff_tweaked(d as i64, n as i64, tweak)));
    }
    if d == 2 {
        bail!(run, series_mismatch("schroeder-type closed form", &f, &schroeder_type_closed_form(order)?));
    }
    let m = functional(BetaFamily::GeneralD(d), order, tweak);
    run.done(m)
}

fn general_d2(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    general_d(2, order, tweak)
}

fn general_d3(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    general_d(3, order, tweak)
}

fn general_d4(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    general_d(4, order, tweak)
}

fn general_d5(order: usize, tweak: bool) -> Result<Outcome, IdentityError> {
    general_d(5, order, tweak)
}
