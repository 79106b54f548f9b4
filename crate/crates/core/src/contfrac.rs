//! Truncated-series convergents of ladder continued fractions
//!
//! ```text
//!            1
//! G = ─────────────────────
//!     b - a_1·w ──────────────
//!               b - a_2·w ───
//!                         …
//! ```
//!
//! where `b` and `w` are polynomials in the series variable, `w` has positive
//! valuation, and each partial numerator coefficient `a_i` is a Laurent
//! polynomial in `q`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{ArithError, BiPoly, LaurentPoly, TruncSeries, Var, DEFAULT_QMAX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("invalid continued fraction: {0}")]
    InvalidSpec(String),
    #[error("degenerate continued fraction at level {level}: {source}")]
    Degenerate { level: usize, source: ArithError },
    #[error("ladder evaluation failed at level {level}: {message}")]
    Ladder { level: usize, message: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Partial numerator coefficient as a function of the level `i ≥ 1`.
pub type LadderFn = dyn Fn(usize) -> Result<LaurentPoly, String> + Send + Sync;

/// A continued fraction `1/(b - a_1·w/(b - a_2·w/…))`.
#[derive(Clone)]
pub struct CFSpec {
    name: String,
    var: Var,
    b: BiPoly,
    weight: BiPoly,
    ladder: Arc<LadderFn>,
    offset: usize,
    qmax: u32,
}

impl CFSpec {
    /// `b` must have a monomial constant term and `weight` a zero one.
    pub fn new(
        name: impl Into<String>,
        var: Var,
        b: BiPoly,
        weight: BiPoly,
        ladder: impl Fn(usize) -> Result<LaurentPoly, String> + Send + Sync + 'static,
    ) -> Result<Self, ContFracError> {
        if b.coeff(0).as_monomial().is_none() {
            return Err(ContFracError::InvalidSpec(format!("partial denominator `{b}` needs a unit constant term")));
        }
        match weight.valuation() {
            Some(k) if k >= 1 => {}
            _ => {
                return Err(ContFracError::InvalidSpec(format!(
                    "weight `{weight}` must have positive valuation"
                )))
            }
        }
        Ok(CFSpec { name: name.into(), var, b, weight, ladder: Arc::new(ladder), offset: 0, qmax: DEFAULT_QMAX })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn b(&self) -> &BiPoly {
        &self.b
    }

    pub fn weight(&self) -> &BiPoly {
        &self.weight
    }

    /// How many levels have been dropped from the top by `shifted_spec`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn qmax(&self) -> u32 {
        self.qmax
    }

    /// Overrides the q-degree bound used when a partial denominator has a
    /// non-monomial constant term.
    pub fn with_qmax(mut self, qmax: u32) -> Self {
        self.qmax = qmax;
        self
    }

    /// `a_j` of this (possibly shifted) fraction, `j ≥ 1`.
    pub fn level(&self, j: usize) -> Result<LaurentPoly, ContFracError> {
        assert!(j >= 1, "levels start at 1");
        (self.ladder)(self.offset + j).map_err(|message| ContFracError::Ladder { level: j, message })
    }

    /// The tail `1/b`, the value of a single extra level with `a = 0`.
    pub fn inverse_b_tail(&self, order: usize) -> Result<TruncSeries, ContFracError> {
        let b = self.b.to_series(self.var, order);
        Ok(TruncSeries::one(self.var, order).div_with_qmax(&b, self.qmax)?)
    }
}

impl fmt::Debug for CFSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CFSpec")
            .field("name", &self.name)
            .field("var", &self.var)
            .field("b", &self.b)
            .field("weight", &self.weight)
            .field("offset", &self.offset)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentResult {
    pub series: TruncSeries,
    pub depth_used: usize,
    pub stabilized: bool,
}

/// Evaluates the fraction bottom-up: `G_depth = tail`,
/// `G_{j-1} = 1/(b - a_j·w·G_j)`, and returns `G_0` to the given order.
pub fn convergent(
    spec: &CFSpec,
    depth: usize,
    order: usize,
    tail: &TruncSeries,
) -> Result<TruncSeries, ContFracError> {
    if depth == 0 {
        return Err(ContFracError::InvalidSpec("convergent depth must be at least 1".into()));
    }
    if tail.var() != spec.var {
        return Err(ArithError::VariableMismatch { left: spec.var, right: tail.var() }.into());
    }
    if tail.order() < order {
        return Err(ContFracError::InvalidSpec(format!(
            "tail of order {} is too short for order {order}",
            tail.order()
        )));
    }
    // G_j reaches G_0 multiplied by w^j, so it is only needed to order
    // `order - j·val(w)`.
    let wval = spec.weight.valuation().unwrap_or(0);
    let needed = |j: usize| order.saturating_sub(j.saturating_mul(wval));
    let mut g = tail.truncate(needed(depth));
    for j in (1..=depth).rev() {
        let n = needed(j - 1);
        let a = spec.level(j)?;
        let b = spec.b.to_series(spec.var, n);
        let w = spec.weight.to_series(spec.var, n);
        // Powers of G_j above `n - val(w)` do not reach w·G_j at order n.
        let mut coeffs = g.coeffs().to_vec();
        coeffs.resize(n + 1, LaurentPoly::zero());
        let step = w.mul(&TruncSeries::from_coeffs(spec.var, coeffs))?.scale(&a);
        let den = b.sub(&step)?;
        g = TruncSeries::one(spec.var, n)
            .div_with_qmax(&den, spec.qmax)
            .map_err(|source| ContFracError::Degenerate { level: j, source })?;
    }
    Ok(g)
}

/// Convergent at depth `order + 2` with a zero tail, cross-checked against
/// tail `1` and depth `order + 3`.
pub fn stable_expansion(spec: &CFSpec, order: usize) -> Result<ConvergentResult, ContFracError> {
    let depth = order + 2;
    let zero = TruncSeries::zero(spec.var, order);
    let one = TruncSeries::one(spec.var, order);
    let series = convergent(spec, depth, order, &zero)?;
    let with_one = convergent(spec, depth, order, &one)?;
    let deeper = convergent(spec, depth + 1, order, &zero)?;
    let stabilized = series == with_one && series == deeper;
    Ok(ConvergentResult { series, depth_used: depth, stabilized })
}

/// The fraction with its first `i` levels removed: level `j` of the result is
/// level `i + j` of `spec`.
pub fn shifted_spec(spec: &CFSpec, i: usize) -> CFSpec {
    let mut out = spec.clone();
    out.offset += i;
    if i > 0 {
        out.name = format!("{}>>{}", spec.name, out.offset);
    }
    out
}

/// The fractions studied in this crate.
pub mod builtin {
    use super::*;

    fn q_one_minus(e: usize) -> LaurentPoly {
        LaurentPoly::one_minus(1, e as i64)
    }

    /// `1 + x`
    fn one_plus(var_deg: usize) -> BiPoly {
        &BiPoly::one() + &BiPoly::var_pow(var_deg)
    }

    /// `1 - x`
    fn one_minus(var_deg: usize) -> BiPoly {
        &BiPoly::one() - &BiPoly::var_pow(var_deg)
    }

    fn build(
        name: &str,
        var: Var,
        b: BiPoly,
        weight_deg: usize,
        ladder: impl Fn(usize) -> LaurentPoly + Send + Sync + 'static,
    ) -> CFSpec {
        CFSpec::new(name, var, b, BiPoly::var_pow(weight_deg), move |i| Ok(ladder(i))).expect("built-in spec is valid")
    }

    /// `a_i = 1 - q^i`, `b = 1 + v`, `w = v`.
    pub fn touchard() -> CFSpec {
        touchard_in(Var::V)
    }

    /// Touchard's fraction in an arbitrary variable.
    pub fn touchard_in(var: Var) -> CFSpec {
        build("touchard", var, one_plus(1), 1, q_one_minus)
    }

    /// `a_i = 1 - q^i`, `b = 1`, `w = z`.
    pub fn touchard_z() -> CFSpec {
        build("touchard-z", Var::Z, BiPoly::one(), 1, q_one_minus)
    }

    /// `a_i = 1 - q^i`, `b = 1 - z`, `w = z^2`.
    pub fn motzkin() -> CFSpec {
        build("motzkin", Var::Z, one_minus(1), 2, q_one_minus)
    }

    /// `a_i = 1 - q^i`, `b = 1 - z`, `w = z`.
    pub fn schroeder() -> CFSpec {
        build("schroeder", Var::Z, one_minus(1), 1, q_one_minus)
    }

    /// `a_i = (1 - q^i)^2`, `b = 1 + v`, `w = v`.
    pub fn squared() -> CFSpec {
        build("squared", Var::V, one_plus(1), 1, |i| q_one_minus(i).pow(2))
    }

    /// `a_i = (1 - q^i)^2`, `b = 1`, `w = z`.
    pub fn squared_z() -> CFSpec {
        build("squared-z", Var::Z, BiPoly::one(), 1, |i| q_one_minus(i).pow(2))
    }

    /// `a_i = (1 - q^i)(1 - q^{i+1})`, `b = 1 + v`, `w = v`.
    pub fn schroeder_type() -> CFSpec {
        build("schroeder-type", Var::V, one_plus(1), 1, |i| &q_one_minus(i) * &q_one_minus(i + 1))
    }

    /// `a_i = (1 - q^i)(1 - q^{i+d-1})`, `b = 1 + v`, `w = v`.
    pub fn general_d(d: u32) -> CFSpec {
        let d = d as i64;
        build(&format!("general-d{d}"), Var::V, one_plus(1), 1, move |i| {
            &q_one_minus(i) * &LaurentPoly::one_minus(1, i as i64 + d - 1)
        })
    }

    /// All built-in fractions, for sweeping tests.
    pub fn all() -> Vec<CFSpec> {
        let mut specs = vec![touchard(), touchard_z(), motzkin(), schroeder(), squared(), squared_z(), schroeder_type()];
        specs.extend((0..=5).map(general_d));
        specs
    }
}
