//! Independently built closed forms, sums and recurrences, and a catalog of
//! checks comparing them exactly against continued-fraction expansions.

pub mod builders;
mod checks;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{ArithError, BiPoly, LaurentPoly};
use crate::contfrac::ContFracError;

pub use builders::*;
pub use checks::{catalog, CatalogEntry, DefaultOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown check id `{id}`; valid ids: {}", catalog().iter().map(|e| e.id).collect::<Vec<_>>().join(", "))]
    UnknownId { id: String },
    #[error("{0}")]
    UnsupportedParameter(String),
    #[error("continued fraction `{0}` did not stabilize")]
    NotStabilized(String),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A coefficient that failed to match: univariate in `q` or a polynomial in
/// `q` and the series variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Q(LaurentPoly),
    Bi(BiPoly),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Q(p) => p.fmt(f),
            Coefficient::Bi(p) => p.fmt(f),
        }
    }
}

impl From<LaurentPoly> for Coefficient {
    fn from(p: LaurentPoly) -> Self {
        Coefficient::Q(p)
    }
}

impl From<BiPoly> for Coefficient {
    fn from(p: BiPoly) -> Self {
        Coefficient::Bi(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Series power, or the index `n` for coefficient identities.
    pub power: usize,
    /// Which sub-identity failed, e.g. `i=3`.
    pub context: String,
    pub lhs: Coefficient,
    pub rhs: Coefficient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub id: String,
    pub order: usize,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    /// Convergent depth of the deepest expansion used, 0 if none.
    pub depth_used: usize,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Which form of the identity to check. `Perturbed` changes one sign,
/// exponent or index and is expected to fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Faithful,
    Perturbed,
}

pub fn run_check(id: &str, order: usize) -> Result<CheckReport, IdentityError> {
    run_check_variant(id, order, Variant::Faithful)
}

pub fn run_check_variant(id: &str, order: usize, variant: Variant) -> Result<CheckReport, IdentityError> {
    let entry = catalog().iter().find(|e| e.id == id).ok_or_else(|| IdentityError::UnknownId { id: id.to_string() })?;
    let start = Instant::now();
    let outcome = (entry.run)(order, variant == Variant::Perturbed)?;
    Ok(CheckReport {
        id: entry.id.to_string(),
        order,
        status: if outcome.mismatch.is_none() { Status::Pass } else { Status::Fail },
        first_mismatch: outcome.mismatch,
        depth_used: outcome.depth_used,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every catalog check concurrently; reports come back in catalog order.
/// `order = None` uses each check's default order.
pub fn run_catalog(order: Option<usize>) -> Result<Vec<CheckReport>, IdentityError> {
    catalog()
        .par_iter()
        .map(|e| run_check(e.id, order.unwrap_or(e.default_order.value())))
        .collect()
}

/// `verify_recu1(i_max, order)`: `(1+v)s_i - (1-q^{i+1}) v s_{i+1} = s_{i-1}`
/// for `0 ≤ i ≤ i_max`.
pub fn verify_recu1(i_max: usize, order: usize) -> Result<CheckReport, IdentityError> {
    checks::timed("recu1", order, || checks::recu1(i_max, order, false))
}

/// `verify_recu2(i_max, n_max)`:
/// `s_{i,N} + s_{i,N-1} - (1-q^{i+1})^2 s_{i+1,N-1} - s_{i-1,N} = 0` for
/// `0 ≤ i ≤ i_max`, `1 ≤ N ≤ n_max`.
pub fn verify_recu2(i_max: usize, n_max: usize) -> Result<CheckReport, IdentityError> {
    checks::timed("recu2", n_max, || checks::recu2(i_max, n_max, false))
}
