#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use qtouch_core::contfrac::{builtin, convergent, CFSpec};
use qtouch_core::dsl::{parse_spec, ErrorKind};
use qtouch_core::identities::{catalog, run_check_variant, Variant};
use qtouch_core::qcomb::{binomial, gauss_binom, q_factorial};
use qtouch_core::{LaurentPoly, QCoeff, TruncSeries};

pub struct CorpusSpec {
    pub name: &'static str,
    pub text: &'static str,
    pub params: &'static [(&'static str, i64)],
    pub builtin: Option<fn() -> CFSpec>,
}

fn general_d2() -> CFSpec {
    builtin::general_d(2)
}

fn general_d3() -> CFSpec {
    builtin::general_d(3)
}

fn general_d5() -> CFSpec {
    builtin::general_d(5)
}

pub const CORPUS: &[CorpusSpec] = &[
    CorpusSpec { name: "touchard", text: "b = 1+v; a(i) = (1-q^i)*v", params: &[], builtin: Some(builtin::touchard) },
    CorpusSpec {
        name: "touchard-z",
        text: "# z form\nb = 1;\na(i) = (1 - q^i) * z;\n",
        params: &[],
        builtin: Some(builtin::touchard_z),
    },
    CorpusSpec { name: "motzkin", text: "b = 1-z; a(i) = (1-q^i)*z^2", params: &[], builtin: Some(builtin::motzkin) },
    CorpusSpec { name: "schroeder", text: "b=1-z;a(i)=(1-q^i)*z", params: &[], builtin: Some(builtin::schroeder) },
    CorpusSpec { name: "squared", text: "b = 1 + v;\na(i) = (1-q^i)^2*v\n", params: &[], builtin: Some(builtin::squared) },
    CorpusSpec { name: "squared-z", text: "b = 1; a(i) = (1 - q^i)^2*z", params: &[], builtin: Some(builtin::squared_z) },
    CorpusSpec {
        name: "schroeder-type",
        text: "b = 1+v; a(i) = (1-q^i)*(1-q^(i+1))*v",
        params: &[],
        builtin: Some(builtin::schroeder_type),
    },
    CorpusSpec {
        name: "general-d",
        text: "param d = 3;\nb = 1+v;\na(i) = (1-q^i)*(1-q^(i+d-1))*v;",
        params: &[],
        builtin: Some(general_d3),
    },
    CorpusSpec {
        name: "general-d-override",
        text: "param d = 3; b = 1+v; a(i) = (1-q^i)*(1-q^(i+d-1))*v",
        params: &[("d", 2)],
        builtin: Some(general_d2),
    },
    CorpusSpec {
        name: "general-d-unbound",
        text: "b = 1+v; a(i) = (1-q^i)*(1-q^(i + d - 1))*v",
        params: &[("d", 5)],
        builtin: Some(general_d5),
    },
    CorpusSpec {
        name: "weight-split",
        text: "b = 1 + v # same as Touchard\n; a(i) = v*(1 - q^i)",
        params: &[],
        builtin: Some(builtin::touchard),
    },
    CorpusSpec { name: "negated", text: "b = 1 + v; a(i) = -(q^i - 1)*v", params: &[], builtin: Some(builtin::touchard) },
    CorpusSpec {
        name: "scaled-exponents",
        text: "param d = 2; b = 1 - 2*v + v^2; a(i) = (1 - q^(2*i + d))*q*v^2",
        params: &[],
        builtin: None,
    },
    CorpusSpec { name: "negative-exponent", text: "b = 1+v; a(i) = (1-q^(0-i))*v", params: &[], builtin: None },
    CorpusSpec { name: "rational-free-b", text: "b = (1+v)^2 - v*v; a(i) = 3*(1-q)^2*v", params: &[], builtin: None },
];

/// (source, kind, line, column)
pub const ERROR_CASES: &[(&str, ErrorKind, usize, usize)] = &[
    ("b = 1+v; a(i) = (1-q^i", ErrorKind::Syntax, 1, 23),
    ("b = 1 $ v; a(i) = v", ErrorKind::Lexical, 1, 7),
    ("b = 1+v;\na(i) = (1-w^i)*v", ErrorKind::Semantic, 2, 11),
    ("b = 1+v; a(i) = (1-q^i)*z", ErrorKind::Semantic, 1, 25),
    ("b = 1+q^i; a(i) = v", ErrorKind::Semantic, 1, 9),
    ("b = 1+v; a(i) = (1-q^v)*v", ErrorKind::Semantic, 1, 22),
    ("b = 1+v; a(i) = q^2^3*v", ErrorKind::Syntax, 1, 20),
    ("b = 1+v; a(i) = (1-q^i)", ErrorKind::Semantic, 1, 10),
    ("b = 1+v;\n\n  b = 1; a(i) = v", ErrorKind::Semantic, 3, 3),
    ("a(i) = (1-q^i)*v", ErrorKind::Semantic, 1, 17),
    ("b = 2+v; a(i) = v", ErrorKind::Semantic, 1, 6),
    ("b = 1+v; a(i) = (1+v)*v", ErrorKind::Semantic, 1, 19),
    ("param k = 2; b = 1+v; a(i) = v", ErrorKind::Semantic, 1, 7),
    ("b = 1+v a(i) = v", ErrorKind::Syntax, 1, 9),
    ("b = 1+v; a(i) = (1-q^i))*v", ErrorKind::Syntax, 1, 24),
];

pub fn params_of(spec: &CorpusSpec) -> BTreeMap<String, i64> {
    spec.params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Pretty-print and re-parse every corpus entry.
pub fn round_trip_suite() -> Result<(), String> {
    for s in CORPUS {
        let doc = parse_spec(s.text).map_err(|e| format!("{}: {e}", s.name))?;
        let printed = doc.to_string();
        let again = parse_spec(&printed).map_err(|e| format!("{}: reparse of {printed:?}: {e}", s.name))?;
        if again != doc {
            return Err(format!("{}: round trip changed the tree: {printed:?}", s.name));
        }
        if again.to_string() != printed {
            return Err(format!("{}: printing is not idempotent", s.name));
        }
    }
    Ok(())
}

pub fn error_position_suite() -> Result<(), String> {
    for (src, kind, line, col) in ERROR_CASES {
        match parse_spec(src) {
            Ok(_) => return Err(format!("{src:?} parsed")),
            Err(e) if (e.kind, e.line, e.col) != (*kind, *line, *col) => {
                return Err(format!("{src:?}: expected {kind:?} at {line}:{col}, got {e}"));
            }
            Err(_) => {}
        }
    }
    Ok(())
}

/// Convergents at depths `N+2` and `N+3`, tails 0 and 1, agree for `N ≤ max_order`.
pub fn stabilization_suite(specs: &[CFSpec], max_order: usize) -> Result<(), String> {
    for spec in specs {
        for n in 0..=max_order {
            let zero = TruncSeries::zero(spec.var(), n);
            let one = TruncSeries::one(spec.var(), n);
            let base = convergent(spec, n + 2, n, &zero).map_err(|e| e.to_string())?;
            for (depth, tail) in [(n + 2, &one), (n + 3, &zero), (n + 3, &one)] {
                let other = convergent(spec, depth, n, tail).map_err(|e| e.to_string())?;
                if let Some(k) = base.first_difference(&other) {
                    return Err(format!("{} order {n}: depth {depth} differs at power {k}", spec.name()));
                }
            }
        }
    }
    Ok(())
}

pub fn builtin_specs() -> Vec<CFSpec> {
    let mut specs = vec![
        builtin::touchard(),
        builtin::touchard_z(),
        builtin::motzkin(),
        builtin::schroeder(),
        builtin::squared(),
        builtin::squared_z(),
        builtin::schroeder_type(),
    ];
    specs.extend((2..=5).map(builtin::general_d));
    specs
}

/// Symmetry, q = 1 specialization and both q-Pascal rules for `n ≤ n_max`,
/// plus `[n,k](q;q)_k(q;q)_{n-k} = (q;q)_n`.
pub fn gauss_suite(n_max: i64) -> Result<(), String> {
    let g = |n: i64, k: i64| gauss_binom(n, k).map_err(|e| e.to_string());
    for n in 0..=n_max {
        for k in 0..=n {
            let gnk = g(n, k)?;
            if gnk != g(n, n - k)? {
                return Err(format!("symmetry fails at ({n},{k})"));
            }
            if gnk.eval_at_one() != QCoeff::from_bigint(binomial(n, k)) {
                return Err(format!("q=1 fails at ({n},{k})"));
            }
            if n >= 1 && k >= 1 && k < n {
                let pascal1 = &g(n - 1, k - 1)? + &g(n - 1, k)?.shift(k);
                let pascal2 = &g(n - 1, k - 1)?.shift(n - k) + &g(n - 1, k)?;
                if gnk != pascal1 || gnk != pascal2 {
                    return Err(format!("q-Pascal fails at ({n},{k})"));
                }
            }
            if n <= 20 {
                let prod = &(&gnk * &q_factorial(k as usize)) * &q_factorial((n - k) as usize);
                if prod != q_factorial(n as usize) {
                    return Err(format!("Pochhammer quotient fails at ({n},{k})"));
                }
            }
        }
    }
    if binomial(30, 15) != BigInt::from(155117520u64) {
        return Err("binomial(30, 15)".into());
    }
    Ok(())
}

/// Every catalog perturbation fails with its first mismatch at power ≤ 4.
pub fn perturbation_suite(order: usize) -> Result<(), String> {
    for e in catalog() {
        let r = run_check_variant(e.id, order, Variant::Perturbed).map_err(|err| format!("{}: {err}", e.id))?;
        match r.first_mismatch {
            None => return Err(format!("{}: perturbed variant passed", e.id)),
            Some(m) if m.power > 4 => return Err(format!("{}: first mismatch only at power {}", e.id, m.power)),
            Some(_) => {}
        }
    }
    Ok(())
}

pub fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}
