use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::coeff::ExactRational;
use crate::grading::DegreeVector;
use crate::hall::NTable;

use super::laurent::EXACT;
use super::{DTSeries, GenfunError, LaurentPoly, TruncSeries};

type Columns = BTreeMap<Vec<i64>, TruncSeries>;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn fmt_beta(b: &[i64]) -> String {
    format!("{b:?}")
}

/// Listed `n` values of the table, per `beta`.
fn by_beta(n: &NTable) -> BTreeMap<Vec<i64>, BTreeMap<i64, ExactRational>> {
    let mut out: BTreeMap<Vec<i64>, BTreeMap<i64, ExactRational>> = BTreeMap::new();
    for (g, x) in &n.0 {
        out.entry(g.beta.clone()).or_default().insert(g.n, x.clone());
    }
    out
}

/// `N(beta, n) = N(beta, -n)` and `N(beta, n) = N(beta, n + beta.h)`,
/// checked wherever both sides lie in the listed range of `beta` (unlisted
/// entries inside the range count as zero).
pub fn validate_n_table(n: &NTable, h: &[i64]) -> Result<(), GenfunError> {
    for (beta, col) in by_beta(n) {
        if beta.len() != h.len() {
            return Err(GenfunError::InvalidInput(format!(
                "class {} does not match the divisor dimension {}",
                fmt_beta(&beta),
                h.len()
            )));
        }
        let (lo, hi) = (*col.keys().next().unwrap(), *col.keys().next_back().unwrap());
        let get = |k: i64| col.get(&k).cloned().unwrap_or_else(ExactRational::zero);
        let d = dot(&beta, h);
        for k in lo..=hi {
            if (lo..=hi).contains(&-k) && get(k) != get(-k) {
                return Err(GenfunError::SymmetryViolation(format!(
                    "N({}, {k}) != N({}, {})",
                    fmt_beta(&beta),
                    fmt_beta(&beta),
                    -k
                )));
            }
            if d != 0 && (lo..=hi).contains(&(k + d)) && get(k) != get(k + d) {
                return Err(GenfunError::SymmetryViolation(format!(
                    "N({}, {k}) != N({}, {})",
                    fmt_beta(&beta),
                    fmt_beta(&beta),
                    k + d
                )));
            }
        }
    }
    Ok(())
}

/// `E_beta = sum_(n>=1) n N(beta, n) q^n` through `q^k`: periodic when a
/// full period is listed, otherwise known up to the largest listed `n`.
fn exponent_columns(n: &NTable, h: &[i64], keys: &BTreeSet<Vec<i64>>, k: i64) -> Columns {
    let table = by_beta(n);
    keys.iter()
        .map(|beta| {
            let s = match table.get(beta) {
                None => TruncSeries {
                    lower: 1,
                    upper: k,
                    coeffs: LaurentPoly::zero(),
                },
                Some(col) => {
                    let (lo, hi) = (*col.keys().next().unwrap(), *col.keys().next_back().unwrap());
                    let d = dot(beta, h);
                    let periodic = d > 0 && hi - lo + 1 >= d;
                    let upper = if periodic { k } else { hi.min(k) };
                    let value = |m: i64| {
                        let r = if periodic { lo + (m - lo).rem_euclid(d) } else { m };
                        col.get(&r).cloned().unwrap_or_else(ExactRational::zero)
                    };
                    TruncSeries {
                        lower: 1,
                        upper,
                        coeffs: LaurentPoly::from_terms(
                            (1..=upper).map(|m| (m, ExactRational::from_integer(m.into()) * value(m))),
                        ),
                    }
                }
            };
            (beta.clone(), s)
        })
        .collect()
}

/// Product of two `beta`-graded series on the column set `keys`.
fn convolve(a: &Columns, b: &Columns, keys: &BTreeSet<Vec<i64>>) -> Columns {
    keys.iter()
        .map(|beta| {
            let mut acc: Option<TruncSeries> = None;
            for b1 in keys.iter().filter(|b1| leq(b1, beta)) {
                let b2: Vec<i64> = beta.iter().zip(b1).map(|(x, y)| x - y).collect();
                if let (Some(x), Some(y)) = (a.get(b1), b.get(&b2)) {
                    let t = x.mul(y);
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.add(&t),
                    });
                }
            }
            (beta.clone(), acc.expect("zero class splits as 0 + beta"))
        })
        .collect()
}

/// `exp` of a `beta`-graded series; the `beta = 0` column is
/// exponentiated in `q`, the rest is nilpotent in `beta`.
fn exp_columns(e: &Columns, keys: &BTreeSet<Vec<i64>>) -> Result<Columns, GenfunError> {
    let zero = vec![0; keys.iter().next().map_or(0, Vec::len)];
    let base = match e.get(&zero) {
        Some(s) => s.exp()?,
        None => TruncSeries::one(EXACT),
    };
    let unit = |beta: &Vec<i64>| {
        if *beta == zero {
            TruncSeries::one(EXACT)
        } else {
            TruncSeries {
                lower: 0,
                upper: EXACT,
                coeffs: LaurentPoly::zero(),
            }
        }
    };
    let rest: Columns = keys
        .iter()
        .map(|b| {
            let s = if *b == zero {
                TruncSeries {
                    lower: 1,
                    upper: EXACT,
                    coeffs: LaurentPoly::zero(),
                }
            } else {
                e[b].clone()
            };
            (b.clone(), s)
        })
        .collect();
    let depth: i64 = keys.iter().map(|b| b.iter().sum::<i64>()).max().unwrap_or(0);
    let mut total: Columns = keys.iter().map(|b| (b.clone(), unit(b))).collect();
    let mut power = total.clone();
    for k in 1..=depth {
        power = convolve(&power, &rest, keys);
        let inv_k = ExactRational::new(1.into(), k.into());
        power = power.into_iter().map(|(b, s)| (b, s.scale(&inv_k))).collect();
        total = total
            .iter()
            .map(|(b, s)| (b.clone(), s.add(&power[b])))
            .collect();
    }
    let base_cols: Columns = keys
        .iter()
        .map(|b| (b.clone(), if *b == zero { base.clone() } else { unit(b) }))
        .collect();
    Ok(convolve(&base_cols, &total, keys))
}

fn downward_closure(keys: impl IntoIterator<Item = Vec<i64>>) -> Result<BTreeSet<Vec<i64>>, GenfunError> {
    let mut out = BTreeSet::new();
    let mut dim = None;
    for beta in keys {
        if *dim.get_or_insert(beta.len()) != beta.len() {
            return Err(GenfunError::InvalidInput("classes of different dimensions".into()));
        }
        if beta.iter().any(|&x| x < 0) {
            return Err(GenfunError::InvalidInput(format!("class {} is not effective", fmt_beta(&beta))));
        }
        let mut cur = vec![0; beta.len()];
        loop {
            out.insert(cur.clone());
            let mut i = 0;
            while i < cur.len() && cur[i] == beta[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
            cur[i] += 1;
        }
    }
    Ok(out)
}

/// One extracted `L_beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TodaColumn {
    pub beta: Vec<i64>,
    pub l: LaurentPoly,
    /// Exponent range of the nonzero coefficients.
    pub range: Option<(i64, i64)>,
    /// Coefficients are exact through this exponent.
    pub precision: i64,
    pub palindromic: bool,
}

/// `L = exp(-E) PT(-q)`, column by column, with `E` built from the N-table
/// and the divisor pairing `h`. Every column of `pt` must have all smaller
/// classes present as well.
pub fn toda_assemble(n: &NTable, h: &[i64], pt: &DTSeries) -> Result<Vec<TodaColumn>, GenfunError> {
    validate_n_table(n, h)?;
    let keys: BTreeSet<Vec<i64>> = pt.columns.keys().cloned().collect();
    let closure = downward_closure(keys.iter().cloned())?;
    if let Some(missing) = closure.difference(&keys).next() {
        return Err(GenfunError::InsufficientTruncation(format!(
            "PT column {} is needed but not given",
            fmt_beta(missing)
        )));
    }
    let k = pt.columns.values().map(|s| s.upper - s.lower).max().unwrap_or(0).max(1);
    let e = exponent_columns(n, h, &keys, k);
    let neg_e: Columns = e.iter().map(|(b, s)| (b.clone(), s.neg())).collect();
    let x = exp_columns(&neg_e, &keys)?;
    let l = convolve(&x, &pt.subst_neg().columns, &keys);
    l.into_iter()
        .map(|(beta, s)| {
            let range = s.coeffs.min_exp().zip(s.coeffs.max_exp());
            if let Some((lo, hi)) = range {
                if s.upper <= hi.max(-lo) {
                    return Err(GenfunError::InsufficientTruncation(format!(
                        "L_{} is known through q^{} but its coefficients reach q^{}",
                        fmt_beta(&beta),
                        s.upper,
                        hi.max(-lo)
                    )));
                }
            }
            Ok(TodaColumn {
                palindromic: s.coeffs.is_palindromic(),
                beta,
                l: s.coeffs,
                range,
                precision: s.upper,
            })
        })
        .collect()
}

/// Forward direction: `PT(-q) = exp(E) L`, exact through `q^upper` where
/// the N-table allows.
pub fn toda_synthesize(
    n: &NTable,
    h: &[i64],
    l: &BTreeMap<Vec<i64>, LaurentPoly>,
    upper: i64,
) -> Result<DTSeries, GenfunError> {
    validate_n_table(n, h)?;
    let keys = downward_closure(l.keys().cloned())?;
    let lo = l.values().filter_map(LaurentPoly::min_exp).min().unwrap_or(0).min(0);
    let k = (upper - lo).max(1);
    let e = exponent_columns(n, h, &keys, k);
    let x = exp_columns(&e, &keys)?;
    let lcols: Columns = keys
        .iter()
        .map(|b| {
            let p = l.get(b).cloned().unwrap_or_default();
            (
                b.clone(),
                TruncSeries {
                    lower: lo,
                    upper,
                    coeffs: p.truncate(upper),
                },
            )
        })
        .collect();
    let pt_neg = convolve(&x, &lcols, &keys);
    Ok(DTSeries {
        columns: pt_neg
            .into_iter()
            .map(|(b, s)| (b, s.with_upper(upper).subst_neg()))
            .collect(),
    })
}

pub fn toda_json(cols: &[TodaColumn]) -> Value {
    serde_json::to_value(cols).expect("columns serialize")
}

/// Parses `[{"beta": [..], "n": k, "value": "p/q"}, ...]`.
pub fn n_table_from_json(s: &str) -> Result<NTable, GenfunError> {
    #[derive(serde::Deserialize)]
    struct Entry {
        beta: Vec<i64>,
        n: i64,
        value: Value,
    }
    let entries: Vec<Entry> = serde_json::from_str(s).map_err(|e| GenfunError::InvalidInput(e.to_string()))?;
    let mut out = NTable::default();
    for en in entries {
        let text = match &en.value {
            Value::String(t) => t.clone(),
            Value::Number(x) => x.to_string(),
            _ => return Err(GenfunError::InvalidInput("N-table values must be numbers or strings".into())),
        };
        let x = crate::coeff::parse_rational(&text).map_err(|e| GenfunError::InvalidInput(e.to_string()))?;
        out.0.insert(DegreeVector::new(en.beta, en.n), x);
    }
    Ok(out)
}
