use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{format_rational, ExactRational};

use super::{GenfunError, LaurentPoly, TruncSeries};

/// `M(q) = prod (1 - q^k)^-k` through `q^order`, via
/// `n M_n = sum_k sigma_2(k) M_(n-k)`.
pub fn macmahon(order: usize) -> TruncSeries {
    let sigma2: Vec<BigInt> = (0..=order)
        .map(|k| {
            (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| BigInt::from(d * d))
                .sum()
        })
        .collect();
    let mut m: Vec<BigInt> = vec![BigInt::from(1)];
    for n in 1..=order {
        let s: BigInt = (1..=n).map(|k| &sigma2[k] * &m[n - k]).sum();
        m.push(s / BigInt::from(n));
    }
    TruncSeries {
        lower: 0,
        upper: order as i64,
        coeffs: LaurentPoly::from_terms(
            m.into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64, ExactRational::from_integer(c))),
        ),
    }
}

/// `M(-q)^chi` through `q^order`.
pub fn dt_zero(chi: i64, order: usize) -> TruncSeries {
    macmahon(order)
        .subst_neg()
        .pow(chi)
        .expect("MacMahon series has constant term 1")
}

/// Per-`beta` truncated Laurent series in `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DTSeries {
    pub columns: BTreeMap<Vec<i64>, TruncSeries>,
}

#[derive(Serialize, Deserialize)]
struct RawColumn {
    beta: Vec<i64>,
    lower: i64,
    upper: i64,
    coeffs: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    columns: Vec<RawColumn>,
}

impl DTSeries {
    pub fn single(beta: Vec<i64>, s: TruncSeries) -> Self {
        DTSeries {
            columns: BTreeMap::from([(beta, s)]),
        }
    }

    pub fn column(&self, beta: &[i64]) -> Option<&TruncSeries> {
        self.columns.get(beta)
    }

    pub fn map(&self, f: impl Fn(&TruncSeries) -> TruncSeries) -> Self {
        DTSeries {
            columns: self.columns.iter().map(|(b, s)| (b.clone(), f(s))).collect(),
        }
    }

    /// `q -> -q` on every column.
    pub fn subst_neg(&self) -> Self {
        self.map(TruncSeries::subst_neg)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("series serializes")
    }

    pub fn from_json(v: &str) -> Result<Self, GenfunError> {
        let raw: RawSeries = serde_json::from_str(v).map_err(|e| GenfunError::InvalidInput(e.to_string()))?;
        let mut columns = BTreeMap::new();
        for c in raw.columns {
            let s = TruncSeries::new(c.coeffs, c.lower, c.upper)?;
            if columns.insert(c.beta.clone(), s).is_some() {
                return Err(GenfunError::InvalidInput(format!("duplicate column {:?}", c.beta)));
            }
        }
        Ok(DTSeries { columns })
    }

    fn raw(&self) -> RawSeries {
        RawSeries {
            columns: self
                .columns
                .iter()
                .map(|(b, s)| RawColumn {
                    beta: b.clone(),
                    lower: s.lower,
                    upper: s.upper,
                    coeffs: s.coeffs.clone(),
                })
                .collect(),
        }
    }

    /// Rows `beta,exponent,coefficient` for every exponent from `lower` to
    /// `upper`, zeros included.
    pub fn to_csv(&self) -> Result<String, GenfunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| GenfunError::InvalidInput(e.to_string());
        w.write_record(["beta", "exponent", "coefficient"]).map_err(io)?;
        for (b, s) in &self.columns {
            let beta = b.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
            for e in s.lower..=s.upper {
                w.write_record([beta.clone(), e.to_string(), format_rational(&s.coeffs.coeff(e))])
                    .map_err(io)?;
            }
        }
        String::from_utf8(w.into_inner().map_err(|e| GenfunError::InvalidInput(e.to_string()))?)
            .map_err(|e| GenfunError::InvalidInput(e.to_string()))
    }
}

/// A single series as CSV rows `exponent,coefficient`.
pub fn series_csv(s: &TruncSeries) -> Result<String, GenfunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| GenfunError::InvalidInput(e.to_string());
    w.write_record(["exponent", "coefficient"]).map_err(io)?;
    for e in s.lower..=s.upper {
        w.write_record([e.to_string(), format_rational(&s.coeffs.coeff(e))]).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| GenfunError::InvalidInput(e.to_string()))?)
        .map_err(|e| GenfunError::InvalidInput(e.to_string()))
}

fn unit_normalized(dt0: &TruncSeries) -> Result<TruncSeries, GenfunError> {
    if dt0.coeffs.min_exp().is_some_and(|e| e < 0) || dt0.coeffs.coeff(0).is_zero() {
        return Err(GenfunError::NonUnitConstantTerm);
    }
    Ok(TruncSeries {
        lower: 0,
        ..dt0.clone()
    })
}

/// `DT'_beta = DT_beta / DT_0`, column by column.
pub fn reduce_dt(dt: &DTSeries, dt0: &TruncSeries) -> Result<DTSeries, GenfunError> {
    let inv = unit_normalized(dt0)?.inverse()?;
    Ok(dt.map(|s| s.mul(&inv)))
}

/// `DT_beta = PT_beta * M(-q)^chi`, with `M` expanded far enough that each
/// column keeps its precision.
pub fn dt_from_pt(pt: &DTSeries, chi: i64) -> DTSeries {
    let order = pt
        .columns
        .values()
        .map(|s| s.upper - s.lower)
        .max()
        .unwrap_or(0)
        .max(0);
    let dt0 = dt_zero(chi, order as usize);
    pt.map(|s| s.mul(&dt0))
}
