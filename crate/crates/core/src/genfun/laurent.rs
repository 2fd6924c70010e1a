use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{format_rational, parse_rational, ExactRational};

use super::GenfunError;

/// Finite Laurent polynomial in `q` with exact rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, ExactRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, ExactRational::one())
    }

    pub fn monomial(exp: i64, c: ExactRational) -> Self {
        Self::from_terms([(exp, c)])
    }

    /// Sums repeated exponents and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, ExactRational)>) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            *out.entry(e).or_insert_with(ExactRational::zero) += c;
        }
        out.retain(|_, c: &mut ExactRational| !c.is_zero());
        LaurentPoly { terms: out }
    }

    /// `coeffs[i]` is the coefficient of `q^(lowest + i)`.
    pub fn from_ints(lowest: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (lowest + i as i64, ExactRational::from_integer(c.into()))),
        )
    }

    pub fn terms(&self) -> &BTreeMap<i64, ExactRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> ExactRational {
        self.terms.get(&e).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, x)| (e, x * c)))
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, x)| (e + k, x.clone())).collect(),
        }
    }

    /// `q -> -q`.
    pub fn subst_neg(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, x)| (e, if e % 2 == 0 { x.clone() } else { -x }))
                .collect(),
        }
    }

    /// `q -> 1/q`.
    pub fn invert_var(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, x)| (-e, x.clone())).collect(),
        }
    }

    /// Drops every exponent above `upper`.
    pub fn truncate(&self, upper: i64) -> Self {
        LaurentPoly {
            terms: self.terms.range(..=upper).map(|(&e, x)| (e, x.clone())).collect(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.invert_var()
    }

    pub fn eval(&self, x: &ExactRational) -> Result<ExactRational, GenfunError> {
        if x.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(GenfunError::InvalidInput("pole at q = 0".into()));
        }
        Ok(self.terms.iter().fold(ExactRational::zero(), |acc, (&e, c)| {
            let p = if e >= 0 {
                num_traits::pow(x.clone(), e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            };
            acc + c * p
        }))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                s.push_str(&format_rational(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{mono}", format_rational(&a)));
            }
        }
        s
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("q"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().chain(&o.terms).map(|(&e, c)| (e, c.clone())))
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .flat_map(|(&e, c)| o.terms.iter().map(move |(&f, d)| (e + f, c * d))),
        )
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

/// Serialized as `{"exponent": "coefficient"}`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.terms.iter().map(|(e, c)| (e.to_string(), format_rational(c))))
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(d)?;
        let mut terms = Vec::new();
        for (k, v) in raw {
            let e: i64 = k.trim().parse().map_err(|_| D::Error::custom(format!("bad exponent {k:?}")))?;
            let c = match &v {
                serde_json::Value::String(s) => parse_rational(s).map_err(D::Error::custom)?,
                serde_json::Value::Number(n) => parse_rational(&n.to_string()).map_err(D::Error::custom)?,
                _ => return Err(D::Error::custom(format!("bad coefficient for exponent {e}"))),
            };
            terms.push((e, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// Sentinel precision for series known exactly.
pub const EXACT: i64 = i64::MAX / 4;

/// A Laurent series known through `q^upper`, with no terms below `q^lower`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncSeries {
    pub lower: i64,
    pub upper: i64,
    pub coeffs: LaurentPoly,
}

impl TruncSeries {
    pub fn new(coeffs: LaurentPoly, lower: i64, upper: i64) -> Result<Self, GenfunError> {
        if coeffs.min_exp().is_some_and(|e| e < lower) {
            return Err(GenfunError::InvalidInput(format!(
                "series has terms below its lower bound {lower}"
            )));
        }
        Ok(TruncSeries {
            lower,
            upper,
            coeffs: coeffs.truncate(upper),
        })
    }

    /// `p` read as a series exact through `q^upper`.
    pub fn from_poly(p: &LaurentPoly, upper: i64) -> Self {
        TruncSeries {
            lower: p.min_exp().unwrap_or(0).min(0),
            upper,
            coeffs: p.truncate(upper),
        }
    }

    pub fn one(upper: i64) -> Self {
        Self::from_poly(&LaurentPoly::one(), upper)
    }

    /// `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<ExactRational> {
        (e <= self.upper).then(|| self.coeffs.coeff(e))
    }

    pub fn with_upper(&self, upper: i64) -> Self {
        TruncSeries {
            lower: self.lower,
            upper: upper.min(self.upper),
            coeffs: self.coeffs.truncate(upper),
        }
    }

    pub fn add(&self, o: &TruncSeries) -> Self {
        let upper = self.upper.min(o.upper);
        TruncSeries {
            lower: self.lower.min(o.lower),
            upper,
            coeffs: (&self.coeffs + &o.coeffs).truncate(upper),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            lower: self.lower,
            upper: self.upper,
            coeffs: -&self.coeffs,
        }
    }

    pub fn sub(&self, o: &TruncSeries) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        TruncSeries {
            lower: self.lower,
            upper: self.upper,
            coeffs: self.coeffs.scale(c),
        }
    }

    pub fn subst_neg(&self) -> Self {
        TruncSeries {
            lower: self.lower,
            upper: self.upper,
            coeffs: self.coeffs.subst_neg(),
        }
    }

    /// Exact through `min(a.upper + b.lower, b.upper + a.lower)`.
    pub fn mul(&self, o: &TruncSeries) -> Self {
        let upper = sat_add(self.upper, o.lower).min(sat_add(o.upper, self.lower));
        let mut terms = BTreeMap::new();
        for (&e, c) in self.coeffs.terms() {
            for (&f, d) in o.coeffs.terms().range(..=upper.saturating_sub(e)) {
                *terms.entry(e + f).or_insert_with(ExactRational::zero) += c * d;
            }
        }
        TruncSeries {
            lower: self.lower + o.lower,
            upper,
            coeffs: LaurentPoly::from_terms(terms),
        }
    }

    /// Needs a nonzero coefficient at `q^lower`; exact through
    /// `upper - 2 lower`.
    pub fn inverse(&self) -> Result<Self, GenfunError> {
        let lead = self.coeffs.coeff(self.lower);
        if lead.is_zero() {
            return Err(GenfunError::NonUnitConstantTerm);
        }
        if self.upper >= EXACT {
            return Err(GenfunError::InvalidInput("inverse of an exact series needs a precision".into()));
        }
        let prec = (self.upper - self.lower).max(0) as usize;
        let b: Vec<ExactRational> = (0..=prec)
            .map(|k| self.coeffs.coeff(self.lower + k as i64))
            .collect();
        let inv0 = lead.recip();
        let mut s = vec![inv0.clone()];
        for k in 1..=prec {
            let acc = (1..=k).fold(ExactRational::zero(), |acc, j| acc + &b[j] * &s[k - j]);
            s.push(-acc * &inv0);
        }
        Ok(TruncSeries {
            lower: -self.lower,
            upper: self.upper - 2 * self.lower,
            coeffs: LaurentPoly::from_terms(
                s.into_iter().enumerate().map(|(k, c)| (k as i64 - self.lower, c)),
            ),
        })
    }

    pub fn div(&self, o: &TruncSeries) -> Result<Self, GenfunError> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self, GenfunError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = TruncSeries::one(self.upper);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Needs `lower >= 1`; exact through `upper`.
    pub fn exp(&self) -> Result<Self, GenfunError> {
        if self.coeffs.min_exp().is_some_and(|e| e < 1) {
            return Err(GenfunError::InvalidInput("exp needs a series without constant term".into()));
        }
        if self.upper >= EXACT {
            return Err(GenfunError::InvalidInput("exp needs a finite precision".into()));
        }
        let n = self.upper.max(0) as usize;
        let a: Vec<ExactRational> = (0..=n).map(|k| self.coeffs.coeff(k as i64)).collect();
        let mut f = vec![ExactRational::one()];
        for k in 1..=n {
            let acc = (1..=k).fold(ExactRational::zero(), |acc, j| {
                acc + ExactRational::from_integer((j as i64).into()) * &a[j] * &f[k - j]
            });
            f.push(acc / ExactRational::from_integer((k as i64).into()));
        }
        Ok(TruncSeries {
            lower: 0,
            upper: self.upper,
            coeffs: LaurentPoly::from_terms(f.into_iter().enumerate().map(|(k, c)| (k as i64, c))),
        })
    }
}

pub(crate) fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}
