use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::coeff::{ExactRational, PolyL, RatFunL};

use super::{GenfunError, LaurentPoly, TruncSeries};

/// Rational function of `q`, reduced with a monic polynomial denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunQ(RatFunL);

/// `p` must have no negative exponents.
fn to_poly(p: &LaurentPoly) -> PolyL {
    PolyL::from_coeffs((0..=p.max_exp().unwrap_or(0)).map(|i| p.coeff(i)).collect())
}

fn from_poly(p: &PolyL) -> LaurentPoly {
    LaurentPoly::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
}

impl RatFunQ {
    pub fn new(numer: &LaurentPoly, denom: &LaurentPoly) -> Result<Self, GenfunError> {
        if denom.is_zero() {
            return Err(GenfunError::InvalidInput("zero denominator".into()));
        }
        let (a, b) = (numer.min_exp().unwrap_or(0), denom.min_exp().unwrap_or(0));
        let m = a.min(b);
        let n = to_poly(&numer.shift(-m));
        let d = to_poly(&denom.shift(-m));
        RatFunL::new(n, d)
            .map(RatFunQ)
            .map_err(|e| GenfunError::InvalidInput(e.to_string()))
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        Self::new(p, &LaurentPoly::one()).expect("unit denominator")
    }

    pub fn numer(&self) -> LaurentPoly {
        from_poly(self.0.numer())
    }

    pub fn denom(&self) -> LaurentPoly {
        from_poly(self.0.denom())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &RatFunQ) -> Self {
        RatFunQ(&self.0 + &o.0)
    }

    pub fn mul(&self, o: &RatFunQ) -> Self {
        RatFunQ(&self.0 * &o.0)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        RatFunQ(self.0.scale(c))
    }

    /// `f(1/q)`.
    pub fn invert_var(&self) -> Self {
        Self::new(&self.numer().invert_var(), &self.denom().invert_var()).expect("nonzero denominator")
    }

    /// Laurent expansion at `q = 0` through `q^order`.
    pub fn taylor(&self, order: i64) -> TruncSeries {
        let d = self.denom();
        let v = d.min_exp().expect("nonzero denominator");
        let prec = order + v;
        let unit = TruncSeries::from_poly(&d.shift(-v), prec);
        let num = TruncSeries::from_poly(&self.numer(), prec);
        let p = num.mul(&unit.inverse().expect("unit after removing q^v"));
        TruncSeries {
            lower: -v,
            upper: order,
            coeffs: p.coeffs.shift(-v),
        }
    }

    /// `{"numer": {...}, "denom": {...}}` coefficient maps.
    pub fn to_json(&self) -> Value {
        json!({"numer": self.numer(), "denom": self.denom()})
    }
}

impl fmt::Display for RatFunQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_var("q"))
    }
}

/// `f(q) = f(1/q)`, tested as `P(q) Q(1/q) = P(1/q) Q(q)`.
pub fn symmetry_check(f: &RatFunQ) -> bool {
    let (p, q) = (f.numer(), f.denom());
    &p * &q.invert_var() == &p.invert_var() * &q
}

#[derive(Clone, Debug)]
pub struct PeriodicRational {
    pub function: RatFunQ,
    /// `a_r = a_((d - r) mod d)` for every `r`.
    pub table_symmetric: bool,
    pub invariant: bool,
}

impl PeriodicRational {
    pub fn to_json(&self) -> Value {
        json!({
            "function": self.function.to_json(),
            "display": self.function.to_string(),
            "table_symmetric": self.table_symmetric,
            "invariant": self.invariant,
        })
    }
}

/// Closed form of `sum_(n>=0) n a_(n mod d) q^n` over `(1 - q^d)^2`.
pub fn rational_from_periodic(d: usize, a: &[ExactRational]) -> Result<PeriodicRational, GenfunError> {
    if d == 0 || a.len() != d {
        return Err(GenfunError::InvalidInput(format!(
            "need a period d >= 1 and exactly d table entries, got d = {d} and {} entries",
            a.len()
        )));
    }
    let di = d as i64;
    let one_minus = &LaurentPoly::one() - &LaurentPoly::monomial(di, ExactRational::from_integer(1.into()));
    let mut numer = LaurentPoly::zero();
    for (r, ar) in a.iter().enumerate() {
        if ar.is_zero() {
            continue;
        }
        let r = r as i64;
        let first = &LaurentPoly::monomial(r, ar * ExactRational::from_integer(r.into())) * &one_minus;
        let second = LaurentPoly::monomial(r + di, ar * ExactRational::from_integer(di.into()));
        numer = &(&numer + &first) + &second;
    }
    let function = RatFunQ::new(&numer, &(&one_minus * &one_minus))?;
    let table_symmetric = (0..d).all(|r| a[r] == a[(d - r) % d]);
    let invariant = symmetry_check(&function);
    assert!(!table_symmetric || invariant, "symmetric table gave a non-invariant function");
    Ok(PeriodicRational {
        function,
        table_symmetric,
        invariant,
    })
}
