use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::PolyL;
use super::rational::{format_rational, ExactRational};
use super::CoeffError;

/// Rational function in `L` over the rationals.
///
/// Always stored reduced with a monic denominator, so structural equality is
/// equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFun")]
pub struct RatFunL {
    numer: PolyL,
    denom: PolyL,
}

#[derive(Deserialize)]
struct RawRatFun {
    numer: PolyL,
    denom: PolyL,
}

impl TryFrom<RawRatFun> for RatFunL {
    type Error = CoeffError;
    fn try_from(r: RawRatFun) -> Result<Self, CoeffError> {
        RatFunL::new(r.numer, r.denom)
    }
}

impl RatFunL {
    pub fn new(numer: PolyL, denom: PolyL) -> Result<Self, CoeffError> {
        if denom.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::reduce(numer, denom))
    }

    fn reduce(numer: PolyL, denom: PolyL) -> Self {
        if numer.is_zero() {
            return RatFunL::zero();
        }
        let g = PolyL::gcd(&numer, &denom);
        let (mut n, _) = numer.div_rem(&g);
        let (mut d, _) = denom.div_rem(&g);
        let lc = d.leading().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunL { numer: n, denom: d }
    }

    pub fn from_poly(p: PolyL) -> Self {
        RatFunL {
            numer: p,
            denom: PolyL::one(),
        }
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::from_poly(PolyL::constant(c))
    }

    pub fn l() -> Self {
        Self::from_poly(PolyL::l())
    }

    /// `L^e` for any integer `e`.
    pub fn l_pow(e: i64) -> Self {
        let m = PolyL::monomial(ExactRational::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            Self::from_poly(m)
        } else {
            RatFunL {
                numer: PolyL::one(),
                denom: m,
            }
        }
    }

    pub fn numer(&self) -> &PolyL {
        &self.numer
    }

    pub fn denom(&self) -> &PolyL {
        &self.denom
    }

    pub fn as_poly(&self) -> Option<&PolyL> {
        self.denom.is_one().then_some(&self.numer)
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        RatFunL::new(self.denom.clone(), self.numer.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunL) -> Result<Self, CoeffError> {
        if rhs.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::reduce(
            &self.numer * &rhs.denom,
            &self.denom * &rhs.numer,
        ))
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return RatFunL::zero();
        }
        RatFunL {
            numer: self.numer.scale(c),
            denom: self.denom.clone(),
        }
    }

    pub fn eval_at(&self, q0: &ExactRational) -> Result<ExactRational, CoeffError> {
        let d = self.denom.eval(q0);
        if d.is_zero() {
            return Err(CoeffError::PoleAtPoint(format_rational(q0)));
        }
        Ok(self.numer.eval(q0) / d)
    }

    /// The `(L-1)`-adic valuation.
    pub fn order_at_one(&self) -> Result<i64, CoeffError> {
        let n = self.numer.order_at_one().ok_or(CoeffError::ZeroFunction)?;
        let d = self.denom.order_at_one().expect("denominator is nonzero");
        Ok(n as i64 - d as i64)
    }

    /// Value at `L = 1` of a regular function; zero maps to zero.
    pub fn semiclassical_limit(&self) -> Result<ExactRational, CoeffError> {
        if self.is_zero() {
            return Ok(ExactRational::zero());
        }
        let v = self.order_at_one()?;
        if v < 0 {
            return Err(CoeffError::NotRegular(v));
        }
        self.eval_at(&ExactRational::one())
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.denom.is_one() {
            self.numer.fmt_var(var)
        } else {
            format!("({})/({})", self.numer.fmt_var(var), self.denom.fmt_var(var))
        }
    }
}

impl fmt::Display for RatFunL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("L"))
    }
}

impl fmt::Debug for RatFunL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunL({self})")
    }
}

impl Zero for RatFunL {
    fn zero() -> Self {
        RatFunL {
            numer: PolyL::zero(),
            denom: PolyL::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for RatFunL {
    fn one() -> Self {
        RatFunL {
            numer: PolyL::one(),
            denom: PolyL::one(),
        }
    }
}

impl<'a> Add<&'a RatFunL> for &'a RatFunL {
    type Output = RatFunL;
    fn add(self, rhs: &RatFunL) -> RatFunL {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.denom == rhs.denom {
            return RatFunL::reduce(&self.numer + &rhs.numer, self.denom.clone());
        }
        RatFunL::reduce(
            &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom),
            &self.denom * &rhs.denom,
        )
    }
}

impl<'a> Sub<&'a RatFunL> for &'a RatFunL {
    type Output = RatFunL;
    fn sub(self, rhs: &RatFunL) -> RatFunL {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunL> for &'a RatFunL {
    type Output = RatFunL;
    fn mul(self, rhs: &RatFunL) -> RatFunL {
        if self.is_zero() || rhs.is_zero() {
            return RatFunL::zero();
        }
        if self.denom.is_one() && rhs.denom.is_one() {
            return RatFunL::from_poly(&self.numer * &rhs.numer);
        }
        RatFunL::reduce(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
    }
}

impl Neg for &RatFunL {
    type Output = RatFunL;
    fn neg(self) -> RatFunL {
        RatFunL {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Neg for RatFunL {
    type Output = RatFunL;
    fn neg(self) -> RatFunL {
        -(&self)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunL> for RatFunL {
            type Output = RatFunL;
            fn $m(self, rhs: RatFunL) -> RatFunL {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on division by zero; use [`RatFunL::checked_div`] to handle it.
impl Div<RatFunL> for RatFunL {
    type Output = RatFunL;
    fn div(self, rhs: RatFunL) -> RatFunL {
        self.checked_div(&rhs).expect("division by zero rational function")
    }
}
