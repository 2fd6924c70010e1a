use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, rat, ExactRational};

/// Univariate polynomial over the rationals, dense and trimmed: the last
/// stored coefficient is never zero, and the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyL {
    coeffs: Vec<ExactRational>,
}

impl PolyL {
    pub fn from_coeffs(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyL { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The motivic symbol `L` itself.
    pub fn l() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: ExactRational, exp: usize) -> Self {
        let mut v = vec![ExactRational::zero(); exp + 1];
        v[exp] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Coefficients in reverse order: `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::from_coeffs(v)
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &PolyL) -> (PolyL, PolyL) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (PolyL::zero(), self.clone());
        }
        let mut quot = vec![ExactRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (PolyL::from_coeffs(quot), PolyL::from_coeffs(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &PolyL, b: &PolyL) -> PolyL {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Largest `v` with `(L-1)^v` dividing `self`; `None` for zero.
    pub fn order_at_one(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        let one = ExactRational::one();
        while cur.eval(&one).is_zero() {
            cur = cur.div_rem(&PolyL::from_ints(&[-1, 1])).0;
            v += 1;
        }
        Some(v)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&format_rational(&mag));
                if i > 0 {
                    out.push('*');
                }
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

impl fmt::Display for PolyL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("L"))
    }
}

impl fmt::Debug for PolyL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyL({self})")
    }
}

impl Zero for PolyL {
    fn zero() -> Self {
        PolyL { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PolyL {
    fn one() -> Self {
        Self::from_ints(&[1])
    }
}

impl<'a> Add<&'a PolyL> for &'a PolyL {
    type Output = PolyL;
    fn add(self, rhs: &PolyL) -> PolyL {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyL::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a PolyL> for &'a PolyL {
    type Output = PolyL;
    fn sub(self, rhs: &PolyL) -> PolyL {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyL::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a PolyL> for &'a PolyL {
    type Output = PolyL;
    fn mul(self, rhs: &PolyL) -> PolyL {
        if self.is_zero() || rhs.is_zero() {
            return PolyL::zero();
        }
        let mut v = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        PolyL::from_coeffs(v)
    }
}

impl Neg for &PolyL {
    type Output = PolyL;
    fn neg(self) -> PolyL {
        PolyL::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PolyL> for PolyL {
            type Output = PolyL;
            fn $m(self, rhs: PolyL) -> PolyL {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyL {
    type Output = PolyL;
    fn neg(self) -> PolyL {
        -(&self)
    }
}

impl Serialize for PolyL {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i.to_string(), format_rational(c)))
            .collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut v: Vec<ExactRational> = Vec::new();
        for (k, c) in m {
            let e: usize = k.parse().map_err(serde::de::Error::custom)?;
            let c = parse_rational(&c).map_err(serde::de::Error::custom)?;
            if v.len() <= e {
                v.resize(e + 1, ExactRational::zero());
            }
            v[e] = c;
        }
        Ok(PolyL::from_coeffs(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = PolyL::from_ints(&[-1, 0, 1]); // L^2 - 1
        let b = PolyL::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, PolyL::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let g = PolyL::gcd(&a, &(&b * &b));
        assert_eq!(g, b);
    }

    #[test]
    fn order_at_one_counts_factors() {
        let b = PolyL::from_ints(&[-1, 1]);
        let p = &(&b * &b) * &PolyL::from_ints(&[1, 1]);
        assert_eq!(p.order_at_one(), Some(2));
        assert_eq!(PolyL::l().order_at_one(), Some(0));
        assert_eq!(PolyL::zero().order_at_one(), None);
    }

    #[test]
    fn display_and_serde() {
        let p = PolyL::from_ints(&[1, -1, 0, 2]);
        assert_eq!(p.to_string(), "2*L^3 - L + 1");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"0":"1","1":"-1","3":"2"}"#);
        let back: PolyL = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
