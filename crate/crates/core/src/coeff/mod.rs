//! Exact coefficient arithmetic.
//!
//! Rationals are `num_rational::BigRational`; on top of them this module
//! provides univariate polynomials and rational functions in the motivic
//! symbol `L`, interpolation of point counts sampled at several primes, and
//! the `(L-1)`-adic order used for regularity checks.

mod interpolate;
mod poly;
mod rational;
mod ratfun;

pub use interpolate::{interpolate, interpolate_counts, CountSamples};
pub use poly::PolyL;
pub use rational::{format_rational, parse_rational, rat, ExactRational};
pub use ratfun::RatFunL;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("rational function has a pole at {0}")]
    PoleAtPoint(String),
    #[error("order at L=1 is undefined for the zero function")]
    ZeroFunction,
    #[error("element is not regular at L=1 (order {0})")]
    NotRegular(i64),
    #[error("interpolation needs at least {needed} distinct points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(String),
    #[error("holdout mismatch at {point}: fitted {fitted}, observed {observed}")]
    HoldoutMismatch {
        point: String,
        fitted: String,
        observed: String,
    },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// A commutative coefficient ring containing the rationals.
///
/// Series, Hall tables and tori are generic over this trait so the same code
/// runs at a fixed prime (`ExactRational`) and symbolically (`RatFunL`).
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &ExactRational) -> Self;

    /// Multiplicative inverse, `None` for non-units.
    fn try_inv(&self) -> Option<Self>;

    fn from_int(i: i64) -> Self {
        Self::from_rational(&rat(i, 1))
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..e.unsigned_abs() {
            out = out * base.clone();
        }
        Some(out)
    }
}

impl Scalar for ExactRational {
    fn from_rational(r: &ExactRational) -> Self {
        r.clone()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for RatFunL {
    fn from_rational(r: &ExactRational) -> Self {
        RatFunL::constant(r.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}
