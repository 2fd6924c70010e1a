//! Truncated graded series over a graded ring.
//!
//! A [`GradedSeries`] stores one piece per in-window degree; a piece is the
//! coefficient vector of that degree in the ring (length one for tori, one
//! entry per isomorphism class for Hall algebras). Every operation returns
//! the window on which its result is exact.

mod limit;
mod poisson;
mod skew;
mod torus;

pub use limit::{limit, StabilizationCertificate};
pub use poisson::{ady_exp_action, poisson_bracket, skew_poisson_bracket};
pub use skew::SkewElement;
pub use torus::{BilinearForm, Torus};

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeff::{rat, CoeffError, ExactRational, Scalar};
use crate::grading::{guaranteed_product_window, DegreeVector, GradingContext, TruncationWindow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("degree {0} lies outside the window")]
    OutOfWindow(String),
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("bad constant term: {0}")]
    BadConstantTerm(&'static str),
    #[error("no stabilization certificate for degree {0}")]
    NoCertificate(String),
    #[error("sequence is not constant after index {index} in degree {degree}")]
    CertificateViolated { degree: String, index: usize },
    #[error("coefficient in degree {0} is not regular at L=1")]
    NotRegular(String),
    #[error("commutator in degree {0} is not divisible by L-1")]
    CommutatorNotDivisible(String),
    #[error("Ad(exp a) and exp(ad a) disagree in degree {0}")]
    RouteMismatch(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A `Delta`-graded algebra whose graded pieces are finite free modules
/// over `Self::Scalar`, with the unit spanning the degree-zero piece.
pub trait GradedRing: Sync {
    type Scalar: Scalar;

    fn grading(&self) -> &GradingContext;

    /// Rank of the piece in degree `deg`; zero when nothing lives there.
    fn piece_len(&self, deg: &DegreeVector) -> usize;

    /// `out += a * b` for pieces `a` in degree `da` and `b` in degree `db`.
    fn mul_pieces(
        &self,
        da: &DegreeVector,
        a: &[Self::Scalar],
        db: &DegreeVector,
        b: &[Self::Scalar],
        out: &mut [Self::Scalar],
    );

    /// The value of `L` in the scalar ring.
    fn lefschetz(&self) -> Self::Scalar;

    fn zero_series(&self, window: &TruncationWindow) -> GradedSeries<Self::Scalar> {
        GradedSeries::zero(window.clone())
    }

    fn one(&self, window: &TruncationWindow) -> GradedSeries<Self::Scalar> {
        let mut s = GradedSeries::zero(window.clone());
        let z = DegreeVector::zero(self.grading().rank);
        if window.contains(&z) {
            s.terms.insert(z, vec![Self::Scalar::one()]);
        }
        s
    }

    /// Truncated product, exact on the returned window.
    fn mul(
        &self,
        a: &GradedSeries<Self::Scalar>,
        b: &GradedSeries<Self::Scalar>,
    ) -> GradedSeries<Self::Scalar> {
        let w = guaranteed_product_window(self.grading(), &a.window, &b.window);
        self.mul_on(a, b, w)
    }

    /// Product computed on `w` without checking exactness there.
    fn mul_on(
        &self,
        a: &GradedSeries<Self::Scalar>,
        b: &GradedSeries<Self::Scalar>,
        w: TruncationWindow,
    ) -> GradedSeries<Self::Scalar> {
        let degrees = w.degrees();
        let pieces: Vec<(DegreeVector, Vec<Self::Scalar>)> = degrees
            .into_par_iter()
            .filter_map(|g| {
                let len = self.piece_len(&g);
                if len == 0 {
                    return None;
                }
                let mut out = vec![Self::Scalar::zero(); len];
                for (d1, p1) in &a.terms {
                    if d1.beta.iter().zip(&g.beta).any(|(x, y)| x > y) {
                        continue;
                    }
                    let d2 = g.sub(d1);
                    if let Some(p2) = b.terms.get(&d2) {
                        self.mul_pieces(d1, p1, &d2, p2, &mut out);
                    }
                }
                (!out.iter().all(|x| x.is_zero())).then_some((g, out))
            })
            .collect();
        GradedSeries {
            window: w,
            terms: pieces.into_iter().collect(),
        }
    }

    fn pow(&self, a: &GradedSeries<Self::Scalar>, k: u32) -> GradedSeries<Self::Scalar> {
        let mut out = self.one(&a.window);
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    /// `sum_j c_j a^j` for `pi_0(a) = 0`, summed until the powers vanish on
    /// their (shrinking) windows.
    fn power_series(
        &self,
        a: &GradedSeries<Self::Scalar>,
        coeff: &dyn Fn(u32) -> ExactRational,
    ) -> GradedSeries<Self::Scalar> {
        let a = a.restrict(&a.window.downward_closed_core(self.grading()));
        let mut power = self.one(&a.window);
        let mut acc = power.scale(&Self::Scalar::from_rational(&coeff(0)));
        let mut j = 0;
        while !power.is_zero() {
            j += 1;
            power = self.mul(&a, &power);
            let c = coeff(j);
            acc = acc.add(&power.scale(&Self::Scalar::from_rational(&c)));
        }
        acc
    }

    fn invert(
        &self,
        u: &GradedSeries<Self::Scalar>,
    ) -> Result<GradedSeries<Self::Scalar>, SeriesError> {
        let c = u.constant_term(self.grading());
        let cinv = c.try_inv().ok_or(SeriesError::NonUnitConstantTerm)?;
        // u = c (1 - a)
        let a = self.one(&u.window).sub(&u.scale(&cinv));
        let geo = self.power_series(&a, &|_| rat(1, 1));
        Ok(geo.scale(&cinv))
    }

    fn exp(&self, a: &GradedSeries<Self::Scalar>) -> Result<GradedSeries<Self::Scalar>, SeriesError> {
        if !a.constant_term(self.grading()).is_zero() {
            return Err(SeriesError::BadConstantTerm("exp needs zero constant term"));
        }
        Ok(self.power_series(a, &|j| {
            let mut f = rat(1, 1);
            for k in 2..=j as i64 {
                f = f * rat(1, k);
            }
            f
        }))
    }

    fn log(&self, u: &GradedSeries<Self::Scalar>) -> Result<GradedSeries<Self::Scalar>, SeriesError> {
        if !u.constant_term(self.grading()).is_one() {
            return Err(SeriesError::BadConstantTerm("log needs constant term one"));
        }
        let a = u.sub(&self.one(&u.window));
        Ok(self.power_series(&a, &|j| match j {
            0 => rat(0, 1),
            _ if j % 2 == 1 => rat(1, j as i64),
            _ => rat(-1, j as i64),
        }))
    }

    /// `a^(chi^k)`: the degree-`g` piece times `L^(k chi(g))`.
    fn twist_chi(&self, a: &GradedSeries<Self::Scalar>, k: i64) -> GradedSeries<Self::Scalar> {
        let l = self.lefschetz();
        let mut out = a.clone();
        for (g, p) in out.terms.iter_mut() {
            let e = k * self.grading().chi(g);
            let f = l.pow_i(e).expect("L is invertible");
            for x in p.iter_mut() {
                *x = x.clone() * f.clone();
            }
        }
        out
    }

    fn commutator(
        &self,
        a: &GradedSeries<Self::Scalar>,
        b: &GradedSeries<Self::Scalar>,
    ) -> GradedSeries<Self::Scalar> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// `Ad_{exp a}(v) = exp(a) v exp(-a)`, checked against
    /// `exp(ad_a)(v) = sum_j ad_a^j(v) / j!` on the common window.
    fn ad_exp(
        &self,
        a: &GradedSeries<Self::Scalar>,
        v: &GradedSeries<Self::Scalar>,
    ) -> Result<GradedSeries<Self::Scalar>, SeriesError> {
        let ea = self.exp(a)?;
        let ema = self.exp(&a.neg())?;
        let route1 = self.mul(&self.mul(&ea, v), &ema);

        let a = a.restrict(&a.window.downward_closed_core(self.grading()));
        let mut term = v.clone();
        let mut route2 = v.clone();
        let mut j = 0i64;
        while !term.is_zero() {
            j += 1;
            term = self.commutator(&a, &term).scale(&Self::Scalar::from_rational(&rat(1, j)));
            route2 = route2.add(&term);
        }
        let w = route1.window.intersect(&route2.window);
        let (r1, r2) = (route1.restrict(&w), route2.restrict(&w));
        if let Some(g) = r1.first_difference(&r2) {
            return Err(SeriesError::RouteMismatch(g.to_string()));
        }
        Ok(r1)
    }
}

/// Finite truncation of a graded series: pieces on the in-window degrees,
/// zeros omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSeries<S> {
    pub window: TruncationWindow,
    pub terms: BTreeMap<DegreeVector, Vec<S>>,
}

impl<S: Scalar> GradedSeries<S> {
    pub fn zero(window: TruncationWindow) -> Self {
        GradedSeries {
            window,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a series from pieces, dropping zero pieces and anything out of
    /// the window.
    pub fn from_terms(
        window: TruncationWindow,
        terms: impl IntoIterator<Item = (DegreeVector, Vec<S>)>,
    ) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(g, p)| window.contains(g) && !p.iter().all(|x| x.is_zero()))
            .collect();
        GradedSeries { window, terms }
    }

    /// Scalar monomial `c x^g`, for length-one pieces.
    pub fn monomial(window: TruncationWindow, g: DegreeVector, c: S) -> Self {
        Self::from_terms(window, [(g, vec![c])])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The piece in degree `g`; empty vector when stored as zero.
    pub fn component(&self, g: &DegreeVector) -> Result<Vec<S>, SeriesError> {
        if self.window.contains(g) || self.window.is_known_zero(g) {
            Ok(self.terms.get(g).cloned().unwrap_or_default())
        } else {
            Err(SeriesError::OutOfWindow(g.to_string()))
        }
    }

    /// Scalar coefficient for length-one pieces.
    pub fn coeff(&self, g: &DegreeVector) -> Result<S, SeriesError> {
        Ok(self.component(g)?.into_iter().next().unwrap_or_else(S::zero))
    }

    pub fn constant_term(&self, ctx: &GradingContext) -> S {
        self.terms
            .get(&DegreeVector::zero(ctx.rank))
            .and_then(|p| p.first().cloned())
            .unwrap_or_else(S::zero)
    }

    pub fn restrict(&self, w: &TruncationWindow) -> Self {
        let w = w.intersect(&self.window);
        GradedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| w.contains(g))
                .map(|(g, p)| (g.clone(), p.clone()))
                .collect(),
            window: w,
        }
    }

    fn combine(&self, o: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let w = self.window.intersect(&o.window);
        let mut terms = BTreeMap::new();
        let keys: std::collections::BTreeSet<&DegreeVector> =
            self.terms.keys().chain(o.terms.keys()).collect();
        for g in keys {
            if !w.contains(g) {
                continue;
            }
            let empty = Vec::new();
            let a = self.terms.get(g).unwrap_or(&empty);
            let b = o.terms.get(g).unwrap_or(&empty);
            let n = a.len().max(b.len());
            let z = S::zero();
            let p: Vec<S> = (0..n)
                .map(|i| f(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect();
            if !p.iter().all(|x| x.is_zero()) {
                terms.insert(g.clone(), p);
            }
        }
        GradedSeries { window: w, terms }
    }

    /// Sum on the intersection of the windows.
    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.clone() - b.clone())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|x| -x.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(g, p)| {
                let q: Vec<S> = p.iter().map(&f).collect();
                (!q.iter().all(|x| x.is_zero())).then(|| (g.clone(), q))
            })
            .collect();
        GradedSeries {
            window: self.window.clone(),
            terms,
        }
    }

    /// Coefficient-wise map into another scalar ring.
    pub fn try_map<T: Scalar, E>(&self, f: impl Fn(&S) -> Result<T, E>) -> Result<GradedSeries<T>, E> {
        let mut terms = BTreeMap::new();
        for (g, p) in &self.terms {
            let q = p.iter().map(&f).collect::<Result<Vec<T>, E>>()?;
            if !q.iter().all(|x| x.is_zero()) {
                terms.insert(g.clone(), q);
            }
        }
        Ok(GradedSeries {
            window: self.window.clone(),
            terms,
        })
    }

    /// First in-window degree where the two series differ.
    pub fn first_difference(&self, o: &Self) -> Option<DegreeVector> {
        let keys: std::collections::BTreeSet<&DegreeVector> =
            self.terms.keys().chain(o.terms.keys()).collect();
        keys.into_iter()
            .find(|g| {
                let a = self.terms.get(*g);
                let b = o.terms.get(*g);
                match (a, b) {
                    (Some(x), Some(y)) => !pieces_equal(x, y),
                    (Some(x), None) | (None, Some(x)) => !x.iter().all(|c| c.is_zero()),
                    (None, None) => false,
                }
            })
            .cloned()
    }

    /// `{"window": ..., "terms": [{"degree": ..., "coefficient": ...}]}`,
    /// terms sorted by degree.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(g, p)| {
                let c = if p.len() == 1 {
                    json!(p[0].to_string())
                } else {
                    json!(p.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                };
                json!({"degree": g, "coefficient": c})
            })
            .collect();
        json!({"window": self.window, "terms": terms})
    }
}

fn pieces_equal<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let n = a.len().max(b.len());
    let z = S::zero();
    (0..n).all(|i| a.get(i).unwrap_or(&z) == b.get(i).unwrap_or(&z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::RatFunL;
    use crate::grading::Cone;
    use proptest::prelude::*;

    fn monoid() -> Torus<ExactRational> {
        Torus::commutative(GradingContext::point_context(), rat(1, 1))
    }

    fn q_series(c: &[i64], upper: i64) -> GradedSeries<ExactRational> {
        GradedSeries::from_terms(
            TruncationWindow::points_up_to(upper),
            c.iter()
                .enumerate()
                .map(|(i, &x)| (DegreeVector::point(i as i64), vec![rat(x, 1)])),
        )
    }

    #[test]
    fn component_access() {
        let t = monoid();
        let w = TruncationWindow::points_up_to(3);
        let one = t.one(&w);
        assert_eq!(one.coeff(&DegreeVector::point(0)).unwrap(), rat(1, 1));
        assert_eq!(one.coeff(&DegreeVector::point(2)).unwrap(), rat(0, 1));
        assert!(matches!(
            one.component(&DegreeVector::point(4)),
            Err(SeriesError::OutOfWindow(_))
        ));
    }

    #[test]
    fn truncated_products() {
        let t = monoid();
        let w = TruncationWindow::points_up_to(4);
        let x1 = GradedSeries::monomial(w.clone(), DegreeVector::point(1), rat(1, 1));
        let x2 = GradedSeries::monomial(w.clone(), DegreeVector::point(2), rat(1, 1));
        let p = t.mul(&x1, &x2);
        assert_eq!(p, GradedSeries::monomial(w.clone(), DegreeVector::point(3), rat(1, 1)));
        let a = q_series(&[1, 1, 1], 2);
        assert_eq!(t.mul(&a, &a), q_series(&[1, 2, 3], 2));
        assert_eq!(t.mul(&t.one(&w), &a), a);
    }

    #[test]
    fn geometric_inverse() {
        let t = monoid();
        let u = q_series(&[1, -1], 6);
        assert_eq!(t.invert(&u).unwrap(), q_series(&[1, 1, 1, 1, 1, 1, 1], 6));
        let w = TruncationWindow::points_up_to(6);
        assert_eq!(t.invert(&t.one(&w)).unwrap(), t.one(&w));
        assert_eq!(
            t.invert(&q_series(&[0, 1], 3)),
            Err(SeriesError::NonUnitConstantTerm)
        );
    }

    #[test]
    fn exp_log() {
        let t = monoid();
        let w = TruncationWindow::points_up_to(6);
        assert_eq!(t.exp(&t.zero_series(&w)).unwrap(), t.one(&w));
        let a = GradedSeries::monomial(w.clone(), DegreeVector::point(1), rat(3, 7));
        let e = t.exp(&a).unwrap();
        assert_eq!(e.coeff(&DegreeVector::point(2)).unwrap(), rat(9, 98));
        assert_eq!(t.log(&e).unwrap(), a);
        assert!(t.exp(&t.one(&w)).is_err());
        assert!(t.log(&a).is_err());
    }

    #[test]
    fn twisting() {
        let ctx = GradingContext::point_context();
        let t = Torus::commutative(ctx, RatFunL::l());
        let w = TruncationWindow::points_up_to(4);
        assert_eq!(t.twist_chi(&t.one(&w), 1), t.one(&w));
        let x3 = GradedSeries::monomial(w.clone(), DegreeVector::point(3), RatFunL::one());
        assert_eq!(
            t.twist_chi(&x3, 1).coeff(&DegreeVector::point(3)).unwrap(),
            RatFunL::l_pow(3)
        );
        assert_eq!(t.twist_chi(&t.twist_chi(&x3, 1), -1), x3);
    }

    #[test]
    fn ad_exp_trivial_cases() {
        let ctx = GradingContext::new(1, Cone::Delta, vec![0, 1], vec![1], vec![0, 1]).unwrap();
        let t = Torus::new(ctx, rat(2, 1), BilinearForm::new(vec![vec![0, 1], vec![-1, 0]]));
        let mut w = TruncationWindow::single_column(vec![0], 0, 4);
        w.insert(vec![1], 0, 3);
        w.insert(vec![2], 0, 3);
        let v = GradedSeries::monomial(w.clone(), DegreeVector::new(vec![1], 1), rat(5, 1));
        assert_eq!(t.ad_exp(&t.zero_series(&w), &v).unwrap(), v);
        let a = GradedSeries::monomial(w.clone(), DegreeVector::new(vec![1], 0), rat(1, 1));
        let r = t.ad_exp(&a, &v).unwrap();
        assert_ne!(r, v.restrict(&r.window));
        let flat = Torus::commutative(t.grading().clone(), rat(2, 1));
        let r = flat.ad_exp(&a, &v).unwrap();
        assert_eq!(r, v.restrict(&r.window));
    }

    #[test]
    fn window_soundness_on_shrinking_windows() {
        let ctx = GradingContext::new(1, Cone::Delta, vec![0, 1], vec![1], vec![0, 1]).unwrap();
        let t = Torus::commutative(ctx.clone(), rat(1, 1));
        let mk = |u0: i64, u1: i64| {
            let mut w = TruncationWindow::single_column(vec![0], 0, u0);
            w.insert(vec![1], -2, u1);
            w.insert(vec![2], -4, u1);
            let mut terms = Vec::new();
            for g in w.degrees() {
                let c = (g.n * 7 + g.beta[0] * 3) % 5 - 2;
                terms.push((g, vec![rat(c, 1)]));
            }
            GradedSeries::from_terms(w, terms)
        };
        let small = mk(3, 2);
        let big = mk(6, 5);
        let p_small = t.mul(&small, &small);
        let p_big = t.mul(&big.restrict(&small.window), &big.restrict(&small.window));
        assert_eq!(p_small, p_big);
        let p_full = t.mul(&big, &big).restrict(&p_small.window);
        assert_eq!(p_full, p_small);
        let inv_small = t.invert(&small.add(&t.one(&small.window))).unwrap();
        let inv_big = t.invert(&big.add(&t.one(&big.window))).unwrap();
        assert_eq!(inv_big.restrict(&inv_small.window), inv_small);
        assert!(!inv_small.window.is_empty());
    }

    fn arb_series(upper: i64) -> impl Strategy<Value = GradedSeries<ExactRational>> {
        prop::collection::vec(-5i64..=5, (upper + 1) as usize)
            .prop_map(move |v| q_series(&v, upper))
    }

    proptest! {
        #[test]
        fn monoid_is_commutative_and_associative(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            let t = monoid();
            prop_assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
            prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
        }

        #[test]
        fn inverse_roundtrip(mut a in arb_series(6)) {
            let t = monoid();
            a.terms.insert(DegreeVector::point(0), vec![rat(3, 1)]);
            let inv = t.invert(&a).unwrap();
            prop_assert_eq!(t.mul(&a, &inv), t.one(&inv.window));
        }

        #[test]
        fn exp_log_roundtrip(mut a in arb_series(6)) {
            let t = monoid();
            a.terms.remove(&DegreeVector::point(0));
            let e = t.exp(&a).unwrap();
            prop_assert_eq!(t.log(&e).unwrap(), a.restrict(&e.window));
        }
    }
}
