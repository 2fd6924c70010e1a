use std::collections::BTreeMap;

use crate::coeff::Scalar;
use crate::grading::{guaranteed_product_window, TruncationWindow};

use super::{GradedRing, GradedSeries};

/// `sum_k a_k y^k` in the skew extension where `y a = a^chi y`, kept with
/// every `y` on the right and truncated at `y^y_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewElement<S> {
    pub window: TruncationWindow,
    pub y_bound: u32,
    pub comps: BTreeMap<u32, GradedSeries<S>>,
}

impl<S: Scalar> SkewElement<S> {
    pub fn from_components(
        window: TruncationWindow,
        y_bound: u32,
        comps: impl IntoIterator<Item = (u32, GradedSeries<S>)>,
    ) -> Self {
        let comps = comps
            .into_iter()
            .filter(|(k, _)| *k <= y_bound)
            .map(|(k, s)| (k, s.restrict(&window)))
            .filter(|(_, s)| !s.is_zero())
            .collect();
        SkewElement {
            window,
            y_bound,
            comps,
        }
    }

    /// `a y^0`.
    pub fn from_series(a: &GradedSeries<S>, y_bound: u32) -> Self {
        Self::from_components(a.window.clone(), y_bound, [(0, a.clone())])
    }

    /// The monomial `y^k`.
    pub fn y_power<R: GradedRing<Scalar = S>>(
        ring: &R,
        window: &TruncationWindow,
        k: u32,
        y_bound: u32,
    ) -> Self {
        Self::from_components(window.clone(), y_bound, [(k, ring.one(window))])
    }

    pub fn component(&self, k: u32) -> GradedSeries<S> {
        self.comps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| GradedSeries::zero(self.window.clone()))
    }

    pub fn mul<R: GradedRing<Scalar = S>>(&self, ring: &R, o: &Self) -> Self {
        let w = guaranteed_product_window(ring.grading(), &self.window, &o.window);
        let yb = self.y_bound.min(o.y_bound);
        let mut out: BTreeMap<u32, GradedSeries<S>> = BTreeMap::new();
        for (&k, a) in &self.comps {
            for (&l, b) in &o.comps {
                if k + l > yb {
                    continue;
                }
                let term = ring.mul(a, &ring.twist_chi(b, k as i64)).restrict(&w);
                let slot = out
                    .entry(k + l)
                    .or_insert_with(|| GradedSeries::zero(w.clone()));
                *slot = slot.add(&term);
            }
        }
        Self::from_components(w, yb, out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let w = self.window.intersect(&o.window);
        let yb = self.y_bound.min(o.y_bound);
        let keys: std::collections::BTreeSet<u32> =
            self.comps.keys().chain(o.comps.keys()).copied().collect();
        let comps = keys
            .into_iter()
            .map(|k| (k, self.component(k).add(&o.component(k))))
            .collect::<Vec<_>>();
        Self::from_components(w, yb, comps)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_components(
            self.window.clone(),
            self.y_bound,
            self.comps.iter().map(|(k, s)| (*k, s.neg())),
        )
    }

    pub fn restrict(&self, w: &TruncationWindow) -> Self {
        Self::from_components(
            self.window.intersect(w),
            self.y_bound,
            self.comps.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::RatFunL;
    use crate::grading::{DegreeVector, GradingContext};
    use crate::series::Torus;
    use num_traits::One;

    #[test]
    fn commuting_y_past_a() {
        let t = Torus::commutative(GradingContext::point_context(), RatFunL::l());
        let w = TruncationWindow::points_up_to(4);
        let a = GradedSeries::from_terms(
            w.clone(),
            [
                (DegreeVector::point(1), vec![RatFunL::one()]),
                (DegreeVector::point(2), vec![RatFunL::l()]),
            ],
        );
        let y = SkewElement::y_power(&t, &w, 1, 3);
        let ya = y.mul(&t, &SkewElement::from_series(&a, 3));
        let expected = SkewElement::from_components(w.clone(), 3, [(1, t.twist_chi(&a, 1))]);
        assert_eq!(ya, expected);
        let yy = y.mul(&t, &y);
        assert_eq!(yy, SkewElement::y_power(&t, &w, 2, 3));
    }

    #[test]
    fn conjugating_y() {
        let t = Torus::commutative(GradingContext::point_context(), RatFunL::l());
        let w = TruncationWindow::points_up_to(4);
        let mut terms = vec![];
        for n in 0..=4 {
            terms.push((DegreeVector::point(n), vec![RatFunL::l_pow(n) + RatFunL::one()]));
        }
        let u = GradedSeries::from_terms(w.clone(), terms);
        let uinv = t.invert(&u).unwrap();
        let y = SkewElement::y_power(&t, &w, 1, 2);
        let lhs = SkewElement::from_series(&uinv, 2)
            .mul(&t, &y)
            .mul(&t, &SkewElement::from_series(&u, 2));
        let rhs = SkewElement::from_series(&t.mul(&uinv, &t.twist_chi(&u, 1)), 2).mul(&t, &y);
        assert_eq!(lhs.restrict(&rhs.window), rhs.restrict(&lhs.window));
    }
}
