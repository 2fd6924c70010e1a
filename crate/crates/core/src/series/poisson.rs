use num_traits::{One, Zero};

use crate::coeff::{rat, ExactRational, RatFunL, Scalar};

use super::{GradedRing, GradedSeries, SeriesError, SkewElement};

fn check_regular(s: &GradedSeries<RatFunL>) -> Result<(), SeriesError> {
    for (g, p) in &s.terms {
        for x in p {
            if !x.is_zero() && x.order_at_one()? < 0 {
                return Err(SeriesError::NotRegular(g.to_string()));
            }
        }
    }
    Ok(())
}

fn divide_and_limit(c: &GradedSeries<RatFunL>) -> Result<GradedSeries<ExactRational>, SeriesError> {
    let lm1 = RatFunL::l() - RatFunL::one();
    for (g, p) in &c.terms {
        for x in p {
            if !x.is_zero() && x.order_at_one()? < 1 {
                return Err(SeriesError::CommutatorNotDivisible(g.to_string()));
            }
        }
    }
    c.try_map(|x| {
        x.checked_div(&lm1)
            .and_then(|y| y.semiclassical_limit())
            .map_err(SeriesError::from)
    })
}

/// Semiclassical bracket `{a,b} = (ab - ba)/(L-1) mod (L-1)`.
pub fn poisson_bracket<R: GradedRing<Scalar = RatFunL>>(
    ring: &R,
    a: &GradedSeries<RatFunL>,
    b: &GradedSeries<RatFunL>,
) -> Result<GradedSeries<ExactRational>, SeriesError> {
    check_regular(a)?;
    check_regular(b)?;
    divide_and_limit(&ring.commutator(a, b))
}

/// The same bracket in the skew extension.
pub fn skew_poisson_bracket<R: GradedRing<Scalar = RatFunL>>(
    ring: &R,
    u: &SkewElement<RatFunL>,
    v: &SkewElement<RatFunL>,
) -> Result<SkewElement<ExactRational>, SeriesError> {
    for s in u.comps.values().chain(v.comps.values()) {
        check_regular(s)?;
    }
    let c = u.mul(ring, v).sub(&v.mul(ring, u));
    let mut comps = Vec::new();
    for (k, s) in &c.comps {
        comps.push((*k, divide_and_limit(s)?));
    }
    Ok(SkewElement::from_components(c.window.clone(), c.y_bound, comps))
}

/// `exp({a,-})(b) = sum_j {a,-}^j(b) / j!`, summed until the iterated
/// brackets vanish on the window.
pub fn ady_exp_action<S: Scalar>(
    bracket: &dyn Fn(&GradedSeries<S>, &GradedSeries<S>) -> Result<GradedSeries<S>, SeriesError>,
    a: &GradedSeries<S>,
    b: &GradedSeries<S>,
) -> Result<GradedSeries<S>, SeriesError> {
    let mut term = b.clone();
    let mut acc = b.clone();
    let mut j = 0i64;
    while !term.is_zero() {
        j += 1;
        term = bracket(a, &term)?.scale(&S::from_rational(&rat(1, j)));
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{Cone, DegreeVector, GradingContext, TruncationWindow};
    use crate::series::{BilinearForm, Torus};

    fn ctx() -> GradingContext {
        GradingContext::new(1, Cone::Delta, vec![0, 1], vec![1], vec![0, 1]).unwrap()
    }

    fn window() -> TruncationWindow {
        let mut w = TruncationWindow::single_column(vec![0], 0, 5);
        w.insert(vec![1], 0, 5);
        w.insert(vec![2], 0, 5);
        w
    }

    fn form() -> BilinearForm {
        BilinearForm::new(vec![vec![0, 2], vec![-1, 0]])
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let t = Torus::new(ctx(), RatFunL::l(), form());
        let a = GradedSeries::from_terms(
            window(),
            [
                (DegreeVector::new(vec![1], 1), vec![RatFunL::one()]),
                (DegreeVector::new(vec![0], 2), vec![RatFunL::l()]),
            ],
        );
        assert!(poisson_bracket(&t, &a, &a).unwrap().is_zero());
    }

    #[test]
    fn quantum_torus_monomials() {
        let t = Torus::new(ctx(), RatFunL::l(), form());
        let w = window();
        let d = DegreeVector::new(vec![1], 1);
        let e = DegreeVector::new(vec![0], 2);
        let xd = GradedSeries::monomial(w.clone(), d.clone(), RatFunL::one());
        let xe = GradedSeries::monomial(w.clone(), e.clone(), RatFunL::one());
        let br = poisson_bracket(&t, &xd, &xe).unwrap();
        let f = t.form();
        let expected = f.eval(&d, &e) - f.eval(&e, &d);
        assert_eq!(expected, 6);
        assert_eq!(br.coeff(&d.add(&e)).unwrap(), rat(expected, 1));
    }

    #[test]
    fn skew_variable_bracket() {
        let t = Torus::commutative(ctx(), RatFunL::l());
        let w = window();
        for n in 1..=4 {
            let g = DegreeVector::new(vec![0], n);
            let x = GradedSeries::monomial(w.clone(), g.clone(), RatFunL::one());
            let y = SkewElement::y_power(&t, &w, 1, 2);
            let br = skew_poisson_bracket(&t, &y, &SkewElement::from_series(&x, 2)).unwrap();
            assert_eq!(br.component(1).coeff(&g).unwrap(), rat(n, 1));
            assert!(br.component(0).is_zero());
        }
    }

    #[test]
    fn non_regular_and_non_divisible_inputs() {
        let t = Torus::new(ctx(), RatFunL::l(), form());
        let w = window();
        let pole = RatFunL::one().checked_div(&(RatFunL::l() - RatFunL::one())).unwrap();
        let a = GradedSeries::monomial(w.clone(), DegreeVector::new(vec![1], 0), pole);
        let b = GradedSeries::monomial(w.clone(), DegreeVector::new(vec![0], 1), RatFunL::one());
        assert!(matches!(poisson_bracket(&t, &a, &b), Err(SeriesError::NotRegular(_))));
        // at a fixed q the product is not commutative modulo L-1
        let fixed = Torus::new(ctx(), RatFunL::constant(rat(2, 1)), form());
        let a = GradedSeries::monomial(w.clone(), DegreeVector::new(vec![1], 0), RatFunL::one());
        assert!(matches!(
            poisson_bracket(&fixed, &a, &b),
            Err(SeriesError::CommutatorNotDivisible(_))
        ));
    }
}
