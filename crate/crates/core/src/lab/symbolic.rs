//! Verifiers on `L`-symbolic tables interpolated over the sample primes.

use num_traits::{One, Zero};
use serde_json::json;

use crate::coeff::{interpolate, rat, ExactRational, RatFunL};
use crate::grading::{SlopeInterval, TruncationWindow};
use crate::hall::{epsilon_eta, epsilon_eta_of, n_invariants, HallAlgebra, HallElement, ModelFamily, NTable};
use crate::series::{GradedRing, GradedSeries, SkewElement, Torus};

use super::verifiers::realized_slopes;
use super::{Check, Control, DegreeStatus, LabError, VerificationReport};

fn report(
    name: &str,
    fam: &ModelFamily,
    w: &TruncationWindow,
    checks: Vec<Check>,
    controls: Vec<Control>,
) -> VerificationReport {
    VerificationReport::new(
        name,
        fam.base().fingerprint(),
        fam.samples.all_primes(),
        w.clone(),
        checks,
        controls,
    )
}

fn commutative_target(fam: &ModelFamily) -> Result<HallAlgebra<'_>, LabError> {
    let alg = HallAlgebra::new(fam.base())?;
    if !alg.torus_form().antisymmetrization().is_zero() {
        return Err(LabError::NonCommutativeTarget);
    }
    Ok(alg)
}

/// Per degree: every stacky coefficient `eta(E)/|Aut E|` is regular at `L = 1`.
fn regularity_check(fam: &ModelFamily, relation: &str, w: &TruncationWindow, eta: &HallElement<RatFunL>) -> Result<Check, LabError> {
    let weighted = fam.weighted(eta)?;
    let mut degrees = Vec::new();
    for g in w.degrees() {
        let mut bad = None;
        if let Some(p) = weighted.terms.get(&g) {
            for (x, &c) in p.iter().zip(fam.base().class_ids(&g)?) {
                if !x.is_zero() && x.order_at_one().map_err(crate::hall::HallError::from)? < 0 {
                    bad = Some((fam.base().class(c).label.clone(), x.to_string()));
                    break;
                }
            }
        }
        degrees.push(match bad {
            None => DegreeStatus::pass(g),
            Some((l, x)) => DegreeStatus::fail(
                g,
                json!({"class_label": l, "coefficient": x}),
                json!("order at L=1 >= 0"),
            ),
        });
    }
    Ok(Check {
        relation: relation.to_string(),
        degrees,
    })
}

/// Every coefficient of `eta_mu = (L-1) log 1_SS(mu)` is regular, for each
/// slope realized in the window.
pub fn verify_nopole(fam: &ModelFamily, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(fam.base())?;
    alg.check_window(w)?;
    let mut checks = Vec::new();
    for mu in realized_slopes(&alg, w, &SlopeInterval::all())? {
        let ee = epsilon_eta(fam, &mu, w)?;
        checks.push(regularity_check(fam, &format!("eta_{mu} regular"), w, &ee.eta)?);
    }
    let doubled = epsilon_eta_of(fam, |a| {
        let m = a.model();
        a.element(w, |c| Ok(if m.class(c).degree.is_zero() { rat(1, 1) } else { rat(2, 1) }))
    })?;
    let control = Control::new(
        "table 1 + 2(1_SS - 1)",
        w.degrees().iter().any(|g| g.total() >= 2),
        doubled.witness.map(|x| x.0),
    );
    Ok(report("nopole", fam, w, checks, vec![control]))
}

/// Sum of the N-tables of every slope realized in `interval`.
pub fn n_table(fam: &ModelFamily, interval: &SlopeInterval, w: &TruncationWindow) -> Result<NTable, LabError> {
    let alg = HallAlgebra::new(fam.base())?;
    let mut out = NTable::default();
    for mu in realized_slopes(&alg, w, interval)? {
        let ee = epsilon_eta(fam, &mu, w)?;
        if !ee.regular {
            return Err(crate::hall::HallError::NotRegular(format!("eta_{mu}")).into());
        }
        for (g, x) in n_invariants(fam, &ee.eta)?.0 {
            *out.0.entry(g).or_insert_with(ExactRational::zero) += x;
        }
    }
    out.0.retain(|_, x| !x.is_zero());
    Ok(out)
}

/// `u^-1 y u = (u^-1 u^chi) y`; returns the coefficient of `y`.
fn conjugate_y(alg: &HallAlgebra, u: &HallElement<ExactRational>) -> Result<HallElement<ExactRational>, LabError> {
    let w = &u.window;
    let uinv = alg.invert(u)?;
    let y = SkewElement::y_power(alg, w, 1, 1);
    let c = SkewElement::from_series(&uinv, 1)
        .mul(alg, &y)
        .mul(alg, &SkewElement::from_series(u, 1));
    Ok(c.component(1))
}

/// Per-degree values at every sample prime, fitted in `q` and evaluated at
/// `q = 1`.
fn semiclassical(
    fam: &ModelFamily,
    w: &TruncationWindow,
    per_prime: &[GradedSeries<ExactRational>],
) -> Result<GradedSeries<ExactRational>, LabError> {
    let primes = fam.samples.all_primes();
    let n = fam.samples.primes.len();
    let mut terms = Vec::new();
    for g in w.degrees() {
        let vals: Vec<ExactRational> = per_prime
            .iter()
            .map(|s| s.coeff(&g).map_err(LabError::from))
            .collect::<Result<_, _>>()?;
        let pts: Vec<_> = primes[..n]
            .iter()
            .zip(&vals)
            .map(|(&p, v)| (rat(p as i64, 1), v.clone()))
            .collect();
        let hold = (rat(primes[n] as i64, 1), vals[n].clone());
        let poly = interpolate(&pts, n - 1, hold).map_err(crate::hall::HallError::from)?;
        terms.push((g, vec![poly.eval(&ExactRational::one())]));
    }
    Ok(GradedSeries::from_terms(w.clone(), terms))
}

/// `int(1_SS(I)^-1 * 1_SS(I)^chi) = exp(-sum chi(g) N_g x^g)` over the
/// degrees with slope in `I`.
pub fn verify_grinah(
    fam: &ModelFamily,
    interval: &SlopeInterval,
    w: &TruncationWindow,
) -> Result<VerificationReport, LabError> {
    let alg0 = commutative_target(fam)?;
    alg0.check_window(w)?;
    let mut per_prime = Vec::new();
    for m in fam.models() {
        let alg = HallAlgebra::new(m)?;
        let u = alg.semistable_element(w, interval)?;
        per_prime.push(alg.integrate(&conjugate_y(&alg, &u)?));
    }
    let lhs = semiclassical(fam, w, &per_prime)?;

    let n = n_table(fam, interval, w)?;
    let ctx = fam.base().grading();
    let exponent = GradedSeries::from_terms(
        w.clone(),
        n.0.iter()
            .map(|(g, x)| (g.clone(), vec![-x.clone() * ExactRational::from_integer(ctx.chi(g).into())])),
    );
    let torus = Torus::commutative(ctx.clone(), ExactRational::one());
    let rhs = torus.exp(&exponent)?;
    let checks = vec![Check::series(
        "int(1_SS(I)^-1 * 1_SS(I)^chi) = exp(-sum chi N x)",
        w,
        &lhs,
        &rhs,
    )];
    let expected = torus.exp(&exponent.neg())?;
    let control = Control::new(
        "opposite exponent sign",
        !n.0.is_empty(),
        lhs.restrict(&expected.window).first_difference(&expected.restrict(&lhs.window)),
    );
    Ok(report("grinah", fam, w, checks, vec![control]).with_note(format!("N-table: {}", n.to_json())))
}

/// `lim int(u^-1 * f * u) = lim int(f)` for `u = 1_SS(all)` and `f = H`.
pub fn verify_integration_poisson(fam: &ModelFamily, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg0 = commutative_target(fam)?;
    alg0.check_window(w)?;
    let all = SlopeInterval::all();
    let conj = fam.interpolate_element(None, |alg| {
        let u = alg.semistable_element(w, &all)?;
        let f = alg.hilbert_element(w)?;
        Ok(alg.mul(&alg.mul(&alg.invert(&u)?, &f), &u))
    })?;
    let plain = fam.interpolate_element(None, |alg| alg.hilbert_element(w))?;
    let limit = |f: &HallElement<RatFunL>| -> Result<GradedSeries<ExactRational>, LabError> {
        let i = fam.integrate(f)?;
        Ok(i.try_map(|x| x.semiclassical_limit().map_err(crate::hall::HallError::from))?)
    };
    let checks = vec![Check::series(
        "lim int(u^-1 * H * u) = lim int(H)",
        w,
        &limit(&conj)?,
        &limit(&plain)?,
    )];
    let u = alg0.semistable_element(w, &all)?;
    let y_coeff = conjugate_y(&alg0, &u)?;
    let one = alg0.one(w);
    let control = Control::new(
        "fixed-q conjugation u^-1 y u differs from y",
        w.degrees().iter().any(|g| !g.is_zero() && fam.base().grading().chi(g) != 0),
        y_coeff.first_difference(&one),
    );
    Ok(report("integration-poisson", fam, w, checks, vec![control]))
}
