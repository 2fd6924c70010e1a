//! Verifiers working at the model's fixed prime.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::coeff::ExactRational;
use crate::grading::{DegreeVector, Slope, SlopeInterval, TruncationWindow};
use crate::hall::{seeded_rng, HallAlgebra, HallElement};
use crate::model::{ClassId, Model};
use crate::series::{limit, GradedRing, StabilizationCertificate};

use super::{Check, Control, DegreeStatus, LabError, VerificationReport};

type Elt = HallElement<ExactRational>;

fn report(
    name: &str,
    model: &Model,
    w: &TruncationWindow,
    checks: Vec<Check>,
    controls: Vec<Control>,
) -> VerificationReport {
    VerificationReport::new(name, model.fingerprint(), vec![model.q()], w.clone(), checks, controls)
}

fn first_difference(a: &Elt, b: &Elt) -> Option<DegreeVector> {
    let w = a.window.intersect(&b.window);
    a.restrict(&w).first_difference(&b.restrict(&w))
}

/// Whether every class in the support of `a` commutes with every class in
/// the support of `b` inside `w`.
fn supports_commute(alg: &HallAlgebra, w: &TruncationWindow, a: &Elt, b: &Elt) -> bool {
    let m = alg.model();
    let support = |f: &Elt| -> Vec<ClassId> {
        f.terms
            .iter()
            .filter(|(g, _)| !g.is_zero())
            .flat_map(|(g, p)| {
                let ids = m.class_ids(g).unwrap_or(&[]);
                p.iter()
                    .zip(ids)
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(_, &c)| c)
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let (sa, sb) = (support(a), support(b));
    for &x in &sa {
        for &y in &sb {
            if !w.contains(&m.class(x).degree.add(&m.class(y).degree)) {
                continue;
            }
            let (dx, dy) = (alg.delta(w, x), alg.delta(w, y));
            if alg.mul(&dx, &dy) != alg.mul(&dy, &dx) {
                return false;
            }
        }
    }
    true
}

/// `1 = 1_P * 1_Q`, and `O = O_P * O_Q` when a framing is declared.
pub fn verify_torsion_pair(model: &Model, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let p = alg.char_element(w, |c| alg.in_p(c))?;
    let q = alg.char_element(w, |c| alg.in_q(c))?;
    let all = alg.char_element(w, |_| Ok(true))?;
    let mut checks = vec![Check::hall("1 = 1_P * 1_Q", model, w, &all, &alg.mul(&p, &q))];
    if model.has_framing() {
        let o = alg.framed_element(w, |_| Ok(true))?;
        let op = alg.framed_element(w, |c| alg.in_p(c))?;
        let oq = alg.framed_element(w, |c| alg.in_q(c))?;
        checks.push(Check::hall("O = O_P * O_Q", model, w, &o, &alg.mul(&op, &oq)));
    }
    let bad_p = alg.char_element(w, |c| Ok(alg.in_p(c)? && model.class(c).degree.total() <= 1))?;
    let control = Control::new(
        "P predicate truncated to total dimension <= 1",
        bad_p != p,
        first_difference(&all, &alg.mul(&bad_p, &q)),
    );
    let mut r = report("torsion-pair", model, w, checks, vec![control]);
    if !model.has_framing() {
        r = r.with_note("no framing object: O = O_P * O_Q not checked");
    }
    Ok(r)
}

/// `O = H * 1`.
pub fn verify_hilbert(model: &Model, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let o = alg.framed_element(w, |_| Ok(true))?;
    let h = alg.hilbert_element(w)?;
    let all = alg.char_element(w, |_| Ok(true))?;
    let checks = vec![Check::hall("O = H * 1", model, w, &o, &alg.mul(&h, &all))];
    Ok(report("hilbert", model, w, checks, vec![]))
}

/// `O_Q = H# * 1_Q`.
pub fn verify_stable_pair(model: &Model, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let oq = alg.framed_element(w, |c| alg.in_q(c))?;
    let hs = alg.pt_element(w)?;
    let q = alg.char_element(w, |c| alg.in_q(c))?;
    let checks = vec![Check::hall("O_Q = H# * 1_Q", model, w, &oq, &alg.mul(&hs, &q))];
    let control = Control::new(
        "swapped order 1_Q * H#",
        !supports_commute(&alg, w, &hs, &q),
        first_difference(&oq, &alg.mul(&q, &hs)),
    );
    Ok(report("stable-pair", model, w, checks, vec![control]))
}

/// Slopes in `interval` of nonzero semistable classes in `w`, descending.
pub fn realized_slopes(
    alg: &HallAlgebra,
    w: &TruncationWindow,
    interval: &SlopeInterval,
) -> Result<Vec<Slope>, LabError> {
    let m = alg.model();
    let mut out = BTreeSet::new();
    for g in w.degrees() {
        if g.is_zero() {
            continue;
        }
        for &c in m.class_ids(&g)? {
            if m.is_semistable(c)? {
                let mu = m.slope(c)?;
                if interval.contains(&mu) {
                    out.insert(mu);
                }
            }
        }
    }
    Ok(out.into_iter().rev().collect())
}

/// For each degree `g`, the number of factors after which the ordered
/// partial products no longer change in degree `g`: every slope of a
/// semistable class of degree `<= g` has been multiplied in.
fn hn_certificate(
    alg: &HallAlgebra,
    w: &TruncationWindow,
    slopes: &[Slope],
) -> Result<StabilizationCertificate, LabError> {
    let m = alg.model();
    let mut cert = StabilizationCertificate::new();
    let degrees = w.degrees();
    for g in &degrees {
        let mut idx = 0;
        for h in &degrees {
            let below = !h.is_zero()
                && h.n <= g.n
                && h.beta.iter().zip(&g.beta).all(|(a, b)| a <= b);
            if !below {
                continue;
            }
            for &c in m.class_ids(h)? {
                if m.is_semistable(c)? {
                    if let Some(k) = slopes.iter().position(|s| *s == m.slope(c).unwrap()) {
                        idx = idx.max(k + 1);
                    }
                }
            }
        }
        cert.insert(g.clone(), idx);
    }
    Ok(cert)
}

fn ordered_products(alg: &HallAlgebra, w: &TruncationWindow, slopes: &[Slope]) -> Result<Vec<Elt>, LabError> {
    let mut seq = vec![alg.one(w)];
    for mu in slopes {
        let f = alg.semistable_element(w, &SlopeInterval::point(mu.clone()))?;
        let next = alg.mul(seq.last().unwrap(), &f);
        seq.push(next);
    }
    Ok(seq)
}

/// `1_SS(I) = prod_{mu in I} 1_SS(mu)` in descending slope order, the
/// product taken as a per-degree stabilized limit.
pub fn verify_hn(
    model: &Model,
    interval: &SlopeInterval,
    w: &TruncationWindow,
) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let slopes = realized_slopes(&alg, w, interval)?;
    let lhs = alg.semistable_element(w, interval)?;
    let cert = hn_certificate(&alg, w, &slopes)?;
    let rhs = limit(ordered_products(&alg, w, &slopes)?, w, &cert)?;
    let checks = vec![Check::hall("1_SS(I) = prod_desc 1_SS(mu)", model, w, &lhs, &rhs)];
    let ascending: Vec<Slope> = slopes.iter().rev().cloned().collect();
    let asc = ordered_products(&alg, w, &ascending)?;
    let control = Control::new(
        "ascending slope order",
        slopes.len() >= 2,
        first_difference(&lhs, asc.last().unwrap()),
    );
    let listed: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
    Ok(report("hn", model, w, checks, vec![control])
        .with_note(format!("realized slopes: [{}]", listed.join(", "))))
}

/// `O_P = H_0 * 1_P` and `H * 1_P = H_0 * 1_P * H#`.
pub fn verify_dtpt(model: &Model, w: &TruncationWindow) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let op = alg.framed_element(w, |c| alg.in_p(c))?;
    let h = alg.hilbert_element(w)?;
    let h0 = alg.h_zero(w)?;
    let hs = alg.pt_element(w)?;
    let p = alg.char_element(w, |c| alg.in_p(c))?;
    let h0p = alg.mul(&h0, &p);
    let lhs = alg.mul(&h, &p);
    let checks = vec![
        Check::hall("O_P = H_0 * 1_P", model, w, &op, &h0p),
        Check::hall("H * 1_P = H_0 * 1_P * H#", model, w, &lhs, &alg.mul(&h0p, &hs)),
    ];
    let control = Control::new(
        "reversed order H# * 1_P * H_0",
        !supports_commute(&alg, w, &alg.mul(&h0, &p), &hs),
        first_difference(&lhs, &alg.mul(&alg.mul(&hs, &p), &h0)),
    );
    Ok(report("dtpt", model, w, checks, vec![control]))
}

/// Filtration contravariance `F^E_{A,B} = F^{DE}_{DB,DA}`, the
/// anti-homomorphism `D(a*b) = D(b)*D(a)`, and `D(D(E)) = E`.
pub fn verify_duality(model: &Model, w: &TruncationWindow, seed: u64) -> Result<VerificationReport, LabError> {
    let alg = HallAlgebra::new(model)?;
    alg.check_window(w)?;
    let mut contra = Vec::new();
    let mut invol = Vec::new();
    for g in w.degrees() {
        let dg = model.dual_degree(&g)?;
        if !w.contains(&dg) {
            return Err(LabError::Hall(crate::hall::HallError::WindowOutsideModel(format!(
                "dual of {g} is outside the window"
            ))));
        }
        let mut bad = None;
        let mut bad_invol = None;
        for &e in model.class_ids(&g)? {
            let de = model.dual(e)?;
            if model.dual(de)? != e {
                bad_invol = Some((model.class(e).label.clone(), model.class(model.dual(de)?).label.clone()));
            }
            for &(a, b, n) in model.filtrations(e) {
                let m = model.filtration_count(de, model.dual(b)?, model.dual(a)?)?;
                if m != n && bad.is_none() {
                    bad = Some((model.class(e).label.clone(), n, m));
                }
            }
            let total: u64 = model.filtrations(e).iter().map(|x| x.2).sum();
            let dual_total: u64 = model.filtrations(de).iter().map(|x| x.2).sum();
            if total != dual_total && bad.is_none() {
                bad = Some((model.class(e).label.clone(), total, dual_total));
            }
        }
        contra.push(match bad {
            None => DegreeStatus::pass(g.clone()),
            Some((l, n, m)) => DegreeStatus::fail(
                g.clone(),
                serde_json::json!({"class_label": l, "count": n}),
                serde_json::json!({"class_label": l, "dual_count": m}),
            ),
        });
        invol.push(match bad_invol {
            None => DegreeStatus::pass(g.clone()),
            Some((l, r)) => DegreeStatus::fail(g.clone(), serde_json::json!(l), serde_json::json!(r)),
        });
    }
    let mut checks = vec![
        Check {
            relation: "F^E_{A,B} = F^{DE}_{DB,DA}".into(),
            degrees: contra,
        },
        Check {
            relation: "D(D(E)) = E".into(),
            degrees: invol,
        },
    ];
    let mut rng = seeded_rng(seed);
    for i in 0..5 {
        let a = alg.random_element(w, &mut rng);
        let b = alg.random_element(w, &mut rng);
        let lhs = alg.dual_pushforward(&alg.mul(&a, &b))?;
        let rhs = alg.mul(&alg.dual_pushforward(&b)?, &alg.dual_pushforward(&a)?);
        checks.push(Check::hall(&format!("D(a*b) = D(b)*D(a), pair {i}"), model, w, &lhs, &rhs));
    }
    Ok(report("duality", model, w, checks, vec![]))
}
