//! `L`-symbolic Hall tables obtained by interpolating over sample primes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::coeff::{interpolate, CountSamples, ExactRational, PolyL, RatFunL};
use crate::grading::{DegreeVector, Slope, SlopeInterval, TruncationWindow};
use crate::model::{BuildOptions, ClassId, Model, ModelSpec};
use crate::series::{GradedRing, GradedSeries, Torus};

use super::{element_json, HallAlgebra, HallElement, HallError};

/// One model per sample prime, holdout last.
#[derive(Debug, Clone)]
pub struct ModelFamily {
    pub samples: CountSamples,
    models: Vec<Model>,
}

/// An interpolated Hall number `F^E_{A,B}(L)`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StructureConstant {
    pub e: String,
    pub a: String,
    pub b: String,
    pub poly: PolyL,
}

impl ModelFamily {
    pub fn build(spec: &ModelSpec, samples: &CountSamples, opts: &BuildOptions) -> Result<Self, HallError> {
        // largest prime first, so size limits fail before any enumeration
        let primes = samples.all_primes();
        let mut order: Vec<usize> = (0..primes.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(primes[i]));
        let mut built: Vec<Option<Model>> = vec![None; primes.len()];
        for i in order {
            built[i] = Some(Model::build(&spec.with_q(primes[i]), opts)?);
        }
        let models: Vec<Model> = built.into_iter().flatten().collect();
        let fam = ModelFamily {
            samples: samples.clone(),
            models,
        };
        fam.check_uniform()?;
        Ok(fam)
    }

    fn check_uniform(&self) -> Result<(), HallError> {
        let base = self.base();
        for m in &self.models[1..] {
            if m.degrees() != base.degrees() {
                return Err(HallError::NonUniformClasses("degree sets differ".into()));
            }
            for g in base.degrees() {
                let a: Vec<String> = base.iso_classes(&g)?.into_iter().map(|c| c.label).collect();
                let b: Vec<String> = m.iso_classes(&g)?.into_iter().map(|c| c.label).collect();
                if a != b {
                    return Err(HallError::NonUniformClasses(format!(
                        "degree {g} at q={} vs q={}",
                        base.q(),
                        m.q()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The model at the first sample prime; class ids are shared by all.
    pub fn base(&self) -> &Model {
        &self.models[0]
    }

    pub fn models(&self) -> &[Model] {
        &self.models
    }

    /// Default degree bound: total dimension of the degree.
    pub fn default_bound(g: &DegreeVector) -> usize {
        (g.beta.iter().sum::<i64>() + g.n).max(0) as usize
    }

    fn fit(&self, values: &[ExactRational], bound: usize) -> Result<PolyL, HallError> {
        if values.iter().all(|v| v.is_zero()) {
            return Ok(PolyL::zero());
        }
        let n = self.samples.primes.len();
        let pts: Vec<_> = self
            .samples
            .primes
            .iter()
            .zip(values)
            .map(|(&p, v)| (ExactRational::from_integer(p.into()), v.clone()))
            .collect();
        let hold = (
            ExactRational::from_integer(self.samples.holdout.into()),
            values[n].clone(),
        );
        Ok(interpolate(&pts, bound, hold)?)
    }

    /// Runs `build` at every prime and interpolates each class value.
    pub fn interpolate_element(
        &self,
        degree_bound: Option<usize>,
        build: impl Fn(&HallAlgebra) -> Result<HallElement<ExactRational>, HallError>,
    ) -> Result<HallElement<RatFunL>, HallError> {
        let mut tables = Vec::with_capacity(self.models.len());
        for m in &self.models {
            let alg = HallAlgebra::new(m)?;
            tables.push((build(&alg)?, alg));
        }
        let w = tables
            .iter()
            .fold(tables[0].0.window.clone(), |w, (t, _)| w.intersect(&t.window));
        let mut terms = Vec::new();
        for g in w.degrees() {
            let len = self.base().class_ids(&g)?.len();
            let bound = degree_bound.unwrap_or_else(|| Self::default_bound(&g));
            let mut piece = Vec::with_capacity(len);
            for i in 0..len {
                let values: Vec<ExactRational> = tables
                    .iter()
                    .map(|(t, _)| {
                        t.terms
                            .get(&g)
                            .map_or_else(ExactRational::zero, |p| p[i].clone())
                    })
                    .collect();
                piece.push(RatFunL::from_poly(self.fit(&values, bound)?));
            }
            terms.push((g, piece));
        }
        Ok(GradedSeries::from_terms(w, terms))
    }

    /// Every Hall number `F^E_{A,B}` with `deg E` in `w`, interpolated.
    pub fn structure_constants(
        &self,
        w: &TruncationWindow,
        degree_bound: Option<usize>,
    ) -> Result<Vec<StructureConstant>, HallError> {
        let base = self.base();
        let mut out = Vec::new();
        for g in w.degrees() {
            let bound = degree_bound.unwrap_or_else(|| Self::default_bound(&g));
            for &e in base.class_ids(&g)? {
                for (ga, gb) in base.grading().decompositions(&g).map_err(crate::model::ModelError::from)? {
                    for &a in base.class_ids(&ga)? {
                        for &b in base.class_ids(&gb)? {
                            let values = self
                                .models
                                .iter()
                                .map(|m| m.filtration_count(e, a, b).map(|c| ExactRational::from_integer(c.into())))
                                .collect::<Result<Vec<_>, _>>()?;
                            out.push(StructureConstant {
                                e: base.class(e).label.clone(),
                                a: base.class(a).label.clone(),
                                b: base.class(b).label.clone(),
                                poly: self.fit(&values, bound)?,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `|Aut E|` in `L`.
    pub fn aut_polynomial(&self, c: ClassId) -> Result<PolyL, HallError> {
        self.base().aut_polynomial(c).ok_or_else(|| {
            HallError::NonUniformClasses("automorphism counts have no closed form in this model".into())
        })
    }

    /// Stacky coefficients `f(E) / |Aut E|`.
    pub fn weighted(&self, f: &HallElement<RatFunL>) -> Result<HallElement<RatFunL>, HallError> {
        let mut terms = Vec::new();
        for (g, piece) in &f.terms {
            let ids = self.base().class_ids(g)?;
            let mut out = Vec::with_capacity(piece.len());
            for (x, &c) in piece.iter().zip(ids) {
                let a = RatFunL::from_poly(self.aut_polynomial(c)?);
                out.push(x.checked_div(&a)?);
            }
            terms.push((g.clone(), out));
        }
        Ok(GradedSeries::from_terms(f.window.clone(), terms))
    }

    /// Symbolic integral `sum_E f(E)/|Aut E| x^deg E`.
    pub fn integrate(&self, f: &HallElement<RatFunL>) -> Result<GradedSeries<RatFunL>, HallError> {
        let w = self.weighted(f)?;
        let terms = w.terms.iter().map(|(g, p)| {
            let s = p.iter().fold(RatFunL::zero(), |acc, x| acc + x.clone());
            (g.clone(), vec![s])
        });
        Ok(GradedSeries::from_terms(f.window.clone(), terms))
    }

    /// The integration torus over `RatFunL`, with the calibrated twist.
    pub fn torus(&self) -> Result<Torus<RatFunL>, HallError> {
        Ok(HallAlgebra::new(self.base())?.torus().with_scalar(RatFunL::l()))
    }

    pub fn to_json(&self, f: &HallElement<RatFunL>) -> Value {
        element_json(self.base(), f)
    }
}

/// `epsilon = log 1_SS(mu)` and `eta = (L-1) epsilon`.
#[derive(Debug, Clone)]
pub struct EpsilonEta {
    pub epsilon: HallElement<RatFunL>,
    pub eta: HallElement<RatFunL>,
    pub regular: bool,
    /// First class whose stacky `eta` coefficient has a pole at `L = 1`.
    pub witness: Option<(DegreeVector, String, i64)>,
}

pub fn epsilon_eta(family: &ModelFamily, mu: &Slope, w: &TruncationWindow) -> Result<EpsilonEta, HallError> {
    let interval = SlopeInterval::point(mu.clone());
    epsilon_eta_of(family, |alg| alg.semistable_element(w, &interval))
}

/// As [`epsilon_eta`] for an arbitrary table in place of `1_SS(mu)`.
pub fn epsilon_eta_of(
    family: &ModelFamily,
    table: impl Fn(&HallAlgebra) -> Result<HallElement<ExactRational>, HallError>,
) -> Result<EpsilonEta, HallError> {
    let epsilon = family.interpolate_element(None, |alg| Ok(alg.log(&table(alg)?)?))?;
    let lm1 = RatFunL::l() - RatFunL::one();
    let eta = epsilon.scale(&lm1);
    let weighted = family.weighted(&eta)?;
    let mut witness = None;
    'outer: for (g, piece) in &weighted.terms {
        let ids = family.base().class_ids(g)?;
        for (x, &c) in piece.iter().zip(ids) {
            if x.is_zero() {
                continue;
            }
            let o = x.order_at_one()?;
            if o < 0 {
                witness = Some((g.clone(), family.base().class(c).label.clone(), o));
                break 'outer;
            }
        }
    }
    Ok(EpsilonEta {
        epsilon,
        eta,
        regular: witness.is_none(),
        witness,
    })
}

/// `N_gamma` with `int(eta) = -sum N_gamma x^gamma` at `L = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NTable(pub BTreeMap<DegreeVector, ExactRational>);

impl NTable {
    pub fn get(&self, g: &DegreeVector) -> ExactRational {
        self.0.get(g).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn scale(&self, c: &ExactRational) -> NTable {
        NTable(
            self.0
                .iter()
                .map(|(g, x)| (g.clone(), x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .0
            .iter()
            .map(|(g, x)| json!({"degree": g, "value": crate::coeff::format_rational(x)}))
            .collect();
        json!(rows)
    }
}

pub fn n_invariants(family: &ModelFamily, eta: &HallElement<RatFunL>) -> Result<NTable, HallError> {
    let integral = family.integrate(eta)?;
    let mut out = BTreeMap::new();
    for (g, p) in &integral.terms {
        let lim = p[0]
            .semiclassical_limit()
            .map_err(|_| HallError::NotRegular(g.to_string()))?;
        if !lim.is_zero() {
            out.insert(g.clone(), -lim);
        }
    }
    Ok(NTable(out))
}
