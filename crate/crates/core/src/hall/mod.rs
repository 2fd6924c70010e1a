//! Hall algebras of finite models.
//!
//! A Hall element is a [`GradedSeries`] whose piece in degree `g` lists one
//! value per isomorphism class of degree `g`, in the model's canonical
//! order. Values are counting functions: `f(E)` is the value on the class
//! `E`, and the product is
//! `(f * g)(E) = sum_{U <= E} f(U) g(E/U)` (subobject first).

mod symbolic;

pub use symbolic::{epsilon_eta, epsilon_eta_of, n_invariants, EpsilonEta, ModelFamily, NTable, StructureConstant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coeff::{CoeffError, ExactRational, Scalar};
use crate::grading::{DegreeVector, GradingContext, SlopeInterval, TruncationWindow};
use crate::model::{ClassId, Model, ModelError};
use crate::series::{BilinearForm, GradedRing, GradedSeries, SeriesError, Torus};

pub type HallElement<S> = GradedSeries<S>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("elements come from different models")]
    ModelMismatch,
    #[error("window degree {0} is outside the model")]
    WindowOutsideModel(String),
    #[error("class labels differ between sample primes: {0}")]
    NonUniformClasses(String),
    #[error("twist calibration found {0} passing conventions, expected exactly one")]
    TwistCalibration(usize),
    #[error("element is not regular: {0}")]
    NotRegular(String),
}

/// Sign and side of the quantum-torus twist `x^d x^e = L^{s(d,e)} x^{d+e}`
/// relative to the Euler form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistConvention {
    /// `s = <d,e>`
    Forward,
    /// `s = -<d,e>`
    NegForward,
    /// `s = <e,d>`
    Backward,
    /// `s = -<e,d>`
    NegBackward,
}

impl TwistConvention {
    pub const ALL: [TwistConvention; 4] = [
        TwistConvention::Forward,
        TwistConvention::NegForward,
        TwistConvention::Backward,
        TwistConvention::NegBackward,
    ];

    fn form(self, euler: &BilinearForm) -> BilinearForm {
        match self {
            TwistConvention::Forward => euler.clone(),
            TwistConvention::NegForward => euler.negate(),
            TwistConvention::Backward => euler.transpose(),
            TwistConvention::NegBackward => euler.transpose().negate(),
        }
    }
}

/// Euler form of the model as a matrix on `(beta, n)` coordinates.
pub fn euler_matrix(model: &Model) -> BilinearForm {
    let r = model.grading().rank;
    let mut m = vec![vec![0i64; r + 1]; r + 1];
    if model.is_jordan() {
        m[0][0] = model.euler_form(&DegreeVector::point(1), &DegreeVector::point(1));
    } else {
        for (i, row) in m.iter_mut().enumerate().take(r) {
            for (j, x) in row.iter_mut().enumerate().take(r) {
                let mut d = vec![0; r];
                let mut e = vec![0; r];
                d[i] = 1;
                e[j] = 1;
                *x = model.euler_form(&DegreeVector::dim(&d), &DegreeVector::dim(&e));
            }
        }
    }
    BilinearForm::new(m)
}

/// The Hall algebra of a model at its fixed prime.
#[derive(Debug, Clone)]
pub struct HallAlgebra<'m> {
    model: &'m Model,
    local: Vec<usize>,
    lefschetz: ExactRational,
    twist: TwistConvention,
    torus_form: BilinearForm,
}

impl<'m> HallAlgebra<'m> {
    /// Builds the algebra and pins the integration twist.
    pub fn new(model: &'m Model) -> Result<Self, HallError> {
        let mut alg = HallAlgebra::uncalibrated(model);
        let euler = euler_matrix(model);
        let mut candidates: Vec<(TwistConvention, BilinearForm)> = Vec::new();
        for c in TwistConvention::ALL {
            let f = c.form(&euler);
            if !candidates.iter().any(|(_, g)| *g == f) {
                candidates.push((c, f));
            }
        }
        let passing: Vec<_> = candidates
            .into_iter()
            .filter(|(_, form)| alg.homomorphism_battery(form))
            .collect();
        if passing.len() != 1 {
            return Err(HallError::TwistCalibration(passing.len()));
        }
        alg.twist = passing[0].0;
        alg.torus_form = passing[0].1.clone();
        Ok(alg)
    }

    fn uncalibrated(model: &'m Model) -> Self {
        let mut local = vec![0; model.num_classes()];
        for g in model.degrees() {
            for (i, &c) in model.class_ids(&g).unwrap().iter().enumerate() {
                local[c] = i;
            }
        }
        let r = model.grading().rank;
        HallAlgebra {
            model,
            local,
            lefschetz: ExactRational::from_integer(model.q().into()),
            twist: TwistConvention::Forward,
            torus_form: BilinearForm::zero(r + 1),
        }
    }

    /// `int(d_A * d_B) = int(d_A) int(d_B)` for one class per degree pair.
    fn homomorphism_battery(&self, form: &BilinearForm) -> bool {
        let torus = Torus::new(self.model.grading().clone(), self.lefschetz.clone(), form.clone());
        let w = self.model_window();
        let degrees = self.model.degrees();
        for a in &degrees {
            for b in &degrees {
                if !self.model.contains_degree(&a.add(b)) {
                    continue;
                }
                let ca = self.model.class_ids(a).unwrap()[0];
                let cb = self.model.class_ids(b).unwrap()[0];
                let fa = self.delta(&w, ca);
                let fb = self.delta(&w, cb);
                let lhs = self.integrate(&self.mul(&fa, &fb));
                let rhs = torus.mul(&self.integrate(&fa), &self.integrate(&fb));
                if lhs.restrict(&rhs.window) != rhs.restrict(&lhs.window) {
                    return false;
                }
            }
        }
        true
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn twist(&self) -> TwistConvention {
        self.twist
    }

    /// The integration target: commutative when the Euler form vanishes.
    pub fn torus(&self) -> Torus<ExactRational> {
        Torus::new(
            self.model.grading().clone(),
            self.lefschetz.clone(),
            self.torus_form.clone(),
        )
    }

    pub fn torus_form(&self) -> &BilinearForm {
        &self.torus_form
    }

    /// Every degree of the model.
    pub fn model_window(&self) -> TruncationWindow {
        model_window(self.model)
    }

    pub fn check_window(&self, w: &TruncationWindow) -> Result<(), HallError> {
        for g in w.degrees() {
            if !self.model.contains_degree(&g) {
                return Err(HallError::WindowOutsideModel(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn local_index(&self, c: ClassId) -> usize {
        self.local[c]
    }

    /// Value of `f` on class `c`.
    pub fn value<S: Scalar>(&self, f: &HallElement<S>, c: ClassId) -> S {
        f.terms
            .get(&self.model.class(c).degree)
            .map_or_else(S::zero, |p| p[self.local[c]].clone())
    }

    /// The element with values `value(c)` on the classes of `w`.
    pub fn element<S: Scalar>(
        &self,
        w: &TruncationWindow,
        value: impl Fn(ClassId) -> Result<S, HallError>,
    ) -> Result<HallElement<S>, HallError> {
        self.check_window(w)?;
        let mut terms = Vec::new();
        for g in w.degrees() {
            let ids = self.model.class_ids(&g)?;
            let mut piece = Vec::with_capacity(ids.len());
            for &c in ids {
                piece.push(value(c)?);
            }
            terms.push((g, piece));
        }
        Ok(GradedSeries::from_terms(w.clone(), terms))
    }

    /// `delta_c`, the indicator of one class.
    pub fn delta(&self, w: &TruncationWindow, c: ClassId) -> HallElement<ExactRational> {
        self.element(w, |x| Ok(if x == c { ExactRational::one() } else { ExactRational::zero() }))
            .expect("window checked by caller")
    }

    pub fn convolve(
        &self,
        f: &HallElement<ExactRational>,
        g: &HallElement<ExactRational>,
    ) -> HallElement<ExactRational> {
        self.mul(f, g)
    }

    /// `1_S`.
    pub fn char_element(
        &self,
        w: &TruncationWindow,
        pred: impl Fn(ClassId) -> Result<bool, HallError>,
    ) -> Result<HallElement<ExactRational>, HallError> {
        self.element(w, |c| Ok(ExactRational::from_integer(u8::from(pred(c)?).into())))
    }

    /// `1_SS(I)`: nonzero objects whose HN slopes all lie in `I`, plus the
    /// zero object.
    pub fn semistable_element(
        &self,
        w: &TruncationWindow,
        interval: &SlopeInterval,
    ) -> Result<HallElement<ExactRational>, HallError> {
        self.char_element(w, |c| self.in_interval(c, interval))
    }

    pub fn in_interval(&self, c: ClassId, interval: &SlopeInterval) -> Result<bool, HallError> {
        if self.model.class(c).degree.is_zero() {
            return Ok(true);
        }
        Ok(self
            .model
            .hn_filtration(c)?
            .iter()
            .all(|(mu, _)| interval.contains(mu)))
    }

    /// `O_S(E) = |Hom(P, E)|` on `S`.
    pub fn framed_element(
        &self,
        w: &TruncationWindow,
        pred: impl Fn(ClassId) -> Result<bool, HallError>,
    ) -> Result<HallElement<ExactRational>, HallError> {
        self.element(w, |c| {
            Ok(if pred(c)? {
                big(self.model.framed_count(c)?)
            } else {
                ExactRational::zero()
            })
        })
    }

    /// `H(E) = #{P ->> E}`.
    pub fn hilbert_element(&self, w: &TruncationWindow) -> Result<HallElement<ExactRational>, HallError> {
        self.element(w, |c| Ok(big(self.model.epi_count(c)?)))
    }

    /// `H#(E)`: stable pairs.
    pub fn pt_element(&self, w: &TruncationWindow) -> Result<HallElement<ExactRational>, HallError> {
        self.element(w, |c| Ok(big(self.model.stable_pair_count(c)?)))
    }

    /// `H_0`: the Hilbert element restricted to `P`.
    pub fn h_zero(&self, w: &TruncationWindow) -> Result<HallElement<ExactRational>, HallError> {
        self.element(w, |c| {
            Ok(if self.model.in_p(c)? {
                big(self.model.epi_count(c)?)
            } else {
                ExactRational::zero()
            })
        })
    }

    pub fn in_p(&self, c: ClassId) -> Result<bool, HallError> {
        Ok(self.model.in_p(c)?)
    }

    pub fn in_q(&self, c: ClassId) -> Result<bool, HallError> {
        Ok(self.model.in_q(c)?)
    }

    /// `int f = sum_E f(E) / |Aut E| x^deg E`.
    pub fn integrate(&self, f: &HallElement<ExactRational>) -> GradedSeries<ExactRational> {
        let mut terms = Vec::new();
        for (g, piece) in &f.terms {
            let ids = self.model.class_ids(g).expect("element degrees lie in the model");
            let mut s = ExactRational::zero();
            for (x, &c) in piece.iter().zip(ids) {
                if !x.is_zero() {
                    s += x / big(self.model.aut_count(c));
                }
            }
            terms.push((g.clone(), vec![s]));
        }
        GradedSeries::from_terms(f.window.clone(), terms)
    }

    /// Pushforward along the duality: `(D_* f)(D E) = f(E)`.
    pub fn dual_pushforward(&self, f: &HallElement<ExactRational>) -> Result<HallElement<ExactRational>, HallError> {
        let mut w = TruncationWindow::empty();
        for g in f.window.degrees() {
            let d = self.model.dual_degree(&g)?;
            let (lo, hi) = w
                .column(&d.beta)
                .map_or((d.n, d.n), |c| (c.lower.min(d.n), c.upper.max(d.n)));
            w.insert(d.beta.clone(), lo, hi);
        }
        let mut values = std::collections::HashMap::new();
        for (g, piece) in &f.terms {
            for (x, &c) in piece.iter().zip(self.model.class_ids(g)?) {
                values.insert(self.model.dual(c)?, x.clone());
            }
        }
        self.element(&w, |c| Ok(values.get(&c).cloned().unwrap_or_else(ExactRational::zero)))
    }

    /// Random element with small integer values on the classes of `w`.
    pub fn random_element(&self, w: &TruncationWindow, rng: &mut ChaCha8Rng) -> HallElement<ExactRational> {
        let rng = std::cell::RefCell::new(rng);
        self.element(w, |_| Ok(ExactRational::from_integer(rng_value(&mut rng.borrow_mut()).into())))
            .expect("window checked by caller")
    }

    /// `{"window", "degrees": [{"degree", "classes": [{"class_label", "coefficient"}]}]}`
    /// with classes sorted by label.
    pub fn to_json<S: Scalar>(&self, f: &HallElement<S>) -> Value {
        element_json(self.model, f)
    }
}

fn rng_value(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-3..=3)
}

/// Deterministic generator for randomized batteries.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(n: u128) -> ExactRational {
    ExactRational::from_integer(n.into())
}

/// Every degree of the model as a window.
pub fn model_window(model: &Model) -> TruncationWindow {
    let mut w = TruncationWindow::empty();
    for g in model.degrees() {
        let (lo, hi) = w
            .column(&g.beta)
            .map_or((g.n, g.n), |c| (c.lower.min(g.n), c.upper.max(g.n)));
        w.insert(g.beta.clone(), lo, hi);
    }
    w
}

pub fn element_json<S: Scalar>(model: &Model, f: &HallElement<S>) -> Value {
    let degrees: Vec<Value> = f
        .terms
        .iter()
        .map(|(g, piece)| {
            let ids = model.class_ids(g).expect("element degrees lie in the model");
            let mut classes: Vec<(String, String)> = piece
                .iter()
                .zip(ids)
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, &c)| (model.class(c).label.clone(), x.to_string()))
                .collect();
            classes.sort();
            let classes: Vec<Value> = classes
                .into_iter()
                .map(|(l, c)| json!({"class_label": l, "coefficient": c}))
                .collect();
            json!({"degree": g, "classes": classes})
        })
        .collect();
    json!({"window": f.window, "degrees": degrees})
}

impl GradedRing for HallAlgebra<'_> {
    type Scalar = ExactRational;

    fn grading(&self) -> &GradingContext {
        self.model.grading()
    }

    fn piece_len(&self, deg: &DegreeVector) -> usize {
        self.model.class_ids(deg).map_or(0, |v| v.len())
    }

    fn mul_pieces(
        &self,
        da: &DegreeVector,
        a: &[ExactRational],
        db: &DegreeVector,
        b: &[ExactRational],
        out: &mut [ExactRational],
    ) {
        let m = self.model;
        let Ok(targets) = m.class_ids(&da.add(db)) else {
            return;
        };
        for (k, &e) in targets.iter().enumerate() {
            let mut s = ExactRational::zero();
            for &(u, qt, n) in m.filtrations(e) {
                if m.class(u).degree != *da {
                    continue;
                }
                let (x, y) = (&a[self.local[u]], &b[self.local[qt]]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                s += x * y * ExactRational::from_integer(n.into());
            }
            out[k] += s;
        }
    }

    fn lefschetz(&self) -> ExactRational {
        self.lefschetz.clone()
    }
}

#[cfg(test)]
mod tests;
