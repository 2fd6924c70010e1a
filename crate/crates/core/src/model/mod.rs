//! Finite abelian categories over `F_q` enumerated exhaustively: nilpotent
//! modules over `F_q[t]` (the Jordan model) and representations of acyclic
//! quivers.
//!
//! A [`Model`] is built once from a [`ModelSpec`]. Construction enumerates
//! every isomorphism class in the model's degree bound and, for each class,
//! all subobjects; every later query is a table lookup.

pub mod fp;
pub mod jordan;
pub mod quiver;
pub mod rep;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coeff::PolyL;
use crate::grading::{DegreeVector, GradingContext, GradingError, Slope};

use fp::{Fp, SubspaceCache};
use rep::{QuiverShape, Rep};

pub type ClassId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("degree {0} is outside the model's bound")]
    DegreeOutOfBounds(String),
    #[error("degrees do not add up: {0}")]
    DegreeMismatch(String),
    #[error("model has no framing object")]
    NoFramingObject,
    #[error("operation needs a nonzero object")]
    ZeroObject,
    #[error("model declares no torsion cut")]
    NoTorsionCut,
    #[error("model declares no duality")]
    NoDuality,
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("degree {degree} needs {tuples} raw tuples; pass the override flag to enumerate it")]
    TooLarge { degree: String, tuples: String },
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// JSON model description; quiver vertices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Jordan {
        q: u64,
        bound: usize,
    },
    Quiver {
        q: u64,
        vertices: usize,
        arrows: Vec<[usize; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        framing_vertex: Option<usize>,
        theta: Vec<i64>,
        kappa: Vec<i64>,
        #[serde(rename = "box")]
        dim_box: Vec<usize>,
        #[serde(default = "yes", skip_serializing_if = "is_true")]
        torsion_cut: bool,
    },
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl ModelSpec {
    pub fn jordan(q: u64, bound: usize) -> ModelSpec {
        ModelSpec::Jordan { q, bound }
    }

    /// The two-arrow Kronecker quiver framed at vertex 1.
    pub fn kronecker(q: u64, theta: [i64; 2], kappa: [i64; 2], dim_box: [usize; 2]) -> ModelSpec {
        ModelSpec::Quiver {
            q,
            vertices: 2,
            arrows: vec![[1, 2], [1, 2]],
            framing_vertex: Some(1),
            theta: theta.to_vec(),
            kappa: kappa.to_vec(),
            dim_box: dim_box.to_vec(),
            torsion_cut: true,
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            ModelSpec::Jordan { q, .. } | ModelSpec::Quiver { q, .. } => *q,
        }
    }

    /// The same model over another prime field.
    pub fn with_q(&self, new_q: u64) -> ModelSpec {
        let mut s = self.clone();
        match &mut s {
            ModelSpec::Jordan { q, .. } | ModelSpec::Quiver { q, .. } => *q = new_q,
        }
        s
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("model spec serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// Limits applied while building a model.
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Skip all feasibility limits.
    pub allow_large: bool,
    /// Replaces the per-`q` dimension limit.
    pub max_dim: Option<usize>,
}

/// Largest raw enumeration attempted without `allow_large`.
pub const MAX_RAW_TUPLES: u64 = 1 << 24;

/// Default per-vertex dimension limit at field size `q`.
pub fn default_max_dim(q: u64) -> usize {
    match q {
        0..=3 => 4,
        4..=11 => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IsoClass {
    pub label: String,
    pub degree: DegreeVector,
    pub aut_order: u128,
}

#[derive(Debug, Clone)]
struct ClassData {
    class: IsoClass,
    dims: Vec<usize>,
    rep: Rep,
    /// `(sub, quotient, count)`, sorted.
    filtrations: Vec<(ClassId, ClassId, u64)>,
    framed: Option<u128>,
    epi: Option<u128>,
    stable_pairs: Option<u128>,
    torsion: Option<(ClassId, ClassId)>,
    /// Maximal destabilizing subobject and its quotient.
    destabilizer: Option<(ClassId, ClassId)>,
    hn: Vec<(Slope, ClassId)>,
    dual: Option<ClassId>,
}

#[derive(Debug, Clone)]
enum Kind {
    Jordan { bound: usize },
    Quiver { tables: HashMap<Vec<usize>, Vec<u32>> },
}

/// An enumerated finite model. Immutable once built.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    field: Fp,
    shape: QuiverShape,
    grading: GradingContext,
    framing_vertex: Option<usize>,
    torsion_cut: bool,
    duality: Option<(Vec<usize>, Vec<usize>)>,
    kind: Kind,
    classes: Vec<ClassData>,
    by_degree: BTreeMap<DegreeVector, Vec<ClassId>>,
    by_label: HashMap<String, ClassId>,
}

impl Model {
    pub fn from_json(json: &str, opts: &BuildOptions) -> Result<Model, ModelError> {
        let spec: ModelSpec =
            serde_json::from_str(json).map_err(|e| ModelError::InvalidSpec(e.to_string()))?;
        Model::build(&spec, opts)
    }

    pub fn build(spec: &ModelSpec, opts: &BuildOptions) -> Result<Model, ModelError> {
        let q = spec.q();
        let field = Fp::new(q)
            .ok_or_else(|| ModelError::InvalidSpec(format!("q = {q} must be a prime below 65536")))?;
        let limit = opts.max_dim.unwrap_or_else(|| default_max_dim(q));
        let check_dims = |dims: &[usize]| -> Result<(), ModelError> {
            if opts.allow_large {
                return Ok(());
            }
            if dims.iter().any(|&d| d > limit) {
                return Err(ModelError::TooLarge {
                    degree: format!("{dims:?}"),
                    tuples: format!("dimension above {limit} at q={q}"),
                });
            }
            Ok(())
        };
        let mut m = match spec {
            ModelSpec::Jordan { bound, .. } => {
                check_dims(&[*bound])?;
                Model::jordan_skeleton(spec.clone(), field, *bound)
            }
            ModelSpec::Quiver {
                vertices,
                arrows,
                framing_vertex,
                theta,
                kappa,
                dim_box,
                torsion_cut,
                ..
            } => {
                let bad = |s: &str| Err(ModelError::InvalidSpec(s.to_string()));
                if *vertices == 0 {
                    return bad("a quiver needs at least one vertex");
                }
                if dim_box.len() != *vertices || theta.len() != *vertices || kappa.len() != *vertices {
                    return bad("box, theta and kappa need one entry per vertex");
                }
                let mut arr = Vec::new();
                for &[i, j] in arrows {
                    if i == 0 || j == 0 || i > *vertices || j > *vertices {
                        return bad("arrow endpoints are 1-based vertex numbers");
                    }
                    arr.push((i - 1, j - 1));
                }
                let shape = QuiverShape {
                    vertices: *vertices,
                    arrows: arr,
                };
                if !shape.is_acyclic() {
                    return bad("only acyclic quivers are supported; use the jordan model for the loop");
                }
                let framing = match framing_vertex {
                    Some(v) if *v == 0 || *v > *vertices => return bad("framing vertex out of range"),
                    Some(v) => Some(v - 1),
                    None => None,
                };
                check_dims(dim_box)?;
                let grading = GradingContext::quiver(theta.clone(), kappa.clone())?;
                Model::quiver_skeleton(
                    spec.clone(),
                    field,
                    shape,
                    grading,
                    framing,
                    *torsion_cut,
                    dim_box,
                    opts.allow_large,
                )?
            }
        };
        m.analyse();
        Ok(m)
    }

    fn jordan_skeleton(spec: ModelSpec, field: Fp, bound: usize) -> Model {
        let q = field.p() as u64;
        let shape = QuiverShape::jordan();
        let mut classes = Vec::new();
        let mut by_degree = BTreeMap::new();
        for n in 0..=bound {
            let deg = DegreeVector::point(n as i64);
            let mut ids = Vec::new();
            for lambda in jordan::partitions(n, bound) {
                ids.push(classes.len());
                classes.push(ClassData::new(
                    IsoClass {
                        label: jordan::label(&lambda),
                        degree: deg.clone(),
                        aut_order: jordan::aut_order(q, &lambda),
                    },
                    vec![n],
                    jordan::normal_form(&lambda),
                ));
            }
            by_degree.insert(deg, ids);
        }
        let duality = shape.find_duality();
        Model::assemble(
            spec,
            field,
            shape,
            GradingContext::point_context(),
            Some(0),
            true,
            duality,
            Kind::Jordan { bound },
            classes,
            by_degree,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn quiver_skeleton(
        spec: ModelSpec,
        field: Fp,
        shape: QuiverShape,
        grading: GradingContext,
        framing: Option<usize>,
        torsion_cut: bool,
        dim_box: &[usize],
        allow_large: bool,
    ) -> Result<Model, ModelError> {
        let q = field.p() as u64;
        let top: Vec<i64> = dim_box.iter().map(|&d| d as i64).collect();
        let all_dims: Vec<Vec<usize>> = crate::grading::box_points(&top)
            .into_iter()
            .map(|v| v.into_iter().map(|x| x as usize).collect())
            .collect();
        for dims in &all_dims {
            let e = shape.entry_count(dims) as u32;
            let tuples = (q as u128).checked_pow(e);
            let too_big = tuples.map_or(true, |t| t > MAX_RAW_TUPLES as u128);
            if too_big && !allow_large {
                return Err(ModelError::TooLarge {
                    degree: format!("{dims:?}"),
                    tuples: tuples.map_or("overflow".into(), |t| t.to_string()),
                });
            }
        }
        let per_dims: Vec<_> = all_dims
            .par_iter()
            .map(|dims| (dims.clone(), quiver::orbits(&field, &shape, dims)))
            .collect();
        let mut classes = Vec::new();
        let mut by_degree = BTreeMap::new();
        let mut tables = HashMap::new();
        for (dims, (orbs, mut table)) in per_dims {
            let base = classes.len() as u32;
            let deg = DegreeVector::dim(&dims.iter().map(|&d| d as i64).collect::<Vec<_>>());
            let g = quiver::group_order(q, &dims);
            let mut ids = Vec::new();
            for o in orbs {
                ids.push(classes.len());
                classes.push(ClassData::new(
                    IsoClass {
                        label: quiver::label(&dims, o.min_code),
                        degree: deg.clone(),
                        aut_order: g / o.size,
                    },
                    dims.clone(),
                    Rep::decode(&shape, &dims, field.p(), o.min_code),
                ));
            }
            for x in table.iter_mut() {
                *x += base;
            }
            tables.insert(dims, table);
            by_degree.insert(deg, ids);
        }
        let duality = shape
            .find_duality()
            .filter(|(sigma, _)| (0..dim_box.len()).all(|v| dim_box[sigma[v]] == dim_box[v]));
        Ok(Model::assemble(
            spec,
            field,
            shape,
            grading,
            framing,
            torsion_cut,
            duality,
            Kind::Quiver { tables },
            classes,
            by_degree,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        spec: ModelSpec,
        field: Fp,
        shape: QuiverShape,
        grading: GradingContext,
        framing_vertex: Option<usize>,
        torsion_cut: bool,
        duality: Option<(Vec<usize>, Vec<usize>)>,
        kind: Kind,
        classes: Vec<ClassData>,
        by_degree: BTreeMap<DegreeVector, Vec<ClassId>>,
    ) -> Model {
        let by_label = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.class.label.clone(), i))
            .collect();
        Model {
            spec,
            field,
            shape,
            grading,
            framing_vertex,
            torsion_cut,
            duality,
            kind,
            classes,
            by_degree,
            by_label,
        }
    }

    /// Fills the per-class tables.
    fn analyse(&mut self) {
        let cache = SubspaceCache::default();
        let results: Vec<Analysis> = (0..self.classes.len())
            .into_par_iter()
            .map(|id| self.analyse_class(id, &cache))
            .collect();
        for (c, a) in self.classes.iter_mut().zip(results) {
            c.filtrations = a.filtrations;
            c.framed = a.framed;
            c.epi = a.epi;
            c.torsion = a.torsion;
            c.destabilizer = a.destabilizer;
            c.dual = a.dual;
        }
        // needs the torsion parts of the quotients
        let pairs: Vec<Option<u128>> = (0..self.classes.len())
            .into_par_iter()
            .map(|id| self.count_stable_pairs(id))
            .collect();
        for (c, s) in self.classes.iter_mut().zip(pairs) {
            c.stable_pairs = s;
        }
        // classes are stored by increasing degree within each dimension
        // vector; quotients are strictly smaller, so iterate by total size
        let mut order: Vec<ClassId> = (0..self.classes.len()).collect();
        order.sort_by_key(|&i| self.classes[i].dims.iter().sum::<usize>());
        for id in order {
            let hn = self.compute_hn(id);
            self.classes[id].hn = hn;
        }
    }

    fn analyse_class(&self, id: ClassId, cache: &SubspaceCache) -> Analysis {
        let f = &self.field;
        let data = &self.classes[id];
        let e = &data.rep;
        let subs = e.subreps(f, &self.shape, cache);
        let mut counts: BTreeMap<(ClassId, ClassId), u64> = BTreeMap::new();
        let mut best_p: Option<(usize, ClassId, ClassId)> = None;
        let mut best_slope: Option<(Slope, usize, ClassId, ClassId)> = None;
        let mut p_count_at_best = 0;
        for s in &subs {
            let u = e.restrict(f, &self.shape, s);
            let qt = e.quotient(f, &self.shape, s);
            let cu = self.classify(&u).expect("subobject lies in the model");
            let cq = self.classify(&qt).expect("quotient lies in the model");
            *counts.entry((cu, cq)).or_insert(0) += 1;
            let dim = u.total_dim();
            if self.torsion_cut && self.in_p_degree(&self.classes[cu].class.degree) {
                match best_p {
                    Some((d, _, _)) if d > dim => {}
                    Some((d, _, _)) if d == dim => p_count_at_best += 1,
                    _ => {
                        best_p = Some((dim, cu, cq));
                        p_count_at_best = 1;
                    }
                }
            }
            if dim > 0 {
                let mu = self
                    .grading
                    .slope(&self.classes[cu].class.degree)
                    .expect("nonzero degree has a slope");
                let better = match &best_slope {
                    None => true,
                    Some((m, d, _, _)) => mu > *m || (mu == *m && dim > *d),
                };
                if better {
                    best_slope = Some((mu, dim, cu, cq));
                }
            }
        }
        if best_p.is_some() {
            assert_eq!(p_count_at_best, 1, "maximal torsion subobject is unique");
        }
        let (framed, epi) = match self.framing_vertex {
            Some(v) => {
                let d = data.dims[v];
                let total = (f.p() as u64).pow(d as u32);
                let mut epi = 0u128;
                for code in 0..total {
                    let w = vector(f.p(), d, code);
                    let g = e.generated(f, &self.shape, v, &w);
                    if g.iter().zip(&data.dims).all(|(s, &dd)| s.dim() == dd) {
                        epi += 1;
                    }
                }
                (Some(total as u128), Some(epi))
            }
            None => (None, None),
        };
        let dual = self.duality.as_ref().map(|(sigma, map)| {
            self.classify(&e.dual(sigma, map))
                .expect("dual lies in the model")
        });
        Analysis {
            filtrations: counts.into_iter().map(|((a, b), c)| (a, b, c)).collect(),
            framed,
            epi,
            torsion: if self.torsion_cut {
                best_p.map(|(_, a, b)| (a, b))
            } else {
                None
            },
            destabilizer: best_slope.map(|(_, _, a, b)| (a, b)),
            dual,
        }
    }

    fn count_stable_pairs(&self, id: ClassId) -> Option<u128> {
        let v = self.framing_vertex?;
        if !self.torsion_cut {
            return None;
        }
        let data = &self.classes[id];
        if !self.in_q_class(id) {
            return Some(0);
        }
        let f = &self.field;
        let d = data.dims[v];
        let total = (f.p() as u64).pow(d as u32);
        let mut count = 0u128;
        for code in 0..total {
            let w = vector(f.p(), d, code);
            let g = data.rep.generated(f, &self.shape, v, &w);
            let coker = data.rep.quotient(f, &self.shape, &g);
            let c = self.classify(&coker).expect("cokernel lies in the model");
            if self.in_p_degree(&self.classes[c].class.degree) {
                count += 1;
            }
        }
        Some(count)
    }

    fn compute_hn(&self, id: ClassId) -> Vec<(Slope, ClassId)> {
        let data = &self.classes[id];
        let Some((u, qt)) = data.destabilizer else {
            return Vec::new();
        };
        let mu = self.grading.slope(&self.classes[u].class.degree).unwrap();
        if u == id {
            return vec![(mu, id)];
        }
        let mut out = vec![(mu, u)];
        out.extend(self.classes[qt].hn.iter().cloned());
        out
    }

    fn in_p_degree(&self, g: &DegreeVector) -> bool {
        self.grading.kappa_dot(g) == 0
    }

    fn in_q_class(&self, id: ClassId) -> bool {
        match self.classes[id].torsion {
            Some((p, _)) => self.classes[p].class.degree.is_zero(),
            None => true,
        }
    }

    /// Class of an arbitrary representation within the bound.
    pub fn classify(&self, r: &Rep) -> Option<ClassId> {
        match &self.kind {
            Kind::Jordan { bound } => {
                let lambda = jordan::jordan_type(&self.field, &r.mats[0])?;
                if lambda.first().copied().unwrap_or(0) > *bound || r.dims[0] > *bound {
                    return None;
                }
                self.by_label.get(&jordan::label(&lambda)).copied()
            }
            Kind::Quiver { tables } => {
                let t = tables.get(&r.dims)?;
                Some(t[r.encode(self.field.p()) as usize] as usize)
            }
        }
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn fingerprint(&self) -> String {
        self.spec.fingerprint()
    }

    pub fn q(&self) -> u64 {
        self.field.p() as u64
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }

    pub fn shape(&self) -> &QuiverShape {
        &self.shape
    }

    pub fn grading(&self) -> &GradingContext {
        &self.grading
    }

    pub fn is_jordan(&self) -> bool {
        matches!(self.kind, Kind::Jordan { .. })
    }

    pub fn has_framing(&self) -> bool {
        self.framing_vertex.is_some()
    }

    pub fn has_torsion_cut(&self) -> bool {
        self.torsion_cut
    }

    pub fn has_duality(&self) -> bool {
        self.duality.is_some()
    }

    /// Every degree in the model's bound, ascending.
    pub fn degrees(&self) -> Vec<DegreeVector> {
        self.by_degree.keys().cloned().collect()
    }

    pub fn contains_degree(&self, g: &DegreeVector) -> bool {
        self.by_degree.contains_key(g)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_ids(&self, g: &DegreeVector) -> Result<&[ClassId], ModelError> {
        self.by_degree
            .get(g)
            .map(|v| v.as_slice())
            .ok_or_else(|| ModelError::DegreeOutOfBounds(g.to_string()))
    }

    pub fn iso_classes(&self, g: &DegreeVector) -> Result<Vec<IsoClass>, ModelError> {
        Ok(self
            .class_ids(g)?
            .iter()
            .map(|&i| self.classes[i].class.clone())
            .collect())
    }

    pub fn class(&self, id: ClassId) -> &IsoClass {
        &self.classes[id].class
    }

    pub fn class_by_label(&self, label: &str) -> Result<ClassId, ModelError> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| ModelError::UnknownClass(label.to_string()))
    }

    pub fn zero_class(&self) -> ClassId {
        let zero = DegreeVector::zero(self.grading.rank);
        self.by_degree[&zero][0]
    }

    pub fn representative(&self, id: ClassId) -> &Rep {
        &self.classes[id].rep
    }

    pub fn dims(&self, id: ClassId) -> &[usize] {
        &self.classes[id].dims
    }

    /// Every `(sub, quotient, count)` with nonzero count.
    pub fn filtrations(&self, e: ClassId) -> &[(ClassId, ClassId, u64)] {
        &self.classes[e].filtrations
    }

    /// `#{U in E : U ~ A, E/U ~ B}`.
    pub fn filtration_count(&self, e: ClassId, a: ClassId, b: ClassId) -> Result<u64, ModelError> {
        let (de, da, db) = (
            &self.classes[e].class.degree,
            &self.classes[a].class.degree,
            &self.classes[b].class.degree,
        );
        if da.add(db) != *de {
            return Err(ModelError::DegreeMismatch(format!("{da} + {db} != {de}")));
        }
        Ok(self.classes[e]
            .filtrations
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, b)))
            .map_or(0, |i| self.classes[e].filtrations[i].2))
    }

    pub fn aut_count(&self, e: ClassId) -> u128 {
        self.classes[e].class.aut_order
    }

    /// `|Aut E|` as a polynomial in `L`; available in the Jordan model only.
    pub fn aut_polynomial(&self, e: ClassId) -> Option<PolyL> {
        match self.kind {
            Kind::Jordan { .. } => {
                let label = &self.classes[e].class.label;
                let inner = label.trim_start_matches('(').trim_end_matches(')');
                let lambda: Vec<usize> = if inner.is_empty() {
                    vec![]
                } else {
                    inner.split(',').map(|x| x.parse().unwrap()).collect()
                };
                Some(jordan::aut_polynomial(&lambda))
            }
            Kind::Quiver { .. } => None,
        }
    }

    pub fn hom_count(&self, a: ClassId, b: ClassId) -> u128 {
        let d = Rep::hom_dim(
            &self.field,
            &self.shape,
            &self.classes[a].rep,
            &self.classes[b].rep,
        );
        (self.q() as u128).pow(d as u32)
    }

    /// `|Hom(P, E)|`.
    pub fn framed_count(&self, e: ClassId) -> Result<u128, ModelError> {
        self.classes[e].framed.ok_or(ModelError::NoFramingObject)
    }

    /// `#{P ->> E}`.
    pub fn epi_count(&self, e: ClassId) -> Result<u128, ModelError> {
        self.classes[e].epi.ok_or(ModelError::NoFramingObject)
    }

    /// `#{f: P -> E : E in Q, coker f in P}`.
    pub fn stable_pair_count(&self, e: ClassId) -> Result<u128, ModelError> {
        if !self.torsion_cut {
            return Err(ModelError::NoTorsionCut);
        }
        self.classes[e].stable_pairs.ok_or(ModelError::NoFramingObject)
    }

    pub fn slope(&self, e: ClassId) -> Result<Slope, ModelError> {
        let g = &self.classes[e].class.degree;
        if g.is_zero() {
            return Err(ModelError::ZeroObject);
        }
        Ok(self.grading.slope(g)?)
    }

    /// Harder-Narasimhan factors in descending slope order.
    pub fn hn_filtration(&self, e: ClassId) -> Result<Vec<(Slope, ClassId)>, ModelError> {
        if self.classes[e].class.degree.is_zero() {
            return Err(ModelError::ZeroObject);
        }
        Ok(self.classes[e].hn.clone())
    }

    pub fn is_semistable(&self, e: ClassId) -> Result<bool, ModelError> {
        Ok(self.hn_filtration(e)?.len() == 1)
    }

    /// Membership in the torsion class `P` (slope infinity or zero).
    pub fn in_p(&self, e: ClassId) -> Result<bool, ModelError> {
        if !self.torsion_cut {
            return Err(ModelError::NoTorsionCut);
        }
        Ok(self.in_p_degree(&self.classes[e].class.degree))
    }

    /// Membership in the torsion-free class `Q`.
    pub fn in_q(&self, e: ClassId) -> Result<bool, ModelError> {
        if !self.torsion_cut {
            return Err(ModelError::NoTorsionCut);
        }
        Ok(self.in_q_class(e))
    }

    /// The maximal subobject in `P` and its quotient.
    pub fn torsion_decompose(&self, e: ClassId) -> Result<(ClassId, ClassId), ModelError> {
        self.classes[e].torsion.ok_or(ModelError::NoTorsionCut)
    }

    pub fn dual(&self, e: ClassId) -> Result<ClassId, ModelError> {
        self.classes[e].dual.ok_or(ModelError::NoDuality)
    }

    /// Degree of the dual of an object of degree `g`.
    pub fn dual_degree(&self, g: &DegreeVector) -> Result<DegreeVector, ModelError> {
        let (sigma, _) = self.duality.as_ref().ok_or(ModelError::NoDuality)?;
        if self.is_jordan() {
            return Ok(g.clone());
        }
        let mut beta = vec![0; g.beta.len()];
        for (v, &b) in g.beta.iter().enumerate() {
            beta[sigma[v]] = b;
        }
        Ok(DegreeVector::new(beta, g.n))
    }

    /// Euler form on degrees; zero for the Jordan model.
    pub fn euler_form(&self, d: &DegreeVector, e: &DegreeVector) -> i64 {
        if self.is_jordan() {
            return self.shape.euler_form(&[d.n], &[e.n]);
        }
        self.shape.euler_form(&d.beta, &e.beta)
    }

    /// Number of raw structure tuples in degree `g`: nilpotent matrices for
    /// the Jordan model, all matrix tuples for a quiver.
    pub fn raw_tuple_count(&self, g: &DegreeVector) -> Result<u128, ModelError> {
        let ids = self.class_ids(g)?;
        let dims = &self.classes[ids[0]].dims;
        let q = self.q() as u128;
        Ok(match self.kind {
            Kind::Jordan { .. } => {
                let n = dims[0] as u32;
                q.pow(n * n - n)
            }
            Kind::Quiver { .. } => q.pow(self.shape.entry_count(dims) as u32),
        })
    }

    /// `prod_v |GL_{d_v}|` for degree `g`.
    pub fn group_order(&self, g: &DegreeVector) -> Result<u128, ModelError> {
        let ids = self.class_ids(g)?;
        Ok(quiver::group_order(self.q(), &self.classes[ids[0]].dims))
    }
}

struct Analysis {
    filtrations: Vec<(ClassId, ClassId, u64)>,
    framed: Option<u128>,
    epi: Option<u128>,
    torsion: Option<(ClassId, ClassId)>,
    destabilizer: Option<(ClassId, ClassId)>,
    dual: Option<ClassId>,
}

impl ClassData {
    fn new(class: IsoClass, dims: Vec<usize>, rep: Rep) -> ClassData {
        ClassData {
            class,
            dims,
            rep,
            filtrations: Vec::new(),
            framed: None,
            epi: None,
            stable_pairs: None,
            torsion: None,
            destabilizer: None,
            hn: Vec::new(),
            dual: None,
        }
    }
}

/// The vector with base-`p` digits of `code`, least significant first.
fn vector(p: u32, d: usize, mut code: u64) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let x = (code % p as u64) as u32;
            code /= p as u64;
            x
        })
        .collect()
}
