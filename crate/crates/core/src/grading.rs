//! The grading lattice: degree vectors `(beta, n)`, the effective cone,
//! slopes, and finite truncation windows standing in for Laurent subsets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coeff::{format_rational, parse_rational, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("degree has rank {got}, context has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("slope of the zero class is undefined")]
    ZeroClass,
    #[error("invalid grading context: {0}")]
    InvalidContext(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("degree {0} is not effective")]
    NotEffective(String),
    #[error("degree {0} has infinitely many effective decompositions; use a window")]
    InfiniteDecompositions(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DegreeVector {
    pub beta: Vec<i64>,
    pub n: i64,
}

impl DegreeVector {
    pub fn new(beta: Vec<i64>, n: i64) -> Self {
        DegreeVector { beta, n }
    }

    pub fn zero(rank: usize) -> Self {
        DegreeVector {
            beta: vec![0; rank],
            n: 0,
        }
    }

    /// Rank-0 degree, used by one-column models.
    pub fn point(n: i64) -> Self {
        DegreeVector { beta: Vec::new(), n }
    }

    /// Pure dimension vector, `n = 0`.
    pub fn dim(beta: &[i64]) -> Self {
        DegreeVector {
            beta: beta.to_vec(),
            n: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.beta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.n == 0 && self.beta.iter().all(|&b| b == 0)
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(|&b| b == 0)
    }

    pub fn add(&self, o: &DegreeVector) -> DegreeVector {
        DegreeVector {
            beta: self.beta.iter().zip(&o.beta).map(|(a, b)| a + b).collect(),
            n: self.n + o.n,
        }
    }

    pub fn sub(&self, o: &DegreeVector) -> DegreeVector {
        DegreeVector {
            beta: self.beta.iter().zip(&o.beta).map(|(a, b)| a - b).collect(),
            n: self.n - o.n,
        }
    }

    pub fn neg(&self) -> DegreeVector {
        DegreeVector {
            beta: self.beta.iter().map(|b| -b).collect(),
            n: -self.n,
        }
    }

    /// Sum of all entries; the total dimension for quiver degrees.
    pub fn total(&self) -> i64 {
        self.beta.iter().sum::<i64>() + self.n
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.beta.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", b.join(","), self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cone {
    /// `beta >= 0` componentwise, and `n >= 0` when `beta = 0`.
    #[serde(rename = "paper-delta")]
    Delta,
    /// Every entry nonnegative.
    #[serde(rename = "quiver")]
    Quiver,
}

/// Slope value, totally ordered with `Infinite` on top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    Finite(ExactRational),
    Infinite,
}

impl Slope {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::Infinite)
    }

    pub fn parse(s: &str) -> Result<Slope, GradingError> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(Slope::Infinite),
            t => parse_rational(t)
                .map(Slope::Finite)
                .map_err(|e| GradingError::InvalidContext(e.to_string())),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => f.write_str(&format_rational(r)),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Slope::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bound {
    Unbounded,
    Open(Slope),
    Closed(Slope),
}

/// A slope interval; used to select semistable strata.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopeInterval {
    pub lower: Bound,
    pub upper: Bound,
}

impl SlopeInterval {
    pub fn all() -> Self {
        SlopeInterval {
            lower: Bound::Unbounded,
            upper: Bound::Unbounded,
        }
    }

    pub fn point(mu: Slope) -> Self {
        SlopeInterval {
            lower: Bound::Closed(mu.clone()),
            upper: Bound::Closed(mu),
        }
    }

    /// `[mu, inf]`.
    pub fn at_least(mu: Slope) -> Self {
        SlopeInterval {
            lower: Bound::Closed(mu),
            upper: Bound::Unbounded,
        }
    }

    /// The empty interval `(inf, inf)`.
    pub fn empty() -> Self {
        SlopeInterval {
            lower: Bound::Open(Slope::Infinite),
            upper: Bound::Unbounded,
        }
    }

    pub fn contains(&self, mu: &Slope) -> bool {
        let lo = match &self.lower {
            Bound::Unbounded => true,
            Bound::Open(b) => mu > b,
            Bound::Closed(b) => mu >= b,
        };
        let hi = match &self.upper {
            Bound::Unbounded => true,
            Bound::Open(b) => mu < b,
            Bound::Closed(b) => mu <= b,
        };
        lo && hi
    }

    /// Parse `[a,b]`, `(a,b]`, ... with `inf` and an empty side meaning
    /// unbounded, or a bare slope for a single point.
    pub fn parse(s: &str) -> Result<SlopeInterval, GradingError> {
        let t = s.trim();
        let bad = || GradingError::InvalidContext(format!("bad interval {s:?}"));
        if t == "all" {
            return Ok(SlopeInterval::all());
        }
        let (open_l, rest) = match t.chars().next() {
            Some('[') => (false, &t[1..]),
            Some('(') => (true, &t[1..]),
            _ => return Ok(SlopeInterval::point(Slope::parse(t)?)),
        };
        let (body, open_r) = if let Some(b) = rest.strip_suffix(']') {
            (b, false)
        } else if let Some(b) = rest.strip_suffix(')') {
            (b, true)
        } else {
            return Err(bad());
        };
        let (l, r) = body.split_once(',').ok_or_else(bad)?;
        let side = |x: &str, open: bool, is_lower: bool| -> Result<Bound, GradingError> {
            let x = x.trim();
            if x.is_empty() || x == "-inf" || (!is_lower && x == "inf" && open) {
                return Ok(Bound::Unbounded);
            }
            let mu = Slope::parse(x)?;
            Ok(if open { Bound::Open(mu) } else { Bound::Closed(mu) })
        };
        Ok(SlopeInterval {
            lower: side(l, open_l, true)?,
            upper: side(r, open_r, false)?,
        })
    }
}

/// Rank, cone, slope data and the `chi` form of a grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GradingContext {
    pub rank: usize,
    pub cone: Cone,
    /// Length `rank`, or `rank + 1` with the last slot pairing with `n`.
    pub theta: Vec<i64>,
    pub kappa: Vec<i64>,
    /// Length `rank + 1`.
    pub chi: Vec<i64>,
}

#[derive(Deserialize)]
struct RawContext {
    rank: usize,
    cone: Cone,
    theta: Vec<i64>,
    kappa: Vec<i64>,
    chi: Vec<i64>,
}

impl<'de> Deserialize<'de> for GradingContext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RawContext::deserialize(d)?;
        GradingContext::new(r.rank, r.cone, r.theta, r.kappa, r.chi)
            .map_err(serde::de::Error::custom)
    }
}

impl GradingContext {
    pub fn new(
        rank: usize,
        cone: Cone,
        theta: Vec<i64>,
        kappa: Vec<i64>,
        chi: Vec<i64>,
    ) -> Result<Self, GradingError> {
        let bad = |m: &str| Err(GradingError::InvalidContext(m.to_string()));
        if theta.len() != rank && theta.len() != rank + 1 {
            return bad("theta must have length rank or rank+1");
        }
        if kappa.len() != rank {
            return bad("kappa must have length rank");
        }
        if chi.len() != rank + 1 {
            return bad("chi must have length rank+1");
        }
        if kappa.iter().any(|&k| k < 0) {
            return bad("kappa must be nonnegative on the cone");
        }
        Ok(GradingContext {
            rank,
            cone,
            theta,
            kappa,
            chi,
        })
    }

    /// One column, `n >= 0`, every slope infinite, `chi(n) = n`.
    pub fn point_context() -> Self {
        GradingContext::new(0, Cone::Delta, vec![], vec![], vec![1]).unwrap()
    }

    /// Quiver dimension vectors with `chi = 0`.
    pub fn quiver(theta: Vec<i64>, kappa: Vec<i64>) -> Result<Self, GradingError> {
        let r = kappa.len();
        GradingContext::new(r, Cone::Quiver, theta, kappa, vec![0; r + 1])
    }

    fn check_rank(&self, g: &DegreeVector) -> Result<(), GradingError> {
        if g.rank() != self.rank {
            return Err(GradingError::RankMismatch {
                expected: self.rank,
                got: g.rank(),
            });
        }
        Ok(())
    }

    pub fn is_effective(&self, g: &DegreeVector) -> bool {
        if g.rank() != self.rank || g.beta.iter().any(|&b| b < 0) {
            return false;
        }
        match self.cone {
            Cone::Delta => !g.beta_is_zero() || g.n >= 0,
            Cone::Quiver => g.n >= 0,
        }
    }

    pub fn is_effective_beta(&self, beta: &[i64]) -> bool {
        beta.len() == self.rank && beta.iter().all(|&b| b >= 0)
    }

    /// Smallest effective `n` in column `beta`, if the cone bounds it.
    pub fn column_min(&self, beta: &[i64]) -> Option<i64> {
        match self.cone {
            Cone::Quiver => Some(0),
            Cone::Delta if beta.iter().all(|&b| b == 0) => Some(0),
            Cone::Delta => None,
        }
    }

    pub fn chi(&self, g: &DegreeVector) -> i64 {
        let r = self.rank;
        g.beta.iter().zip(&self.chi[..r]).map(|(a, b)| a * b).sum::<i64>() + self.chi[r] * g.n
    }

    pub fn theta_dot(&self, g: &DegreeVector) -> i64 {
        let r = self.rank;
        let base: i64 = g.beta.iter().zip(&self.theta[..r]).map(|(a, b)| a * b).sum();
        base + self.theta.get(r).copied().unwrap_or(0) * g.n
    }

    pub fn kappa_dot(&self, g: &DegreeVector) -> i64 {
        g.beta.iter().zip(&self.kappa).map(|(a, b)| a * b).sum()
    }

    pub fn slope(&self, g: &DegreeVector) -> Result<Slope, GradingError> {
        self.check_rank(g)?;
        if g.is_zero() {
            return Err(GradingError::ZeroClass);
        }
        let k = self.kappa_dot(g);
        if k == 0 {
            return Ok(Slope::Infinite);
        }
        Ok(Slope::Finite(ExactRational::new(
            self.theta_dot(g).into(),
            k.into(),
        )))
    }

    /// Ordered effective splittings `beta = beta1 + beta2`; always finite.
    pub fn beta_splits(&self, beta: &[i64]) -> Vec<(Vec<i64>, Vec<i64>)> {
        let mut out = Vec::new();
        if !self.is_effective_beta(beta) {
            return out;
        }
        for b1 in box_points(beta) {
            let b2: Vec<i64> = beta.iter().zip(&b1).map(|(a, b)| a - b).collect();
            out.push((b1, b2));
        }
        out
    }

    /// All ordered effective decompositions of `g`. Fails when the cone
    /// admits infinitely many, which happens for `beta != 0` in the
    /// delta cone; use [`GradingContext::window_decompositions`] there.
    pub fn decompositions(
        &self,
        g: &DegreeVector,
    ) -> Result<Vec<(DegreeVector, DegreeVector)>, GradingError> {
        self.check_rank(g)?;
        if !self.is_effective(g) {
            return Err(GradingError::NotEffective(g.to_string()));
        }
        let mut out = Vec::new();
        for (b1, b2) in self.beta_splits(&g.beta) {
            let (lo1, lo2) = match (self.column_min(&b1), self.column_min(&b2)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(GradingError::InfiniteDecompositions(g.to_string())),
            };
            for n1 in lo1..=(g.n - lo2) {
                out.push((
                    DegreeVector::new(b1.clone(), n1),
                    DegreeVector::new(b2.clone(), g.n - n1),
                ));
            }
        }
        Ok(out)
    }

    /// Decompositions `g = g1 + g2` with `g1` not below the lower bounds of
    /// `w1` and `g2` not below those of `w2`; splits through columns absent
    /// from either window are skipped.
    pub fn window_decompositions(
        &self,
        g: &DegreeVector,
        w1: &TruncationWindow,
        w2: &TruncationWindow,
    ) -> Vec<(DegreeVector, DegreeVector)> {
        let mut out = Vec::new();
        for (b1, b2) in self.beta_splits(&g.beta) {
            let (Some(c1), Some(c2)) = (w1.columns.get(&b1), w2.columns.get(&b2)) else {
                continue;
            };
            for n1 in c1.lower..=(g.n - c2.lower) {
                let d1 = DegreeVector::new(b1.clone(), n1);
                let d2 = DegreeVector::new(b2.clone(), g.n - n1);
                if self.is_effective(&d1) && self.is_effective(&d2) {
                    out.push((d1, d2));
                }
            }
        }
        out
    }
}

/// All integer vectors `0 <= v <= top`, lexicographic.
pub fn box_points(top: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(top.len())];
    for &t in top {
        let mut next = Vec::with_capacity(out.len() * (t.max(0) as usize + 1));
        for v in &out {
            for x in 0..=t {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Known range `lower..=upper` of one column; degrees below `lower` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Column {
    pub lower: i64,
    pub upper: i64,
}

/// Finite frontier of a Laurent subset: for each listed column, the
/// coefficients with `lower <= n <= upper` are known, those below `lower`
/// are zero, and nothing else is known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TruncationWindow {
    columns: BTreeMap<Vec<i64>, Column>,
}

#[derive(Serialize, Deserialize)]
struct ColumnEntry {
    beta: Vec<i64>,
    lower: i64,
    upper: i64,
}

impl Serialize for TruncationWindow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ColumnEntry> = self
            .columns
            .iter()
            .map(|(b, c)| ColumnEntry {
                beta: b.clone(),
                lower: c.lower,
                upper: c.upper,
            })
            .collect();
        #[derive(Serialize)]
        struct W {
            columns: Vec<ColumnEntry>,
        }
        W { columns: v }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncationWindow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct W {
            columns: Vec<ColumnEntry>,
        }
        let w = W::deserialize(d)?;
        let mut out = TruncationWindow::empty();
        for c in w.columns {
            if out.columns.contains_key(&c.beta) {
                return Err(serde::de::Error::custom("duplicate window column"));
            }
            out.insert(c.beta, c.lower, c.upper);
        }
        Ok(out)
    }
}

impl TruncationWindow {
    pub fn empty() -> Self {
        TruncationWindow {
            columns: BTreeMap::new(),
        }
    }

    /// Only the zero degree.
    pub fn unit(rank: usize) -> Self {
        Self::single_column(vec![0; rank], 0, 0)
    }

    pub fn single_column(beta: Vec<i64>, lower: i64, upper: i64) -> Self {
        let mut w = Self::empty();
        w.insert(beta, lower, upper);
        w
    }

    /// Rank-0 window `0 <= n <= upper`.
    pub fn points_up_to(upper: i64) -> Self {
        Self::single_column(Vec::new(), 0, upper)
    }

    /// Dimension vectors `0 <= beta <= top` with `n = 0`.
    pub fn quiver_box(top: &[i64]) -> Self {
        let mut w = Self::empty();
        for b in box_points(top) {
            w.insert(b, 0, 0);
        }
        w
    }

    /// Adds or replaces a column; empty ranges are dropped.
    pub fn insert(&mut self, beta: Vec<i64>, lower: i64, upper: i64) {
        if upper >= lower {
            self.columns.insert(beta, Column { lower, upper });
        } else {
            self.columns.remove(&beta);
        }
    }

    pub fn validate(&self, ctx: &GradingContext) -> Result<(), GradingError> {
        for (b, c) in &self.columns {
            if !ctx.is_effective_beta(b) {
                return Err(GradingError::InvalidWindow(format!(
                    "column {b:?} is not effective"
                )));
            }
            if let Some(m) = ctx.column_min(b) {
                if c.lower < m {
                    return Err(GradingError::InvalidWindow(format!(
                        "column {b:?} starts below the cone"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn columns(&self) -> &BTreeMap<Vec<i64>, Column> {
        &self.columns
    }

    pub fn column(&self, beta: &[i64]) -> Option<&Column> {
        self.columns.get(beta)
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn contains(&self, g: &DegreeVector) -> bool {
        self.columns
            .get(&g.beta)
            .is_some_and(|c| c.lower <= g.n && g.n <= c.upper)
    }

    pub fn is_known_zero(&self, g: &DegreeVector) -> bool {
        self.columns.get(&g.beta).is_some_and(|c| g.n < c.lower)
    }

    /// Every in-window degree, in lexicographic order.
    pub fn degrees(&self) -> Vec<DegreeVector> {
        let mut out = Vec::new();
        for (b, c) in &self.columns {
            for n in c.lower..=c.upper {
                out.push(DegreeVector::new(b.clone(), n));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.columns
            .values()
            .map(|c| (c.upper - c.lower + 1) as usize)
            .sum()
    }

    pub fn intersect(&self, o: &TruncationWindow) -> TruncationWindow {
        let mut w = TruncationWindow::empty();
        for (b, c) in &self.columns {
            if let Some(d) = o.columns.get(b) {
                w.insert(b.clone(), c.lower.min(d.lower), c.upper.min(d.upper));
            }
        }
        w
    }

    /// True when every degree known in `self` is known in `o`.
    pub fn is_subwindow_of(&self, o: &TruncationWindow) -> bool {
        self.columns.iter().all(|(b, c)| {
            o.columns
                .get(b)
                .is_some_and(|d| d.lower <= c.lower && c.upper <= d.upper)
        })
    }

    /// Largest sub-window on which every column in `self` keeps its lower
    /// bound and contains all of its effective sub-columns.
    pub fn downward_closed_core(&self, ctx: &GradingContext) -> TruncationWindow {
        let mut w = TruncationWindow::empty();
        for (b, c) in &self.columns {
            let closed = ctx
                .beta_splits(b)
                .iter()
                .all(|(b1, _)| self.columns.contains_key(b1));
            if closed {
                w.insert(b.clone(), c.lower, c.upper);
            }
        }
        w
    }
}

/// Smallest window containing every sum of an in-window degree of `w1`
/// with one of `w2`.
pub fn window_sum(w1: &TruncationWindow, w2: &TruncationWindow) -> TruncationWindow {
    let mut acc: BTreeMap<Vec<i64>, Column> = BTreeMap::new();
    for (b1, c1) in &w1.columns {
        for (b2, c2) in &w2.columns {
            let b: Vec<i64> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
            let c = Column {
                lower: c1.lower + c2.lower,
                upper: c1.upper + c2.upper,
            };
            acc.entry(b)
                .and_modify(|e| {
                    e.lower = e.lower.min(c.lower);
                    e.upper = e.upper.max(c.upper);
                })
                .or_insert(c);
        }
    }
    TruncationWindow { columns: acc }
}

/// Window on which a product of series known on `w1` and `w2` is exact: a
/// column survives only if every effective splitting of it runs through
/// columns of both inputs, and its upper bound is capped so that no
/// contributing factor leaves its window.
pub fn guaranteed_product_window(
    ctx: &GradingContext,
    w1: &TruncationWindow,
    w2: &TruncationWindow,
) -> TruncationWindow {
    let mut out = TruncationWindow::empty();
    for b in window_sum(w1, w2).columns.keys() {
        let mut lower = i64::MAX;
        let mut upper = i64::MAX;
        let mut ok = true;
        for (b1, b2) in ctx.beta_splits(b) {
            match (w1.columns.get(&b1), w2.columns.get(&b2)) {
                (Some(c1), Some(c2)) => {
                    lower = lower.min(c1.lower + c2.lower);
                    upper = upper.min((c1.upper + c2.lower).min(c2.upper + c1.lower));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.insert(b.clone(), lower, upper);
        }
    }
    out
}

impl fmt::Display for TruncationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .columns
            .iter()
            .map(|(b, c)| format!("{b:?}:[{},{}]", c.lower, c.upper))
            .collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn delta1() -> GradingContext {
        GradingContext::new(1, Cone::Delta, vec![0, 1], vec![1], vec![0, 1]).unwrap()
    }

    #[test]
    fn effectiveness() {
        let c = delta1();
        assert!(c.is_effective(&DegreeVector::new(vec![0], 0)));
        assert!(!c.is_effective(&DegreeVector::new(vec![0], -1)));
        assert!(c.is_effective(&DegreeVector::new(vec![1], -5)));
        assert!(!c.is_effective(&DegreeVector::new(vec![-1], 5)));
    }

    #[test]
    fn decomposition_counts() {
        let c = delta1();
        assert_eq!(c.decompositions(&DegreeVector::new(vec![0], 3)).unwrap().len(), 4);
        assert_eq!(c.decompositions(&DegreeVector::new(vec![0], 0)).unwrap().len(), 1);
        assert!(matches!(
            c.decompositions(&DegreeVector::new(vec![1], 0)),
            Err(GradingError::InfiniteDecompositions(_))
        ));
        // within windows the count is finite: columns 0:[0,2], 1:[-1,3]
        let mut w = TruncationWindow::single_column(vec![0], 0, 2);
        w.insert(vec![1], -1, 3);
        let d = c.window_decompositions(&DegreeVector::new(vec![1], 1), &w, &w);
        // (0,n1)+(1,1-n1) with n1 in 0..=2, and (1,n1)+(0,1-n1) with n1 in -1..=1
        assert_eq!(d.len(), 6);
    }

    #[test]
    fn quiver_decompositions_match_box_enumeration() {
        let c = GradingContext::quiver(vec![0, 1], vec![1, 0]).unwrap();
        let g = DegreeVector::dim(&[1, 1]);
        let d = c.decompositions(&g).unwrap();
        let mut brute = 0;
        for a in 0..=1 {
            for b in 0..=1 {
                let g1 = DegreeVector::dim(&[a, b]);
                let g2 = g.sub(&g1);
                if c.is_effective(&g1) && c.is_effective(&g2) {
                    brute += 1;
                }
            }
        }
        assert_eq!(d.len(), brute);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn slopes() {
        let c = delta1();
        assert_eq!(c.slope(&DegreeVector::new(vec![0], 2)).unwrap(), Slope::Infinite);
        assert_eq!(c.slope(&DegreeVector::zero(1)), Err(GradingError::ZeroClass));
        let k = GradingContext::quiver(vec![0, 1], vec![1, 0]).unwrap();
        assert_eq!(
            k.slope(&DegreeVector::dim(&[2, 3])).unwrap(),
            Slope::Finite(rat(3, 2))
        );
        let a = c.slope(&DegreeVector::new(vec![2], 3)).unwrap();
        let b = c.slope(&DegreeVector::new(vec![2], 6)).unwrap();
        assert_eq!(b, Slope::Finite(rat(3, 1)));
        assert_eq!(a, Slope::Finite(rat(3, 2)));
        assert!(Slope::Finite(rat(1000, 1)) < Slope::Infinite);
    }

    #[test]
    fn window_arithmetic() {
        let ctx = GradingContext::point_context();
        let a = TruncationWindow::points_up_to(3);
        let b = TruncationWindow::points_up_to(5);
        assert_eq!(window_sum(&a, &b), TruncationWindow::points_up_to(8));
        assert_eq!(
            guaranteed_product_window(&ctx, &a, &b),
            TruncationWindow::points_up_to(3)
        );
        assert!(window_sum(&a, &TruncationWindow::empty()).is_empty());
        assert_eq!(window_sum(&TruncationWindow::unit(0), &a), a);
    }

    #[test]
    fn quiver_box_product_window_is_the_box() {
        let ctx = GradingContext::quiver(vec![0, 1], vec![1, 0]).unwrap();
        let w = TruncationWindow::quiver_box(&[2, 2]);
        assert_eq!(w.len(), 9);
        assert_eq!(guaranteed_product_window(&ctx, &w, &w), w);
    }

    #[test]
    fn intervals() {
        let i = SlopeInterval::parse("[0,inf]").unwrap();
        assert!(i.contains(&Slope::Infinite));
        assert!(i.contains(&Slope::Finite(rat(0, 1))));
        assert!(!i.contains(&Slope::Finite(rat(-1, 2))));
        let j = SlopeInterval::parse("(-inf,1/2)").unwrap();
        assert!(j.contains(&Slope::Finite(rat(-7, 1))));
        assert!(!j.contains(&Slope::Finite(rat(1, 2))));
        assert!(!j.contains(&Slope::Infinite));
        assert!(!SlopeInterval::empty().contains(&Slope::Infinite));
        assert_eq!(
            SlopeInterval::parse("inf").unwrap(),
            SlopeInterval::point(Slope::Infinite)
        );
    }

    #[test]
    fn context_json() {
        let js = r#"{"rank":2,"cone":"quiver","theta":[0,1],"kappa":[1,0],"chi":[0,0,0]}"#;
        let c: GradingContext = serde_json::from_str(js).unwrap();
        assert_eq!(c.cone, Cone::Quiver);
        assert_eq!(serde_json::to_string(&c).unwrap(), js);
        let bad = r#"{"rank":2,"cone":"quiver","theta":[0],"kappa":[1,0],"chi":[0,0,0]}"#;
        assert!(serde_json::from_str::<GradingContext>(bad).is_err());
    }

    #[test]
    fn window_json() {
        let w = TruncationWindow::quiver_box(&[1, 0]);
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(
            js,
            r#"{"columns":[{"beta":[0,0],"lower":0,"upper":0},{"beta":[1,0],"lower":0,"upper":0}]}"#
        );
        assert_eq!(serde_json::from_str::<TruncationWindow>(&js).unwrap(), w);
    }
}
