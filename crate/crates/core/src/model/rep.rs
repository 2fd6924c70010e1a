//! Quiver representations over `F_p` with explicit matrices.

use super::fp::{Fp, Mat, Subspace, SubspaceCache};

/// Vertices `0..vertices`; arrow `(i, j)` points from `i` to `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverShape {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl QuiverShape {
    pub fn jordan() -> QuiverShape {
        QuiverShape {
            vertices: 1,
            arrows: vec![(0, 0)],
        }
    }

    /// Number of matrix entries of a representation with these dimensions.
    pub fn entry_count(&self, dims: &[usize]) -> usize {
        self.arrows.iter().map(|&(i, j)| dims[i] * dims[j]).sum()
    }

    /// `sum_i d_i e_i - sum_{i->j} d_i e_j`.
    pub fn euler_form(&self, d: &[i64], e: &[i64]) -> i64 {
        let a: i64 = d.iter().zip(e).map(|(x, y)| x * y).sum();
        let b: i64 = self.arrows.iter().map(|&(i, j)| d[i] * e[j]).sum();
        a - b
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let mut indeg = vec![0usize; self.vertices];
        for &(_, j) in &self.arrows {
            indeg[j] += 1;
        }
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(i, j) in &self.arrows {
                if i == v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        stack.push(j);
                    }
                }
            }
        }
        seen == self.vertices
    }

    /// Finds a vertex involution `sigma` that reverses the quiver, with the
    /// matching arrow bijection `a: i->j` to `b: sigma(j)->sigma(i)`.
    pub fn find_duality(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        for sigma in permutations(self.vertices) {
            if (0..self.vertices).any(|v| sigma[sigma[v]] != v) {
                continue;
            }
            let mut used = vec![false; self.arrows.len()];
            let mut map = Vec::with_capacity(self.arrows.len());
            for &(i, j) in &self.arrows {
                let target = (sigma[j], sigma[i]);
                match (0..self.arrows.len()).find(|&b| !used[b] && self.arrows[b] == target) {
                    Some(b) => {
                        used[b] = true;
                        map.push(b);
                    }
                    None => break,
                }
            }
            if map.len() == self.arrows.len() {
                return Some((sigma, map));
            }
        }
        None
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A representation: `mats[a]` is `dims[j] x dims[i]` for arrow `a: i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub mats: Vec<Mat>,
}

impl Rep {
    pub fn zero(shape: &QuiverShape, dims: &[usize]) -> Rep {
        Rep {
            dims: dims.to_vec(),
            mats: shape
                .arrows
                .iter()
                .map(|&(i, j)| Mat::zeros(dims[j], dims[i]))
                .collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Base-`p` code; the first entry is the most significant digit.
    pub fn encode(&self, p: u32) -> u64 {
        let mut c = 0u64;
        for m in &self.mats {
            for &x in &m.data {
                c = c * p as u64 + x as u64;
            }
        }
        c
    }

    pub fn decode(shape: &QuiverShape, dims: &[usize], p: u32, mut code: u64) -> Rep {
        let mut r = Rep::zero(shape, dims);
        for m in r.mats.iter_mut().rev() {
            for x in m.data.iter_mut().rev() {
                *x = (code % p as u64) as u32;
                code /= p as u64;
            }
        }
        r
    }

    /// Whether the per-vertex subspaces are closed under every arrow.
    pub fn is_subrep(&self, f: &Fp, shape: &QuiverShape, subs: &[Subspace]) -> bool {
        shape.arrows.iter().zip(&self.mats).all(|(&(i, j), m)| {
            subs[i]
                .basis
                .iter()
                .all(|b| subs[j].contains(f, &m.apply(f, b)))
        })
    }

    /// Every subrepresentation, as per-vertex subspace tuples.
    pub fn subreps(&self, f: &Fp, shape: &QuiverShape, cache: &SubspaceCache) -> Vec<Vec<Subspace>> {
        let lists: Vec<_> = self.dims.iter().map(|&d| cache.get(f, d)).collect();
        let mut out = Vec::new();
        let mut cur: Vec<Subspace> = Vec::with_capacity(self.dims.len());
        self.subreps_rec(f, shape, &lists, &mut cur, &mut out);
        out
    }

    fn subreps_rec(
        &self,
        f: &Fp,
        shape: &QuiverShape,
        lists: &[std::sync::Arc<Vec<Subspace>>],
        cur: &mut Vec<Subspace>,
        out: &mut Vec<Vec<Subspace>>,
    ) {
        let v = cur.len();
        if v == lists.len() {
            out.push(cur.clone());
            return;
        }
        for s in lists[v].iter() {
            cur.push(s.clone());
            // arrows whose endpoints are both fixed now
            let ok = shape.arrows.iter().zip(&self.mats).all(|(&(i, j), m)| {
                if i.max(j) != v {
                    return true;
                }
                cur[i]
                    .basis
                    .iter()
                    .all(|b| cur[j].contains(f, &m.apply(f, b)))
            });
            if ok {
                self.subreps_rec(f, shape, lists, cur, out);
            }
            cur.pop();
        }
    }

    pub fn restrict(&self, f: &Fp, shape: &QuiverShape, subs: &[Subspace]) -> Rep {
        let dims: Vec<usize> = subs.iter().map(|s| s.dim()).collect();
        let mut r = Rep::zero(shape, &dims);
        for (a, &(i, j)) in shape.arrows.iter().enumerate() {
            for (c, b) in subs[i].basis.iter().enumerate() {
                let img = self.mats[a].apply(f, b);
                for (row, x) in subs[j].coords(&img).into_iter().enumerate() {
                    r.mats[a].set(row, c, x);
                }
            }
        }
        r
    }

    pub fn quotient(&self, f: &Fp, shape: &QuiverShape, subs: &[Subspace]) -> Rep {
        let frees: Vec<Vec<usize>> = subs.iter().map(|s| s.free_columns()).collect();
        let dims: Vec<usize> = frees.iter().map(|v| v.len()).collect();
        let mut r = Rep::zero(shape, &dims);
        for (a, &(i, j)) in shape.arrows.iter().enumerate() {
            for (c, &col) in frees[i].iter().enumerate() {
                let img = self.mats[a].column(col);
                for (row, x) in subs[j].quotient_coords(f, &img).into_iter().enumerate() {
                    r.mats[a].set(row, c, x);
                }
            }
        }
        r
    }

    /// The subrepresentation generated by `w` placed at `vertex`.
    pub fn generated(&self, f: &Fp, shape: &QuiverShape, vertex: usize, w: &[u32]) -> Vec<Subspace> {
        let mut subs: Vec<Subspace> = self.dims.iter().map(|&d| Subspace::zero(d)).collect();
        subs[vertex] = Subspace::span(f, self.dims[vertex], &[w.to_vec()]);
        loop {
            let mut changed = false;
            for (a, &(i, j)) in shape.arrows.iter().enumerate() {
                let imgs: Vec<Vec<u32>> = subs[i]
                    .basis
                    .iter()
                    .map(|b| self.mats[a].apply(f, b))
                    .filter(|v| !subs[j].contains(f, v))
                    .collect();
                if !imgs.is_empty() {
                    let mut all = subs[j].basis.clone();
                    all.extend(imgs);
                    subs[j] = Subspace::span(f, self.dims[j], &all);
                    changed = true;
                }
            }
            if !changed {
                return subs;
            }
        }
    }

    /// Dimension of `Hom(a, b)` as a vector space.
    pub fn hom_dim(f: &Fp, shape: &QuiverShape, a: &Rep, b: &Rep) -> usize {
        let mut offs = Vec::with_capacity(shape.vertices);
        let mut n = 0;
        for v in 0..shape.vertices {
            offs.push(n);
            n += a.dims[v] * b.dims[v];
        }
        if n == 0 {
            return 0;
        }
        let var = |v: usize, r: usize, c: usize| offs[v] + r * a.dims[v] + c;
        let mut eqs: Vec<Vec<u32>> = Vec::new();
        for (k, &(i, j)) in shape.arrows.iter().enumerate() {
            let (am, bm) = (&a.mats[k], &b.mats[k]);
            // (phi_j A)[r][c] - (B phi_i)[r][c] = 0
            for r in 0..b.dims[j] {
                for c in 0..a.dims[i] {
                    let mut row = vec![0u32; n];
                    for t in 0..a.dims[j] {
                        let x = am.get(t, c);
                        let idx = var(j, r, t);
                        row[idx] = f.add(row[idx], x);
                    }
                    for t in 0..b.dims[i] {
                        let x = bm.get(r, t);
                        let idx = var(i, t, c);
                        row[idx] = f.sub(row[idx], x);
                    }
                    eqs.push(row);
                }
            }
        }
        let rank = super::fp::rref(f, &mut eqs).len();
        n - rank
    }

    /// Vector-space dual transported along the reversing involution.
    pub fn dual(&self, sigma: &[usize], arrow_map: &[usize]) -> Rep {
        let mut dims = vec![0; self.dims.len()];
        for (v, &d) in self.dims.iter().enumerate() {
            dims[sigma[v]] = d;
        }
        let mut mats = vec![Mat::zeros(0, 0); self.mats.len()];
        for (a, m) in self.mats.iter().enumerate() {
            mats[arrow_map[a]] = m.transpose();
        }
        Rep { dims, mats }
    }

    pub fn direct_sum(&self, o: &Rep) -> Rep {
        let dims: Vec<usize> = self.dims.iter().zip(&o.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&o.mats)
            .map(|(x, y)| {
                let mut m = Mat::zeros(x.rows + y.rows, x.cols + y.cols);
                for r in 0..x.rows {
                    for c in 0..x.cols {
                        m.set(r, c, x.get(r, c));
                    }
                }
                for r in 0..y.rows {
                    for c in 0..y.cols {
                        m.set(x.rows + r, x.cols + c, y.get(r, c));
                    }
                }
                m
            })
            .collect();
        Rep { dims, mats }
    }
}
