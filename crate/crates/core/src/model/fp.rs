//! Arithmetic and linear algebra over a prime field `F_p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The prime field `F_p`; elements are `u32` in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    /// `None` unless `p` is prime.
    pub fn new(p: u64) -> Option<Fp> {
        (is_prime(p) && p < 1 << 16).then_some(Fp { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u32 {
        if self.p == 2 {
            return 1;
        }
        let n = self.p - 1;
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.p)
            .find(|&g| factors.iter().all(|&f| self.pow(g, (n / f) as u64) != 1))
            .expect("prime field has a primitive root")
    }
}

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Fp, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(out.get(i, j), f.mul(a, o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, f: &Fp, v: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self, f: &Fp) -> usize {
        let mut rows: Vec<Vec<u32>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rref(f, &mut rows).len()
    }
}

/// Row-reduces `rows` in place to reduced echelon form, dropping zero rows;
/// returns the pivot columns.
pub fn rref(f: &Fp, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let m = rows[i][c];
                for j in 0..ncols {
                    let v = f.sub(rows[i][j], f.mul(m, rows[r][j]));
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Subspace of `F_p^n` held as a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Subspace {
        Subspace {
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Subspace {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
            .collect();
        Subspace {
            n,
            basis,
            pivots: (0..n).collect(),
        }
    }

    pub fn span(f: &Fp, n: usize, vectors: &[Vec<u32>]) -> Subspace {
        let mut rows = vectors.to_vec();
        let pivots = rref(f, &mut rows);
        Subspace {
            n,
            basis: rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `v` minus its projection along the echelon basis.
    pub fn reduce(&self, f: &Fp, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w
    }

    pub fn contains(&self, f: &Fp, v: &[u32]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis; `v` must lie in the span.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    /// Columns not carrying a pivot; they index a basis of `F^n / self`.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coordinates of the class of `v` in `F^n / self`.
    pub fn quotient_coords(&self, f: &Fp, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(f, v);
        self.free_columns().into_iter().map(|c| w[c]).collect()
    }

    pub fn join(&self, f: &Fp, o: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Subspace::span(f, self.n, &v)
    }
}

/// Every subspace of `F_p^n`, by dimension then pivot set then free entries.
pub fn all_subspaces(f: &Fp, n: usize) -> Vec<Subspace> {
    let p = f.p();
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free positions: (row r, column c) with c > pivot[r], c not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pv = &pivots;
                    ((pv[r] + 1)..n)
                        .filter(move |c| !pv.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![0u32; n]; k];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = 1;
                }
                let mut c = code;
                for &(r, col) in &free {
                    rows[r][col] = (c % p as u64) as u32;
                    c /= p as u64;
                }
                out.push(Subspace {
                    n,
                    basis: rows,
                    pivots: pivots.clone(),
                });
            }
        }
    }
    out
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Shared cache of subspace lists keyed by `(p, n)`.
#[derive(Debug, Default, Clone)]
pub struct SubspaceCache {
    inner: Arc<Mutex<HashMap<(u32, usize), Arc<Vec<Subspace>>>>>,
}

impl SubspaceCache {
    pub fn get(&self, f: &Fp, n: usize) -> Arc<Vec<Subspace>> {
        let key = (f.p(), n);
        if let Some(v) = self.inner.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(all_subspaces(f, n));
        self.inner.lock().unwrap().insert(key, v.clone());
        v
    }
}

/// `|GL_n(F_q)|`.
pub fn gl_order(q: u64, n: usize) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let f = Fp::new(7).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.primitive_root(), 3);
        assert!(Fp::new(4).is_none());
        assert_eq!(Fp::new(2).unwrap().primitive_root(), 1);
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for (p, n) in [(2u64, 3usize), (2, 4), (3, 3), (5, 2)] {
            let f = Fp::new(p).unwrap();
            let subs = all_subspaces(&f, n);
            for k in 0..=n {
                let c = subs.iter().filter(|s| s.dim() == k).count() as u128;
                assert_eq!(c, gaussian_binomial(p, n, k), "p={p} n={n} k={k}");
            }
            // all distinct
            let set: std::collections::HashSet<_> = subs.iter().collect();
            assert_eq!(set.len(), subs.len());
        }
    }

    #[test]
    fn lines_in_the_plane() {
        for p in [2u64, 3, 5] {
            let f = Fp::new(p).unwrap();
            let lines = all_subspaces(&f, 2).iter().filter(|s| s.dim() == 1).count();
            assert_eq!(lines as u64, p + 1);
        }
    }

    #[test]
    fn quotient_coordinates() {
        let f = Fp::new(3).unwrap();
        let u = Subspace::span(&f, 3, &[vec![1, 1, 0]]);
        assert_eq!(u.free_columns(), vec![1, 2]);
        assert_eq!(u.quotient_coords(&f, &[1, 1, 0]), vec![0, 0]);
        assert_eq!(u.quotient_coords(&f, &[1, 0, 2]), vec![2, 2]);
        assert!(u.contains(&f, &[2, 2, 0]));
        assert_eq!(u.coords(&[2, 2, 0]), vec![2]);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 48);
        assert_eq!(gl_order(2, 3), 168);
        assert_eq!(gl_order(5, 0), 1);
    }

    #[test]
    fn rank_of_products() {
        let f = Fp::new(2).unwrap();
        let a = Mat::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(a.rank(&f), 1);
        assert!(a.mul(&f, &a).is_zero());
    }
}
