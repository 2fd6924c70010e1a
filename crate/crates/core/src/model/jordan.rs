//! Nilpotent Jordan types: partitions, normal forms and centralizer orders.

use crate::coeff::{rat, PolyL};

use super::fp::{Fp, Mat};
use super::rep::Rep;

/// Partitions of `n` with parts at most `max_part`, in reverse
/// lexicographic order: `(2)` comes before `(1,1)`.
pub fn partitions(n: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_part, &mut Vec::new(), &mut out);
    out
}

pub fn label(lambda: &[usize]) -> String {
    let parts: Vec<String> = lambda.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn conjugate(lambda: &[usize]) -> Vec<usize> {
    let m = lambda.first().copied().unwrap_or(0);
    (1..=m).map(|i| lambda.iter().filter(|&&p| p >= i).count()).collect()
}

fn multiplicities(lambda: &[usize]) -> Vec<usize> {
    let m = lambda.first().copied().unwrap_or(0);
    (1..=m).map(|i| lambda.iter().filter(|&&p| p == i).count()).collect()
}

/// Exponent `e` and factors `j` with `|Aut| = q^e prod (q^j - 1)`.
fn aut_shape(lambda: &[usize]) -> (u32, Vec<u32>) {
    let s: usize = conjugate(lambda).iter().map(|c| c * c).sum();
    let mut factors = Vec::new();
    let mut sub = 0;
    for m in multiplicities(lambda) {
        for j in 1..=m {
            factors.push(j as u32);
            sub += j;
        }
    }
    ((s - sub) as u32, factors)
}

/// `|Aut|` of the nilpotent module of type `lambda` over `F_q`:
/// `q^{sum lambda'_i^2} prod_i prod_{j <= m_i} (1 - q^{-j})`.
pub fn aut_order(q: u64, lambda: &[usize]) -> u128 {
    let (e, factors) = aut_shape(lambda);
    let q = q as u128;
    factors
        .iter()
        .fold(q.pow(e), |acc, &j| acc * (q.pow(j) - 1))
}

/// The same count as a polynomial in `L`.
pub fn aut_polynomial(lambda: &[usize]) -> PolyL {
    let (e, factors) = aut_shape(lambda);
    let mut p = PolyL::monomial(rat(1, 1), e as usize);
    for j in factors {
        p = &p * &(PolyL::monomial(rat(1, 1), j as usize) - PolyL::from_ints(&[1]));
    }
    p
}

/// Block-diagonal normal form; within a block `t e_1 = 0`, `t e_k = e_{k-1}`.
pub fn normal_form(lambda: &[usize]) -> Rep {
    let n: usize = lambda.iter().sum();
    let mut m = Mat::zeros(n, n);
    let mut start = 0;
    for &b in lambda {
        for k in 1..b {
            m.set(start + k - 1, start + k, 1);
        }
        start += b;
    }
    Rep {
        dims: vec![n],
        mats: vec![m],
    }
}

/// Jordan type of a nilpotent matrix from the ranks of its powers; `None`
/// when the matrix is not nilpotent.
pub fn jordan_type(f: &Fp, t: &Mat) -> Option<Vec<usize>> {
    let n = t.rows;
    let mut ranks = vec![n];
    let mut power = Mat::identity(n);
    for _ in 0..n {
        power = power.mul(f, t);
        ranks.push(power.rank(f));
    }
    if ranks[n] != 0 {
        return None;
    }
    // number of parts >= k is rank(t^{k-1}) - rank(t^k)
    let conj: Vec<usize> = (1..=n)
        .map(|k| ranks[k - 1] - ranks[k])
        .take_while(|&c| c > 0)
        .collect();
    Some(conjugate(&conj))
}
