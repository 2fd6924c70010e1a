//! Orbit decomposition of matrix tuples under the product of general linear groups.

use super::fp::{gl_order, Fp};
use super::rep::{QuiverShape, Rep};

/// One orbit: its minimal code and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub min_code: u64,
    pub size: u128,
}

/// Orbits of all tuples with dimension vector `dims`, plus the code-to-orbit
/// lookup table. Orbits are listed by increasing minimal code.
pub fn orbits(f: &Fp, shape: &QuiverShape, dims: &[usize]) -> (Vec<Orbit>, Vec<u32>) {
    let p = f.p();
    let entries = shape.entry_count(dims);
    let total = (p as u64).pow(entries as u32) as usize;
    let mut table = vec![u32::MAX; total];
    let mut out = Vec::new();
    let omega = f.primitive_root();
    let omega_inv = f.inv(omega);
    let mut stack = Vec::new();
    for start in 0..total {
        if table[start] != u32::MAX {
            continue;
        }
        let id = out.len() as u32;
        table[start] = id;
        stack.push(start as u64);
        let mut size = 0u128;
        while let Some(c) = stack.pop() {
            size += 1;
            let r = Rep::decode(shape, dims, p, c);
            for_each_neighbour(f, shape, &r, omega, omega_inv, |n| {
                let code = n.encode(p) as usize;
                if table[code] == u32::MAX {
                    table[code] = id;
                    stack.push(code as u64);
                }
            });
        }
        out.push(Orbit {
            min_code: start as u64,
            size,
        });
    }
    (out, table)
}

/// Images of `r` under the transvections `I + E_rs` and `diag(omega, 1, ..)`
/// at every vertex.
fn for_each_neighbour(
    f: &Fp,
    shape: &QuiverShape,
    r: &Rep,
    omega: u32,
    omega_inv: u32,
    mut visit: impl FnMut(&Rep),
) {
    for v in 0..shape.vertices {
        let d = r.dims[v];
        for s in 0..d {
            for t in 0..d {
                if s == t {
                    continue;
                }
                let mut n = r.clone();
                for (a, &(i, j)) in shape.arrows.iter().enumerate() {
                    let m = &mut n.mats[a];
                    if j == v {
                        // g A: row s += row t
                        for c in 0..m.cols {
                            let x = f.add(m.get(s, c), m.get(t, c));
                            m.set(s, c, x);
                        }
                    }
                    if i == v {
                        // A g^{-1}: column t -= column s
                        for row in 0..m.rows {
                            let x = f.sub(m.get(row, t), m.get(row, s));
                            m.set(row, t, x);
                        }
                    }
                }
                visit(&n);
            }
        }
        if d > 0 && omega != 1 {
            let mut n = r.clone();
            for (a, &(i, j)) in shape.arrows.iter().enumerate() {
                let m = &mut n.mats[a];
                if j == v {
                    for c in 0..m.cols {
                        let x = f.mul(m.get(0, c), omega);
                        m.set(0, c, x);
                    }
                }
                if i == v {
                    for row in 0..m.rows {
                        let x = f.mul(m.get(row, 0), omega_inv);
                        m.set(row, 0, x);
                    }
                }
            }
            visit(&n);
        }
    }
}

/// `prod_v |GL_{d_v}(F_q)|`.
pub fn group_order(q: u64, dims: &[usize]) -> u128 {
    dims.iter().map(|&d| gl_order(q, d)).product()
}

/// Label for the orbit with minimal code `code`, e.g. `[1,1]#3`.
pub fn label(dims: &[usize], code: u64) -> String {
    let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
    format!("[{}]#{}", d.join(","), code)
}
