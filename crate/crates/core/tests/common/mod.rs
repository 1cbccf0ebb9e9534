//! Independent oracles: dense linear algebra mod p and naive computations over
//! monomial rings, sharing no code with the library.
#![allow(dead_code)]

pub mod props;

use std::collections::HashMap;

pub fn inv(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-reduces in place and returns the pivot columns.
fn reduce(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a matrix given by rows.
pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    reduce(&mut m, p).len()
}

/// Rank of the span of the given vectors.
pub fn span_rank(vs: &[Vec<u64>], p: u64) -> usize {
    rank(vs, p)
}

/// Basis of `{x : A x = 0}` where `a` is given by rows with `ncols` columns.
pub fn kernel(a: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    if m.is_empty() {
        return (0..ncols).map(|i| unit(i, ncols)).collect();
    }
    let pivots = reduce(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

pub fn unit(i: usize, n: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Transposes a list of columns of length `rows` into rows.
pub fn columns_to_rows(cols: &[Vec<u64>], rows: usize) -> Vec<Vec<u64>> {
    (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

/// Incrementally built row echelon form.
pub struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Adds `v`; true when it was independent of the rows so far.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (c, r) in &self.rows {
            let f = v[*c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[c], p);
        for x in v.iter_mut() {
            *x = *x * s % p;
        }
        for (_, r) in self.rows.iter_mut() {
            let f = r[c];
            if f != 0 {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        self.rows.push((c, v));
        true
    }
}

/// `k[x_1..x_n]/(monomials)`, Artinian.
#[derive(Clone, Debug)]
pub struct MonomialRing {
    pub p: u64,
    pub nvars: usize,
    pub ideal: Vec<Vec<u32>>,
    pub basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialRing {
    pub fn new(p: u64, nvars: usize, ideal: Vec<Vec<u32>>) -> Self {
        let in_ideal = |m: &[u32]| ideal.iter().any(|g| divides(g, m));
        let mut basis: Vec<Vec<u32>> = Vec::new();
        let mut frontier = vec![vec![0u32; nvars]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in frontier {
                if in_ideal(&m) || basis.contains(&m) {
                    continue;
                }
                for i in 0..nvars {
                    let mut e = m.clone();
                    e[i] += 1;
                    next.push(e);
                }
                basis.push(m);
            }
            frontier = next;
            assert!(basis.len() < 10_000, "quotient is not Artinian");
        }
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialRing {
            p,
            nvars,
            ideal,
            basis,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn var(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        e
    }

    /// Index of `basis[a] · m`, or `None` when it vanishes.
    pub fn times(&self, a: usize, m: &[u32]) -> Option<usize> {
        let e: Vec<u32> = self.basis[a].iter().zip(m).map(|(x, y)| x + y).collect();
        self.index.get(&e).copied()
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> Option<usize> {
        self.times(a, &self.basis[b])
    }

    /// Acts by the monomial `m` on an element of `R^b` (length `b·dim`).
    pub fn act(&self, m: &[u32], v: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let mut out = vec![0u64; v.len()];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (g, s) = (k / d, k % d);
            if let Some(t) = self.times(s, m) {
                out[g * d + t] = (out[g * d + t] + c) % self.p;
            }
        }
        out
    }

    /// Indices of basis monomials of `R` lying in the ideal generated by `j`.
    pub fn ideal_span(&self, j: &[Vec<u32>]) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| j.iter().any(|g| divides(g, &self.basis[i])))
            .collect()
    }

    /// Minimal generators of a submodule of `R^b` given by a k-basis.
    fn minimal_generators(&self, z: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut span = Echelon::new(self.p);
        for v in z {
            for i in 0..self.nvars {
                span.insert(self.act(&self.var(i), v));
            }
        }
        z.iter().filter(|v| span.insert((*v).clone())).cloned().collect()
    }

    /// Minimal free resolution of `R/(j)` through homological degree `n`:
    /// the images of the generators of each `F_i` in `F_{i-1}`.
    pub fn resolve_cyclic(&self, j: &[Vec<u32>], n: usize) -> Vec<Vec<Vec<u64>>> {
        let d = self.dim();
        let p = self.p;
        let mut maps: Vec<Vec<Vec<u64>>> = vec![vec![unit(0, d)]];
        let z0: Vec<Vec<u64>> = self.ideal_span(j).into_iter().map(|i| unit(i, d)).collect();
        let mut gens = self.minimal_generators(&z0);
        for _ in 1..=n {
            let b_prev = maps.last().unwrap().len();
            if gens.is_empty() {
                maps.push(Vec::new());
                continue;
            }
            let b = gens.len();
            let cols: Vec<Vec<u64>> = (0..b)
                .flat_map(|g| (0..d).map(move |r| (g, r)))
                .map(|(g, r)| self.act(&self.basis[r], &gens[g]))
                .collect();
            let rows = columns_to_rows(&cols, b_prev * d);
            let z = kernel(&rows, b * d, p);
            maps.push(gens);
            gens = self.minimal_generators(&z);
        }
        maps
    }

    /// Betti numbers of `R/(j)` in degrees `0..=n`.
    pub fn betti(&self, j: &[Vec<u32>], n: usize) -> Vec<usize> {
        self.resolve_cyclic(j, n).iter().map(|g| g.len()).collect()
    }

    /// `dim Tor_i(R/(l), R/(j))` for `i ≤ n`.
    pub fn tor_cyclic(&self, l: &[Vec<u32>], j: &[Vec<u32>], n: usize) -> Vec<usize> {
        let p = self.p;
        let maps = self.resolve_cyclic(j, n + 1);
        let killed: Vec<usize> = self.ideal_span(l);
        let kept: Vec<usize> = (0..self.dim()).filter(|i| !killed.contains(i)).collect();
        let d = self.dim();
        let md = kept.len();
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let dims: Vec<usize> = maps.iter().map(|g| g.len() * md).collect();
        // rank of (R/l) ⊗ φ_i : (R/l)^{b_i} → (R/l)^{b_{i-1}}
        let rank_of = |i: usize| -> usize {
            if i == 0 || i >= maps.len() || maps[i].is_empty() {
                return 0;
            }
            let b_prev = maps[i - 1].len();
            let cols: Vec<Vec<u64>> = maps[i]
                .iter()
                .flat_map(|g| kept.iter().map(move |&m| (g, m)))
                .map(|(g, m)| {
                    let img = self.act(&self.basis[m], g);
                    let mut out = vec![0u64; b_prev * md];
                    for (k, &c) in img.iter().enumerate() {
                        if c != 0 {
                            if let Some(&t) = pos.get(&(k % d)) {
                                out[(k / d) * md + t] = (out[(k / d) * md + t] + c) % p;
                            }
                        }
                    }
                    out
                })
                .collect();
            rank(&columns_to_rows(&cols, b_prev * md), p)
        };
        (0..=n).map(|i| dims[i] - rank_of(i) - rank_of(i + 1)).collect()
    }

    /// Homology dimensions of the Koszul complex on the variables.
    pub fn koszul_homology(&self) -> Vec<usize> {
        let n = self.nvars;
        let d = self.dim();
        let p = self.p;
        let subsets: Vec<Vec<Vec<usize>>> = (0..=n)
            .map(|q| {
                (0u32..1 << n)
                    .filter(|s| s.count_ones() as usize == q)
                    .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
                    .collect()
            })
            .collect();
        let rank_of = |q: usize| -> usize {
            if q == 0 || q > n {
                return 0;
            }
            let target: HashMap<&Vec<usize>, usize> = subsets[q - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
            let mut cols = Vec::new();
            for s in &subsets[q] {
                for r in 0..d {
                    let mut v = vec![0u64; subsets[q - 1].len() * d];
                    for (pos, &x) in s.iter().enumerate() {
                        let mut t = s.clone();
                        t.remove(pos);
                        if let Some(rx) = self.times(r, &self.var(x)) {
                            let k = target[&t] * d + rx;
                            let c = if pos % 2 == 0 { 1 } else { p - 1 };
                            v[k] = (v[k] + c) % p;
                        }
                    }
                    cols.push(v);
                }
            }
            rank(&columns_to_rows(&cols, subsets[q - 1].len() * d), p)
        };
        (0..=n)
            .map(|q| subsets[q].len() * d - rank_of(q) - rank_of(q + 1))
            .collect()
    }
}

/// Monomial strings in the library's input syntax.
pub fn monomial_text(e: &[u32], vars: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(vars)
        .filter(|(k, _)| **k > 0)
        .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub const VARS: [&str; 3] = ["x", "y", "z"];
