use std::collections::HashMap;

use crate::field::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize, field: Field) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = w.add(&v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    /// Builds a vector from entries already sorted by index with no zeros.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, v)| !v.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.neg())).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, w.mul(c)));
                }
                (Some(_), Some(_)) => {
                    let (i, v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    let s = v.add(&w.mul(c));
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, w.mul(c)));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec, field: Field) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&field.one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec, field: Field) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&field.from_i64(-1), other);
        out
    }

    pub fn dot(&self, other: &SparseVec, field: Field) -> Scalar {
        let mut acc = field.zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, v) = &self.entries[p];
            let (j, w) = &other.entries[q];
            match i.cmp(j) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.add(&v.mul(w));
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Re-indexes every entry; the map may reorder indices but must be injective.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }

    /// Keeps only entries in `[lo, hi)` and shifts them down by `lo`.
    pub fn slice(&self, lo: usize, hi: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, v)| (*i - lo, v.clone()))
                .collect(),
        }
    }

    pub fn shifted(&self, by: usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i + by, v.clone())).collect(),
        }
    }

    pub fn all_in_field(&self, field: Field) -> bool {
        self.entries.iter().all(|(_, v)| field.contains(v))
    }
}

/// Accumulates `Σ c_i v_i` with many small updates, then freezes into a [`SparseVec`].
#[derive(Default)]
pub struct Accumulator {
    map: HashMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator::default()
    }

    pub fn add(&mut self, index: usize, value: Scalar) {
        if value.is_zero() {
            return;
        }
        match self.map.get_mut(&index) {
            Some(v) => *v = v.add(&value),
            None => {
                self.map.insert(index, value);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add(*i, x.mul(c));
        }
    }

    pub fn finish(self) -> SparseVec {
        let mut entries: Vec<(usize, Scalar)> = self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        entries.sort_by_key(|(i, _)| *i);
        SparseVec::from_sorted_unchecked(entries)
    }
}

/// A set of vectors in echelon form keyed by their lowest nonzero index.
///
/// Each stored row carries a payload vector; reducing `v` returns the residual
/// together with the same linear combination applied to the payloads. This
/// tracks kernels, class coordinates and change-of-basis data.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    payloads: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            payloads: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn payloads(&self) -> &[SparseVec] {
        &self.payloads
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().unwrap().0)
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.pivot_of.contains_key(&index)
    }

    /// Eliminates leading entries while they hit a pivot.
    ///
    /// Returns `(residual, payload)` with `v - residual = Σ c_i rows_i` and
    /// `payload = Σ c_i payloads_i`. The residual is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut acc = SparseVec::new();
        while let Some((i, c)) = v.leading().cloned() {
            let Some(&r) = self.pivot_of.get(&i) else {
                break;
            };
            let row = &self.rows[r];
            let factor = c.div(&row.leading().unwrap().1);
            v.axpy(&factor.neg(), row);
            acc.axpy(&factor, &self.payloads[r]);
        }
        (v, acc)
    }

    /// Eliminates every pivot position from `v`, not only the leading one.
    pub fn reduce_full(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut acc = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .iter()
                .find(|(i, _)| *i >= cursor && self.pivot_of.contains_key(i))
                .cloned();
            let Some((i, c)) = next else { break };
            let r = self.pivot_of[&i];
            let row = &self.rows[r];
            let factor = c.div(&row.leading().unwrap().1);
            v.axpy(&factor.neg(), row);
            acc.axpy(&factor, &self.payloads[r]);
            cursor = i + 1;
        }
        (v, acc)
    }

    /// Inserts an already-reduced nonzero residual whose leading index is free.
    pub fn insert_reduced(&mut self, residual: SparseVec, payload: SparseVec) -> usize {
        let lead = residual.leading().expect("inserting zero row").0;
        debug_assert!(!self.pivot_of.contains_key(&lead));
        let idx = self.rows.len();
        self.pivot_of.insert(lead, idx);
        self.rows.push(residual);
        self.payloads.push(payload);
        idx
    }

    /// Reduces `v` and stores it if independent; returns the new row index.
    pub fn insert(&mut self, v: &SparseVec, payload: SparseVec) -> Option<usize> {
        let (res, acc) = self.reduce(v);
        if res.is_zero() {
            return None;
        }
        let mut p = payload;
        p.axpy(&self.field.from_i64(-1), &acc);
        Some(self.insert_reduced(res, p))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}
