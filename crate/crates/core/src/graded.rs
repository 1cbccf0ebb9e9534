//! Graded vector spaces, graded maps, chain complexes and their homology.
//!
//! Every object lives on an explicit finite window of degrees. A complex may be
//! a truncation of an infinite one; `exact_through` records the last degree in
//! which its data is complete, and homology refuses to answer past it.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, Solution, SparseVec};

/// A finite-dimensional graded vector space with labelled bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    lo: i32,
    labels: Vec<Vec<String>>,
    offsets: Vec<usize>,
}

impl GradedSpace {
    /// `labels[k]` is the basis of degree `lo + k`.
    pub fn new(field: Field, lo: i32, labels: Vec<Vec<String>>) -> Result<Self> {
        for (k, ls) in labels.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for l in ls {
                if !seen.insert(l.as_str()) {
                    return Err(Error::Dimension(format!(
                        "label `{l}` repeated in degree {}",
                        lo + k as i32
                    )));
                }
            }
        }
        let mut offsets = Vec::with_capacity(labels.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for ls in &labels {
            acc += ls.len();
            offsets.push(acc);
        }
        Ok(GradedSpace {
            field,
            lo,
            labels,
            offsets,
        })
    }

    pub fn zero(field: Field) -> Self {
        GradedSpace::new(field, 0, Vec::new()).unwrap()
    }

    /// Builds from `(label, degree)` pairs in insertion order.
    pub fn from_pairs<S: AsRef<str>>(field: Field, pairs: &[(S, i32)]) -> Result<Self> {
        if pairs.is_empty() {
            return Ok(Self::zero(field));
        }
        let lo = pairs.iter().map(|p| p.1).min().unwrap();
        let hi = pairs.iter().map(|p| p.1).max().unwrap();
        let mut labels = vec![Vec::new(); (hi - lo + 1) as usize];
        for (l, d) in pairs {
            labels[(d - lo) as usize].push(l.as_ref().to_string());
        }
        GradedSpace::new(field, lo, labels)
    }

    /// Generic labels `<prefix><degree>_<index>`.
    pub fn from_dims(field: Field, lo: i32, dims: &[usize], prefix: &str) -> Self {
        let labels = dims
            .iter()
            .enumerate()
            .map(|(k, &n)| (0..n).map(|i| format!("{prefix}{}_{i}", lo + k as i32)).collect())
            .collect();
        GradedSpace::new(field, lo, labels).unwrap()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top of the window; `lo - 1` for an empty window.
    pub fn hi(&self) -> i32 {
        self.lo + self.labels.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, d: i32) -> usize {
        self.labels_in(d).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Lowest degree with a nonzero component.
    pub fn inf(&self) -> Option<i32> {
        self.degrees().find(|&d| self.dim(d) > 0)
    }

    /// Highest degree with a nonzero component.
    pub fn sup(&self) -> Option<i32> {
        self.degrees().rev().find(|&d| self.dim(d) > 0)
    }

    pub fn labels_in(&self, d: i32) -> &[String] {
        if d < self.lo || d > self.hi() {
            &[]
        } else {
            &self.labels[(d - self.lo) as usize]
        }
    }

    /// Global index of the first basis element of degree `d`.
    pub fn offset(&self, d: i32) -> usize {
        if d < self.lo {
            0
        } else if d > self.hi() {
            self.total_dim()
        } else {
            self.offsets[(d - self.lo) as usize]
        }
    }

    pub fn global(&self, d: i32, i: usize) -> usize {
        debug_assert!(i < self.dim(d));
        self.offset(d) + i
    }

    /// `(degree, local index)` of a global index.
    pub fn local(&self, g: usize) -> (i32, usize) {
        let k = self.offsets.partition_point(|&o| o <= g) - 1;
        (self.lo + k as i32, g - self.offsets[k])
    }

    pub fn degree_of(&self, g: usize) -> i32 {
        self.local(g).0
    }

    pub fn label(&self, g: usize) -> &str {
        let (d, i) = self.local(g);
        &self.labels_in(d)[i]
    }

    /// Global index of the first basis element with this label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().flatten().position(|l| l == label)
    }

    pub fn all_labels(&self) -> impl Iterator<Item = &String> {
        self.labels.iter().flatten()
    }

    /// Same labels, degrees raised by `k`.
    pub fn shifted(&self, k: i32) -> GradedSpace {
        GradedSpace {
            lo: self.lo + k,
            ..self.clone()
        }
    }

    /// Restricts a global vector to degree `d`, in local coordinates.
    pub fn component(&self, v: &SparseVec, d: i32) -> SparseVec {
        let lo = self.offset(d);
        v.slice(lo, lo + self.dim(d))
    }

    /// Local coordinates in degree `d` to a global vector.
    pub fn embed(&self, v: &SparseVec, d: i32) -> SparseVec {
        v.shifted(self.offset(d))
    }

    /// Whether every entry of `v` sits in degree `d`.
    pub fn is_homogeneous(&self, v: &SparseVec, d: i32) -> bool {
        v.iter().all(|(g, _)| *g < self.total_dim() && self.degree_of(*g) == d)
    }
}

/// Direct sum of graded spaces, left summand first in each degree.
pub fn direct_sum_space(a: &GradedSpace, b: &GradedSpace) -> Result<GradedSpace> {
    if a.field != b.field {
        return Err(Error::FieldMismatch {
            expected: a.field,
            found: b.field,
        });
    }
    let (lo, hi) = joint_window(a, b);
    let labels = (lo..=hi)
        .map(|d| a.labels_in(d).iter().chain(b.labels_in(d)).cloned().collect())
        .collect();
    GradedSpace::new(a.field, lo, labels)
}

fn joint_window(a: &GradedSpace, b: &GradedSpace) -> (i32, i32) {
    match (
        a.total_dim() == 0 && a.labels.is_empty(),
        b.total_dim() == 0 && b.labels.is_empty(),
    ) {
        (true, _) => (b.lo, b.hi()),
        (_, true) => (a.lo, a.hi()),
        _ => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

/// A map of graded spaces raising degree by `shift`, stored per source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub shift: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn new(shift: i32) -> Self {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    /// Builds from the image of every source basis element, given globally.
    pub fn from_global(source: &GradedSpace, target: &GradedSpace, shift: i32, images: &[SparseVec]) -> Result<Self> {
        if images.len() != source.total_dim() {
            return Err(Error::Dimension(format!(
                "{} images for a source of dimension {}",
                images.len(),
                source.total_dim()
            )));
        }
        let mut map = GradedMap::new(shift);
        for d in source.degrees() {
            let td = d + shift;
            let mut cols = Vec::with_capacity(source.dim(d));
            for i in 0..source.dim(d) {
                let img = &images[source.global(d, i)];
                if !target.is_homogeneous(img, td) {
                    return Err(Error::Dimension(format!(
                        "image of `{}` is not homogeneous of degree {td}",
                        source.labels_in(d)[i]
                    )));
                }
                cols.push(target.component(img, td));
            }
            map.set(d, Matrix::from_columns(source.field(), target.dim(td), cols)?);
        }
        Ok(map)
    }

    pub fn set(&mut self, d: i32, m: Matrix) {
        if m.is_zero() {
            self.blocks.remove(&d);
        } else {
            self.blocks.insert(d, m);
        }
    }

    /// Block from source degree `d`, zero when absent.
    pub fn block(&self, d: i32, source: &GradedSpace, target: &GradedSpace) -> Matrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(source.field(), target.dim(d + self.shift), source.dim(d)))
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    /// Applies the map to a vector of degree `d` in local coordinates.
    pub fn apply(&self, d: i32, v: &SparseVec) -> SparseVec {
        match self.blocks.get(&d) {
            Some(m) => m.mul_vec(v),
            None => SparseVec::new(),
        }
    }

    /// Applies the map to a global vector.
    pub fn apply_global(&self, source: &GradedSpace, target: &GradedSpace, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        let one = source.field().one();
        for d in source.degrees() {
            let c = source.component(v, d);
            if !c.is_zero() {
                out.axpy(&one, &target.embed(&self.apply(d, &c), d + self.shift));
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(
        &self,
        other: &GradedMap,
        mid: &GradedSpace,
        source: &GradedSpace,
        target: &GradedSpace,
    ) -> Result<GradedMap> {
        let mut out = GradedMap::new(self.shift + other.shift);
        for d in source.degrees() {
            let a = other.block(d, source, mid);
            let b = self.block(d + other.shift, mid, target);
            out.set(d, b.compose(&a)?);
        }
        Ok(out)
    }
}

/// A graded space with a degree −1 differential, possibly truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    space: GradedSpace,
    /// `diff[k]` is `∂` out of degree `lo + k`.
    diff: Vec<Matrix>,
    exact_through: Option<i32>,
}

impl ChainComplex {
    /// Builds from per-degree blocks `∂_d : C_d → C_{d-1}` and checks `∂∘∂ = 0`.
    pub fn new(space: GradedSpace, blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        let field = space.field();
        let mut diff = Vec::with_capacity(space.dims().len());
        for d in space.degrees() {
            let m = match blocks.get(&d) {
                Some(m) => {
                    if m.field() != field {
                        return Err(Error::FieldMismatch {
                            expected: field,
                            found: m.field(),
                        });
                    }
                    if m.rows() != space.dim(d - 1) || m.cols() != space.dim(d) {
                        return Err(Error::Dimension(format!(
                            "∂ block at degree {d} is {}×{}, expected {}×{}",
                            m.rows(),
                            m.cols(),
                            space.dim(d - 1),
                            space.dim(d)
                        )));
                    }
                    m.clone()
                }
                None => Matrix::zeros(field, space.dim(d - 1), space.dim(d)),
            };
            diff.push(m);
        }
        if let Some(&d) = blocks
            .keys()
            .find(|&&d| !space.degrees().contains(&d) && !blocks[&d].is_zero())
        {
            return Err(Error::Dimension(format!("∂ block at degree {d} outside the window")));
        }
        let c = ChainComplex {
            space,
            diff,
            exact_through: None,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Builds from the differential of each basis element, given globally.
    pub fn from_global(space: GradedSpace, images: &[SparseVec]) -> Result<Self> {
        let map = GradedMap::from_global(&space, &space, -1, images)?;
        ChainComplex::new(space, map.blocks)
    }

    pub fn zero(field: Field) -> Self {
        ChainComplex::new(GradedSpace::zero(field), BTreeMap::new()).unwrap()
    }

    /// A complex with zero differential.
    pub fn trivial(space: GradedSpace) -> Self {
        ChainComplex::new(space, BTreeMap::new()).unwrap()
    }

    fn check_square_zero(&self) -> Result<()> {
        let bad = self
            .space
            .degrees()
            .collect::<Vec<_>>()
            .par_iter()
            .filter_map(|&d| {
                let outer = self.diff_at(d - 1);
                let inner = self.diff_at(d);
                match outer.compose(&inner) {
                    Ok(m) if m.is_zero() => None,
                    _ => Some(d),
                }
            })
            .min();
        match bad {
            Some(d) => Err(Error::NotAComplex { degree: d }),
            None => Ok(()),
        }
    }

    pub fn with_exact_through(mut self, n: Option<i32>) -> Self {
        self.exact_through = n;
        self
    }

    pub fn exact_through(&self) -> Option<i32> {
        self.exact_through
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self, d: i32) -> usize {
        self.space.dim(d)
    }

    /// `∂_d : C_d → C_{d-1}`.
    pub fn diff_at(&self, d: i32) -> Matrix {
        if d < self.space.lo() || d > self.space.hi() {
            Matrix::zeros(self.field(), self.dim(d - 1), self.dim(d))
        } else {
            self.diff[(d - self.space.lo()) as usize].clone()
        }
    }

    fn diff_ref(&self, d: i32) -> Option<&Matrix> {
        if d < self.space.lo() || d > self.space.hi() {
            None
        } else {
            Some(&self.diff[(d - self.space.lo()) as usize])
        }
    }

    /// `∂` of a vector of degree `d` in local coordinates.
    pub fn apply_diff(&self, d: i32, v: &SparseVec) -> SparseVec {
        match self.diff_ref(d) {
            Some(m) => m.mul_vec(v),
            None => SparseVec::new(),
        }
    }

    /// `∂` of the global basis element `g`, as a global vector.
    pub fn global_diff(&self, g: usize) -> SparseVec {
        let (d, i) = self.space.local(g);
        let col = self.diff_ref(d).map(|m| m.column(i)).unwrap_or_default();
        self.space.embed(&col, d - 1)
    }

    /// `∂` of an arbitrary global vector.
    pub fn apply_global(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (g, c) in v.iter() {
            out.axpy(c, &self.global_diff(*g));
        }
        out
    }

    /// Whether `H_d` can be computed from the data present.
    pub fn is_clean(&self, d: i32) -> bool {
        self.exact_through.is_none_or(|n| d < n)
    }

    pub fn check_clean(&self, d: i32) -> Result<()> {
        match self.exact_through {
            Some(n) if d + 1 > n => Err(Error::Truncation {
                degree: d,
                exact_through: n,
            }),
            _ => Ok(()),
        }
    }

    /// Highest degree whose homology is clean, if bounded.
    pub fn clean_top(&self) -> Option<i32> {
        self.exact_through.map(|n| n - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.space.total_dim() == 0
    }
}

/// Homology in one degree, with representatives and a classifier.
#[derive(Clone, Debug)]
pub struct HomologyDegree {
    pub degree: i32,
    reps: Vec<SparseVec>,
    classifier: Echelon,
}

impl HomologyDegree {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Cycle representatives in local coordinates.
    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Class coordinates of a cycle; errors if `v` is not a cycle.
    pub fn project(&self, v: &SparseVec) -> Result<SparseVec> {
        let (res, coords) = self.classifier.reduce(v);
        if res.is_zero() {
            Ok(coords)
        } else {
            Err(Error::Precondition(format!(
                "vector in degree {} is not a cycle",
                self.degree
            )))
        }
    }

    pub fn is_boundary(&self, v: &SparseVec) -> bool {
        matches!(self.project(v), Ok(c) if c.is_zero())
    }
}

/// Homology of a complex over a window of degrees.
#[derive(Clone, Debug)]
pub struct Homology {
    pub lo: i32,
    degrees: Vec<HomologyDegree>,
}

impl Homology {
    pub fn hi(&self) -> i32 {
        self.lo + self.degrees.len() as i32 - 1
    }

    pub fn at(&self, d: i32) -> Option<&HomologyDegree> {
        if d < self.lo || d > self.hi() {
            None
        } else {
            Some(&self.degrees[(d - self.lo) as usize])
        }
    }

    pub fn dim(&self, d: i32) -> usize {
        self.at(d).map_or(0, |h| h.dim())
    }

    /// Dimensions across the window, lowest degree first.
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.dim()).collect()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(|h| h.dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

/// Homology of `c` in degree `d`, listing classes of `preferred` cycles first.
pub fn homology_degree(c: &ChainComplex, d: i32, preferred: &[SparseVec]) -> Result<HomologyDegree> {
    c.check_clean(d)?;
    let field = c.field();
    let mut classifier = Echelon::new(field);
    for col in c.diff_at(d + 1).columns() {
        classifier.insert(&col, SparseVec::new());
    }
    let cycles = c.diff_at(d).kernel_basis();
    let zero_check = c.diff_at(d);
    let mut reps = Vec::new();
    for z in preferred.iter().chain(cycles.iter()) {
        if !zero_check.mul_vec(z).is_zero() {
            return Err(Error::Precondition(format!(
                "preferred representative in degree {d} is not a cycle"
            )));
        }
        let (res, pay) = classifier.reduce(z);
        if res.is_zero() {
            continue;
        }
        let j = reps.len();
        let mut p = SparseVec::unit(j, field);
        p.axpy(&field.from_i64(-1), &pay);
        classifier.insert_reduced(res, p);
        reps.push(z.clone());
    }
    Ok(HomologyDegree {
        degree: d,
        reps,
        classifier,
    })
}

/// Homology over `[lo, hi]`, or the whole window when `None`.
pub fn homology(c: &ChainComplex, window: Option<(i32, i32)>) -> Result<Homology> {
    homology_with(c, window, &BTreeMap::new())
}

/// As [`homology`], with preferred representatives in chosen degrees.
pub fn homology_with(
    c: &ChainComplex,
    window: Option<(i32, i32)>,
    preferred: &BTreeMap<i32, Vec<SparseVec>>,
) -> Result<Homology> {
    let (lo, hi) = window.unwrap_or((c.space.lo(), c.space.hi()));
    let degrees: Vec<i32> = (lo..=hi).collect();
    let empty = Vec::new();
    let out: Vec<Result<HomologyDegree>> = degrees
        .par_iter()
        .map(|&d| homology_degree(c, d, preferred.get(&d).unwrap_or(&empty)))
        .collect();
    Ok(Homology {
        lo,
        degrees: out.into_iter().collect::<Result<_>>()?,
    })
}

/// Homology over every clean degree of the window.
pub fn homology_clean(c: &ChainComplex) -> Result<Homology> {
    let hi = match c.clean_top() {
        Some(t) => t.min(c.space.hi()),
        None => c.space.hi(),
    };
    homology(c, Some((c.space.lo(), hi)))
}

/// Checks that `f` (shift `f.shift`) commutes with the differentials up to
/// the sign `(-1)^shift`, and reports the first failing degree.
pub fn check_chain_map(source: &ChainComplex, target: &ChainComplex, f: &GradedMap) -> Result<()> {
    let sign = source.field().sign(f.shift as i64);
    for d in source.space.degrees() {
        let lhs = target
            .diff_at(d + f.shift)
            .compose(&f.block(d, &source.space, &target.space))?;
        let rhs = f
            .block(d - 1, &source.space, &target.space)
            .compose(&source.diff_at(d))?
            .scale(&sign);
        if lhs != rhs {
            return Err(Error::Axiom(format!("not a chain map at degree {d}")));
        }
    }
    Ok(())
}

/// Matrix of the map induced on homology in degree `d`.
pub fn induced_on_homology(
    field: Field,
    f: &GradedMap,
    d: i32,
    hs: &HomologyDegree,
    ht: &HomologyDegree,
) -> Result<Matrix> {
    let cols = hs
        .reps()
        .iter()
        .map(|z| ht.project(&f.apply(d, z)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(field, ht.dim(), cols)
}

/// Whether `f` induces isomorphisms on homology over `[lo, hi]`.
pub fn is_quasi_iso(source: &ChainComplex, target: &ChainComplex, f: &GradedMap, window: (i32, i32)) -> Result<bool> {
    let hs = homology(source, Some(window))?;
    let ht = homology(target, Some(window))?;
    for d in window.0..=window.1 {
        let (a, b) = (hs.at(d).unwrap(), ht.at(d).unwrap());
        if a.dim() != b.dim() {
            return Ok(false);
        }
        if a.dim() > 0 && induced_on_homology(source.field(), f, d, a, b)?.rank() != a.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σc`: degrees raised by one, differential negated.
pub fn suspension(c: &ChainComplex) -> ChainComplex {
    let minus = c.field().from_i64(-1);
    ChainComplex {
        space: c.space.shifted(1),
        diff: c.diff.iter().map(|m| m.scale(&minus)).collect(),
        exact_through: c.exact_through.map(|n| n + 1),
    }
}

/// Direct sum, left summand first in each degree.
pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    let space = direct_sum_space(&a.space, &b.space)?;
    let mut images = Vec::with_capacity(space.total_dim());
    for d in space.degrees() {
        for i in 0..space.dim(d) {
            let da = a.dim(d - 1);
            let local = if i < a.dim(d) {
                a.apply_diff(d, &SparseVec::unit(i, a.field()))
            } else {
                b.apply_diff(d, &SparseVec::unit(i - a.dim(d), b.field())).shifted(da)
            };
            images.push(space.embed(&local, d - 1));
        }
    }
    let exact = min_opt(a.exact_through, b.exact_through);
    Ok(ChainComplex::from_global(space, &images)?.with_exact_through(exact))
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Mapping cone of a degree-0 chain map: `(s,t) ↦ (−∂s, ∂t + ψ(s))`.
///
/// In each degree the suspended source comes first, labels prefixed by `Σ`.
pub fn cone(source: &ChainComplex, target: &ChainComplex, psi: &GradedMap) -> Result<ChainComplex> {
    if psi.shift != 0 {
        return Err(Error::Precondition("cone needs a degree-0 map".into()));
    }
    check_chain_map(source, target, psi)?;
    let field = source.field();
    let ss = suspension(source);
    let relabeled = GradedSpace::new(
        field,
        ss.space.lo(),
        ss.space
            .degrees()
            .map(|d| ss.space.labels_in(d).iter().map(|l| format!("Σ{l}")).collect())
            .collect(),
    )?;
    let space = direct_sum_space(&relabeled, &target.space)?;
    let mut images = Vec::with_capacity(space.total_dim());
    for n in space.degrees() {
        let s_dim = source.dim(n - 1);
        let s_below = source.dim(n - 2);
        for i in 0..s_dim {
            let e = SparseVec::unit(i, field);
            let mut v = source.apply_diff(n - 1, &e).neg();
            v.axpy(&field.one(), &psi.apply(n - 1, &e).shifted(s_below));
            images.push(space.embed(&v, n - 1));
        }
        for i in 0..target.dim(n) {
            let v = target.apply_diff(n, &SparseVec::unit(i, field)).shifted(s_below);
            images.push(space.embed(&v, n - 1));
        }
    }
    let exact = min_opt(source.exact_through.map(|e| e + 1), target.exact_through);
    Ok(ChainComplex::from_global(space, &images)?.with_exact_through(exact))
}

/// Subcomplex spanned by the given vectors in each degree, with its inclusion.
///
/// The vectors in each degree must be independent and closed under `∂`.
pub fn subcomplex(
    c: &ChainComplex,
    basis: &BTreeMap<i32, Vec<SparseVec>>,
    prefix: &str,
) -> Result<(ChainComplex, GradedMap)> {
    let field = c.field();
    let degs: Vec<i32> = c.space.degrees().collect();
    let dims: Vec<usize> = degs.iter().map(|d| basis.get(d).map_or(0, |b| b.len())).collect();
    let space = GradedSpace::from_dims(field, c.space.lo(), &dims, prefix);
    let mut coords: HashMap<i32, Echelon> = HashMap::new();
    for (&d, vs) in basis {
        let mut e = Echelon::new(field);
        for (j, v) in vs.iter().enumerate() {
            if e.insert(v, SparseVec::unit(j, field)).is_none() {
                return Err(Error::Precondition(format!(
                    "subcomplex basis in degree {d} is dependent"
                )));
            }
        }
        coords.insert(d, e);
    }
    let empty = Echelon::new(field);
    let mut images = Vec::new();
    let mut incl = GradedMap::new(0);
    for &d in &degs {
        let vs = basis.get(&d).cloned().unwrap_or_default();
        let below = coords.get(&(d - 1)).unwrap_or(&empty);
        for v in &vs {
            let dv = c.apply_diff(d, v);
            let (res, pay) = below.reduce(&dv);
            if !res.is_zero() {
                return Err(Error::Precondition(format!("span in degree {d} is not closed under ∂")));
            }
            images.push(space.embed(&pay, d - 1));
        }
        incl.set(d, Matrix::from_columns(field, c.dim(d), vs)?);
    }
    let sub = ChainComplex::from_global(space, &images)?.with_exact_through(c.exact_through);
    Ok((sub, incl))
}

/// Quotient of `c` by the span of the given vectors, with the projection.
///
/// The quotient basis is the standard basis vectors outside the pivots of the
/// relation span, in their original order.
pub fn quotient(c: &ChainComplex, relations: &BTreeMap<i32, Vec<SparseVec>>) -> Result<(ChainComplex, GradedMap)> {
    quotient_kept(c, relations).map(|(q, p, _)| (q, p))
}

/// [`quotient`], also returning the kept standard basis indices per degree.
pub fn quotient_kept(
    c: &ChainComplex,
    relations: &BTreeMap<i32, Vec<SparseVec>>,
) -> Result<(ChainComplex, GradedMap, BTreeMap<i32, Vec<usize>>)> {
    let field = c.field();
    let mut echelons: HashMap<i32, Echelon> = HashMap::new();
    for d in c.space.degrees() {
        let mut e = Echelon::new(field);
        for r in relations.get(&d).into_iter().flatten() {
            e.insert(r, SparseVec::new());
        }
        echelons.insert(d, e);
    }
    let kept: HashMap<i32, Vec<usize>> = c
        .space
        .degrees()
        .map(|d| {
            let e = &echelons[&d];
            (d, (0..c.dim(d)).filter(|i| !e.is_pivot(*i)).collect())
        })
        .collect();
    let position: HashMap<i32, HashMap<usize, usize>> = kept
        .iter()
        .map(|(d, ks)| (*d, ks.iter().enumerate().map(|(j, &i)| (i, j)).collect()))
        .collect();
    let project = |d: i32, v: &SparseVec| -> SparseVec {
        let Some(e) = echelons.get(&d) else {
            return SparseVec::new();
        };
        let (res, _) = e.reduce_full(v);
        let pos = &position[&d];
        SparseVec::from_entries(res.iter().map(|(i, s)| (pos[i], s.clone())).collect())
    };
    let labels = c
        .space
        .degrees()
        .map(|d| kept[&d].iter().map(|&i| c.space.labels_in(d)[i].clone()).collect())
        .collect();
    let space = GradedSpace::new(field, c.space.lo(), labels)?;
    let mut images = Vec::with_capacity(space.total_dim());
    let mut proj = GradedMap::new(0);
    for d in c.space.degrees() {
        for r in relations.get(&d).into_iter().flatten() {
            if !project(d - 1, &c.apply_diff(d, r)).is_zero() {
                return Err(Error::Precondition(format!(
                    "relations in degree {d} are not closed under ∂"
                )));
            }
        }
        for &i in &kept[&d] {
            let dv = c.apply_diff(d, &SparseVec::unit(i, field));
            images.push(space.embed(&project(d - 1, &dv), d - 1));
        }
        let cols = (0..c.dim(d)).map(|i| project(d, &SparseVec::unit(i, field))).collect();
        proj.set(d, Matrix::from_columns(field, space.dim(d), cols)?);
    }
    let q = ChainComplex::from_global(space, &images)?.with_exact_through(c.exact_through);
    Ok((q, proj, kept.into_iter().collect()))
}

/// A complex together with a comparison map, as returned by the cone lemmas.
#[derive(Clone, Debug)]
pub struct ConeComparison {
    pub complex: ChainComplex,
    pub map: GradedMap,
    pub cone: ChainComplex,
}

fn clean_window(c: &ChainComplex) -> (i32, i32) {
    let hi = c.clean_top().map_or(c.space.hi(), |t| t.min(c.space.hi()));
    (c.space.lo(), hi)
}

/// For injective `ψ`, the map `Cone(ψ) → Coker(ψ)`, `(s,t) ↦ t + Im ψ`,
/// verified to be a quasi-isomorphism.
pub fn cone_coker_qiso(source: &ChainComplex, target: &ChainComplex, psi: &GradedMap) -> Result<ConeComparison> {
    for d in source.space.degrees() {
        if psi.block(d, &source.space, &target.space).rank() != source.dim(d) {
            return Err(Error::Precondition(format!("ψ is not injective in degree {d}")));
        }
    }
    let cn = cone(source, target, psi)?;
    let relations: BTreeMap<i32, Vec<SparseVec>> = source
        .space
        .degrees()
        .map(|d| (d, psi.block(d, &source.space, &target.space).columns()))
        .collect();
    let (coker, proj) = quotient(target, &relations)?;
    let mut map = GradedMap::new(0);
    for n in cn.space.degrees() {
        let s = source.dim(n - 1);
        let pb = proj.block(n, &target.space, &coker.space);
        let mut cols = vec![SparseVec::new(); s];
        cols.extend(pb.columns());
        map.set(n, Matrix::from_columns(source.field(), coker.dim(n), cols)?);
    }
    check_chain_map(&cn, &coker, &map)?;
    if !is_quasi_iso(&cn, &coker, &map, clean_window(&cn))? {
        return Err(Error::Internal("cone → coker is not a quasi-isomorphism".into()));
    }
    Ok(ConeComparison {
        complex: coker,
        map,
        cone: cn,
    })
}

/// For surjective `ψ`, the map `ΣKer(ψ) → Cone(ψ)`, `s ↦ (s, 0)`, verified
/// to be a quasi-isomorphism.
pub fn cone_ker_qiso(source: &ChainComplex, target: &ChainComplex, psi: &GradedMap) -> Result<ConeComparison> {
    let mut kernel = BTreeMap::new();
    for d in source.space.degrees() {
        let b = psi.block(d, &source.space, &target.space);
        if b.rank() != target.dim(d) {
            return Err(Error::Precondition(format!("ψ is not surjective in degree {d}")));
        }
        kernel.insert(d, b.kernel_basis());
    }
    for d in target.space.degrees() {
        if !source.space.degrees().contains(&d) && target.dim(d) > 0 {
            return Err(Error::Precondition(format!("ψ is not surjective in degree {d}")));
        }
    }
    let cn = cone(source, target, psi)?;
    let (ker, incl) = subcomplex(source, &kernel, "k")?;
    let sk = suspension(&ker);
    let mut map = GradedMap::new(0);
    for n in sk.space.degrees() {
        let ib = incl.block(n - 1, &ker.space, &source.space);
        map.set(n, Matrix::from_columns(source.field(), cn.dim(n), ib.columns())?);
    }
    check_chain_map(&sk, &cn, &map)?;
    if !is_quasi_iso(&sk, &cn, &map, clean_window(&cn))? {
        return Err(Error::Internal("ΣKer → cone is not a quasi-isomorphism".into()));
    }
    Ok(ConeComparison {
        complex: sk,
        map,
        cone: cn,
    })
}

/// Index of `x_i ⊗ y_j` inside degree `n` of a tensor product.
pub(crate) struct TensorIndex {
    /// `(left degree, left offset within degree n)`.
    starts: HashMap<(i32, i32), usize>,
}

impl TensorIndex {
    pub(crate) fn new(x: &GradedSpace, y: &GradedSpace, n: i32) -> (Self, usize) {
        let mut starts = HashMap::new();
        let mut acc = 0;
        for i in x.degrees() {
            let j = n - i;
            if x.dim(i) > 0 && y.dim(j) > 0 {
                starts.insert((n, i), acc);
                acc += x.dim(i) * y.dim(j);
            }
        }
        (TensorIndex { starts }, acc)
    }

    pub(crate) fn get(&self, n: i32, i: i32, a: usize, b: usize, ydim: usize) -> Option<usize> {
        self.starts.get(&(n, i)).map(|s| s + a * ydim + b)
    }
}

/// Tensor product over the field with the Koszul sign
/// `∂(a⊗b) = ∂a⊗b + (−1)^{|a|} a⊗∂b`.
///
/// Each degree is ordered by (left degree, left index, right index).
pub fn tensor_k(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch {
            expected: x.field(),
            found: y.field(),
        });
    }
    let field = x.field();
    let (xs, ys) = (&x.space, &y.space);
    if xs.total_dim() == 0 || ys.total_dim() == 0 {
        return Ok(ChainComplex::zero(field));
    }
    let lo = xs.lo() + ys.lo();
    let hi = xs.hi() + ys.hi();
    let mut labels = Vec::new();
    let mut indices = HashMap::new();
    for n in lo..=hi {
        let (idx, _) = TensorIndex::new(xs, ys, n);
        indices.insert(n, idx);
        let mut ls = Vec::new();
        for i in xs.degrees() {
            let j = n - i;
            for a in xs.labels_in(i) {
                for b in ys.labels_in(j) {
                    ls.push(format!("{a}⊗{b}"));
                }
            }
        }
        labels.push(ls);
    }
    let space = GradedSpace::new(field, lo, labels)?;
    let mut images = Vec::with_capacity(space.total_dim());
    for n in lo..=hi {
        for i in xs.degrees() {
            let j = n - i;
            for a in 0..xs.dim(i) {
                let da = x.apply_diff(i, &SparseVec::unit(a, field));
                let sign = field.sign(i as i64);
                for b in 0..ys.dim(j) {
                    let mut acc = Vec::new();
                    if n > lo {
                        let below = &indices[&(n - 1)];
                        for (a2, c) in da.iter() {
                            let k = below.get(n - 1, i - 1, *a2, b, ys.dim(j)).unwrap();
                            acc.push((k, c.clone()));
                        }
                        let db = y.apply_diff(j, &SparseVec::unit(b, field));
                        for (b2, c) in db.iter() {
                            let k = below.get(n - 1, i, a, *b2, ys.dim(j - 1)).unwrap();
                            acc.push((k, c.mul(&sign)));
                        }
                    }
                    images.push(space.embed(&SparseVec::from_entries(acc), n - 1));
                }
            }
        }
    }
    let exact = match (x.exact_through, y.exact_through) {
        (None, None) => None,
        (ex, ey) => min_opt(ex.map(|e| e + ys.lo()), ey.map(|e| e + xs.lo())),
    };
    Ok(ChainComplex::from_global(space, &images)?.with_exact_through(exact))
}

/// Solves `∂ y = b` in degree `d` (so `y` has degree `d + 1`).
pub fn lift_boundary(c: &ChainComplex, d: i32, b: &SparseVec) -> Result<Option<SparseVec>> {
    match c.diff_at(d + 1).solve(b)? {
        Solution::Particular(y) => Ok(Some(y)),
        Solution::Inconsistent { .. } => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::Prime(101)
    }

    fn interval() -> ChainComplex {
        // k·a (degree 1) → k·b (degree 0), ∂a = b
        let space = GradedSpace::from_pairs(f(), &[("b", 0), ("a", 1)]).unwrap();
        ChainComplex::from_global(space, &[SparseVec::new(), SparseVec::unit(0, f())]).unwrap()
    }

    #[test]
    fn rejects_square_nonzero() {
        let space = GradedSpace::from_pairs(f(), &[("c", 0), ("b", 1), ("a", 2)]).unwrap();
        let err = ChainComplex::from_global(
            space,
            &[SparseVec::new(), SparseVec::unit(0, f()), SparseVec::unit(1, f())],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAComplex { degree: 2 }));
    }

    #[test]
    fn interval_is_acyclic_and_suspension_shifts() {
        let c = interval();
        assert!(homology(&c, None).unwrap().is_zero());
        let s = suspension(&c);
        assert_eq!(s.space().lo(), 1);
        assert_eq!(s.global_diff(1), SparseVec::unit(0, f()).neg());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let space = GradedSpace::from_pairs(f(), &[("u", 0), ("v", 1)]).unwrap();
        let c = ChainComplex::trivial(space.clone());
        let id =
            GradedMap::from_global(&space, &space, 0, &[SparseVec::unit(0, f()), SparseVec::unit(1, f())]).unwrap();
        let cn = cone(&c, &c, &id).unwrap();
        assert_eq!(cn.space().total_dim(), 4);
        assert!(homology(&cn, None).unwrap().is_zero());
    }

    #[test]
    fn truncation_is_reported() {
        let c = interval().with_exact_through(Some(1));
        assert!(homology_degree(&c, 0, &[]).is_ok());
        assert!(matches!(
            homology_degree(&c, 1, &[]),
            Err(Error::Truncation {
                degree: 1,
                exact_through: 1
            })
        ));
    }

    #[test]
    fn tensor_with_unit_is_identity() {
        let k = ChainComplex::trivial(GradedSpace::from_pairs(f(), &[("1", 0)]).unwrap());
        let c = interval();
        let t = tensor_k(&c, &k).unwrap();
        assert_eq!(t.space().dims(), c.space().dims());
        assert_eq!(t.space().label(1), "a⊗1");
    }
}
