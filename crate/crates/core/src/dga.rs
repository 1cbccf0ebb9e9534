//! Graded-commutative DG algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::graded::{homology_with, ChainComplex, GradedMap, GradedSpace, Homology};
use crate::linalg::{Accumulator, Echelon, Matrix, SparseVec};

/// A finite-dimensional graded-commutative DG algebra.
///
/// Products are supplied for pairs `a ≤ b` of global basis indices; the
/// opposite order follows from `ab = (−1)^{|a||b|} ba`. The unit is a basis
/// element and its products are filled in automatically.
#[derive(Clone, Debug)]
pub struct DGAlgebra {
    complex: ChainComplex,
    table: Vec<Vec<SparseVec>>,
    unit: usize,
    local: Arc<OnceLock<LocalVerdict>>,
}

impl PartialEq for DGAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.table == other.table && self.unit == other.unit
    }
}

impl Eq for DGAlgebra {}

/// Which axiom a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomKind {
    Degree,
    Unit,
    Commutativity,
    OddSquare,
    Associativity,
    Leibniz,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomKind::Degree => "degree",
            AxiomKind::Unit => "unit",
            AxiomKind::Commutativity => "graded-commutativity",
            AxiomKind::OddSquare => "odd-square",
            AxiomKind::Associativity => "associativity",
            AxiomKind::Leibniz => "leibniz",
        };
        f.write_str(s)
    }
}

/// A failed axiom with the basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub degrees: Vec<i32>,
    pub indices: Vec<usize>,
    pub axiom: AxiomKind,
    pub labels: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({})", self.axiom, self.labels.join(", "))
    }
}

/// Result of [`DGAlgebra::validate`]; empty means every axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Axiom(format!(
                "{v} ({} violation{})",
                self.violations.len(),
                if self.violations.len() == 1 { "" } else { "s" }
            ))),
        }
    }
}

/// The augmentation `A → k` as a functional on global coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    pub values: SparseVec,
}

impl Augmentation {
    pub fn apply(&self, v: &SparseVec, field: Field) -> Scalar {
        self.values.dot(v, field)
    }
}

/// Data of a local DG algebra: the maximal ideal of `A_0` and the augmentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    /// Basis of the maximal ideal of `A_0`, as global vectors.
    pub maximal_ideal_0: Vec<SparseVec>,
    pub augmentation: Augmentation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalVerdict {
    Local(LocalData),
    NotLocal {
        reason: String,
        /// An element `a` of `A_0` with `a` and `1 − a` both non-units.
        witness: Option<SparseVec>,
    },
}

impl LocalVerdict {
    pub fn is_local(&self) -> bool {
        matches!(self, LocalVerdict::Local(_))
    }
}

impl DGAlgebra {
    /// Builds and validates an algebra.
    pub fn new(complex: ChainComplex, unit: usize, products: Vec<(usize, usize, SparseVec)>) -> Result<Self> {
        let a = Self::new_unchecked(complex, unit, products)?;
        a.validate().into_result()?;
        Ok(a)
    }

    /// Builds an algebra without checking the axioms, only degrees and shape.
    pub fn new_unchecked(complex: ChainComplex, unit: usize, products: Vec<(usize, usize, SparseVec)>) -> Result<Self> {
        let space = complex.space().clone();
        let field = space.field();
        let n = space.total_dim();
        if unit >= n {
            return Err(Error::Dimension("unit index out of range".into()));
        }
        if space.degree_of(unit) != 0 {
            return Err(Error::Axiom("the unit must have degree 0".into()));
        }
        let mut upper: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (a, b, v) in products {
            if a >= n || b >= n {
                return Err(Error::Dimension("product index out of range".into()));
            }
            if !v.all_in_field(field) {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: v.iter().next().map(|(_, s)| s.field()).unwrap_or(field),
                });
            }
            let deg = space.degree_of(a) + space.degree_of(b);
            if !space.is_homogeneous(&v, deg) {
                return Err(Error::Axiom(format!(
                    "product {}·{} is not homogeneous of degree {deg}",
                    space.label(a),
                    space.label(b)
                )));
            }
            let (key, v) = if a <= b {
                ((a, b), v)
            } else {
                let s = field.sign((space.degree_of(a) * space.degree_of(b)) as i64);
                ((b, a), v.scale(&s))
            };
            if let Some(old) = upper.get(&key) {
                if *old != v {
                    return Err(Error::Axiom(format!(
                        "conflicting products for {}·{}",
                        space.label(key.0),
                        space.label(key.1)
                    )));
                }
            }
            upper.insert(key, v);
        }
        for b in 0..n {
            let key = (unit.min(b), unit.max(b));
            let e = SparseVec::unit(b, field);
            match upper.get(&key) {
                Some(v) if *v != e => return Err(Error::Axiom(format!("unit law fails at `{}`", space.label(b)))),
                _ => {
                    upper.insert(key, e);
                }
            }
        }
        let mut table = vec![vec![SparseVec::new(); n]; n];
        for ((a, b), v) in upper {
            let s = field.sign((space.degree_of(a) * space.degree_of(b)) as i64);
            table[b][a] = v.scale(&s);
            table[a][b] = v;
        }
        Ok(DGAlgebra {
            complex,
            table,
            unit,
            local: Arc::new(OnceLock::new()),
        })
    }

    /// Builds from a full product table without deriving the opposite order.
    /// Only for validator tests and user-supplied raw tables.
    pub fn from_full_table(complex: ChainComplex, unit: usize, table: Vec<Vec<SparseVec>>) -> Result<Self> {
        let n = complex.space().total_dim();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("product table has the wrong shape".into()));
        }
        Ok(DGAlgebra {
            complex,
            table,
            unit,
            local: Arc::new(OnceLock::new()),
        })
    }

    /// The ground field as an algebra in degree 0.
    pub fn ground(field: Field) -> Self {
        let space = GradedSpace::from_pairs(field, &[("1", 0)]).unwrap();
        DGAlgebra::new(ChainComplex::trivial(space), 0, Vec::new()).unwrap()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn dim(&self) -> usize {
        self.space().total_dim()
    }

    pub fn degree(&self, g: usize) -> i32 {
        self.space().degree_of(g)
    }

    pub fn label(&self, g: usize) -> &str {
        self.space().label(g)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_vec(&self) -> SparseVec {
        SparseVec::unit(self.unit, self.field())
    }

    /// Product of two basis elements, as a global vector.
    pub fn mul_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.table[a][b]
    }

    /// Product of two global vectors.
    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let p = &self.table[*a][*b];
                if !p.is_zero() {
                    acc.add_scaled(&ca.mul(cb), p);
                }
            }
        }
        acc.finish()
    }

    pub fn pow(&self, x: &SparseVec, mut e: u64) -> SparseVec {
        let mut acc = self.unit_vec();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn diff(&self, v: &SparseVec) -> SparseVec {
        self.complex.apply_global(v)
    }

    /// Whether every differential vanishes.
    pub fn has_zero_differential(&self) -> bool {
        (0..self.dim()).all(|g| self.complex.global_diff(g).is_zero())
    }

    /// Global indices of the basis elements of degree `d`.
    pub fn basis_in(&self, d: i32) -> std::ops::Range<usize> {
        let s = self.space();
        s.offset(d)..s.offset(d) + s.dim(d)
    }

    /// Checks every axiom on basis elements; never fails, only reports.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let field = self.field();
        let space = self.space();
        let deg = |g: usize| space.degree_of(g);
        let lab = |g: usize| space.label(g).to_string();
        let mut out = Vec::new();
        let mut push = |axiom, idx: Vec<usize>| {
            out.push(Violation {
                degrees: idx.iter().map(|&g| deg(g)).collect(),
                labels: idx.iter().map(|&g| lab(g)).collect(),
                indices: idx,
                axiom,
            });
        };
        for a in 0..n {
            let e = SparseVec::unit(a, field);
            if self.table[self.unit][a] != e || self.table[a][self.unit] != e {
                push(AxiomKind::Unit, vec![a]);
            }
            for b in 0..n {
                let p = &self.table[a][b];
                if !space.is_homogeneous(p, deg(a) + deg(b)) {
                    push(AxiomKind::Degree, vec![a, b]);
                }
                if a <= b {
                    let s = field.sign((deg(a) * deg(b)) as i64);
                    if *p != self.table[b][a].scale(&s) {
                        push(AxiomKind::Commutativity, vec![a, b]);
                    }
                }
            }
            if deg(a).rem_euclid(2) == 1 && !self.table[a][a].is_zero() {
                push(AxiomKind::OddSquare, vec![a]);
            }
        }
        for a in 0..n {
            let da = self.complex.global_diff(a);
            for b in 0..n {
                let ab = &self.table[a][b];
                let lhs = self.diff(ab);
                let mut rhs = self.mul(&da, &SparseVec::unit(b, field));
                let db = self.complex.global_diff(b);
                rhs.axpy(&field.sign(deg(a) as i64), &self.mul(&SparseVec::unit(a, field), &db));
                if lhs != rhs {
                    push(AxiomKind::Leibniz, vec![a, b]);
                }
                for c in 0..n {
                    let left = self.mul(ab, &SparseVec::unit(c, field));
                    let right = self.mul(&SparseVec::unit(a, field), &self.table[b][c]);
                    if left != right {
                        push(AxiomKind::Associativity, vec![a, b, c]);
                    }
                }
            }
        }
        out.sort();
        ValidationReport { violations: out }
    }

    fn frobenius_kernel(&self, zero_part: &[usize], p: u64) -> Vec<SparseVec> {
        let field = self.field();
        let d0 = zero_part.len();
        let mut m = 0u32;
        let mut q: u128 = 1;
        while q < d0 as u128 {
            q *= p as u128;
            m += 1;
        }
        let lo = zero_part.first().copied().unwrap_or(0);
        let cols: Vec<SparseVec> = zero_part
            .iter()
            .map(|&g| {
                let mut v = SparseVec::unit(g, field);
                for _ in 0..m {
                    v = self.pow(&v, p);
                }
                v.slice(lo, lo + d0)
            })
            .collect();
        let frob = Matrix::from_columns_unchecked(field, d0, cols);
        frob.kernel_basis().iter().map(|v| v.shifted(lo)).collect()
    }

    fn trace_form_radical(&self, zero_part: &[usize]) -> Vec<SparseVec> {
        let field = self.field();
        let d0 = zero_part.len();
        let lo = zero_part.first().copied().unwrap_or(0);
        let trace = |x: usize, y: usize| -> Scalar {
            let xy = &self.table[x][y];
            let mut t = field.zero();
            for &z in zero_part {
                let img = self.mul(xy, &SparseVec::unit(z, field));
                if let Some(c) = img.get(z) {
                    t = t.add(c);
                }
            }
            t
        };
        let mut rows = Vec::with_capacity(d0);
        for &x in zero_part {
            rows.push(zero_part.iter().map(|&y| trace(x, y)).collect());
        }
        let gram = Matrix::from_rows(field, d0, rows).expect("square Gram matrix");
        gram.kernel_basis().iter().map(|v| v.shifted(lo)).collect()
    }

    fn is_unit_in_degree_zero(&self, a: &SparseVec, zero_part: &[usize]) -> bool {
        let field = self.field();
        let lo = zero_part.first().copied().unwrap_or(0);
        let cols = zero_part
            .iter()
            .map(|&g| self.mul(a, &SparseVec::unit(g, field)).slice(lo, lo + zero_part.len()))
            .collect();
        Matrix::from_columns_unchecked(field, zero_part.len(), cols).rank() == zero_part.len()
    }

    fn compute_local(&self) -> LocalVerdict {
        let field = self.field();
        let space = self.space();
        let not_local = |reason: String| LocalVerdict::NotLocal { reason, witness: None };
        if let Some(d) = space.degrees().find(|&d| d < 0 && space.dim(d) > 0) {
            return not_local(format!("nonzero component in negative degree {d}"));
        }
        let zero_part: Vec<usize> = self.basis_in(0).collect();
        for &a in &zero_part {
            for &b in &zero_part {
                if self.table[a][b] != self.table[b][a] {
                    return not_local(format!(
                        "A_0 is not commutative at ({}, {})",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        let boundaries = self.complex.diff_at(1);
        let unit_local = space.component(&self.unit_vec(), 0);
        if boundaries.image_echelon().contains(&unit_local) {
            return not_local("H_0 vanishes: the unit is a boundary".into());
        }
        let nil = match field {
            Field::Prime(p) => self.frobenius_kernel(&zero_part, p),
            Field::Rational => self.trace_form_radical(&zero_part),
        };
        let residue = zero_part.len() - nil.len();
        if residue != 1 {
            let one = self.unit_vec();
            let minus = field.from_i64(-1);
            let candidates = zero_part
                .iter()
                .map(|&g| SparseVec::unit(g, field))
                .chain(zero_part.iter().flat_map(|&g| {
                    zero_part
                        .iter()
                        .filter(move |&&h| h > g)
                        .map(move |&h| SparseVec::unit(g, field).sub(&SparseVec::unit(h, field), field))
                }));
            for a in candidates {
                let mut rest = one.clone();
                rest.axpy(&minus, &a);
                if !self.is_unit_in_degree_zero(&a, &zero_part) && !self.is_unit_in_degree_zero(&rest, &zero_part) {
                    let idem = self.mul(&a, &a) == a;
                    return LocalVerdict::NotLocal {
                        reason: format!(
                            "A_0 has more than one maximal ideal: {} and 1 − it are both non-units{}",
                            describe(space, &a),
                            if idem { " (an idempotent)" } else { "" }
                        ),
                        witness: Some(a),
                    };
                }
            }
            return not_local(format!("A_0 modulo its nilradical has dimension {residue}, not 1"));
        }
        let mut ech = Echelon::new(field);
        for v in &nil {
            ech.insert(v, SparseVec::new());
        }
        ech.insert(&self.unit_vec(), SparseVec::unit(0, field));
        let mut values = Vec::new();
        for &g in &zero_part {
            let (_, pay) = ech.reduce(&SparseVec::unit(g, field));
            if let Some(c) = pay.get(0) {
                values.push((g, c.clone()));
            }
        }
        LocalVerdict::Local(LocalData {
            maximal_ideal_0: nil,
            augmentation: Augmentation {
                values: SparseVec::from_entries(values),
            },
        })
    }

    /// Decides whether this is a local DG algebra (cached).
    pub fn local_verdict(&self) -> &LocalVerdict {
        self.local.get_or_init(|| self.compute_local())
    }

    pub fn is_local(&self) -> bool {
        self.local_verdict().is_local()
    }

    pub fn local_data(&self) -> Result<&LocalData> {
        match self.local_verdict() {
            LocalVerdict::Local(d) => Ok(d),
            LocalVerdict::NotLocal { reason, .. } => Err(Error::NotLocal(reason.clone())),
        }
    }

    pub fn augmentation(&self) -> Result<&Augmentation> {
        Ok(&self.local_data()?.augmentation)
    }

    /// `ε` on a global vector; zero off degree 0.
    pub fn epsilon(&self, v: &SparseVec) -> Result<Scalar> {
        Ok(self.augmentation()?.apply(v, self.field()))
    }

    /// Whether `v` lies in the maximal ideal `𝔫 = ker ε`.
    pub fn in_maximal_ideal(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.epsilon(v)?.is_zero())
    }

    /// Basis of the maximal ideal `𝔫`: `𝔪_0` followed by all positive degrees.
    pub fn maximal_ideal_basis(&self) -> Result<Vec<SparseVec>> {
        let data = self.local_data()?;
        let field = self.field();
        let mut out = data.maximal_ideal_0.clone();
        for d in 1..=self.space().hi() {
            out.extend(self.basis_in(d).map(|g| SparseVec::unit(g, field)));
        }
        Ok(out)
    }

    /// Homology algebra over the whole window, the unit class listed first.
    pub fn homology_algebra(&self) -> Result<HomologyAlgebra> {
        HomologyAlgebra::new(self)
    }

    /// Shares the cached local data with a clone.
    pub fn into_arc(self) -> Arc<DGAlgebra> {
        Arc::new(self)
    }
}

pub(crate) fn describe(space: &GradedSpace, v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(g, c)| {
            if c.is_one() {
                space.label(*g).to_string()
            } else {
                format!("{}·{}", c.to_signed_string(), space.label(*g))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// A morphism of DG algebras given by the images of basis elements.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: Arc<DGAlgebra>,
    pub target: Arc<DGAlgebra>,
    images: Vec<SparseVec>,
}

impl AlgebraMorphism {
    /// Builds and checks: chain map, multiplicative, unital.
    pub fn new(source: Arc<DGAlgebra>, target: Arc<DGAlgebra>, images: Vec<SparseVec>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch {
                expected: source.field(),
                found: target.field(),
            });
        }
        let map = GradedMap::from_global(source.space(), target.space(), 0, &images)?;
        crate::graded::check_chain_map(source.complex(), target.complex(), &map)?;
        let f = AlgebraMorphism { source, target, images };
        if f.apply(&f.source.unit_vec()) != f.target.unit_vec() {
            return Err(Error::Axiom("morphism does not preserve the unit".into()));
        }
        let n = f.source.dim();
        for a in 0..n {
            for b in a..n {
                let lhs = f.apply(f.source.mul_basis(a, b));
                let rhs = f.target.mul(&f.images[a], &f.images[b]);
                if lhs != rhs {
                    return Err(Error::Axiom(format!(
                        "morphism is not multiplicative at ({}, {})",
                        f.source.label(a),
                        f.source.label(b)
                    )));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: Arc<DGAlgebra>) -> Self {
        let field = a.field();
        let images = (0..a.dim()).map(|g| SparseVec::unit(g, field)).collect();
        AlgebraMorphism {
            source: a.clone(),
            target: a,
            images,
        }
    }

    /// The augmentation of a local algebra as a morphism onto the ground field.
    pub fn augmentation(a: Arc<DGAlgebra>) -> Result<Self> {
        let eps = a.augmentation()?.clone();
        let field = a.field();
        let k = Arc::new(DGAlgebra::ground(field));
        let images = (0..a.dim())
            .map(|g| match eps.values.get(g) {
                Some(c) => SparseVec::from_entries(vec![(0, c.clone())]),
                None => SparseVec::new(),
            })
            .collect();
        AlgebraMorphism::new(a, k, images)
    }

    pub fn image(&self, g: usize) -> &SparseVec {
        &self.images[g]
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (g, c) in v.iter() {
            acc.add_scaled(c, &self.images[*g]);
        }
        acc.finish()
    }

    pub fn graded_map(&self) -> GradedMap {
        GradedMap::from_global(self.source.space(), self.target.space(), 0, &self.images).expect("validated morphism")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        let images = other.images.iter().map(|v| self.apply(v)).collect();
        AlgebraMorphism::new(other.source.clone(), self.target.clone(), images)
    }

    /// Whether this is the identity on basis elements (same source and target).
    pub fn is_identity(&self) -> bool {
        self.source.dim() == self.target.dim()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(g, v)| *v == SparseVec::unit(g, self.source.field()))
    }
}

/// `H(A)` with its induced product, as a DG algebra with zero differential.
#[derive(Clone, Debug)]
pub struct HomologyAlgebra {
    pub homology: Homology,
    /// Basis: classes in increasing degree; the unit class is `1`.
    pub algebra: DGAlgebra,
    /// Global cycle representative of each class, in the source algebra.
    pub reps: Vec<SparseVec>,
}

impl HomologyAlgebra {
    fn new(a: &DGAlgebra) -> Result<Self> {
        let field = a.field();
        let space = a.space();
        let mut preferred = BTreeMap::new();
        preferred.insert(0, vec![space.component(&a.unit_vec(), 0)]);
        let homology = homology_with(a.complex(), None, &preferred)?;
        if homology.dim(0) == 0 || !homology.at(0).unwrap().reps()[0].eq(&preferred[&0][0]) {
            return Err(Error::Precondition("H_0 vanishes: the unit is a boundary".into()));
        }
        let mut pairs = Vec::new();
        let mut reps = Vec::new();
        for d in homology.degrees() {
            for (i, r) in homology.at(d).unwrap().reps().iter().enumerate() {
                let label = if d == 0 && i == 0 {
                    "1".to_string()
                } else {
                    format!("h{d}_{i}")
                };
                pairs.push((label, d));
                reps.push(space.embed(r, d));
            }
        }
        let hspace = GradedSpace::from_pairs(field, &pairs)?;
        let classify = |v: &SparseVec, d: i32| -> Result<SparseVec> {
            match homology.at(d) {
                Some(h) => Ok(hspace.embed(&h.project(&space.component(v, d))?, d)),
                None => Ok(SparseVec::new()),
            }
        };
        let n = reps.len();
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                let d = hspace.degree_of(i) + hspace.degree_of(j);
                let p = a.mul(&reps[i], &reps[j]);
                let c = classify(&p, d)?;
                let perturbed = a.mul(
                    &reps[i].add(&boundary_perturbation(a, hspace.degree_of(i), 1), field),
                    &reps[j].add(&boundary_perturbation(a, hspace.degree_of(j), 2), field),
                );
                if classify(&perturbed, d)? != c {
                    return Err(Error::Internal(format!(
                        "homology product depends on representatives at ({}, {})",
                        hspace.label(i),
                        hspace.label(j)
                    )));
                }
                products.push((i, j, c));
            }
        }
        let unit = hspace.find("1").unwrap();
        let algebra = DGAlgebra::new(ChainComplex::trivial(hspace), unit, products)?;
        Ok(HomologyAlgebra {
            homology,
            algebra,
            reps,
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.homology.dims()
    }
}

/// A deterministic boundary of degree `d`: `Σ (k + seed)·∂(e_k)` over degree `d + 1`.
fn boundary_perturbation(a: &DGAlgebra, d: i32, seed: i64) -> SparseVec {
    let field = a.field();
    let mut v = SparseVec::new();
    for (k, g) in a.basis_in(d + 1).enumerate() {
        v.axpy(&field.from_i64(k as i64 + seed), &a.complex().global_diff(g));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::Prime(101)
    }

    /// k[x]/(x^2) in degree 0.
    fn dual_numbers() -> DGAlgebra {
        let space = GradedSpace::from_pairs(f(), &[("1", 0), ("x", 0)]).unwrap();
        DGAlgebra::new(ChainComplex::trivial(space), 0, vec![]).unwrap()
    }

    #[test]
    fn ground_field_is_local() {
        let k = DGAlgebra::ground(f());
        assert!(k.validate().passed());
        assert!(k.is_local());
    }

    #[test]
    fn dual_numbers_local() {
        let a = dual_numbers();
        let data = a.local_data().unwrap();
        assert_eq!(data.maximal_ideal_0, vec![SparseVec::unit(1, f())]);
        assert!(a.epsilon(&a.unit_vec()).unwrap().is_one());
    }

    #[test]
    fn product_of_fields_is_not_local() {
        let space = GradedSpace::from_pairs(f(), &[("1", 0), ("e", 0)]).unwrap();
        let a = DGAlgebra::new(ChainComplex::trivial(space), 0, vec![(1, 1, SparseVec::unit(1, f()))]).unwrap();
        match a.local_verdict() {
            LocalVerdict::NotLocal { witness, .. } => {
                let w = witness.clone().unwrap();
                assert_eq!(a.mul(&w, &w), w);
            }
            _ => panic!("k × k is not local"),
        }
        let q = DGAlgebra::new(
            ChainComplex::trivial(GradedSpace::from_pairs(Field::Rational, &[("1", 0), ("e", 0)]).unwrap()),
            0,
            vec![(1, 1, SparseVec::unit(1, Field::Rational))],
        )
        .unwrap();
        assert!(!q.is_local());
    }

    #[test]
    fn exterior_square_is_enforced() {
        let space = GradedSpace::from_pairs(f(), &[("1", 0), ("e", 1)]).unwrap();
        let ok = DGAlgebra::new(ChainComplex::trivial(space.clone()), 0, vec![]).unwrap();
        assert!(ok.validate().passed());
        let bad = DGAlgebra::from_full_table(
            ChainComplex::trivial(GradedSpace::from_pairs(f(), &[("1", 0), ("e", 1), ("f", 2)]).unwrap()),
            0,
            vec![
                vec![
                    SparseVec::unit(0, f()),
                    SparseVec::unit(1, f()),
                    SparseVec::unit(2, f()),
                ],
                vec![SparseVec::unit(1, f()), SparseVec::unit(2, f()), SparseVec::new()],
                vec![SparseVec::unit(2, f()), SparseVec::new(), SparseVec::new()],
            ],
        )
        .unwrap();
        let report = bad.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == AxiomKind::OddSquare && v.labels == ["e"]));
    }

    #[test]
    fn homology_algebra_of_zero_differential_is_itself() {
        let a = dual_numbers();
        let h = a.homology_algebra().unwrap();
        assert_eq!(h.dims(), vec![2]);
        assert_eq!(h.algebra.mul_basis(1, 1), &SparseVec::new());
    }
}
