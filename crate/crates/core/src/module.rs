//! Left DG modules over a [`DGAlgebra`] and tensor products over it.
//!
//! Right actions are obtained from left ones by `m·b = (−1)^{|b||m|} b·m`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dga::{describe, AlgebraMorphism, DGAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{self, check_chain_map, ChainComplex, GradedMap, GradedSpace, TensorIndex};
use crate::linalg::{Accumulator, Matrix, SparseVec};

/// A finite-dimensional left DG module.
#[derive(Clone, Debug)]
pub struct DGModule {
    algebra: Arc<DGAlgebra>,
    complex: ChainComplex,
    /// `action[b][m]` is `b·m` as a global vector of the module.
    action: Vec<Vec<SparseVec>>,
}

impl PartialEq for DGModule {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.complex == other.complex && self.action == other.action
    }
}

fn same_algebra(a: &Arc<DGAlgebra>, b: &Arc<DGAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl DGModule {
    /// Builds and validates a module.
    pub fn new(algebra: Arc<DGAlgebra>, complex: ChainComplex, action: Vec<Vec<SparseVec>>) -> Result<Self> {
        let m = DGModule::new_unchecked(algebra, complex, action)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        algebra: Arc<DGAlgebra>,
        complex: ChainComplex,
        action: Vec<Vec<SparseVec>>,
    ) -> Result<Self> {
        if algebra.field() != complex.field() {
            return Err(Error::FieldMismatch {
                expected: algebra.field(),
                found: complex.field(),
            });
        }
        let (nb, nm) = (algebra.dim(), complex.space().total_dim());
        if action.len() != nb || action.iter().any(|r| r.len() != nm) {
            return Err(Error::Dimension(format!("action table must be {nb}×{nm}")));
        }
        Ok(DGModule {
            algebra,
            complex,
            action,
        })
    }

    /// Checks degrees, the unit, associativity and the Leibniz rule.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let field = self.field();
        let space = self.space();
        let nm = space.total_dim();
        for b in 0..a.dim() {
            for m in 0..nm {
                let deg = a.degree(b) + space.degree_of(m);
                if !space.is_homogeneous(&self.action[b][m], deg) {
                    return Err(Error::Axiom(format!(
                        "{}·{} is not homogeneous of degree {deg}",
                        a.label(b),
                        space.label(m)
                    )));
                }
            }
        }
        for m in 0..nm {
            if self.action[a.unit()][m] != SparseVec::unit(m, field) {
                return Err(Error::Axiom(format!("unit does not fix `{}`", space.label(m))));
            }
        }
        for x in 0..a.dim() {
            let dx = a.complex().global_diff(x);
            let sign = field.sign(a.degree(x) as i64);
            for m in 0..nm {
                let xm = &self.action[x][m];
                let mut rhs = self.act(&dx, &SparseVec::unit(m, field));
                rhs.axpy(&sign, &self.act_basis(x, &self.complex.global_diff(m)));
                if self.complex.apply_global(xm) != rhs {
                    return Err(Error::Axiom(format!(
                        "Leibniz rule fails at ({}, {})",
                        a.label(x),
                        space.label(m)
                    )));
                }
                for y in 0..a.dim() {
                    let lhs = self.act_basis(y, xm);
                    let rhs = self.act(a.mul_basis(y, x), &SparseVec::unit(m, field));
                    if lhs != rhs {
                        return Err(Error::Axiom(format!(
                            "action is not associative at ({}, {}, {})",
                            a.label(y),
                            a.label(x),
                            space.label(m)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `B` over itself.
    pub fn regular(algebra: Arc<DGAlgebra>) -> Self {
        let n = algebra.dim();
        let action = (0..n)
            .map(|b| (0..n).map(|c| algebra.mul_basis(b, c).clone()).collect())
            .collect();
        DGModule {
            complex: algebra.complex().clone(),
            algebra,
            action,
        }
    }

    /// A complex of vector spaces made a module through the augmentation.
    pub fn via_augmentation(algebra: Arc<DGAlgebra>, w: &ChainComplex) -> Result<Self> {
        let eps = algebra.augmentation()?.clone();
        let field = algebra.field();
        let nw = w.space().total_dim();
        let action = (0..algebra.dim())
            .map(|b| {
                (0..nw)
                    .map(|m| match eps.values.get(b) {
                        Some(c) => SparseVec::unit(m, field).scale(c),
                        None => SparseVec::new(),
                    })
                    .collect()
            })
            .collect();
        DGModule::new(algebra, w.clone(), action)
    }

    /// The residue field `k` in degree 0.
    pub fn residue_field(algebra: Arc<DGAlgebra>) -> Result<Self> {
        let field = algebra.field();
        let k = ChainComplex::trivial(GradedSpace::from_pairs(field, &[("1", 0)])?);
        DGModule::via_augmentation(algebra, &k)
    }

    /// `⊕_d Σ^d B` for the listed shifts.
    pub fn free(algebra: Arc<DGAlgebra>, shifts: &[i32]) -> Result<Self> {
        let mut acc: Option<DGModule> = None;
        for (k, &d) in shifts.iter().enumerate() {
            let mut part = DGModule::regular(algebra.clone());
            for _ in 0..d.abs() {
                part = if d > 0 { part.suspension() } else { part.desuspension() };
            }
            part = part.relabel(|l| format!("{l}@{k}"))?;
            acc = Some(match acc {
                None => part,
                Some(a) => a.direct_sum(&part)?,
            });
        }
        Ok(acc.unwrap_or_else(|| DGModule::zero(algebra)))
    }

    pub fn zero(algebra: Arc<DGAlgebra>) -> Self {
        let field = algebra.field();
        let n = algebra.dim();
        DGModule {
            algebra,
            complex: ChainComplex::zero(field),
            action: vec![Vec::new(); n],
        }
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra> {
        &self.algebra
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.space().total_dim()
    }

    pub fn action_table(&self) -> &[Vec<SparseVec>] {
        &self.action
    }

    /// `e_b · v`.
    pub fn act_basis(&self, b: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (m, c) in v.iter() {
            acc.add_scaled(c, &self.action[b][*m]);
        }
        acc.finish()
    }

    /// `x · v` for global vectors of the algebra and the module.
    pub fn act(&self, x: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (b, cb) in x.iter() {
            for (m, cm) in v.iter() {
                let p = &self.action[*b][*m];
                if !p.is_zero() {
                    acc.add_scaled(&cb.mul(cm), p);
                }
            }
        }
        acc.finish()
    }

    fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let s = self.space();
        let labels = s
            .degrees()
            .map(|d| s.labels_in(d).iter().map(|l| f(l)).collect())
            .collect();
        let space = GradedSpace::new(s.field(), s.lo(), labels)?;
        let images: Vec<SparseVec> = (0..self.dim()).map(|g| self.complex.global_diff(g)).collect();
        Ok(DGModule {
            algebra: self.algebra.clone(),
            complex: ChainComplex::from_global(space, &images)?.with_exact_through(self.complex.exact_through()),
            action: self.action.clone(),
        })
    }

    /// `ΣM` with `b·σm = (−1)^{|b|} σ(bm)`.
    pub fn suspension(&self) -> Self {
        self.shift_by(1)
    }

    /// `Σ^{-1}M`.
    pub fn desuspension(&self) -> Self {
        self.shift_by(-1)
    }

    fn shift_by(&self, k: i32) -> Self {
        let field = self.field();
        let minus = field.from_i64(-1);
        let complex = if k == 1 {
            graded::suspension(&self.complex)
        } else {
            let s = graded::suspension(&self.complex);
            let images: Vec<SparseVec> = (0..self.dim()).map(|g| s.global_diff(g)).collect();
            ChainComplex::from_global(self.space().shifted(-1), &images)
                .expect("shifted complex")
                .with_exact_through(self.complex.exact_through().map(|n| n - 1))
        };
        let action = (0..self.algebra.dim())
            .map(|b| {
                let odd = self.algebra.degree(b).rem_euclid(2) == 1;
                self.action[b]
                    .iter()
                    .map(|v| if odd { v.scale(&minus) } else { v.clone() })
                    .collect()
            })
            .collect();
        DGModule {
            algebra: self.algebra.clone(),
            complex,
            action,
        }
    }

    /// `M ⊕ N`, `M` first in each degree.
    pub fn direct_sum(&self, other: &DGModule) -> Result<Self> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::Precondition(
                "direct sum of modules over different algebras".into(),
            ));
        }
        let complex = graded::direct_sum(&self.complex, &other.complex)?;
        let space = complex.space().clone();
        let embed_left = |v: &SparseVec| -> SparseVec { reembed(v, self.space(), &space, 0, other.space()) };
        let embed_right = |v: &SparseVec| -> SparseVec { reembed(v, other.space(), &space, 1, self.space()) };
        let action = (0..self.algebra.dim())
            .map(|b| {
                let mut row = vec![SparseVec::new(); space.total_dim()];
                for m in 0..self.dim() {
                    row[embed_left(&SparseVec::unit(m, self.field())).leading().unwrap().0] =
                        embed_left(&self.action[b][m]);
                }
                for m in 0..other.dim() {
                    row[embed_right(&SparseVec::unit(m, self.field())).leading().unwrap().0] =
                        embed_right(&other.action[b][m]);
                }
                row
            })
            .collect();
        Ok(DGModule {
            algebra: self.algebra.clone(),
            complex,
            action,
        })
    }

    /// Injections of the summands of [`DGModule::direct_sum`], as global index maps.
    pub fn sum_injections(left: &DGModule, right: &DGModule, sum: &DGModule) -> (Vec<usize>, Vec<usize>) {
        let field = left.field();
        let l = (0..left.dim())
            .map(|m| {
                reembed(&SparseVec::unit(m, field), left.space(), sum.space(), 0, right.space())
                    .leading()
                    .unwrap()
                    .0
            })
            .collect();
        let r = (0..right.dim())
            .map(|m| {
                reembed(&SparseVec::unit(m, field), right.space(), sum.space(), 1, left.space())
                    .leading()
                    .unwrap()
                    .0
            })
            .collect();
        (l, r)
    }

    /// Restriction of scalars along `f`: `b·m := f(b)·m`.
    pub fn restrict(&self, f: &AlgebraMorphism) -> Result<Self> {
        if !same_algebra(&f.target, &self.algebra) {
            return Err(Error::Precondition(
                "restriction along a morphism into a different algebra".into(),
            ));
        }
        let action = (0..f.source.dim())
            .map(|b| {
                let img = f.image(b);
                (0..self.dim())
                    .map(|m| self.act(img, &SparseVec::unit(m, self.field())))
                    .collect()
            })
            .collect();
        DGModule::new(f.source.clone(), self.complex.clone(), action)
    }

    /// Submodule spanned by the given vectors (local coordinates per degree).
    pub fn submodule(&self, basis: &BTreeMap<i32, Vec<SparseVec>>) -> Result<(DGModule, GradedMap)> {
        let (sub, incl) = graded::subcomplex(&self.complex, basis, "m")?;
        let field = self.field();
        let sspace = sub.space().clone();
        let incl_global: Vec<SparseVec> = (0..sspace.total_dim())
            .map(|g| {
                let (d, i) = sspace.local(g);
                self.space().embed(&incl.apply(d, &SparseVec::unit(i, field)), d)
            })
            .collect();
        let mut coords = BTreeMap::new();
        for d in sspace.degrees() {
            let mut e = crate::linalg::Echelon::new(field);
            for (j, v) in basis.get(&d).into_iter().flatten().enumerate() {
                e.insert(v, SparseVec::unit(j, field));
            }
            coords.insert(d, e);
        }
        let mut action = Vec::with_capacity(self.algebra.dim());
        for b in 0..self.algebra.dim() {
            let mut row = Vec::with_capacity(sspace.total_dim());
            for g in 0..sspace.total_dim() {
                let img = self.act_basis(b, &incl_global[g]);
                let d = sspace.degree_of(g) + self.algebra.degree(b);
                let local = self.space().component(&img, d);
                let (res, pay) = match coords.get(&d) {
                    Some(e) => e.reduce(&local),
                    None => (local.clone(), SparseVec::new()),
                };
                if !res.is_zero() {
                    return Err(Error::Precondition(format!(
                        "span is not closed under the action in degree {d}"
                    )));
                }
                row.push(sspace.embed(&pay, d));
            }
            action.push(row);
        }
        Ok((DGModule::new(self.algebra.clone(), sub, action)?, incl))
    }

    /// Quotient by the submodule spanned by the given vectors (closed under
    /// the action and `∂`), with the projection.
    pub fn quotient(&self, relations: &BTreeMap<i32, Vec<SparseVec>>) -> Result<(DGModule, GradedMap)> {
        let (q, proj, kept) = graded::quotient_kept(&self.complex, relations)?;
        let field = self.field();
        let qspace = q.space().clone();
        let kept_source: Vec<usize> = kept
            .iter()
            .flat_map(|(&d, ks)| ks.iter().map(move |&i| (d, i)))
            .map(|(d, i)| self.space().global(d, i))
            .collect();
        let project_global = |v: &SparseVec| -> SparseVec {
            let mut out = SparseVec::new();
            for d in self.space().degrees() {
                let c = self.space().component(v, d);
                if !c.is_zero() {
                    out.axpy(&field.one(), &qspace.embed(&proj.apply(d, &c), d));
                }
            }
            out
        };
        for (&d, rs) in relations {
            for r in rs {
                let g = self.space().embed(r, d);
                for b in 0..self.algebra.dim() {
                    if !project_global(&self.act_basis(b, &g)).is_zero() {
                        return Err(Error::Precondition(format!(
                            "relations in degree {d} are not closed under the action"
                        )));
                    }
                }
            }
        }
        let action = (0..self.algebra.dim())
            .map(|b| {
                kept_source
                    .iter()
                    .map(|&g| project_global(&self.action[b][g]))
                    .collect()
            })
            .collect();
        Ok((DGModule::new(self.algebra.clone(), q, action)?, proj))
    }

    /// A spanning set of `𝔫·M` for a local algebra.
    pub fn maximal_ideal_span(&self) -> Result<Vec<SparseVec>> {
        let field = self.field();
        let mut out = Vec::new();
        for x in self.algebra.maximal_ideal_basis()? {
            for m in 0..self.dim() {
                let v = self.act(&x, &SparseVec::unit(m, field));
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    pub fn describe(&self, v: &SparseVec) -> String {
        describe(self.space(), v)
    }
}

/// Places a global vector of a summand into a direct sum built by
/// [`direct_sum_space`]; `side` 0 is the left summand.
fn reembed(v: &SparseVec, part: &GradedSpace, sum: &GradedSpace, side: usize, other: &GradedSpace) -> SparseVec {
    let entries = v
        .iter()
        .map(|(g, c)| {
            let (d, i) = part.local(*g);
            let local = if side == 0 { i } else { other.dim(d) + i };
            (sum.global(d, local), c.clone())
        })
        .collect();
    SparseVec::from_entries(entries)
}

/// A morphism of DG modules over one algebra.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    pub source: DGModule,
    pub target: DGModule,
    pub map: GradedMap,
}

impl ModuleMorphism {
    /// Builds from images of basis elements and checks linearity and `∂`.
    pub fn new(source: DGModule, target: DGModule, images: &[SparseVec]) -> Result<Self> {
        if !same_algebra(&source.algebra, &target.algebra) {
            return Err(Error::Precondition("module morphism between different algebras".into()));
        }
        let map = GradedMap::from_global(source.space(), target.space(), 0, images)?;
        check_chain_map(source.complex(), target.complex(), &map)?;
        for b in 0..source.algebra.dim() {
            for m in 0..source.dim() {
                let lhs = target_apply(&map, &source, &target, &source.action[b][m]);
                let rhs = target.act_basis(b, &images[m]);
                if lhs != rhs {
                    return Err(Error::Axiom(format!(
                        "morphism is not linear at ({}, {})",
                        source.algebra.label(b),
                        source.space().label(m)
                    )));
                }
            }
        }
        Ok(ModuleMorphism { source, target, map })
    }

    pub fn apply_global(&self, v: &SparseVec) -> SparseVec {
        target_apply(&self.map, &self.source, &self.target, v)
    }

    /// Mapping cone as a DG module: `b·(s,t) = ((−1)^{|b|} b s, b t)`.
    pub fn cone(&self) -> Result<DGModule> {
        let cn = graded::cone(self.source.complex(), self.target.complex(), &self.map)?;
        let field = self.source.field();
        let ss = self.source.suspension();
        let space = cn.space().clone();
        let a = &self.source.algebra;
        let place_s = |v: &SparseVec| -> SparseVec {
            SparseVec::from_entries(
                v.iter()
                    .map(|(g, c)| {
                        let (d, i) = ss.space().local(*g);
                        (space.global(d, i), c.clone())
                    })
                    .collect(),
            )
        };
        let place_t = |v: &SparseVec| -> SparseVec {
            SparseVec::from_entries(
                v.iter()
                    .map(|(g, c)| {
                        let (d, i) = self.target.space().local(*g);
                        (space.global(d, ss.space().dim(d) + i), c.clone())
                    })
                    .collect(),
            )
        };
        let mut action = vec![vec![SparseVec::new(); space.total_dim()]; a.dim()];
        for b in 0..a.dim() {
            for m in 0..ss.dim() {
                let g = place_s(&SparseVec::unit(m, field)).leading().unwrap().0;
                action[b][g] = place_s(&ss.action[b][m]);
            }
            for m in 0..self.target.dim() {
                let g = place_t(&SparseVec::unit(m, field)).leading().unwrap().0;
                action[b][g] = place_t(&self.target.action[b][m]);
            }
        }
        DGModule::new(a.clone(), cn, action)
    }
}

fn target_apply(map: &GradedMap, source: &DGModule, target: &DGModule, v: &SparseVec) -> SparseVec {
    map.apply_global(source.space(), target.space(), v)
}

/// Which factor an extra commuting algebra acts on in [`tensor_over_acting`].
pub enum ExtraAction<'a> {
    /// `d·(l⊗m) = (d·l)⊗m`.
    Left(&'a DGModule),
    /// `d·(l⊗m) = (−1)^{|d||l|} l⊗(d·m)`.
    Right(&'a DGModule),
}

/// `L ⊗_B M` as a quotient of `L ⊗_k M`.
#[derive(Clone, Debug)]
pub struct TensorOver {
    /// `L ⊗_k M`, ordered by (left degree, left index, right index).
    pub over_k: ChainComplex,
    pub complex: ChainComplex,
    /// Projection `L ⊗_k M → L ⊗_B M`.
    pub projection: GradedMap,
    /// Kept standard basis indices of `L ⊗_k M` per degree.
    pub kept: BTreeMap<i32, Vec<usize>>,
    left: GradedSpace,
    right: GradedSpace,
}

impl TensorOver {
    /// Class of `e_l ⊗ e_m` (global basis indices), as a global vector.
    pub fn class_of(&self, l: usize, m: usize) -> SparseVec {
        let (i, a) = self.left.local(l);
        let (j, b) = self.right.local(m);
        let n = i + j;
        let (idx, _) = TensorIndex::new(&self.left, &self.right, n);
        let local = idx.get(n, i, a, b, self.right.dim(j)).unwrap();
        let field = self.left.field();
        self.complex
            .space()
            .embed(&self.projection.apply(n, &SparseVec::unit(local, field)), n)
    }
}

/// `L ⊗_B M`: the quotient of `L ⊗_k M` by `(l·x)⊗m − l⊗(x·m)` where
/// `l·x = (−1)^{|l||x|} x·l`, with the induced differential.
pub fn tensor_over(l: &DGModule, m: &DGModule) -> Result<TensorOver> {
    if !same_algebra(&l.algebra, &m.algebra) {
        return Err(Error::Precondition("tensor product over different algebras".into()));
    }
    let a = &l.algebra;
    let field = a.field();
    let over_k = graded::tensor_k(l.complex(), m.complex())?;
    let (ls, ms) = (l.space(), m.space());
    let mut relations: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    let mut indices = BTreeMap::new();
    let index = |n: i32, indices: &mut BTreeMap<i32, TensorIndex>| {
        indices.entry(n).or_insert_with(|| TensorIndex::new(ls, ms, n).0);
    };
    for x in 0..a.dim() {
        if x == a.unit() {
            continue;
        }
        let dx = a.degree(x);
        for li in 0..ls.total_dim() {
            let (i, ia) = ls.local(li);
            let xl = &l.action[x][li];
            let sign = field.sign((i * dx) as i64);
            for mj in 0..ms.total_dim() {
                let (j, jb) = ms.local(mj);
                let n = i + j + dx;
                index(n, &mut indices);
                let idx = &indices[&n];
                let mut entries = Vec::new();
                for (g, c) in xl.iter() {
                    let (i2, a2) = ls.local(*g);
                    let k = idx.get(n, i2, a2, jb, ms.dim(j)).unwrap();
                    entries.push((k, c.mul(&sign)));
                }
                for (g, c) in m.action[x][mj].iter() {
                    let (j2, b2) = ms.local(*g);
                    let k = idx.get(n, i, ia, b2, ms.dim(j2)).unwrap();
                    entries.push((k, c.neg()));
                }
                let r = SparseVec::from_entries(entries);
                if !r.is_zero() {
                    relations.entry(n).or_default().push(r);
                }
            }
        }
    }
    let (complex, projection, kept) = graded::quotient_kept(&over_k, &relations)?;
    Ok(TensorOver {
        over_k,
        complex,
        projection,
        kept,
        left: ls.clone(),
        right: ms.clone(),
    })
}

/// [`tensor_over`] together with the module structure over a second algebra
/// acting on one factor, commuting with the first.
pub fn tensor_over_acting(l: &DGModule, m: &DGModule, extra: ExtraAction<'_>) -> Result<(TensorOver, DGModule)> {
    let t = tensor_over(l, m)?;
    let (ext, on_left) = match extra {
        ExtraAction::Left(e) => (e, true),
        ExtraAction::Right(e) => (e, false),
    };
    let factor = if on_left { l } else { m };
    if ext.complex != factor.complex {
        return Err(Error::Precondition(
            "extra action must be on the same complex as its factor".into(),
        ));
    }
    let d_alg = ext.algebra.clone();
    let field = d_alg.field();
    let qspace = t.complex.space().clone();
    let (ls, ms) = (l.space(), m.space());
    let mut kept = Vec::with_capacity(qspace.total_dim());
    for (&n, ks) in &t.kept {
        let (idx, len) = TensorIndex::new(ls, ms, n);
        let mut pairs = vec![(0usize, 0usize); len];
        for li in 0..ls.total_dim() {
            let (i, a) = ls.local(li);
            let j = n - i;
            for b in 0..ms.dim(j) {
                if let Some(k) = idx.get(n, i, a, b, ms.dim(j)) {
                    pairs[k] = (li, ms.global(j, b));
                }
            }
        }
        kept.extend(ks.iter().map(|&k| pairs[k]));
    }
    let mut action = Vec::with_capacity(d_alg.dim());
    for d in 0..d_alg.dim() {
        let dd = d_alg.degree(d);
        let mut row = Vec::with_capacity(kept.len());
        for &(li, mj) in &kept {
            let mut acc = SparseVec::new();
            if on_left {
                for (g, c) in ext.action[d][li].iter() {
                    acc.axpy(c, &t.class_of(*g, mj));
                }
            } else {
                let s = field.sign((dd * ls.degree_of(li)) as i64);
                for (g, c) in ext.action[d][mj].iter() {
                    acc.axpy(&c.mul(&s), &t.class_of(li, *g));
                }
            }
            row.push(acc);
        }
        action.push(row);
    }
    let module = DGModule::new(d_alg, t.complex.clone(), action)
        .map_err(|e| Error::Precondition(format!("extra action does not descend to the tensor product: {e}")))?;
    Ok((t, module))
}

/// Matrix of `v ↦ x·v` from degree `d` to degree `d + |x|`, local coordinates.
pub fn action_matrix(m: &DGModule, x: usize, d: i32) -> Matrix {
    let field = m.field();
    let s = m.space();
    let t = d + m.algebra.degree(x);
    let cols = (0..s.dim(d))
        .map(|i| s.component(&m.action[x][s.global(d, i)], t))
        .collect();
    Matrix::from_columns_unchecked(field, s.dim(t), cols)
}
