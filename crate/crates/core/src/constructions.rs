//! Trivial extensions, Koszul extensions and Koszul complexes.

use std::collections::HashSet;
use std::sync::Arc;

use crate::dga::{AlgebraMorphism, Augmentation, DGAlgebra};
use crate::error::{Error, Result};
use crate::graded::{self, ChainComplex, GradedSpace};
use crate::linalg::SparseVec;
use crate::module::{tensor_over_acting, DGModule, ExtraAction};
use crate::ring::ArtinianLocalRing;

/// `A ⋉ W` together with `α: A → A⋉W` and `β: A⋉W → A`.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub base: Arc<DGAlgebra>,
    pub w: ChainComplex,
    pub augmentation: Augmentation,
    pub algebra: Arc<DGAlgebra>,
    pub alpha: AlgebraMorphism,
    pub beta: AlgebraMorphism,
    /// Global index in `A⋉W` of each basis element of `A`, then of `W`.
    a_index: Vec<usize>,
    w_index: Vec<usize>,
}

/// Checks that `eps` is a morphism of DG algebras `a → k`.
pub fn check_augmentation(a: &DGAlgebra, eps: &Augmentation) -> Result<()> {
    let field = a.field();
    let e = |v: &SparseVec| eps.apply(v, field);
    if !e(&a.unit_vec()).is_one() {
        return Err(Error::Precondition("augmentation does not send 1 to 1".into()));
    }
    for g in 0..a.dim() {
        let v = SparseVec::unit(g, field);
        if a.degree(g) != 0 && !e(&v).is_zero() {
            return Err(Error::Precondition(format!(
                "augmentation is nonzero on `{}` of nonzero degree",
                a.label(g)
            )));
        }
        if !e(&a.diff(&v)).is_zero() {
            return Err(Error::Precondition(format!(
                "augmentation does not vanish on ∂`{}`",
                a.label(g)
            )));
        }
        for h in 0..a.dim() {
            if e(a.mul_basis(g, h)) != e(&v).mul(&e(&SparseVec::unit(h, field))) {
                return Err(Error::Precondition(format!(
                    "augmentation is not multiplicative at ({}, {})",
                    a.label(g),
                    a.label(h)
                )));
            }
        }
    }
    Ok(())
}

/// `A ⋉ W` with `(a,w)(a',w') = (aa', a w' + (−1)^{|w||a'|} a' w)`, `W` an
/// `A`-module through `eps`.
pub fn trivial_extension(a: &Arc<DGAlgebra>, eps: &Augmentation, w: &ChainComplex) -> Result<TrivialExtension> {
    check_augmentation(a, eps)?;
    let field = a.field();
    if w.field() != field {
        return Err(Error::FieldMismatch {
            expected: field,
            found: w.field(),
        });
    }
    let a_labels: HashSet<&str> = a.space().all_labels().map(|s| s.as_str()).collect();
    let clash = w.space().all_labels().any(|l| a_labels.contains(l.as_str()));
    let w = if clash {
        let ws = w.space();
        let labels = ws
            .degrees()
            .map(|d| ws.labels_in(d).iter().map(|l| format!("w:{l}")).collect())
            .collect();
        let space = GradedSpace::new(field, ws.lo(), labels)?;
        let images: Vec<SparseVec> = (0..ws.total_dim()).map(|g| w.global_diff(g)).collect();
        ChainComplex::from_global(space, &images)?
    } else {
        w.clone()
    };
    let sum = graded::direct_sum(a.complex(), &w)?;
    let ss = sum.space().clone();
    let a_index: Vec<usize> = (0..a.dim())
        .map(|g| {
            let (d, i) = a.space().local(g);
            ss.global(d, i)
        })
        .collect();
    let ws = w.space();
    let w_index: Vec<usize> = (0..ws.total_dim())
        .map(|g| {
            let (d, i) = ws.local(g);
            ss.global(d, a.space().dim(d) + i)
        })
        .collect();
    let to_b = |v: &SparseVec| v.reindex(|g| a_index[g]);
    let mut products = Vec::new();
    for p in 0..a.dim() {
        for q in 0..a.dim() {
            if a_index[p] <= a_index[q] {
                products.push((a_index[p], a_index[q], to_b(a.mul_basis(p, q))));
            }
        }
        let ep = eps.apply(&SparseVec::unit(p, field), field);
        for (wg, &wi) in w_index.iter().enumerate() {
            let v = if ep.is_zero() {
                SparseVec::new()
            } else {
                SparseVec::from_entries(vec![(w_index[wg], ep.clone())])
            };
            if a_index[p] <= wi {
                products.push((a_index[p], wi, v));
            } else {
                let s = field.sign((a.degree(p) * ws.degree_of(wg)) as i64);
                products.push((wi, a_index[p], v.scale(&s)));
            }
        }
    }
    let algebra = Arc::new(DGAlgebra::new(sum, a_index[a.unit()], products)?);
    let alpha = AlgebraMorphism::new(
        a.clone(),
        algebra.clone(),
        (0..a.dim()).map(|g| SparseVec::unit(a_index[g], field)).collect(),
    )?;
    let mut beta_images = vec![SparseVec::new(); algebra.dim()];
    for (g, &i) in a_index.iter().enumerate() {
        beta_images[i] = SparseVec::unit(g, field);
    }
    let beta = AlgebraMorphism::new(algebra.clone(), a.clone(), beta_images)?;
    if !beta.compose(&alpha)?.is_identity() {
        return Err(Error::Internal("β∘α is not the identity".into()));
    }
    Ok(TrivialExtension {
        base: a.clone(),
        w,
        augmentation: eps.clone(),
        algebra,
        alpha,
        beta,
        a_index,
        w_index,
    })
}

impl TrivialExtension {
    /// Global indices of the `W` part inside `A⋉W`.
    pub fn w_indices(&self) -> &[usize] {
        &self.w_index
    }

    pub fn a_indices(&self) -> &[usize] {
        &self.a_index
    }

    /// `W` as a module over `A` through the augmentation.
    pub fn w_module(&self) -> Result<DGModule> {
        DGModule::via_augmentation(self.base.clone(), &self.w)
    }
}

/// `B⟨X⟩` with its inclusion, built one odd variable at a time.
#[derive(Clone, Debug)]
pub struct KoszulExtension {
    pub base: Arc<DGAlgebra>,
    pub algebra: Arc<DGAlgebra>,
    /// Variable names and degrees.
    pub variables: Vec<(String, i32)>,
    /// Killed cycles, each in the stage before its variable.
    pub cycles: Vec<SparseVec>,
    pub inclusion: AlgebraMorphism,
}

/// Adjoins one variable `x` with `∂x = z`: basis `B ∪ B·x`, product
/// `(b + cx)(b' + c'x) = bb' + (bc' + (−1)^{|x||b'|} cb')x` and
/// `∂(b + cx) = ∂b + ∂c·x + (−1)^{|c|} cz`.
fn adjoin(b: &Arc<DGAlgebra>, name: &str, z: &SparseVec) -> Result<(Arc<DGAlgebra>, AlgebraMorphism)> {
    let field = b.field();
    let bs = b.space();
    let zd = if z.is_zero() {
        0
    } else {
        let d = bs.degree_of(z.leading().unwrap().0);
        if !bs.is_homogeneous(z, d) {
            return Err(Error::Precondition("killed element is not homogeneous".into()));
        }
        d
    };
    if zd.rem_euclid(2) != 0 {
        return Err(Error::Precondition(format!("killed cycle has odd degree {zd}")));
    }
    if !b.diff(z).is_zero() {
        return Err(Error::Precondition("killed element is not a cycle".into()));
    }
    if bs.all_labels().any(|l| l == name) {
        return Err(Error::Precondition(format!("variable name `{name}` already in use")));
    }
    let xd = zd + 1;
    let lo = bs.lo().min(bs.lo() + xd);
    let hi = bs.hi().max(bs.hi() + xd);
    let mut labels = Vec::new();
    for n in lo..=hi {
        let mut ls: Vec<String> = bs.labels_in(n).to_vec();
        let c_deg = n - xd;
        for (i, l) in bs.labels_in(c_deg).iter().enumerate() {
            if bs.global(c_deg, i) == b.unit() {
                ls.push(name.to_string());
            } else {
                ls.push(format!("{l}*{name}"));
            }
        }
        labels.push(ls);
    }
    let space = GradedSpace::new(field, lo, labels)?;
    let plain: Vec<usize> = (0..b.dim())
        .map(|g| {
            let (d, i) = bs.local(g);
            space.global(d, i)
        })
        .collect();
    let with_x: Vec<usize> = (0..b.dim())
        .map(|g| {
            let (d, i) = bs.local(g);
            space.global(d + xd, bs.dim(d + xd) + i)
        })
        .collect();
    let n = space.total_dim();
    // (base index, has x) of each new basis element.
    let mut parts = vec![(0usize, false); n];
    for g in 0..b.dim() {
        parts[plain[g]] = (g, false);
        parts[with_x[g]] = (g, true);
    }
    let lift = |v: &SparseVec, x: bool| v.reindex(|g| if x { with_x[g] } else { plain[g] });
    let mul = |p: usize, q: usize| -> SparseVec {
        let ((bp, xp), (bq, xq)) = (parts[p], parts[q]);
        match (xp, xq) {
            (false, false) => lift(b.mul_basis(bp, bq), false),
            (false, true) => lift(b.mul_basis(bp, bq), true),
            (true, false) => {
                let s = field.sign((xd * b.degree(bq)) as i64);
                lift(b.mul_basis(bp, bq), true).scale(&s)
            }
            (true, true) => SparseVec::new(),
        }
    };
    let mut products = Vec::new();
    for p in 0..n {
        for q in p..n {
            products.push((p, q, mul(p, q)));
        }
    }
    let images: Vec<SparseVec> = (0..n)
        .map(|p| {
            let (g, x) = parts[p];
            let e = SparseVec::unit(g, field);
            let db = b.diff(&e);
            if !x {
                lift(&db, false)
            } else {
                let mut out = lift(&db, true);
                let s = field.sign(b.degree(g) as i64);
                out.axpy(&s, &lift(&b.mul(&e, z), false));
                out
            }
        })
        .collect();
    let complex = ChainComplex::from_global(space, &images)?;
    let ext = Arc::new(DGAlgebra::new(complex, plain[b.unit()], products)?);
    let incl = AlgebraMorphism::new(
        b.clone(),
        ext.clone(),
        plain.iter().map(|&g| SparseVec::unit(g, field)).collect(),
    )?;
    Ok((ext, incl))
}

impl KoszulExtension {
    /// `B` itself, no variables.
    pub fn trivial(b: &Arc<DGAlgebra>) -> Self {
        KoszulExtension {
            base: b.clone(),
            algebra: b.clone(),
            variables: Vec::new(),
            cycles: Vec::new(),
            inclusion: AlgebraMorphism::identity(b.clone()),
        }
    }

    /// Adjoins a variable killing a cycle `z` of the current algebra.
    pub fn extend(&self, name: &str, z: &SparseVec) -> Result<Self> {
        let (algebra, step) = adjoin(&self.algebra, name, z)?;
        let inclusion = step.compose(&self.inclusion)?;
        let zd = self
            .algebra
            .space()
            .degree_of(z.leading().map_or(self.algebra.unit(), |e| e.0));
        let mut variables = self.variables.clone();
        variables.push((name.to_string(), zd + 1));
        let mut cycles = self.cycles.clone();
        cycles.push(z.clone());
        Ok(KoszulExtension {
            base: self.base.clone(),
            algebra,
            variables,
            cycles,
            inclusion,
        })
    }
}

/// `B⟨x_1, …, x_n⟩` killing cycles of `B` in order.
pub fn koszul_extension(b: &Arc<DGAlgebra>, vars: &[(String, SparseVec)]) -> Result<KoszulExtension> {
    let mut ext = KoszulExtension::trivial(b);
    for (name, z) in vars {
        let z_here = ext.inclusion.apply(z);
        ext = ext.extend(name, &z_here)?;
    }
    Ok(ext)
}

/// The Koszul complex on the named generators of the maximal ideal, which
/// must be minimal; variables are `e1, e2, …`.
pub fn koszul_complex(r: &ArtinianLocalRing) -> Result<KoszulExtension> {
    if !r.generators_minimal()? {
        return Err(Error::Precondition(
            "generators of the maximal ideal are not minimal".into(),
        ));
    }
    let vars: Vec<(String, SparseVec)> = (0..r.vars().len())
        .map(|i| (format!("e{}", i + 1), r.var_element(i).clone()))
        .collect();
    koszul_extension(&r.as_dg_algebra(), &vars)
}

/// `M⟨X⟩ = B⟨X⟩ ⊗_B M` with its `B⟨X⟩`-action.
pub fn module_koszul_extension(ext: &KoszulExtension, m: &DGModule) -> Result<DGModule> {
    if **m.algebra() != *ext.base {
        return Err(Error::Precondition(
            "module is not over the base of the extension".into(),
        ));
    }
    let regular = DGModule::regular(ext.algebra.clone());
    let left = regular.restrict(&ext.inclusion)?;
    let (_, module) = tensor_over_acting(&left, m, ExtraAction::Left(&regular))?;
    Ok(module)
}
