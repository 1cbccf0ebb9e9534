//! Semifree resolutions of DG modules, Tor, Poincaré series, syzygies and
//! perfection certificates.
//!
//! An element of a semifree module `F = ⊕ B·g` is a sparse vector whose index
//! `g·dim B + b` stands for `e_b·g`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::dga::DGAlgebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{self, homology, ChainComplex, GradedMap, GradedSpace};
use crate::linalg::{Accumulator, Echelon, Matrix, SparseVec};
use crate::module::DGModule;

/// One semibasis element.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub label: String,
    pub degree: i32,
    /// `∂g` in free coordinates.
    pub boundary: SparseVec,
    /// Image under the comparison map, a global vector of the target.
    pub image: SparseVec,
}

/// Input form of a generator: `∂g = Σ β_h·g_h` as `(h, β_h)` pairs.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub degree: i32,
    pub boundary: Vec<(usize, SparseVec)>,
    pub image: SparseVec,
}

/// A semifree DG module with an ordered semibasis and a comparison map to
/// its target, complete through `truncation`.
#[derive(Clone, Debug)]
pub struct SemifreeResolution {
    algebra: Arc<DGAlgebra>,
    target: DGModule,
    gens: Vec<Generator>,
    truncation: i32,
    minimal: bool,
}

struct Free<'a> {
    alg: &'a DGAlgebra,
    gens: &'a [Generator],
}

impl<'a> Free<'a> {
    fn nb(&self) -> usize {
        self.alg.dim()
    }

    fn mul_left(&self, x: &SparseVec, v: &SparseVec) -> SparseVec {
        let nb = self.nb();
        let mut acc = Accumulator::new();
        for (b, cb) in x.iter() {
            for (key, cv) in v.iter() {
                let (g, b2) = (key / nb, key % nb);
                let c = cb.mul(cv);
                for (b3, c3) in self.alg.mul_basis(*b, b2).iter() {
                    acc.add(g * nb + b3, c.mul(c3));
                }
            }
        }
        acc.finish()
    }

    fn diff_key(&self, key: usize) -> SparseVec {
        let nb = self.nb();
        let field = self.alg.field();
        let (g, b) = (key / nb, key % nb);
        let mut out = self.alg.complex().global_diff(b).reindex(|b2| g * nb + b2);
        let sign = field.sign(self.alg.degree(b) as i64);
        let rest = self.mul_left(&SparseVec::unit(b, field), &self.gens[g].boundary);
        out.axpy(&sign, &rest);
        out
    }

    fn diff(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (k, c) in v.iter() {
            acc.add_scaled(c, &self.diff_key(*k));
        }
        acc.finish()
    }

    fn phi(&self, m: &DGModule, v: &SparseVec) -> SparseVec {
        let nb = self.nb();
        let mut acc = Accumulator::new();
        for (k, c) in v.iter() {
            acc.add_scaled(c, &m.act_basis(k % nb, &self.gens[k / nb].image));
        }
        acc.finish()
    }

    /// Keys of degree `d`, ordered by (generator, algebra basis).
    fn keys_in(&self, d: i32) -> Vec<usize> {
        let nb = self.nb();
        let mut out = Vec::new();
        for (g, gen) in self.gens.iter().enumerate() {
            if gen.degree > d {
                break;
            }
            for b in self.alg.basis_in(d - gen.degree) {
                out.push(g * nb + b);
            }
        }
        out
    }

    /// Splits `v` into `(generator, coefficient in B)` pairs.
    fn terms(&self, v: &SparseVec) -> Vec<(usize, SparseVec)> {
        let nb = self.nb();
        let mut map: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (k, c) in v.iter() {
            map.entry(k / nb).or_default().push((k % nb, c.clone()));
        }
        map.into_iter().map(|(g, e)| (g, SparseVec::from_entries(e))).collect()
    }
}

fn positions(keys: &[usize]) -> HashMap<usize, usize> {
    keys.iter().enumerate().map(|(i, &k)| (k, i)).collect()
}

fn check_non_negative(alg: &DGAlgebra) -> Result<()> {
    let s = alg.space();
    if s.degrees().any(|d| d < 0 && s.dim(d) > 0) {
        return Err(Error::Precondition(
            "resolutions need an algebra concentrated in non-negative degrees".into(),
        ));
    }
    Ok(())
}

fn relabel(gens: &mut [Generator]) {
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    for g in gens.iter_mut() {
        let c = counts.entry(g.degree).or_default();
        g.label = format!("g{}_{}", g.degree, c);
        *c += 1;
    }
}

/// Inverse of a unit of `B_0`: `u = c(1 + n)` with `n` nilpotent.
fn unit_inverse(alg: &DGAlgebra, u: &SparseVec) -> Result<SparseVec> {
    let field = alg.field();
    let c = alg.epsilon(u)?;
    if c.is_zero() {
        return Err(Error::Internal("inverting a non-unit".into()));
    }
    let ci = c.inv();
    let mut n = u.scale(&ci);
    n.axpy(&field.from_i64(-1), &alg.unit_vec());
    let step = n.neg();
    let mut term = alg.unit_vec();
    let mut sum = SparseVec::new();
    for _ in 0..=alg.dim() {
        if term.is_zero() {
            break;
        }
        sum.axpy(&field.one(), &term);
        term = alg.mul(&term, &step);
    }
    if !term.is_zero() {
        return Err(Error::Internal("maximal ideal element is not nilpotent".into()));
    }
    Ok(sum.scale(&ci))
}

impl SemifreeResolution {
    /// Builds from explicit data; generators must be listed in non-decreasing
    /// degree with boundaries on earlier generators. Checks `∂² = 0`, the
    /// comparison map, and cone acyclicity through `truncation`.
    pub fn from_parts(target: &DGModule, specs: Vec<GeneratorSpec>, truncation: i32) -> Result<Self> {
        let alg = target.algebra().clone();
        check_non_negative(&alg)?;
        let nb = alg.dim();
        let mut gens = Vec::with_capacity(specs.len());
        for (j, s) in specs.into_iter().enumerate() {
            if let Some(prev) = gens.last().map(|g: &Generator| g.degree) {
                if s.degree < prev {
                    return Err(Error::Precondition("generators must be sorted by degree".into()));
                }
            }
            let mut boundary = SparseVec::new();
            for (h, beta) in &s.boundary {
                if *h >= j {
                    return Err(Error::Precondition(format!(
                        "boundary of generator {j} uses a later generator"
                    )));
                }
                let want = s.degree - 1 - gens[*h].degree;
                if !alg.space().is_homogeneous(beta, want) {
                    return Err(Error::Dimension(format!(
                        "coefficient of generator {h} in ∂ of generator {j} must have degree {want}"
                    )));
                }
                boundary.axpy(&alg.field().one(), &beta.reindex(|b| h * nb + b));
            }
            gens.push(Generator {
                label: String::new(),
                degree: s.degree,
                boundary,
                image: s.image,
            });
        }
        relabel(&mut gens);
        let mut res = SemifreeResolution {
            algebra: alg,
            target: target.clone(),
            gens,
            truncation,
            minimal: false,
        };
        res.verify()?;
        res.minimal = res.algebra.is_local() && res.check_minimal()?;
        Ok(res)
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra> {
        &self.algebra
    }

    pub fn target(&self) -> &DGModule {
        &self.target
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    fn free(&self) -> Free<'_> {
        Free {
            alg: &self.algebra,
            gens: &self.gens,
        }
    }

    /// `∂g_j` as `(h, β_h)` pairs.
    pub fn boundary_terms(&self, j: usize) -> Vec<(usize, SparseVec)> {
        self.free().terms(&self.gens[j].boundary)
    }

    /// Number of generators in each degree `lo..=hi`.
    pub fn counts(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi)
            .map(|d| self.gens.iter().filter(|g| g.degree == d).count())
            .collect()
    }

    /// Whether `∂(F) ⊆ 𝔫F`.
    pub fn check_minimal(&self) -> Result<bool> {
        let alg = &self.algebra;
        for (j, g) in self.gens.iter().enumerate() {
            for (h, beta) in self.boundary_terms(j) {
                if self.gens[h].degree == g.degree - 1 && !alg.epsilon(&beta)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `F` as a finite chain complex, keys ordered by degree then
    /// (generator, algebra basis). Returns the key of each global index.
    fn free_complex(&self) -> Result<(ChainComplex, Vec<usize>)> {
        let free = self.free();
        let field = self.algebra.field();
        if self.gens.is_empty() {
            return Ok((ChainComplex::zero(field), Vec::new()));
        }
        let lo = self.gens[0].degree;
        let hi = self.gens.last().unwrap().degree + self.algebra.space().hi().max(0);
        let mut labels = Vec::new();
        let mut order = Vec::new();
        for d in lo..=hi {
            let keys = free.keys_in(d);
            labels.push(
                keys.iter()
                    .map(|&k| {
                        let (g, b) = (k / free.nb(), k % free.nb());
                        if b == self.algebra.unit() {
                            self.gens[g].label.clone()
                        } else {
                            format!("{}·{}", self.algebra.label(b), self.gens[g].label)
                        }
                    })
                    .collect(),
            );
            order.extend(keys);
        }
        let space = GradedSpace::new(field, lo, labels)?;
        let pos = positions(&order);
        let images: Vec<SparseVec> = order.iter().map(|&k| free.diff_key(k).reindex(|k2| pos[&k2])).collect();
        let c = ChainComplex::from_global(space, &images)?;
        Ok((c, order))
    }

    /// `F` as a DG module with its comparison morphism images (global).
    pub fn to_module(&self) -> Result<(DGModule, Vec<SparseVec>)> {
        let (c, order) = self.free_complex()?;
        let free = self.free();
        let pos = positions(&order);
        let field = self.algebra.field();
        let action = (0..self.algebra.dim())
            .map(|b| {
                order
                    .iter()
                    .map(|&k| {
                        free.mul_left(&SparseVec::unit(b, field), &SparseVec::unit(k, field))
                            .reindex(|k2| pos[&k2])
                    })
                    .collect()
            })
            .collect();
        let module = DGModule::new_unchecked(self.algebra.clone(), c, action)?;
        let images = order
            .iter()
            .map(|&k| free.phi(&self.target, &SparseVec::unit(k, field)))
            .collect();
        Ok((module, images))
    }

    /// Cone of the comparison map as a chain complex.
    pub fn comparison_cone(&self) -> Result<ChainComplex> {
        let (f, _) = self.free_complex()?;
        let (fm, images) = self.to_module()?;
        let map = GradedMap::from_global(f.space(), self.target.space(), 0, &images)?;
        graded::cone(fm.complex(), self.target.complex(), &map)
    }

    /// Checks `∂² = 0`, the chain map and cone acyclicity through the truncation.
    pub fn verify(&self) -> Result<()> {
        let cone = self.comparison_cone()?;
        let s = cone.space();
        if s.total_dim() == 0 {
            return Ok(());
        }
        let hi = self.truncation.min(s.hi());
        if s.lo() > hi {
            return Ok(());
        }
        let h = homology(&cone, Some((s.lo(), hi)))?;
        if let Some(d) = h.degrees().find(|&d| h.dim(d) > 0) {
            return Err(Error::Internal(format!("comparison cone has homology in degree {d}")));
        }
        Ok(())
    }

    /// Whether the comparison cone is acyclic in every degree.
    pub fn is_exact_everywhere(&self) -> Result<bool> {
        let cone = self.comparison_cone()?;
        Ok(homology(&cone, None)?.is_zero())
    }

    /// Copy with a contractible pair `u`, `v` (`∂v = u`, both mapping to 0)
    /// adjoined in degrees `d` and `d + 1`.
    pub fn padded(&self, d: i32) -> Result<Self> {
        let mut specs: Vec<(usize, GeneratorSpec)> = Vec::new();
        let old: Vec<GeneratorSpec> = (0..self.gens.len())
            .map(|j| GeneratorSpec {
                degree: self.gens[j].degree,
                boundary: self.boundary_terms(j),
                image: self.gens[j].image.clone(),
            })
            .collect();
        let pos_u = self.gens.iter().take_while(|g| g.degree <= d).count();
        let pos_v = self.gens.iter().take_while(|g| g.degree <= d + 1).count();
        // New index of an old generator.
        let remap = |j: usize| j + usize::from(j >= pos_u) + usize::from(j >= pos_v);
        for (j, s) in old.into_iter().enumerate() {
            let boundary = s.boundary.into_iter().map(|(h, b)| (remap(h), b)).collect();
            specs.push((
                remap(j),
                GeneratorSpec {
                    degree: s.degree,
                    boundary,
                    image: s.image,
                },
            ));
        }
        let u_idx = pos_u;
        specs.push((
            u_idx,
            GeneratorSpec {
                degree: d,
                boundary: Vec::new(),
                image: SparseVec::new(),
            },
        ));
        specs.push((
            pos_v + 1,
            GeneratorSpec {
                degree: d + 1,
                boundary: vec![(u_idx, self.algebra.unit_vec())],
                image: SparseVec::new(),
            },
        ));
        specs.sort_by_key(|(i, _)| *i);
        SemifreeResolution::from_parts(
            &self.target,
            specs.into_iter().map(|(_, s)| s).collect(),
            self.truncation,
        )
    }
}

/// Degree-by-degree construction; `nakayama` selects the minimal engine.
fn build(m: &DGModule, n: i32, nakayama: bool) -> Result<SemifreeResolution> {
    let alg = m.algebra().clone();
    check_non_negative(&alg)?;
    let field = alg.field();
    let m0 = if nakayama {
        alg.local_data()?.maximal_ideal_0.clone()
    } else {
        Vec::new()
    };
    let ms = m.space();
    let mut gens: Vec<Generator> = Vec::new();
    let Some(start) = ms.inf() else {
        return Ok(SemifreeResolution {
            algebra: alg,
            target: m.clone(),
            gens,
            truncation: n,
            minimal: nakayama,
        });
    };
    let mdim = |d: i32| ms.dim(d);
    let mcomp = |v: &SparseVec, d: i32| -> SparseVec {
        if mdim(d) == 0 {
            SparseVec::new()
        } else {
            ms.component(v, d)
        }
    };
    for d in start..=n {
        let free = Free { alg: &alg, gens: &gens };
        let k0 = free.keys_in(d);
        let k1 = free.keys_in(d - 1);
        let k2 = free.keys_in(d - 2);
        let (p1, p2) = (positions(&k1), positions(&k2));
        // ∂ out of cone_d.
        let mut cols = Vec::with_capacity(k1.len() + mdim(d));
        for &k in &k1 {
            let mut v = free.diff_key(k).reindex(|x| p2[&x]).neg();
            v.axpy(
                &field.one(),
                &mcomp(&free.phi(m, &SparseVec::unit(k, field)), d - 1).shifted(k2.len()),
            );
            cols.push(v);
        }
        for i in 0..mdim(d) {
            cols.push(m.complex().apply_diff(d, &SparseVec::unit(i, field)).shifted(k2.len()));
        }
        let dd = Matrix::from_columns_unchecked(field, k2.len() + mdim(d - 1), cols);
        // ∂ into cone_d.
        let mut cols = Vec::with_capacity(k0.len() + mdim(d + 1));
        for &k in &k0 {
            let mut v = free.diff_key(k).reindex(|x| p1[&x]).neg();
            v.axpy(
                &field.one(),
                &mcomp(&free.phi(m, &SparseVec::unit(k, field)), d).shifted(k1.len()),
            );
            cols.push(v);
        }
        for i in 0..mdim(d + 1) {
            cols.push(
                m.complex()
                    .apply_diff(d + 1, &SparseVec::unit(i, field))
                    .shifted(k1.len()),
            );
        }
        let du = Matrix::from_columns_unchecked(field, k1.len() + mdim(d), cols);
        let cycles = dd.kernel_basis();
        let mut ech = du.image_echelon();
        let split = |z: &SparseVec| -> (SparseVec, SparseVec) {
            let f = z.slice(0, k1.len()).reindex(|i| k1[i]);
            let mm = z.slice(k1.len(), k1.len() + mdim(d));
            (f, mm)
        };
        for x in &m0 {
            for z in &cycles {
                let (f, mm) = split(z);
                let mut v = free.mul_left(x, &f).reindex(|k| p1[&k]);
                if !mm.is_zero() {
                    let img = m.act(x, &ms.embed(&mm, d));
                    v.axpy(&field.one(), &mcomp(&img, d).shifted(k1.len()));
                }
                ech.insert(&v, SparseVec::new());
            }
        }
        let mut new = Vec::new();
        for z in &cycles {
            let (res, _) = ech.reduce(z);
            if res.is_zero() {
                continue;
            }
            ech.insert_reduced(res, SparseVec::new());
            let (f, mm) = split(z);
            let image = if mm.is_zero() {
                SparseVec::new()
            } else {
                ms.embed(&mm, d).neg()
            };
            new.push(Generator {
                label: String::new(),
                degree: d,
                boundary: f,
                image,
            });
        }
        gens.extend(new);
    }
    relabel(&mut gens);
    let mut res = SemifreeResolution {
        algebra: alg,
        target: m.clone(),
        gens,
        truncation: n,
        minimal: false,
    };
    if res.algebra.is_local() {
        res.minimal = res.check_minimal()?;
        if nakayama && !res.minimal {
            res = minimize(&res)?;
            if !res.minimal {
                return Err(Error::Internal(
                    "minimal engine produced a non-minimal resolution".into(),
                ));
            }
        }
    }
    Ok(res)
}

/// Minimal semifree resolution with semibasis through degree `n`.
pub fn minimal_semifree_resolution(m: &DGModule, n: i32) -> Result<SemifreeResolution> {
    build(m, n, true)
}

/// Semifree resolution without the Nakayama reduction; works over
/// non-local algebras.
pub fn semifree_resolution(m: &DGModule, n: i32) -> Result<SemifreeResolution> {
    build(m, n, false)
}

/// Cancels unit pivots until `∂(F) ⊆ 𝔫F`, carrying the comparison map along.
pub fn minimize(res: &SemifreeResolution) -> Result<SemifreeResolution> {
    let mut cur = res.clone();
    while let Some((j, i, u)) = find_unit_pivot(&cur)? {
        cur = cancel(&cur, j, i, &u)?;
    }
    cur.minimal = true;
    Ok(cur)
}

fn find_unit_pivot(res: &SemifreeResolution) -> Result<Option<(usize, usize, SparseVec)>> {
    for (j, g) in res.gens.iter().enumerate() {
        for (h, beta) in res.boundary_terms(j) {
            if res.gens[h].degree == g.degree - 1 && !res.algebra.epsilon(&beta)?.is_zero() {
                return Ok(Some((j, h, beta)));
            }
        }
    }
    Ok(None)
}

/// Passes to `F / (B g_j + B ∂g_j)` where `∂g_j = u g_i + r` with `u` a unit.
fn cancel(res: &SemifreeResolution, j: usize, i: usize, u: &SparseVec) -> Result<SemifreeResolution> {
    let alg = &res.algebra;
    let field = alg.field();
    let nb = alg.dim();
    let free = res.free();
    let uinv = unit_inverse(alg, u)?;
    // g_i ≡ −u⁻¹ r in the quotient.
    let mut r = res.gens[j].boundary.clone();
    r.axpy(&field.from_i64(-1), &u.reindex(|b| i * nb + b));
    let gi_sub = free.mul_left(&uinv, &r).neg();
    let project = |v: &SparseVec| -> SparseVec {
        let mut acc = Accumulator::new();
        for (k, c) in v.iter() {
            let (g, b) = (k / nb, k % nb);
            if g == j {
                continue;
            } else if g == i {
                acc.add_scaled(c, &free.mul_left(&SparseVec::unit(b, field), &gi_sub));
            } else {
                acc.add(*k, c.clone());
            }
        }
        acc.finish()
    };
    let dgj = res.gens[j].boundary.clone();
    let c_basis = |e: i32| -> Vec<SparseVec> {
        let mut out = Vec::new();
        for b in alg.basis_in(e - res.gens[i].degree) {
            out.push(free.mul_left(&SparseVec::unit(b, field), &dgj));
        }
        for b in alg.basis_in(e - res.gens[j].degree) {
            out.push(SparseVec::unit(j * nb + b, field));
        }
        out
    };
    // Section values, in old free coordinates.
    let mut section: HashMap<usize, SparseVec> = HashMap::new();
    let mut kept = Vec::new();
    for k in 0..res.gens.len() {
        if k == i || k == j {
            continue;
        }
        let g = &res.gens[k];
        let dprime = project(&g.boundary);
        let mut s_dprime = Accumulator::new();
        for (key, c) in dprime.iter() {
            let (h, b) = (key / nb, key % nb);
            let sh = &section[&h];
            s_dprime.add_scaled(c, &free.mul_left(&SparseVec::unit(b, field), sh));
        }
        let mut t = g.boundary.clone();
        t.axpy(&field.from_i64(-1), &s_dprime.finish());
        let mut sk = SparseVec::unit(k, field).reindex(|x| x * nb + alg.unit());
        if !t.is_zero() {
            let basis = c_basis(g.degree);
            let mut ech = Echelon::new(field);
            for (l, v) in basis.iter().enumerate() {
                ech.insert(&free.diff(v), SparseVec::unit(l, field));
            }
            let (resid, pay) = ech.reduce(&t);
            if !resid.is_zero() {
                return Err(Error::Internal("cancellation section does not lift".into()));
            }
            for (l, c) in pay.iter() {
                sk.axpy(&c.neg(), &basis[*l]);
            }
        }
        section.insert(k, sk);
        kept.push((k, dprime));
    }
    let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(n, (k, _))| (*k, n)).collect();
    let mut gens = Vec::with_capacity(kept.len());
    for (k, dprime) in kept {
        let image = free.phi(&res.target, &section[&k]);
        gens.push(Generator {
            label: String::new(),
            degree: res.gens[k].degree,
            boundary: dprime.reindex(|key| new_index[&(key / nb)] * nb + key % nb),
            image,
        });
    }
    relabel(&mut gens);
    let mut out = SemifreeResolution {
        algebra: res.algebra.clone(),
        target: res.target.clone(),
        gens,
        truncation: res.truncation,
        minimal: false,
    };
    out.verify()?;
    out.minimal = out.check_minimal()?;
    Ok(out)
}

/// Graded dimensions of Tor over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub lo: i32,
    pub hi: i32,
    pub dims: Vec<usize>,
    /// Largest degree whose value does not depend on the truncation.
    pub clean_through: i32,
    pub provenance: String,
}

impl TorTable {
    pub fn at(&self, d: i32) -> usize {
        if d < self.lo || d > self.hi {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    /// Top degree with nonzero entry.
    pub fn sup(&self) -> Option<i32> {
        (self.lo..=self.hi).rev().find(|&d| self.at(d) > 0)
    }

    pub fn inf(&self) -> Option<i32> {
        (self.lo..=self.hi).find(|&d| self.at(d) > 0)
    }
}

/// Poincaré series coefficients from `lo` through `hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesCoefficients {
    pub lo: i32,
    pub coefficients: Vec<usize>,
}

impl SeriesCoefficients {
    pub fn at(&self, d: i32) -> usize {
        if d < self.lo {
            return 0;
        }
        self.coefficients.get((d - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coefficients.len() as i32 - 1
    }
}

/// `L ⊗_B F ≅ L ⊗_k V`, ordered in each degree by (generator, basis of `L`).
pub fn tensor_with_resolution(l: &DGModule, res: &SemifreeResolution) -> Result<ChainComplex> {
    if **l.algebra() != *res.algebra {
        return Err(Error::Precondition(
            "tensor with a resolution over another algebra".into(),
        ));
    }
    let field = l.field();
    let ls = l.space();
    let (Some(linf), Some(lsup)) = (ls.inf(), ls.sup()) else {
        return Ok(ChainComplex::zero(field));
    };
    if res.gens.is_empty() {
        return Ok(ChainComplex::zero(field));
    }
    let alg = &res.algebra;
    let nb = alg.dim();
    let lo = res.gens[0].degree + linf;
    let hi = res.gens.last().unwrap().degree + lsup;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut order = Vec::new();
    for n in lo..=hi {
        let mut ls_n = Vec::new();
        for (g, gen) in res.gens.iter().enumerate() {
            let j = n - gen.degree;
            for a in 0..ls.dim(j) {
                let lg = ls.global(j, a);
                index.insert((g, lg), order.len());
                order.push((g, lg));
                ls_n.push(format!("{}⊗{}", ls.label(lg), gen.label));
            }
        }
        labels.push(ls_n);
    }
    let space = GradedSpace::new(field, lo, labels)?;
    let images: Vec<SparseVec> = order
        .iter()
        .map(|&(g, lg)| {
            let ld = ls.degree_of(lg);
            let mut acc = Accumulator::new();
            for (l2, c) in l.complex().global_diff(lg).iter() {
                acc.add(index[&(g, *l2)], c.clone());
            }
            let sign = field.sign(ld as i64);
            for (key, c) in res.gens[g].boundary.iter() {
                let (h, b) = (key / nb, key % nb);
                let s = sign.mul(&field.sign((ld * alg.degree(b)) as i64)).mul(c);
                for (l2, c2) in l.action_table()[b][lg].iter() {
                    acc.add(index[&(h, *l2)], s.mul(c2));
                }
            }
            acc.finish()
        })
        .collect();
    let exact = res.truncation + linf;
    Ok(ChainComplex::from_global(space, &images)?.with_exact_through(Some(exact)))
}

/// Degree through which `m` must be resolved to read off Tor against `l` up to `hi`.
pub fn required_truncation(l: &DGModule, hi: i32) -> i32 {
    hi + 1 - l.space().inf().unwrap_or(0)
}

/// Tor from a given resolution; errors when the window is not clean.
pub fn tor_from_resolution(l: &DGModule, res: &SemifreeResolution, window: (i32, i32)) -> Result<TorTable> {
    let (lo, hi) = window;
    let need = required_truncation(l, hi);
    if res.truncation < need {
        return Err(Error::Truncation {
            degree: need,
            exact_through: res.truncation,
        });
    }
    let c = tensor_with_resolution(l, res)?;
    for d in lo..=hi {
        c.check_clean(d)?;
    }
    let h = homology(&c, Some((lo, hi)))?;
    let dims = (lo..=hi).map(|d| h.dim(d)).collect();
    Ok(TorTable {
        lo,
        hi,
        dims,
        clean_through: res.truncation + l.space().inf().unwrap_or(0) - 1,
        provenance: format!(
            "{} resolution of the second argument through degree {}",
            if res.minimal { "minimal" } else { "semifree" },
            res.truncation
        ),
    })
}

/// `Tor^B(L, M)` on `window`, resolving `M`.
pub fn tor(l: &DGModule, m: &DGModule, window: (i32, i32)) -> Result<TorTable> {
    if **l.algebra() != **m.algebra() {
        return Err(Error::Precondition("Tor of modules over different algebras".into()));
    }
    let need = required_truncation(l, window.1);
    let res = if m.algebra().is_local() {
        minimal_semifree_resolution(m, need)?
    } else {
        semifree_resolution(m, need)?
    };
    tor_from_resolution(l, &res, window)
}

/// Poincaré series of `m`: generator counts of a minimal resolution, degrees
/// `min(0, inf M)` through `n`.
pub fn tor_against_k(m: &DGModule, n: i32) -> Result<SeriesCoefficients> {
    let res = minimal_semifree_resolution(m, n)?;
    Ok(series_from(&res, m, n))
}

fn series_from(res: &SemifreeResolution, m: &DGModule, n: i32) -> SeriesCoefficients {
    let lo = m.space().inf().unwrap_or(0).min(0);
    SeriesCoefficients {
        lo,
        coefficients: res.counts(lo, n),
    }
}

/// Result of [`certify_perfect`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum PerfectionVerdict {
    /// The minimal resolution is finite with top generator degree `top`.
    Perfect {
        top: Option<i32>,
        counts: Vec<usize>,
    },
    /// Generator counts nonzero and non-decreasing at the top of the window.
    NotPerfect {
        counts: Vec<usize>,
    },
    Undetermined {
        reason: String,
        counts: Vec<usize>,
    },
}

impl PerfectionVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            PerfectionVerdict::Perfect { .. } => "PERFECT",
            PerfectionVerdict::NotPerfect { .. } => "NOT-PERFECT",
            PerfectionVerdict::Undetermined { .. } => "UNDETERMINED",
        }
    }
}

/// Number of top degrees inspected by the boundedness proxy.
pub fn tail_length(n: i32) -> usize {
    3usize.max((n.max(0) / 4) as usize)
}

/// Perfection certificate on the window `[inf, n]`.
pub fn certify_perfect(m: &DGModule, n: i32) -> Result<PerfectionVerdict> {
    let res = minimal_semifree_resolution(m, n)?;
    let lo = m.space().inf().unwrap_or(0).min(0);
    let counts = res.counts(lo, n);
    let top = res.gens.last().map(|g| g.degree);
    if top.is_none_or(|t| t < n) && res.is_exact_everywhere()? {
        return Ok(PerfectionVerdict::Perfect { top, counts });
    }
    let tail = tail_length(n).min(counts.len());
    let last = &counts[counts.len() - tail..];
    if last.iter().all(|&c| c > 0) && last.windows(2).all(|w| w[0] <= w[1]) {
        return Ok(PerfectionVerdict::NotPerfect { counts });
    }
    Ok(PerfectionVerdict::Undetermined {
        reason: "generator counts neither stop nor grow within the window".into(),
        counts,
    })
}

/// The exact sequence `0 → M' → F → M'' → 0` with `F` finite semifree.
#[derive(Clone, Debug)]
pub struct Syzygy {
    pub sub: DGModule,
    pub free: DGModule,
    pub quotient: DGModule,
    /// Inclusion `M' → F`, global images.
    pub inclusion: Vec<SparseVec>,
    /// Projection `F → M''`, global images.
    pub projection: Vec<SparseVec>,
    /// `sup H(M)`.
    pub top: i32,
}

/// Truncates a minimal resolution of `m` above `s = sup H(m)`.
pub fn syzygy(m: &DGModule) -> Result<Syzygy> {
    let field = m.field();
    let h = homology(m.complex(), None)?;
    let Some(s) = h.degrees().rev().find(|&d| h.dim(d) > 0) else {
        return Err(Error::Precondition("syzygy needs nonzero homology".into()));
    };
    let res = minimal_semifree_resolution(m, s + 1)?;
    let (e, _) = res.to_module()?;
    let es = e.space().clone();
    let nb = res.algebra.dim();
    let (_, order) = res.free_complex()?;
    // F: keys on generators of degree ≤ s.
    let mut fbasis: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    for (gidx, &k) in order.iter().enumerate() {
        if res.gens[k / nb].degree <= s {
            let (d, i) = es.local(gidx);
            fbasis.entry(d).or_default().push(SparseVec::unit(i, field));
        }
    }
    let (free, f_incl) = e.submodule(&fbasis)?;
    // L = E_{≥ s+1} + ∂E_{s+1}.
    let mut rel: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    for d in es.degrees() {
        if d > s {
            rel.insert(d, (0..es.dim(d)).map(|i| SparseVec::unit(i, field)).collect());
        }
    }
    if es.dim(s + 1) > 0 {
        let bd = e.complex().diff_at(s + 1).columns();
        rel.entry(s)
            .or_default()
            .extend(bd.into_iter().filter(|v| !v.is_zero()));
    }
    let (quotient, q_proj) = e.quotient(&rel)?;
    let fs = free.space().clone();
    let qs = quotient.space().clone();
    let projection: Vec<SparseVec> = (0..fs.total_dim())
        .map(|g| {
            let (d, i) = fs.local(g);
            let in_e = f_incl.apply(d, &SparseVec::unit(i, field));
            let img = q_proj.apply(d, &in_e);
            if qs.dim(d) == 0 {
                SparseVec::new()
            } else {
                qs.embed(&img, d)
            }
        })
        .collect();
    let mut kbasis = BTreeMap::new();
    for d in fs.degrees() {
        let cols: Vec<SparseVec> = (0..fs.dim(d)).map(|i| projection[fs.global(d, i)].clone()).collect();
        let rows = qs.total_dim();
        let mat = Matrix::from_columns_unchecked(field, rows, cols);
        let k = mat.kernel_basis();
        if !k.is_empty() {
            kbasis.insert(d, k);
        }
    }
    let (sub, s_incl) = free.submodule(&kbasis)?;
    let ss = sub.space().clone();
    let inclusion: Vec<SparseVec> = (0..ss.total_dim())
        .map(|g| {
            let (d, i) = ss.local(g);
            fs.embed(&s_incl.apply(d, &SparseVec::unit(i, field)), d)
        })
        .collect();
    Ok(Syzygy {
        sub,
        free,
        quotient,
        inclusion,
        projection,
        top: s,
    })
}

impl Syzygy {
    /// Checks exactness, the rank bookkeeping, `M' ⊆ 𝔫F`, and `H(M'') ≅ H(M)`.
    pub fn verify(&self, m: &DGModule) -> Result<()> {
        let field = m.field();
        let fs = self.free.space();
        for d in fs.degrees() {
            let (a, b) = (self.sub.space().dim(d), self.quotient.space().dim(d));
            if a + b != fs.dim(d) {
                return Err(Error::Internal(format!("rank bookkeeping fails in degree {d}")));
            }
        }
        let mut nf = Echelon::new(field);
        for v in self.free.maximal_ideal_span()? {
            nf.insert(&v, SparseVec::new());
        }
        for (g, v) in self.inclusion.iter().enumerate() {
            if !nf.contains(v) {
                return Err(Error::Internal(format!(
                    "syzygy element `{}` is not in 𝔫F",
                    self.sub.space().label(g)
                )));
            }
            let mut acc = SparseVec::new();
            for (x, c) in v.iter() {
                acc.axpy(c, &self.projection[*x]);
            }
            if !acc.is_zero() {
                return Err(Error::Internal("composite M' → F → M'' is nonzero".into()));
            }
        }
        let ho = homology(self.quotient.complex(), None)?;
        let hm = homology(m.complex(), None)?;
        let lo = ho.degrees().start().min(hm.degrees().start()).to_owned();
        let hi = ho.hi().max(hm.hi());
        if (lo..=hi).any(|d| ho.dim(d) != hm.dim(d)) {
            return Err(Error::Internal("M'' and M have different homology".into()));
        }
        let hinf = (lo..=hi).find(|&d| hm.dim(d) > 0);
        if self.quotient.space().inf() != hinf {
            return Err(Error::Internal("inf M'' differs from inf H(M)".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::graded::GradedSpace;

    fn f() -> Field {
        Field::Prime(101)
    }

    fn dual_numbers() -> Arc<DGAlgebra> {
        let space = GradedSpace::from_pairs(f(), &[("1", 0), ("x", 0)]).unwrap();
        Arc::new(DGAlgebra::new(ChainComplex::trivial(space), 0, vec![]).unwrap())
    }

    fn square_zero(n: usize) -> Arc<DGAlgebra> {
        let mut pairs = vec![("1".to_string(), 0)];
        pairs.extend((0..n).map(|i| (format!("x{i}"), 0)));
        let space = GradedSpace::from_pairs(f(), &pairs).unwrap();
        Arc::new(DGAlgebra::new(ChainComplex::trivial(space), 0, vec![]).unwrap())
    }

    #[test]
    fn periodic_resolution_of_k() {
        let a = dual_numbers();
        let k = DGModule::residue_field(a.clone()).unwrap();
        let r = minimal_semifree_resolution(&k, 6).unwrap();
        assert!(r.is_minimal());
        assert_eq!(r.counts(0, 6), vec![1; 7]);
        r.verify().unwrap();
        for j in 1..7 {
            let t = r.boundary_terms(j);
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].0, j - 1);
            assert_eq!(t[0].1, SparseVec::unit(1, f()));
        }
    }

    #[test]
    fn square_zero_series() {
        let a = square_zero(2);
        let k = DGModule::residue_field(a).unwrap();
        let s = tor_against_k(&k, 6).unwrap();
        assert_eq!(s.coefficients, vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn free_module_resolves_to_itself() {
        let a = dual_numbers();
        let b = DGModule::regular(a);
        let r = minimal_semifree_resolution(&b, 5).unwrap();
        assert_eq!(r.generators().len(), 1);
        assert_eq!(certify_perfect(&b, 10).unwrap().name(), "PERFECT");
    }

    #[test]
    fn k_is_not_perfect() {
        let a = dual_numbers();
        let k = DGModule::residue_field(a).unwrap();
        assert_eq!(certify_perfect(&k, 10).unwrap().name(), "NOT-PERFECT");
    }

    #[test]
    fn tor_of_k_k() {
        let a = dual_numbers();
        let k = DGModule::residue_field(a).unwrap();
        let t = tor(&k, &k, (0, 5)).unwrap();
        assert_eq!(t.dims, vec![1; 6]);
    }

    #[test]
    fn minimize_cancels_padding() {
        let a = dual_numbers();
        let k = DGModule::residue_field(a).unwrap();
        let r = minimal_semifree_resolution(&k, 5).unwrap();
        let p = r.padded(2).unwrap().padded(0).unwrap();
        assert!(!p.is_minimal());
        assert_eq!(p.counts(0, 5), vec![2, 2, 2, 2, 1, 1]);
        let m = minimize(&p).unwrap();
        assert_eq!(m.counts(0, 5), vec![1; 6]);
        m.verify().unwrap();
    }

    #[test]
    fn syzygy_of_k() {
        let a = dual_numbers();
        let k = DGModule::residue_field(a).unwrap();
        let s = syzygy(&k).unwrap();
        s.verify(&k).unwrap();
        assert_eq!((s.free.space().dim(0), s.free.dim()), (2, 2));
        assert_eq!((s.sub.space().dim(0), s.sub.dim()), (1, 1));
        assert_eq!((s.quotient.space().dim(0), s.quotient.dim()), (1, 1));
    }

    #[test]
    fn unit_inverse_in_dual_numbers() {
        let a = dual_numbers();
        let u = SparseVec::from_entries(vec![(0, f().from_i64(3)), (1, f().from_i64(5))]);
        let v = unit_inverse(&a, &u).unwrap();
        assert_eq!(a.mul(&u, &v), a.unit_vec());
    }
}
