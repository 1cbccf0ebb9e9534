//! Detection of trivial-extension structure on DG algebras with `H_0 = k`
//! and on graded algebras with zero differential.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dga::{describe, DGAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, Solution, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructureVerdict {
    #[serde(rename = "CERTIFIED-k⋉W")]
    CertifiedKxW,
    #[serde(rename = "CERTIFIED-A⋉W")]
    CertifiedAxW,
    #[serde(rename = "REFUTED")]
    Refuted,
    #[serde(rename = "UNDETERMINED")]
    Undetermined,
}

impl fmt::Display for StructureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureVerdict::CertifiedKxW => "CERTIFIED-k⋉W",
            StructureVerdict::CertifiedAxW => "CERTIFIED-A⋉W",
            StructureVerdict::Refuted => "REFUTED",
            StructureVerdict::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StructureWitness {
    /// Cycles of the algebra, one per basis class of `H_{≠0}`, with all
    /// pairwise products zero.
    Representatives(Vec<SparseVec>),
    /// Bases of the complementary subalgebra `A` and of `W`.
    Split {
        a: Vec<SparseVec>,
        w: Vec<SparseVec>,
    },
    /// A nonzero product, in the coordinates named by the certificate.
    NonzeroProduct {
        left: SparseVec,
        right: SparseVec,
        product: SparseVec,
    },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureCertificate {
    pub verdict: StructureVerdict,
    pub witness: StructureWitness,
    /// Human-readable witness summary.
    pub detail: String,
}

impl StructureCertificate {
    fn undetermined(detail: impl Into<String>) -> Self {
        StructureCertificate {
            verdict: StructureVerdict::Undetermined,
            witness: StructureWitness::None,
            detail: detail.into(),
        }
    }
}

/// First pair of positive-degree basis elements with nonzero product.
pub fn products_vanish(alg: &DGAlgebra) -> Option<(usize, usize, SparseVec)> {
    for a in 0..alg.dim() {
        if alg.degree(a) < 1 {
            continue;
        }
        for b in a..alg.dim() {
            if alg.degree(b) < 1 {
                continue;
            }
            let p = alg.mul_basis(a, b);
            if !p.is_zero() {
                return Some((a, b, p.clone()));
            }
        }
    }
    None
}

/// Search settings for [`certify_kxw`].
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_iters: 16, seed: 0 }
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, field: crate::field::Field) -> crate::field::Scalar {
    field.from_i64(rng.gen_range(-40..=40))
}

/// Searches for cycle representatives of `H_{≠0}` with strictly vanishing
/// pairwise products, exhibiting `k ⋉ H_{≠0} → kz`.
pub fn certify_kxw(kz: &DGAlgebra, config: SearchConfig) -> Result<StructureCertificate> {
    let field = kz.field();
    let h = kz.homology_algebra()?;
    if h.homology.dim(0) != 1 {
        return Err(Error::Precondition(format!(
            "H_0 has dimension {}, not 1",
            h.homology.dim(0)
        )));
    }
    if let Some((a, b, p)) = products_vanish(&h.algebra) {
        let hs = h.algebra.space();
        return Ok(StructureCertificate {
            verdict: StructureVerdict::Refuted,
            detail: format!("{}·{} = {} in homology", hs.label(a), hs.label(b), describe(hs, &p)),
            witness: StructureWitness::NonzeroProduct {
                left: SparseVec::unit(a, field),
                right: SparseVec::unit(b, field),
                product: p,
            },
        });
    }
    let classes: Vec<(i32, SparseVec)> = (0..h.algebra.dim())
        .filter(|&i| h.algebra.degree(i) != 0)
        .map(|i| (h.algebra.degree(i), h.reps[i].clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for attempt in 0..config.max_iters.max(1) {
        if let Some(reps) = strict_attempt(kz, &classes, attempt > 0, &mut rng)? {
            let cert = StructureCertificate {
                verdict: StructureVerdict::CertifiedKxW,
                detail: format!(
                    "{} representatives with vanishing products (attempt {})",
                    reps.len(),
                    attempt + 1
                ),
                witness: StructureWitness::Representatives(reps),
            };
            if !reverify_kxw(kz, &cert)? {
                return Err(Error::Internal("k⋉W certificate failed re-verification".into()));
            }
            return Ok(cert);
        }
    }
    Ok(StructureCertificate::undetermined(format!(
        "no strict representatives found in {} attempts",
        config.max_iters.max(1)
    )))
}

fn boundaries_into(kz: &DGAlgebra, d: i32) -> Vec<SparseVec> {
    kz.basis_in(d + 1)
        .map(|g| kz.complex().global_diff(g))
        .filter(|v| !v.is_zero())
        .collect()
}

fn strict_attempt(
    kz: &DGAlgebra,
    classes: &[(i32, SparseVec)],
    perturb: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<SparseVec>>> {
    let field = kz.field();
    let n = kz.dim();
    let needs_square = |d: i32| d.rem_euclid(2) == 0 || field.characteristic() == 2;
    let mut fixed: Vec<SparseVec> = Vec::new();
    for (d, rep) in classes {
        let bs = boundaries_into(kz, *d);
        let mut r0 = rep.clone();
        if perturb {
            for b in &bs {
                r0.axpy(&random_scalar(rng, field), b);
            }
        }
        let rows = n * fixed.len();
        let mut target = SparseVec::new();
        for (k, s) in fixed.iter().enumerate() {
            target.axpy(&field.from_i64(-1), &kz.mul(&r0, s).shifted(k * n));
        }
        let cols: Vec<SparseVec> = bs
            .iter()
            .map(|b| {
                let mut v = SparseVec::new();
                for (k, s) in fixed.iter().enumerate() {
                    v.axpy(&field.one(), &kz.mul(b, s).shifted(k * n));
                }
                v
            })
            .collect();
        let mat = Matrix::from_columns(field, rows, cols)?;
        let t = match mat.solve(&target)? {
            Solution::Particular(t) => t,
            Solution::Inconsistent { .. } => return Ok(None),
        };
        let combine = |t: &SparseVec| -> SparseVec {
            let mut r = r0.clone();
            for (k, c) in t.iter() {
                r.axpy(c, &bs[*k]);
            }
            r
        };
        let mut r = combine(&t);
        if needs_square(*d) && !kz.mul(&r, &r).is_zero() {
            let kernel = mat.kernel_basis();
            let mut found = false;
            for _ in 0..8 {
                if kernel.is_empty() {
                    break;
                }
                let mut t2 = t.clone();
                for kv in &kernel {
                    t2.axpy(&random_scalar(rng, field), kv);
                }
                let r2 = combine(&t2);
                if kz.mul(&r2, &r2).is_zero() {
                    r = r2;
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(None);
            }
        }
        fixed.push(r);
    }
    Ok(Some(fixed))
}

/// Re-checks a k⋉W certificate by multiplication and rank computations only.
pub fn reverify_kxw(kz: &DGAlgebra, cert: &StructureCertificate) -> Result<bool> {
    let StructureWitness::Representatives(reps) = &cert.witness else {
        return Ok(false);
    };
    let field = kz.field();
    let space = kz.space();
    let h = crate::graded::homology(kz.complex(), None)?;
    if h.dim(0) != 1 {
        return Ok(false);
    }
    for r in reps {
        if !kz.diff(r).is_zero() {
            return Ok(false);
        }
    }
    for d in h.degrees() {
        if d == 0 {
            continue;
        }
        let hd = h.at(d).unwrap();
        let mut ech = Echelon::new(field);
        let mut count = 0;
        for r in reps {
            let Some((g, _)) = r.leading() else { return Ok(false) };
            if space.degree_of(*g) != d {
                continue;
            }
            if !space.is_homogeneous(r, d) {
                return Ok(false);
            }
            count += 1;
            if ech
                .insert(&hd.project(&space.component(r, d))?, SparseVec::new())
                .is_none()
            {
                return Ok(false);
            }
        }
        if count != hd.dim() {
            return Ok(false);
        }
    }
    for i in 0..reps.len() {
        for j in i..reps.len() {
            if !kz.mul(&reps[i], &reps[j]).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn span_echelon(field: crate::field::Field, vs: &[SparseVec]) -> Echelon {
    let mut e = Echelon::new(field);
    for v in vs {
        e.insert(v, SparseVec::new());
    }
    e
}

/// Checks that `w` spans an ideal `W` with `W·W = 0`, `B_{≥1}·W = 0` and
/// `W ≠ 0`, then searches greedily for a complementary graded subalgebra.
pub fn verify_axw_split(b: &DGAlgebra, w: &[SparseVec]) -> Result<StructureCertificate> {
    let field = b.field();
    if !b.has_zero_differential() {
        return Err(Error::Precondition("split search needs zero differential".into()));
    }
    let space = b.space();
    for v in w {
        let Some((g, _)) = v.leading() else {
            return Err(Error::Precondition("zero vector in the W basis".into()));
        };
        if !space.is_homogeneous(v, space.degree_of(*g)) {
            return Err(Error::Precondition("W basis is not graded".into()));
        }
    }
    let wech = span_echelon(field, w);
    if wech.is_empty() {
        return Ok(refuted("W = 0", None));
    }
    for v in w {
        for g in 0..b.dim() {
            let p = b.mul(&SparseVec::unit(g, field), v);
            if b.degree(g) >= 1 && !p.is_zero() {
                return Ok(refuted(
                    &format!("{}·({}) ≠ 0", b.label(g), describe(space, v)),
                    Some((SparseVec::unit(g, field), v.clone(), p)),
                ));
            }
            if !wech.contains(&p) {
                return Ok(refuted(
                    &format!("W is not an ideal: {}·({}) ∉ W", b.label(g), describe(space, v)),
                    Some((SparseVec::unit(g, field), v.clone(), p)),
                ));
            }
        }
        for v2 in w {
            let p = b.mul(v, v2);
            if !p.is_zero() {
                return Ok(refuted("W·W ≠ 0", Some((v.clone(), v2.clone(), p))));
            }
        }
    }
    let Some(a) = greedy_complement(b, w)? else {
        return Ok(StructureCertificate::undetermined(
            "greedy search found no complementary subalgebra",
        ));
    };
    let cert = StructureCertificate {
        verdict: StructureVerdict::CertifiedAxW,
        detail: format!("A of dimension {}, W of dimension {}", a.len(), wech.len()),
        witness: StructureWitness::Split { a, w: w.to_vec() },
    };
    if !reverify_axw(b, &cert)? {
        return Err(Error::Internal("A⋉W certificate failed re-verification".into()));
    }
    Ok(cert)
}

fn refuted(detail: &str, product: Option<(SparseVec, SparseVec, SparseVec)>) -> StructureCertificate {
    StructureCertificate {
        verdict: StructureVerdict::Refuted,
        witness: match product {
            Some((left, right, product)) => StructureWitness::NonzeroProduct { left, right, product },
            None => StructureWitness::None,
        },
        detail: detail.to_string(),
    }
}

/// Degree by degree: products of earlier choices are forced into `A`, then
/// standard basis vectors are added when they keep `A ∩ W = 0` after closing
/// under multiplication by `A_0`.
fn greedy_complement(b: &DGAlgebra, w: &[SparseVec]) -> Result<Option<Vec<SparseVec>>> {
    let field = b.field();
    let space = b.space();
    let mut a: Vec<SparseVec> = Vec::new();
    for d in space.degrees() {
        let wd: Vec<SparseVec> = w
            .iter()
            .filter(|v| space.degree_of(v.leading().unwrap().0) == d)
            .cloned()
            .collect();
        let mut forced: Vec<SparseVec> = Vec::new();
        if d == 0 {
            forced.push(b.unit_vec());
        }
        for x in &a {
            for y in &a {
                let p = b.mul(x, y);
                if !p.is_zero() && space.is_homogeneous(&p, d) {
                    forced.push(p);
                }
            }
        }
        let a0: Vec<SparseVec> = a
            .iter()
            .filter(|v| space.degree_of(v.leading().unwrap().0) == 0)
            .cloned()
            .collect();
        let close = |mut cur: Vec<SparseVec>| -> Vec<SparseVec> {
            let mut ech = span_echelon(field, &[]);
            let mut out = Vec::new();
            while let Some(v) = cur.pop() {
                if ech.insert(&v, SparseVec::new()).is_some() {
                    out.push(v.clone());
                    for x in a0.iter().chain(if d == 0 { out.clone() } else { Vec::new() }.iter()) {
                        let p = b.mul(x, &v);
                        if !p.is_zero() {
                            cur.push(p);
                        }
                    }
                }
            }
            out
        };
        let fits = |cand: &[SparseVec]| -> bool {
            let e = span_echelon(field, cand);
            let mut all = e.clone();
            let mut ok = true;
            for v in &wd {
                if all.insert(v, SparseVec::new()).is_none() {
                    ok = false;
                }
            }
            ok
        };
        let mut ad = close(forced);
        if !fits(&ad) {
            return Ok(None);
        }
        for g in b.basis_in(d) {
            let total = span_echelon(field, &ad).len() + wd.len();
            if total == space.dim(d) {
                break;
            }
            let e = SparseVec::unit(g, field);
            let mut both = ad.clone();
            both.extend(wd.iter().cloned());
            if span_echelon(field, &both).contains(&e) {
                continue;
            }
            let mut trial = ad.clone();
            trial.push(e);
            let trial = close(trial);
            if fits(&trial) {
                ad = trial;
            }
        }
        if span_echelon(field, &ad).len() + wd.len() != space.dim(d) {
            return Ok(None);
        }
        let ech = span_echelon(field, &ad);
        a.extend(ech.rows().iter().cloned());
    }
    Ok(Some(a))
}

/// Re-checks an A⋉W certificate: ideal conditions, `A·A ⊆ A`, `1 ∈ A`,
/// `A ∩ W = 0` and `A + W = B`.
pub fn reverify_axw(b: &DGAlgebra, cert: &StructureCertificate) -> Result<bool> {
    let StructureWitness::Split { a, w } = &cert.witness else {
        return Ok(false);
    };
    let field = b.field();
    let aech = span_echelon(field, a);
    let wech = span_echelon(field, w);
    if wech.is_empty() || !aech.contains(&b.unit_vec()) {
        return Ok(false);
    }
    for x in a {
        for y in a {
            if !aech.contains(&b.mul(x, y)) {
                return Ok(false);
            }
        }
    }
    for v in w {
        for g in 0..b.dim() {
            let p = b.mul(&SparseVec::unit(g, field), v);
            if (b.degree(g) >= 1 && !p.is_zero()) || !wech.contains(&p) {
                return Ok(false);
            }
        }
        for v2 in w {
            if !b.mul(v, v2).is_zero() {
                return Ok(false);
            }
        }
    }
    let mut all = aech.clone();
    for v in w {
        if all.insert(v, SparseVec::new()).is_none() {
            return Ok(false);
        }
    }
    Ok(all.len() == b.dim())
}

/// Runs [`verify_axw_split`] on `W = {w ∈ 𝔫 : 𝔫·w = 0}` where `𝔫` is the
/// maximal ideal; when `B_0 = k` this is the annihilator of `B_{≥1}` in `B_{≥1}`.
pub fn auto_axw(b: &DGAlgebra) -> Result<StructureCertificate> {
    let field = b.field();
    if !b.has_zero_differential() {
        return Err(Error::Precondition("split search needs zero differential".into()));
    }
    let n = b.maximal_ideal_basis()?;
    let mut w = Vec::new();
    for d in b.space().degrees() {
        let nd: Vec<&SparseVec> = n
            .iter()
            .filter(|v| b.space().degree_of(v.leading().unwrap().0) == d)
            .collect();
        if nd.is_empty() {
            continue;
        }
        // Kernel of v ↦ (x·v)_{x ∈ 𝔫} on span(nd).
        let total = b.dim();
        let cols: Vec<SparseVec> = nd
            .iter()
            .map(|v| {
                let mut out = SparseVec::new();
                for (k, x) in n.iter().enumerate() {
                    out.axpy(&field.one(), &b.mul(x, v).shifted(k * total));
                }
                out
            })
            .collect();
        let mat = Matrix::from_columns(field, total * n.len(), cols)?;
        for kv in mat.kernel_basis() {
            let mut v = SparseVec::new();
            for (i, c) in kv.iter() {
                v.axpy(c, nd[*i]);
            }
            w.push(v);
        }
    }
    if w.is_empty() {
        return Ok(StructureCertificate::undetermined("annihilator candidate is zero"));
    }
    verify_axw_split(b, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::koszul_complex;
    use crate::field::Field;
    use crate::graded::{ChainComplex, GradedSpace};
    use crate::ring::ArtinianLocalRing;

    fn f() -> Field {
        Field::Prime(101)
    }

    #[test]
    fn koszul_square_zero_is_kxw() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^2", "x*y", "y^2"]).unwrap();
        let k = koszul_complex(&r).unwrap();
        let h = k.algebra.homology_algebra().unwrap();
        assert!(products_vanish(&h.algebra).is_none());
        let c = certify_kxw(&k.algebra, SearchConfig::default()).unwrap();
        assert_eq!(c.verdict, StructureVerdict::CertifiedKxW);
        let s = auto_axw(&h.algebra).unwrap();
        assert_eq!(s.verdict, StructureVerdict::CertifiedAxW);
    }

    #[test]
    fn cubic_is_kxw() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x"], &["x^3"]).unwrap();
        let k = koszul_complex(&r).unwrap();
        let c = certify_kxw(&k.algebra, SearchConfig::default()).unwrap();
        assert_eq!(c.verdict, StructureVerdict::CertifiedKxW);
    }

    #[test]
    fn nonzero_square_refutes() {
        // k[t]/(t^3), |t| = 2.
        let space = GradedSpace::from_pairs(f(), &[("1", 0), ("t", 2), ("t^2", 4)]).unwrap();
        let b = DGAlgebra::new(ChainComplex::trivial(space), 0, vec![(1, 1, SparseVec::unit(2, f()))]).unwrap();
        assert!(products_vanish(&b).is_some());
        assert_eq!(
            certify_kxw(&b, SearchConfig::default()).unwrap().verdict,
            StructureVerdict::Refuted
        );
        let c = verify_axw_split(&b, &[SparseVec::unit(1, f()), SparseVec::unit(2, f())]).unwrap();
        assert_eq!(c.verdict, StructureVerdict::Refuted);
        assert_ne!(auto_axw(&b).unwrap().verdict, StructureVerdict::CertifiedAxW);
    }

    #[test]
    fn square_zero_ring_splits() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^2", "x*y", "y^2"]).unwrap();
        let b = r.as_dg_algebra();
        let c = verify_axw_split(&b, &[SparseVec::unit(1, f()), SparseVec::unit(2, f())]).unwrap();
        assert_eq!(c.verdict, StructureVerdict::CertifiedAxW);
        assert_eq!(auto_axw(&b).unwrap().verdict, StructureVerdict::CertifiedAxW);
    }
}
