//! Artinian local rings given by monomial ideals or structure constants, and
//! their finite modules, as degree-0 DG objects.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::dga::DGAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ChainComplex, GradedSpace};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::module::DGModule;

type Exponents = Vec<u32>;

/// A finite-dimensional commutative local ring with named generators of 𝔪.
#[derive(Clone, Debug)]
pub struct ArtinianLocalRing {
    field: Field,
    /// Names of the generators of the maximal ideal.
    vars: Vec<String>,
    /// Monomial ideal generators, when presented that way.
    ideal: Option<Vec<Exponents>>,
    labels: Vec<String>,
    /// `table[a][b]` is the product of basis elements.
    table: Vec<Vec<SparseVec>>,
    /// The generators as ring elements.
    var_elements: Vec<SparseVec>,
    algebra: Arc<DGAlgebra>,
}

/// Parses `1`, `x`, `x^2*y` into an exponent vector.
pub fn parse_monomial(text: &str, vars: &[String]) -> Result<Exponents> {
    let mut e = vec![0u32; vars.len()];
    let t = text.trim();
    if t == "1" {
        return Ok(e);
    }
    for factor in t.split('*') {
        let factor = factor.trim();
        let (name, pow) = match factor.split_once('^') {
            Some((n, p)) => (
                n.trim(),
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?,
            ),
            None => (factor, 1),
        };
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}` in `{text}`")))?;
        e[i] += pow;
    }
    Ok(e)
}

/// `x^2*y` style label of an exponent vector.
pub fn monomial_label(e: &[u32], vars: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(vars)
        .filter(|(p, _)| **p > 0)
        .map(|(p, v)| if *p == 1 { v.clone() } else { format!("{v}^{p}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl ArtinianLocalRing {
    /// `k[vars]/(monomials)`; the quotient must be finite.
    pub fn from_monomial_ideal(field: Field, vars: &[&str], monomials: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) || v.is_empty() || v == "1" {
                return Err(Error::Parse(format!("bad or repeated variable `{v}`")));
            }
        }
        let gens: Vec<Exponents> = monomials
            .iter()
            .map(|m| parse_monomial(m, &vars))
            .collect::<Result<_>>()?;
        if gens.iter().any(|g| total(g) == 0) {
            return Err(Error::Precondition("the ideal contains 1".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            let pure = gens
                .iter()
                .any(|g| g[i] > 0 && g.iter().enumerate().all(|(j, p)| j == i || *p == 0));
            if !pure {
                return Err(Error::Precondition(format!(
                    "quotient is infinite-dimensional: no power of `{v}` lies in the ideal"
                )));
            }
        }
        let in_ideal = |e: &[u32]| gens.iter().any(|g| divides(g, e));
        let mut basis: BTreeSet<(u32, std::cmp::Reverse<Exponents>)> = BTreeSet::new();
        let mut frontier = vec![vec![0u32; vars.len()]];
        while let Some(e) = frontier.pop() {
            if in_ideal(&e) || !basis.insert((total(&e), std::cmp::Reverse(e.clone()))) {
                continue;
            }
            for i in 0..vars.len() {
                let mut f = e.clone();
                f[i] += 1;
                frontier.push(f);
            }
        }
        let basis: Vec<Exponents> = basis.into_iter().map(|(_, std::cmp::Reverse(e))| e).collect();
        let index: HashMap<Exponents, usize> = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let one = field.one();
        let table = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let p: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        match index.get(&p) {
                            Some(&i) => SparseVec::from_entries(vec![(i, one.clone())]),
                            None => SparseVec::new(),
                        }
                    })
                    .collect()
            })
            .collect();
        let var_elements = (0..vars.len())
            .map(|i| {
                let mut e = vec![0; vars.len()];
                e[i] = 1;
                match index.get(&e) {
                    Some(&j) => SparseVec::unit(j, field),
                    None => SparseVec::new(),
                }
            })
            .collect();
        let labels = basis.iter().map(|e| monomial_label(e, &vars)).collect();
        Self::assemble(field, vars, Some(gens), labels, table, var_elements)
    }

    /// A ring from its multiplication table; basis element 0 is the unit and
    /// `generators` name elements generating 𝔪.
    pub fn from_structure_constants(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        generators: Vec<(String, SparseVec)>,
    ) -> Result<Self> {
        let n = labels.len();
        for i in 0..n {
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(Error::Axiom(format!(
                        "ring is not commutative at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let (vars, var_elements) = generators.into_iter().unzip();
        Self::assemble(field, vars, None, labels, table, var_elements)
    }

    fn assemble(
        field: Field,
        vars: Vec<String>,
        ideal: Option<Vec<Exponents>>,
        labels: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        var_elements: Vec<SparseVec>,
    ) -> Result<Self> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("multiplication table has the wrong shape".into()));
        }
        let pairs: Vec<(String, i32)> = labels.iter().map(|l| (l.clone(), 0)).collect();
        let space = GradedSpace::from_pairs(field, &pairs)?;
        let alg = DGAlgebra::from_full_table(ChainComplex::trivial(space), 0, table.clone())?;
        alg.validate().into_result()?;
        if !alg.is_local() {
            return Err(Error::NotLocal(format!("ring {:?} is not local", labels)));
        }
        for (v, e) in vars.iter().zip(&var_elements) {
            if !alg.in_maximal_ideal(e)? {
                return Err(Error::Precondition(format!("generator `{v}` is a unit")));
            }
        }
        let r = ArtinianLocalRing {
            field,
            vars,
            ideal,
            labels,
            table,
            var_elements,
            algebra: Arc::new(alg),
        };
        r.words()?;
        Ok(r)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn table(&self) -> &[Vec<SparseVec>] {
        &self.table
    }

    pub fn ideal_generators(&self) -> Option<Vec<String>> {
        self.ideal
            .as_ref()
            .map(|g| g.iter().map(|e| monomial_label(e, &self.vars)).collect())
    }

    pub fn var_element(&self, i: usize) -> &SparseVec {
        &self.var_elements[i]
    }

    /// Whether every ideal generator lies in `𝔪²` (monomial presentations only).
    pub fn ideal_in_m_squared(&self) -> Option<bool> {
        self.ideal.as_ref().map(|g| g.iter().all(|e| total(e) >= 2))
    }

    /// The ring as a DG algebra concentrated in degree 0.
    pub fn as_dg_algebra(&self) -> Arc<DGAlgebra> {
        self.algebra.clone()
    }

    /// Words in the generators spanning the ring: `(ring element, word)`,
    /// independent, starting with the empty word.
    fn words(&self) -> Result<Vec<(SparseVec, Vec<usize>)>> {
        let alg = &self.algebra;
        let mut ech = Echelon::new(self.field);
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((alg.unit_vec(), Vec::new()));
        while let Some((v, w)) = queue.pop_front() {
            if ech.insert(&v, SparseVec::new()).is_none() {
                continue;
            }
            for (i, x) in self.var_elements.iter().enumerate() {
                let mut w2 = w.clone();
                w2.push(i);
                queue.push_back((alg.mul(&v, x), w2));
            }
            out.push((v, w));
        }
        if out.len() != self.dim() {
            return Err(Error::Precondition(
                "the named generators do not generate the ring".into(),
            ));
        }
        Ok(out)
    }

    /// Whether the generators are minimal: independent modulo `𝔪²`.
    pub fn generators_minimal(&self) -> Result<bool> {
        let alg = &self.algebra;
        let m = alg.maximal_ideal_basis()?;
        let mut sq = Echelon::new(self.field);
        for a in &m {
            for b in &m {
                sq.insert(&alg.mul(a, b), SparseVec::new());
            }
        }
        let emb = m.len() - sq.len();
        for x in &self.var_elements {
            if sq.insert(x, SparseVec::new()).is_none() {
                return Ok(false);
            }
        }
        Ok(self.var_elements.len() == emb)
    }

    /// The module with the given basis labels and action matrices (acting on
    /// columns) for each generator.
    pub fn module(&self, labels: Vec<String>, matrices: Vec<Matrix>) -> Result<FiniteModule> {
        let n = labels.len();
        if matrices.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "{} action matrices for {} generators",
                matrices.len(),
                self.vars.len()
            )));
        }
        for (v, m) in self.vars.iter().zip(&matrices) {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!("action of `{v}` must be {n}×{n}")));
            }
            if m.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field,
                    found: m.field(),
                });
            }
        }
        for i in 0..matrices.len() {
            for j in i + 1..matrices.len() {
                if matrices[i].compose(&matrices[j])? != matrices[j].compose(&matrices[i])? {
                    return Err(Error::Axiom(format!(
                        "actions of `{}` and `{}` do not commute",
                        self.vars[i], self.vars[j]
                    )));
                }
            }
        }
        let word_matrix = |w: &[usize]| -> Result<Matrix> {
            let mut m = Matrix::identity(self.field, n);
            for &i in w {
                m = matrices[i].compose(&m)?;
            }
            Ok(m)
        };
        if let Some(gens) = &self.ideal {
            for g in gens {
                let w: Vec<usize> = g
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &p)| std::iter::repeat_n(i, p as usize))
                    .collect();
                if !word_matrix(&w)?.is_zero() {
                    return Err(Error::Axiom(format!(
                        "relation `{}` does not act by zero",
                        monomial_label(g, &self.vars)
                    )));
                }
            }
        }
        let words = self.words()?;
        let mut ech = Echelon::new(self.field);
        for (j, (v, _)) in words.iter().enumerate() {
            ech.insert(v, SparseVec::unit(j, self.field));
        }
        let word_mats: Vec<Matrix> = words.iter().map(|(_, w)| word_matrix(w)).collect::<Result<_>>()?;
        let mut action_of = Vec::with_capacity(self.dim());
        for b in 0..self.dim() {
            let (res, pay) = ech.reduce(&SparseVec::unit(b, self.field));
            debug_assert!(res.is_zero());
            let mut m = Matrix::zeros(self.field, n, n);
            for (j, c) in pay.iter() {
                m = m.add(&word_mats[*j].scale(c))?;
            }
            action_of.push(m);
        }
        for (i, x) in self.var_elements.iter().enumerate() {
            let mut m = Matrix::zeros(self.field, n, n);
            for (b, c) in x.iter() {
                m = m.add(&action_of[*b].scale(c))?;
            }
            if m != matrices[i] {
                return Err(Error::Axiom(format!(
                    "action of `{}` is inconsistent with the ring relations",
                    self.vars[i]
                )));
            }
        }
        for a in 0..self.dim() {
            for b in a..self.dim() {
                let lhs = action_of[a].compose(&action_of[b])?;
                let mut rhs = Matrix::zeros(self.field, n, n);
                for (c, s) in self.table[a][b].iter() {
                    rhs = rhs.add(&action_of[*c].scale(s))?;
                }
                if lhs != rhs {
                    return Err(Error::Axiom(format!(
                        "relation violated at `{}·{}`",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        let pairs: Vec<(String, i32)> = labels.iter().map(|l| (l.clone(), 0)).collect();
        let space = GradedSpace::from_pairs(self.field, &pairs)?;
        let action = action_of.iter().map(|m| m.columns()).collect();
        let dg = DGModule::new(self.algebra.clone(), ChainComplex::trivial(space), action)?;
        Ok(FiniteModule { labels, matrices, dg })
    }

    /// `k`, every generator acting by zero.
    pub fn residue_field(&self) -> Result<FiniteModule> {
        let z = Matrix::zeros(self.field, 1, 1);
        self.module(vec!["1".into()], vec![z; self.vars.len()])
    }

    /// `R` over itself.
    pub fn free(&self) -> Result<FiniteModule> {
        let matrices = self
            .var_elements
            .iter()
            .map(|x| {
                let cols = (0..self.dim())
                    .map(|b| self.algebra.mul(x, &SparseVec::unit(b, self.field)))
                    .collect();
                Matrix::from_columns(self.field, self.dim(), cols)
            })
            .collect::<Result<_>>()?;
        self.module(self.labels.clone(), matrices)
    }

    /// `R/I` for an ideal spanned (as a vector space) by the given elements
    /// together with their multiples.
    pub fn cyclic_quotient(&self, ideal: &[SparseVec]) -> Result<FiniteModule> {
        let mut ech = Echelon::new(self.field);
        let mut queue: Vec<SparseVec> = ideal.to_vec();
        while let Some(v) = queue.pop() {
            if ech.insert(&v, SparseVec::new()).is_some() {
                for x in &self.var_elements {
                    queue.push(self.algebra.mul(x, &v));
                }
            }
        }
        let kept: Vec<usize> = (0..self.dim()).filter(|i| !ech.is_pivot(*i)).collect();
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let project = |v: &SparseVec| -> SparseVec {
            let (r, _) = ech.reduce_full(v);
            SparseVec::from_entries(r.iter().map(|(i, c)| (pos[i], c.clone())).collect())
        };
        let matrices = self
            .var_elements
            .iter()
            .map(|x| {
                let cols = kept
                    .iter()
                    .map(|&b| project(&self.algebra.mul(x, &SparseVec::unit(b, self.field))))
                    .collect();
                Matrix::from_columns(self.field, kept.len(), cols)
            })
            .collect::<Result<_>>()?;
        let labels = kept.iter().map(|&i| self.labels[i].clone()).collect();
        self.module(labels, matrices)
    }
}

/// A finite module over an [`ArtinianLocalRing`].
#[derive(Clone, Debug)]
pub struct FiniteModule {
    pub labels: Vec<String>,
    /// Action of each generator on columns.
    pub matrices: Vec<Matrix>,
    pub dg: DGModule,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::Prime(101)
    }

    #[test]
    fn monomial_bases() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x"], &["x^2"]).unwrap();
        assert_eq!(r.labels(), &["1", "x"]);
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^2", "x*y", "y^2"]).unwrap();
        assert_eq!(r.labels(), &["1", "x", "y"]);
        assert_eq!(r.ideal_in_m_squared(), Some(true));
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x"], &["x^3"]).unwrap();
        assert_eq!(r.labels(), &["1", "x", "x^2"]);
        assert_eq!(r.table()[1][1], SparseVec::unit(2, f()));
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^3", "y^2"]).unwrap();
        assert_eq!(r.labels(), &["1", "x", "y", "x^2", "x*y", "x^2*y"]);
    }

    #[test]
    fn infinite_quotient_rejected() {
        assert!(ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^2", "x*y"]).is_err());
    }

    #[test]
    fn jordan_block_module() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x"], &["x^3"]).unwrap();
        let j = Matrix::from_i64_rows(f(), &[&[0, 0], &[1, 0]]);
        let m = r.module(vec!["x".into(), "x^2".into()], vec![j]).unwrap();
        m.dg.validate().unwrap();
        let bad = Matrix::from_i64_rows(f(), &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let err = r
            .module((0..4).map(|i| format!("m{i}")).collect(), vec![bad])
            .unwrap_err();
        assert!(err.to_string().contains("x^3"));
    }

    #[test]
    fn minimal_generators() {
        let r = ArtinianLocalRing::from_monomial_ideal(f(), &["x", "y"], &["x^2", "x*y", "y^2"]).unwrap();
        assert!(r.generators_minimal().unwrap());
        assert_eq!(r.free().unwrap().dg.dim(), 3);
        assert_eq!(r.cyclic_quotient(&[r.var_element(0).clone()]).unwrap().dg.dim(), 2);
    }
}
