//! Property bodies shared by the proptest suites and the acceptance runner.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgtor::constructions::koszul_complex;
use dgtor::graded::{cone, homology, suspension, tensor_k, ChainComplex, GradedMap, GradedSpace};
use dgtor::linalg::{Matrix, SparseVec};
use dgtor::module::DGModule;
use dgtor::resolution::{minimal_semifree_resolution, semifree_resolution, syzygy, tor, tor_from_resolution};
use dgtor::ring::{monomial_label, parse_monomial, ArtinianLocalRing};
use dgtor::{Error, Field};

use super::{columns_to_rows, kernel, monomial_text, rank, MonomialRing, VARS};

const PRIMES: [u64; 4] = [2, 3, 5, 101];

/// A complex over `F_p` given by dense blocks; `diffs[i]` is `∂` out of degree `lo + i`.
#[derive(Clone, Debug)]
pub struct RawComplex {
    pub p: u64,
    pub lo: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<Vec<Vec<u64>>>,
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
        .collect()
}

impl RawComplex {
    /// Random complex; when `valid` the columns of each block lie in the kernel of the previous one.
    pub fn random(seed: u64, valid: bool) -> Self {
        Self::random_over(seed, valid, None)
    }

    /// As [`RawComplex::random`], over `F_p` when `p` is given.
    pub fn random_over(seed: u64, valid: bool, p: Option<u64>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drawn = PRIMES[rng.gen_range(0..PRIMES.len())];
        let p = p.unwrap_or(drawn);
        let len = rng.gen_range(1..=4);
        let lo = rng.gen_range(-2..=2);
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
        let mut diffs: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
        for i in 1..len {
            let (rows, cols) = (dims[i - 1], dims[i]);
            let block = if valid && i > 1 {
                let ker = kernel(&diffs[i - 1], dims[i - 1], p);
                let cols_v: Vec<Vec<u64>> = (0..cols)
                    .map(|_| {
                        let mut v = vec![0u64; rows];
                        for k in &ker {
                            let c = rng.gen_range(0..p);
                            for (x, y) in v.iter_mut().zip(k) {
                                *x = (*x + c * y) % p;
                            }
                        }
                        v
                    })
                    .collect();
                columns_to_rows(&cols_v, rows)
            } else {
                random_matrix(&mut rng, rows, cols, p)
            };
            diffs.push(block);
        }
        RawComplex { p, lo, dims, diffs }
    }

    pub fn field(&self) -> Field {
        Field::prime(self.p).unwrap()
    }

    pub fn squares_to_zero(&self) -> bool {
        let p = self.p;
        (2..self.dims.len()).all(|i| {
            let (a, b) = (&self.diffs[i - 1], &self.diffs[i]);
            (0..self.dims[i - 2]).all(|r| {
                (0..self.dims[i]).all(|c| (0..self.dims[i - 1]).map(|k| a[r][k] * b[k][c] % p).sum::<u64>() % p == 0)
            })
        })
    }

    pub fn to_library(&self) -> dgtor::Result<ChainComplex> {
        let f = self.field();
        let space = GradedSpace::from_dims(f, self.lo, &self.dims, "c");
        let mut blocks = BTreeMap::new();
        for i in 1..self.dims.len() {
            let rows = self.diffs[i]
                .iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x as i64)).collect())
                .collect();
            blocks.insert(self.lo + i as i32, Matrix::from_rows(f, self.dims[i], rows)?);
        }
        ChainComplex::new(space, blocks)
    }

    fn rank_at(&self, i: usize) -> usize {
        if i == 0 || i >= self.dims.len() {
            0
        } else {
            rank(&self.diffs[i], self.p)
        }
    }

    /// Homology dims by the oracle, indexed from `lo`.
    pub fn homology(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|i| self.dims[i] - self.rank_at(i) - self.rank_at(i + 1))
            .collect()
    }

    pub fn homology_at(&self, d: i32) -> usize {
        let i = d - self.lo;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.homology()[i as usize]
        }
    }
}

fn lib_homology(c: &ChainComplex, d: i32) -> usize {
    homology(c, None).unwrap().dim(d)
}

pub fn square_zero_rejection(seed: u64) -> Result<(), TestCaseError> {
    let raw = RawComplex::random(seed, seed.is_multiple_of(2));
    match raw.to_library() {
        Ok(_) => prop_assert!(raw.squares_to_zero()),
        Err(Error::NotAComplex { .. }) => prop_assert!(!raw.squares_to_zero()),
        Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
    }
    Ok(())
}

pub fn rank_nullity(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    let (rows, cols) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
    let mut a = random_matrix(&mut rng, rows, cols, p);
    if rng.gen_bool(0.5) && rows > 1 {
        // force a dependent row
        a[rows - 1] = a[0].iter().zip(&a[1]).map(|(x, y)| (x + 2 * y) % p).collect();
    }
    let f = Field::prime(p).unwrap();
    let m = Matrix::from_rows(
        f,
        cols,
        a.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x as i64)).collect())
            .collect(),
    )
    .unwrap();
    let r = m.rank();
    prop_assert_eq!(r, rank(&a, p));
    let ker = m.kernel_basis();
    prop_assert_eq!(r + ker.len(), cols);
    for v in &ker {
        prop_assert!(m.mul_vec(v).is_zero());
    }
    Ok(())
}

pub fn kunneth(seed: u64) -> Result<(), TestCaseError> {
    let a = RawComplex::random(seed, true);
    let b = RawComplex::random_over(seed.wrapping_mul(31).wrapping_add(7), true, Some(a.p));
    prop_assert!(a.squares_to_zero() && b.squares_to_zero());
    let (ca, cb) = (a.to_library().unwrap(), b.to_library().unwrap());
    let t = tensor_k(&ca, &cb).unwrap();
    for n in (a.lo + b.lo - 1)..=(a.lo + b.lo + 7) {
        let expect: usize = (a.lo..a.lo + a.dims.len() as i32)
            .map(|i| a.homology_at(i) * b.homology_at(n - i))
            .sum();
        prop_assert_eq!(lib_homology(&t, n), expect, "degree {}", n);
    }
    Ok(())
}

pub fn suspension_shift(seed: u64) -> Result<(), TestCaseError> {
    let a = RawComplex::random(seed, true);
    let s = suspension(&a.to_library().unwrap());
    for d in a.lo - 1..=a.lo + a.dims.len() as i32 + 1 {
        prop_assert_eq!(lib_homology(&s, d), a.homology_at(d - 1));
    }
    Ok(())
}

pub fn cone_identity_acyclic(seed: u64) -> Result<(), TestCaseError> {
    let a = RawComplex::random(seed, true);
    let c = a.to_library().unwrap();
    let f = c.field();
    let units: Vec<SparseVec> = (0..c.space().total_dim()).map(|g| SparseVec::unit(g, f)).collect();
    let id = GradedMap::from_global(c.space(), c.space(), 0, &units).unwrap();
    let k = cone(&c, &c, &id).unwrap();
    prop_assert!(homology(&k, None).unwrap().is_zero());
    Ok(())
}

/// A random Artinian monomial ring in one or two variables, with a cyclic module.
#[derive(Clone, Debug)]
pub struct RingCase {
    pub oracle: MonomialRing,
    pub ring: ArtinianLocalRing,
    pub module_ideal: Vec<Vec<u32>>,
    pub other_ideal: Vec<Vec<u32>>,
}

fn random_monomials(rng: &mut ChaCha8Rng, nvars: usize, count: usize, max: u32) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| (0..nvars).map(|_| rng.gen_range(0..=max)).collect::<Vec<u32>>())
        .filter(|e| e.iter().any(|&x| x > 0))
        .collect()
}

impl RingCase {
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [2u64, 3, 101][rng.gen_range(0..3)];
        let nvars = rng.gen_range(1..=2);
        let mut ideal: Vec<Vec<u32>> = (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = rng.gen_range(2..=3);
                e
            })
            .collect();
        let extra = rng.gen_range(0..=2);
        ideal.extend(
            random_monomials(&mut rng, nvars, extra, 2)
                .into_iter()
                .filter(|e| e.iter().sum::<u32>() >= 2),
        );
        let oracle = MonomialRing::new(p, nvars, ideal.clone());
        let texts: Vec<String> = ideal.iter().map(|e| monomial_text(e, &VARS)).collect();
        let t: Vec<&str> = texts.iter().map(String::as_str).collect();
        let ring = ArtinianLocalRing::from_monomial_ideal(Field::prime(p).unwrap(), &VARS[..nvars], &t).unwrap();
        let n1 = rng.gen_range(0..=2);
        let module_ideal = random_monomials(&mut rng, nvars, n1, 2);
        let n2 = rng.gen_range(0..=2);
        let other_ideal = random_monomials(&mut rng, nvars, n2, 2);
        RingCase {
            oracle,
            ring,
            module_ideal,
            other_ideal,
        }
    }

    pub fn cyclic(&self, j: &[Vec<u32>]) -> DGModule {
        let vars = self.ring.vars();
        let gens: Vec<SparseVec> = j
            .iter()
            .filter_map(|e| {
                let text = monomial_text(e, &VARS);
                let label = monomial_label(&parse_monomial(&text, vars).unwrap(), vars);
                self.ring
                    .labels()
                    .iter()
                    .position(|l| *l == label)
                    .map(|i| SparseVec::unit(i, self.ring.field()))
            })
            .collect();
        self.ring.cyclic_quotient(&gens).unwrap().dg
    }

    pub fn residue(&self) -> DGModule {
        DGModule::residue_field(self.ring.as_dg_algebra()).unwrap()
    }
}

const N: i32 = 4;

pub fn minimality(seed: u64) -> Result<(), TestCaseError> {
    let case = RingCase::random(seed);
    let m = case.cyclic(&case.module_ideal);
    let res = minimal_semifree_resolution(&m, N).unwrap();
    prop_assert!(res.check_minimal().unwrap());
    let counts = res.counts(0, N);
    let betti = case.oracle.betti(&case.module_ideal, N as usize);
    prop_assert_eq!(&counts, &betti);
    let k = case.residue();
    let loose = semifree_resolution(&m, N + 1).unwrap();
    let t = tor_from_resolution(&k, &loose, (0, N)).unwrap();
    prop_assert_eq!(&t.dims, &counts);
    let padded = res.padded(1).unwrap();
    prop_assert!(!padded.check_minimal().unwrap());
    Ok(())
}

pub fn syzygy_bookkeeping(seed: u64) -> Result<(), TestCaseError> {
    let case = RingCase::random(seed);
    let m = if seed.is_multiple_of(3) {
        let kz = koszul_complex(&case.ring).unwrap();
        DGModule::residue_field(Arc::clone(&kz.algebra)).unwrap()
    } else {
        case.cyclic(&case.module_ideal)
    };
    let s = syzygy(&m).unwrap();
    s.verify(&m).map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(())
}

pub fn tor_symmetry(seed: u64) -> Result<(), TestCaseError> {
    let case = RingCase::random(seed);
    let (m, n) = (case.cyclic(&case.module_ideal), case.cyclic(&case.other_ideal));
    let a = tor(&m, &n, (0, N)).unwrap();
    let b = tor(&n, &m, (0, N)).unwrap();
    prop_assert_eq!(&a.dims, &b.dims);
    let oracle = case
        .oracle
        .tor_cyclic(&case.module_ideal, &case.other_ideal, N as usize);
    prop_assert_eq!(&a.dims, &oracle);
    Ok(())
}

pub fn truncation_stability(seed: u64) -> Result<(), TestCaseError> {
    let case = RingCase::random(seed);
    let m = case.cyclic(&case.module_ideal);
    let k = case.residue();
    let short = minimal_semifree_resolution(&m, N).unwrap();
    let long = minimal_semifree_resolution(&m, N + 2).unwrap();
    let a = tor_from_resolution(&k, &short, (0, N - 1)).unwrap();
    let b = tor_from_resolution(&k, &long, (0, N - 1)).unwrap();
    prop_assert_eq!(&a.dims, &b.dims);
    let too_far = tor_from_resolution(&k, &short, (0, N + 1));
    prop_assert!(
        matches!(too_far, Err(Error::Truncation { .. })),
        "beyond the clean window must fail"
    );
    Ok(())
}

pub type Property = fn(u64) -> Result<(), TestCaseError>;

/// Every suite by name.
pub const SUITES: [(&str, Property); 9] = [
    ("∂² = 0 construction rejection", square_zero_rejection),
    ("rank–nullity", rank_nullity),
    ("Künneth convolution", kunneth),
    ("suspension shift", suspension_shift),
    ("cone(id) acyclicity", cone_identity_acyclic),
    ("minimality and Tor counts", minimality),
    ("syzygy bookkeeping", syzygy_bookkeeping),
    ("Tor symmetry", tor_symmetry),
    ("truncation stability", truncation_stability),
];

/// Runs one suite for `cases` seeds through proptest.
pub fn run_suite(f: Property, cases: u32) -> Result<(), String> {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    runner.run(&any::<u64>(), f).map_err(|e| e.to_string())
}
