mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::props::RingCase;
use common::{monomial_text, MonomialRing, VARS};
use dgtor::constructions::{koszul_complex, trivial_extension};
use dgtor::dga::DGAlgebra;
use dgtor::graded::{ChainComplex, GradedSpace};
use dgtor::module::DGModule;
use dgtor::resolution::{tor, tor_against_k};
use dgtor::ring::ArtinianLocalRing;
use dgtor::Field;

fn e(v: &[u32]) -> Vec<u32> {
    v.to_vec()
}

fn library_ring(o: &MonomialRing) -> ArtinianLocalRing {
    let texts: Vec<String> = o.ideal.iter().map(|m| monomial_text(m, &VARS)).collect();
    let t: Vec<&str> = texts.iter().map(String::as_str).collect();
    ArtinianLocalRing::from_monomial_ideal(Field::prime(o.p).unwrap(), &VARS[..o.nvars], &t).unwrap()
}

fn fixed_rings() -> Vec<MonomialRing> {
    vec![
        MonomialRing::new(101, 1, vec![e(&[2])]),
        MonomialRing::new(101, 1, vec![e(&[3])]),
        MonomialRing::new(2, 1, vec![e(&[4])]),
        MonomialRing::new(101, 2, vec![e(&[2, 0]), e(&[1, 1]), e(&[0, 2])]),
        MonomialRing::new(3, 2, vec![e(&[2, 0]), e(&[0, 2])]),
        MonomialRing::new(101, 2, vec![e(&[3, 0]), e(&[1, 1]), e(&[0, 2])]),
        MonomialRing::new(5, 3, vec![e(&[2, 0, 0]), e(&[0, 2, 0]), e(&[0, 0, 2]), e(&[1, 1, 0])]),
    ]
}

fn all_vars(o: &MonomialRing) -> Vec<Vec<u32>> {
    (0..o.nvars).map(|i| o.var(i)).collect()
}

#[test]
fn koszul_homology_matches_oracle() {
    for o in fixed_rings() {
        let r = library_ring(&o);
        let k = koszul_complex(&r).unwrap();
        let dims = k.algebra.homology_algebra().unwrap().dims();
        assert_eq!(dims, o.koszul_homology(), "{:?}", o.ideal);
    }
    let square_zero = &fixed_rings()[3];
    assert_eq!(square_zero.koszul_homology(), vec![1, 3, 2]);
}

#[test]
fn koszul_homology_random_rings() {
    for seed in 0..40 {
        let case = RingCase::random(seed);
        let k = koszul_complex(&case.ring).unwrap();
        let dims = k.algebra.homology_algebra().unwrap().dims();
        assert_eq!(dims, case.oracle.koszul_homology(), "seed {seed}");
    }
}

#[test]
fn residue_field_betti_numbers() {
    for o in fixed_rings() {
        let r = library_ring(&o);
        let k = DGModule::residue_field(r.as_dg_algebra()).unwrap();
        let n = if o.nvars == 3 { 4 } else { 7 };
        let p = tor_against_k(&k, n).unwrap();
        assert_eq!(p.coefficients, o.betti(&all_vars(&o), n as usize), "{:?}", o.ideal);
    }
}

#[test]
fn classical_series() {
    let dual = MonomialRing::new(101, 1, vec![e(&[2])]);
    assert_eq!(dual.betti(&[e(&[1])], 12), vec![1; 13]);
    let sq = MonomialRing::new(101, 2, vec![e(&[2, 0]), e(&[1, 1]), e(&[0, 2])]);
    let expect: Vec<usize> = (0..=12).map(|i| 1 << i).collect();
    assert_eq!(sq.betti(&all_vars(&sq), 9), expect[..10]);
    let r = library_ring(&sq);
    let k = DGModule::residue_field(r.as_dg_algebra()).unwrap();
    assert_eq!(tor_against_k(&k, 12).unwrap().coefficients, expect);
    let cubic = MonomialRing::new(101, 1, vec![e(&[3])]);
    assert_eq!(cubic.tor_cyclic(&[e(&[1])], &[e(&[1])], 10), vec![1; 11]);
}

#[test]
fn cyclic_tor_random() {
    for seed in 100..140 {
        let case = RingCase::random(seed);
        let m = case.cyclic(&case.module_ideal);
        let n = case.cyclic(&case.other_ideal);
        let t = tor(&m, &n, (0, 5)).unwrap();
        let oracle = case.oracle.tor_cyclic(&case.module_ideal, &case.other_ideal, 5);
        assert_eq!(t.dims, oracle, "seed {seed}");
    }
}

fn extension_by_k(base: &Arc<DGAlgebra>, r: usize) -> Arc<DGAlgebra> {
    let cells: Vec<(String, i32)> = (1..=r).map(|i| (format!("w{i}"), 0)).collect();
    let w = ChainComplex::trivial(GradedSpace::from_pairs(base.field(), &cells).unwrap());
    let eps = base.augmentation().unwrap().clone();
    trivial_extension(base, &eps, &w).unwrap().algebra
}

/// `R ⋉ k^r` presented as a monomial ring in `nvars + r` variables.
fn extension_oracle(o: &MonomialRing, r: usize) -> MonomialRing {
    let n = o.nvars + r;
    let pad = |m: &Vec<u32>| {
        let mut v = m.clone();
        v.resize(n, 0);
        v
    };
    let mut ideal: Vec<Vec<u32>> = o.ideal.iter().map(pad).collect();
    for a in o.nvars..n {
        for b in 0..n {
            let mut m = vec![0; n];
            m[a] += 1;
            m[b] += 1;
            ideal.push(m);
        }
    }
    MonomialRing::new(o.p, n, ideal)
}

#[test]
fn trivial_extension_matches_monomial_presentation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 200..220 {
        let case = RingCase::random(seed);
        let r = rng.gen_range(1..=2);
        let b = extension_by_k(&case.ring.as_dg_algebra(), r);
        let oracle = extension_oracle(&case.oracle, r);
        assert_eq!(b.dim(), oracle.dim());
        let k = DGModule::residue_field(b).unwrap();
        let p = tor_against_k(&k, 4).unwrap();
        assert_eq!(p.coefficients, oracle.betti(&all_vars(&oracle), 4), "seed {seed}");
    }
}

#[test]
fn product_identity_for_trivial_extension() {
    let a = library_ring(&MonomialRing::new(101, 1, vec![e(&[2])]));
    let base = a.as_dg_algebra();
    let cells = [("w", 0)];
    let w = ChainComplex::trivial(GradedSpace::from_pairs(base.field(), &cells).unwrap());
    let eps = base.augmentation().unwrap().clone();
    let te = trivial_extension(&base, &eps, &w).unwrap();
    let n = 10;
    // B = k[x,w]/(x², xw, w²), C = B/(w), L = k
    let oracle_b = MonomialRing::new(101, 2, vec![e(&[2, 0]), e(&[1, 1]), e(&[0, 2])]);
    let pbc: Vec<usize> = (0..=n).map(|i| if i == 0 { 1 } else { 1 << (i - 1) }).collect();
    let pbl: Vec<usize> = (0..=n).map(|i| 1 << i).collect();
    let pcl = vec![1usize; n + 1];
    assert_eq!(oracle_b.betti(&all_vars(&oracle_b), 9), pbl[..10]);
    assert_eq!(oracle_b.betti(&[e(&[0, 1])], 9), pbc[..10]);
    let product: Vec<usize> = (0..=n).map(|i| (0..=i).map(|j| pbc[j] * pcl[i - j]).sum()).collect();
    assert_eq!(product, pbl);

    let c = DGModule::regular(base.clone()).restrict(&te.beta).unwrap();
    let l = DGModule::residue_field(te.algebra.clone()).unwrap();
    assert_eq!(tor_against_k(&c, n as i32).unwrap().coefficients, pbc);
    assert_eq!(tor_against_k(&l, n as i32).unwrap().coefficients, pbl);
    let kc = DGModule::residue_field(base).unwrap();
    assert_eq!(tor_against_k(&kc, n as i32).unwrap().coefficients, pcl);
}
