//! One line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::props::{run_suite, SUITES};
use common::MonomialRing;
use dgtor::constructions::{koszul_complex, trivial_extension, TrivialExtension};
use dgtor::detect::{certify_kxw, products_vanish, SearchConfig, StructureVerdict};
use dgtor::dga::DGAlgebra;
use dgtor::graded::{ChainComplex, GradedSpace};
use dgtor::module::DGModule;
use dgtor::resolution::{certify_perfect, tor_against_k, PerfectionVerdict};
use dgtor::ring::ArtinianLocalRing;
use dgtor::verify::{verify_decomposition, verify_koszul_transfer, verify_poincare_product, verify_thm_tor, Verdict};
use dgtor::Field;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn f() -> Field {
    Field::prime(101).unwrap()
}

fn ring(vars: &[&str], rel: &[&str]) -> ArtinianLocalRing {
    ArtinianLocalRing::from_monomial_ideal(f(), vars, rel).unwrap()
}

fn w_deg0(n: usize) -> ChainComplex {
    let cells: Vec<(String, i32)> = (1..=n).map(|i| (format!("w{i}"), 0)).collect();
    ChainComplex::trivial(GradedSpace::from_pairs(f(), &cells).unwrap())
}

fn extend(a: &Arc<DGAlgebra>, n: usize) -> TrivialExtension {
    trivial_extension(a, &a.augmentation().unwrap().clone(), &w_deg0(n)).unwrap()
}

fn k_of(a: &Arc<DGAlgebra>) -> DGModule {
    DGModule::residue_field(a.clone()).unwrap()
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(outcome: Outcome, t: Duration, limit: Duration) -> Outcome {
    match outcome {
        Ok(m) if t > limit => Err(format!("{m}; over the {limit:?} limit")),
        o => o,
    }
}

fn koszul_square_zero() -> Outcome {
    let r = ring(&["x", "y"], &["x^2", "x*y", "y^2"]);
    let k = koszul_complex(&r).map_err(|e| e.to_string())?;
    let dims = k.algebra.homology_algebra().map_err(|e| e.to_string())?.dims();
    let h = k.algebra.homology_algebra().map_err(|e| e.to_string())?;
    let vanish = products_vanish(&h.algebra).is_none();
    let cert = certify_kxw(&k.algebra, SearchConfig::default()).map_err(|e| e.to_string())?;
    let oracle = MonomialRing::new(101, 2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]).koszul_homology();
    check(
        dims == [1, 3, 2] && oracle == dims && vanish && cert.verdict == StructureVerdict::CertifiedKxW,
        format!("H(K^R) = {dims:?}, products vanish: {vanish}, {}", cert.verdict),
    )
}

fn poincare_series() -> Outcome {
    let dual = ring(&["x"], &["x^2"]).as_dg_algebra();
    let p1 = tor_against_k(&k_of(&dual), 12).map_err(|e| e.to_string())?.coefficients;
    let b = extend(&ring(&[], &[]).as_dg_algebra(), 2).algebra;
    let p2 = tor_against_k(&k_of(&b), 12).map_err(|e| e.to_string())?.coefficients;
    let two: Vec<usize> = (0..=12).map(|i| 1 << i).collect();
    check(
        p1 == vec![1; 13] && p2 == two,
        format!("P^{{k[x]/(x²)}}_k = {p1:?}, P^{{k⋉k²}}_k = {p2:?}"),
    )
}

fn ps_product() -> Outcome {
    let a = ring(&["x"], &["x^2"]).as_dg_algebra();
    let te = extend(&a, 1);
    let rep = verify_poincare_product(&te.beta, &te.alpha, &k_of(&a), 10).map_err(|e| e.to_string())?;
    let pbc: Vec<usize> = (0..=10).map(|i| if i == 0 { 1 } else { 1 << (i - 1) }).collect();
    let got = tor_against_k(&DGModule::regular(a.clone()).restrict(&te.beta).unwrap(), 10)
        .unwrap()
        .coefficients;
    check(
        rep.verdict == Verdict::Pass && got == pbc,
        format!("{} through degree 10, P^B_C = {got:?}", rep.verdict.as_str()),
    )
}

fn thm_tor() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (a, w) in [(ring(&["x"], &["x^2"]), 1), (ring(&[], &[]), 2)] {
        let alg = a.as_dg_algebra();
        let k = k_of(&alg);
        let eps = alg.augmentation().unwrap().clone();
        let rep = verify_thm_tor(&alg, &eps, &w_deg0(w), &k, &k, 10).map_err(|e| e.to_string())?;
        ok &= rep.verdict == Verdict::Pass && rep.left.len() == 11;
        lines.push(format!("{}: {}", rep.instance, rep.verdict.as_str()));
    }
    check(ok, lines.join("; "))
}

fn decomposition() -> Outcome {
    let te = extend(&ring(&["x"], &["x^2"]).as_dg_algebra(), 1);
    let rep = verify_decomposition(&te.beta, 10).map_err(|e| e.to_string())?;
    check(
        rep.verdict == Verdict::Pass,
        format!("{} on {:?}", rep.verdict.as_str(), rep.clean_window),
    )
}

fn koszul_transfer() -> Outcome {
    let r = ring(&["x"], &["x^3"]);
    let ext = koszul_complex(&r).map_err(|e| e.to_string())?;
    let rep = verify_koszul_transfer(&ext, &k_of(&ext.base), &k_of(&ext.algebra), 10).map_err(|e| e.to_string())?;
    let oracle = MonomialRing::new(101, 1, vec![vec![3]]).tor_cyclic(&[vec![1]], &[vec![1]], 10);
    check(
        rep.verdict == Verdict::Pass && rep.right == oracle,
        format!("{} with Tor^R(k,k) = {:?}", rep.verdict.as_str(), rep.right),
    )
}

fn perfection() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (vars, rel) in [
        (&["x", "y"][..], &["x^2", "x*y", "y^2"][..]),
        (&["x"], &["x^2"]),
        (&["x"], &["x^3"]),
    ] {
        let a = ring(vars, rel).as_dg_algebra();
        let free = certify_perfect(&DGModule::regular(a.clone()), 10).map_err(|e| e.to_string())?;
        let k = certify_perfect(&k_of(&a), 10).map_err(|e| e.to_string())?;
        ok &= matches!(free, PerfectionVerdict::Perfect { .. }) && matches!(k, PerfectionVerdict::NotPerfect { .. });
        lines.push(format!("({}) R {} k {}", rel.join(","), free.name(), k.name()));
    }
    check(ok, lines.join("; "))
}

fn properties() -> Outcome {
    let mut failures = Vec::new();
    for (name, f) in SUITES {
        if let Err(e) = run_suite(f, 200) {
            failures.push(format!("{name}: {e}"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} suites × 200 cases", SUITES.len())
        } else {
            failures.join("; ")
        },
    )
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let run = |file: &PathBuf, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_dgtor"))
            .args(["--output", "json", "--threads", threads, "run"])
            .arg(file)
            .output()
            .unwrap()
            .stdout
    };
    let mut differ = Vec::new();
    for file in &files {
        let (a, b) = (run(file, "1"), run(file, "8"));
        if a != b || a.is_empty() {
            differ.push(file.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    check(
        differ.is_empty(),
        format!("{} sessions, differing: {differ:?}", files.len()),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Koszul homology of k[x,y]/(x²,xy,y²)", koszul_square_zero, Some(1)),
        ("Poincaré series to degree 12", poincare_series, Some(5)),
        ("Poincaré series product identity", ps_product, Some(5)),
        ("Tor decomposition for trivial extensions", thm_tor, None),
        ("Tor decomposition of B over C", decomposition, None),
        ("Koszul transfer for k[x]/(x³)", koszul_transfer, None),
        ("perfection certificates", perfection, None),
        ("property suites", properties, Some(60)),
        ("thread-count determinism", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        let outcome = match limit {
            Some(s) => within(outcome, t, Duration::from_secs(s)),
            None => outcome,
        };
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {}: {tag} {name} ({:.2?}): {msg}", i + 1, t);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
