//! Acceptance suite: one PASS/FAIL line per criterion. All quantities are
//! exact; every tolerance is zero.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use kneser::exec::RayonExec;
use kneser_core::genus::{classify, genus_enumerate, mass, GenusOptions, GenusRecord};
use kneser_core::hecke::{check_commute, eigensystems, eisenstein_eigenvalue, hecke_matrix, Eigensystem, HeckeMatrix};
use kneser_core::isometry::is_isometric;
use kneser_core::lattice::{AmbientSpace, Lattice};
use kneser_core::neighbor::NeighborContext;
use kneser_core::ring::CoefficientRing;
use kneser_core::shortvec::{short_vectors, theta_coeffs};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::neighbors::{battery, hermitian, lambda2, quadratic};
use support::*;

/// `(N(P), a_P, b_P)` for the split primes of norm below 200 over `Q(sqrt -7)`.
const EXPECTED: [(i128, i128, i128); 22] = [
    (2, 7, -1),
    (11, 133, 5),
    (23, 553, 41),
    (29, 871, -25),
    (37, 1407, -1),
    (43, 1893, 101),
    (53, 2863, 47),
    (67, 4557, -51),
    (71, 5113, 185),
    (79, 6321, -15),
    (107, 11557, 293),
    (109, 11991, 215),
    (113, 12883, -109),
    (127, 16257, 129),
    (137, 18907, -37),
    (149, 22351, 335),
    (151, 22953, 425),
    (163, 26733, 237),
    (179, 32221, -163),
    (191, 36673, -127),
    (193, 37443, 131),
    (197, 39007, 479),
];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS [{id}] {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL [{id}] {name} ({secs:.1}s): {detail}");
            }
        }
    }
}

/// Genus of the standard rank-3 lattice over `Z[(1+sqrt -7)/2]` and `T_{P,1}`
/// at the first prime above each listed norm.
struct HeckeRun {
    ring: CoefficientRing,
    record: GenusRecord,
    mats: Vec<HeckeMatrix>,
    systems: Vec<Eigensystem>,
}

fn hecke_run(exec: &RayonExec) -> Result<HeckeRun, String> {
    let ring = CoefficientRing::new(-7).map_err(err)?;
    let p2 = ring.split_prime(2).map_err(err)?[0];
    let record = genus_enumerate(&hermitian(-7, 3), &[p2], GenusOptions::default(), exec).map_err(err)?;
    let mut mats = Vec::new();
    for &(p, _, _) in &EXPECTED {
        let pr = ring.split_prime(p).map_err(err)?[0];
        mats.push(hecke_matrix(&record, &pr, 1, exec).map_err(err)?);
    }
    let systems = eigensystems(&mats).map_err(err)?;
    Ok(HeckeRun { ring, record, mats, systems })
}

fn eigen_row(s: &Eigensystem) -> Result<Vec<i128>, String> {
    s.eigenvalues.iter().map(|e| e.as_integer().ok_or_else(|| format!("non-integral eigenvalue {e:?}"))).collect()
}

fn criterion_1(run: &Result<HeckeRun, String>) -> Outcome {
    let run = run.as_ref().map_err(Clone::clone)?;
    ensure(run.systems.len() == 2, format!("{} eigensystems", run.systems.len()))?;
    let a = eigen_row(&run.systems[0])?;
    let b = eigen_row(&run.systems[1])?;
    for (i, &(q, ap, bp)) in EXPECTED.iter().enumerate() {
        ensure(a[i] == ap && b[i] == bp, format!("N(P) = {q}: got ({}, {}), want ({ap}, {bp})", a[i], b[i]))?;
    }
    Ok(format!("{} primes, all (a_P, b_P) exact", EXPECTED.len()))
}

fn criterion_2(run: &Result<HeckeRun, String>) -> Outcome {
    let run = run.as_ref().map_err(Clone::clone)?;
    let h = run.record.class_number();
    ensure(h == 2, format!("class number {h}"))?;
    let l1 = hermitian(-7, 3);
    let l2 = lambda2();
    let (j1, _) = classify(&run.record, &l1).map_err(err)?;
    let (j2, _) = classify(&run.record, &l2).map_err(err)?;
    ensure(j1 == 0 && j2 == 1, format!("classes {j1}, {j2}"))?;
    let pr = run.ring.split_prime(2).map_err(err)?[0];
    let fwd = NeighborContext::new(&l1, &pr).map_err(err)?;
    ensure(fwd.neighbors(1).map_err(err)?.iter().any(|n| n.lattice == l2), "explicit basis is not a neighbor")?;
    let back = NeighborContext::new(&l2, &run.ring.conj_prime(&pr)).map_err(err)?;
    ensure(back.neighbors(1).map_err(err)?.iter().any(|n| n.lattice == l1), "standard lattice is not a neighbor back")?;
    Ok(format!("h = 2, auts {:?}, explicit basis in class 1, mutual neighbors at 2", run.record.aut_orders))
}

fn criterion_3(run: &Result<HeckeRun, String>) -> Outcome {
    let run = run.as_ref().map_err(Clone::clone)?;
    ensure(run.systems[0].label == "eisenstein", "first system is not the constant one")?;
    let ones = run.systems[0].basis.iter().any(|v| v.iter().all(|x| x == &v[0]));
    ensure(ones, "constant function not in the Eisenstein block")?;
    let a = eigen_row(&run.systems[0])?;
    let b = eigen_row(&run.systems[1])?;
    for (i, m) in run.mats.iter().enumerate() {
        let q = m.prime.norm();
        ensure(a[i] == eisenstein_eigenvalue(q), format!("a at {q}"))?;
        ensure(m.row_sum() == Some(a[i]), format!("row sum at {q}"))?;
        let pi = m.prime.generator.ok_or(format!("no generator at {q}"))?;
        ensure(run.ring.norm(pi) == q, format!("generator norm at {q}"))?;
        let e = run.ring.endoscopic_eigenvalue(pi);
        ensure(e == run.ring.endoscopic_eigenvalue(-pi), format!("sign of generator matters at {q}"))?;
        ensure(b[i] == e, format!("b at {q}: {} vs tr^2 - N = {e}", b[i]))?;
    }
    Ok(format!("{} primes", run.mats.len()))
}

fn criterion_4(exec: &RayonExec, run: &Result<HeckeRun, String>) -> Outcome {
    let run = run.as_ref().map_err(Clone::clone)?;
    let mut mats = run.mats.clone();
    // Conjugate primes too, for the small norms.
    for p in [2, 11, 23] {
        let pr = run.ring.split_prime(p).map_err(err)?[1];
        mats.push(hecke_matrix(&run.record, &pr, 1, exec).map_err(err)?);
    }
    let mut pairs = 0;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            ensure(check_commute(a, b).map_err(err)?, format!("T at {} and {} do not commute", a.prime.p, b.prime.p))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs commute exactly"))
}

fn criterion_5(exec: &RayonExec) -> Outcome {
    let z = CoefficientRing::integers();
    let e8l = quadratic(&e8());
    let rec =
        genus_enumerate(&e8l, &[z.split_prime(3).map_err(err)?[0]], GenusOptions::default(), exec).map_err(err)?;
    ensure(rec.class_number() == 1, format!("class number {}", rec.class_number()))?;
    let by_roots = e8_aut_by_roots();
    ensure(rec.aut_orders == vec![by_roots], format!("aut {:?} vs orbit count {by_roots}", rec.aut_orders))?;
    let want: BigRational = "1/696729600".parse().map_err(err)?;
    ensure(mass(&rec) == want, format!("mass {}", mass(&rec)))?;
    let theta = theta_coeffs(&e8l, 4).map_err(err)?;
    let boxed = e8_theta_box(4);
    ensure(theta == boxed && boxed == vec![1, 0, 240, 0, 2160], format!("theta {theta:?} vs box {boxed:?}"))?;
    Ok(format!("h = 1, mass = {want}, theta {theta:?}"))
}

fn standard(g: &Gram) -> Lattice {
    Lattice::standard(AmbientSpace::rational(&to_zmat(g)).unwrap())
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xacce_0006);
    let mut pairs = 0;
    let mut positives = 0;
    let mut compare = |a: &Gram, b: &Gram| -> Result<(), String> {
        let brute = !brute_isometries(a, b, true).is_empty();
        let ours = is_isometric(&standard(a), &standard(b)).map_err(err)?.isometric;
        ensure(ours == brute, format!("{a:?} vs {b:?}: ours {ours}, brute {brute}"))?;
        pairs += 1;
        positives += brute as usize;
        Ok(())
    };
    let mut made = 0;
    while made < 120 {
        let n = rng.gen_range(1..=3);
        let a = random_form(&mut rng, n, 5);
        let b = congruence(&random_unimodular(&mut rng, n, 4), &a);
        if max_abs(&b) <= 5 {
            compare(&a, &b)?;
            made += 1;
        }
    }
    let mut buckets: std::collections::BTreeMap<(usize, i128), Gram> = Default::default();
    while made < 240 {
        let n = rng.gen_range(2..=3);
        let g = random_form(&mut rng, n, 5);
        match buckets.get(&(n, det(&g))) {
            Some(other) => {
                compare(&other.clone(), &g)?;
                made += 1;
            }
            None => {
                buckets.insert((n, det(&g)), g);
            }
        }
    }
    let mut forms = 0;
    for _ in 0..220 {
        let n = rng.gen_range(1..=3);
        let g = random_form(&mut rng, n, 5);
        let bound = rng.gen_range(0..=12);
        let sv = short_vectors(&to_zmat(&g), bound).map_err(err)?;
        let mut got: Vec<(Vec<i128>, i128)> = sv.vectors.iter().cloned().zip(sv.norms.iter().copied()).collect();
        got.sort();
        let mut want: Vec<(Vec<i128>, i128)> = box_vectors(&g, bound)
            .into_iter()
            .filter(|(x, _)| x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
            .collect();
        want.sort();
        ensure(got == want, format!("short vectors of {g:?} up to {bound}"))?;
        forms += 1;
    }
    Ok(format!("{pairs} pairs ({positives} isometric), {forms} forms"))
}

fn criterion_7() -> Outcome {
    let (total, reversed) = battery();
    ensure(total >= 500, format!("only {total} neighbors"))?;
    ensure(reversed >= 50, format!("only {reversed} reverse checks"))?;
    Ok(format!("{total} neighbors, {reversed} reverse checks"))
}

fn main() {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let exec = RayonExec::new(jobs).expect("thread pool");
    let mut report = Report { failed: 0 };
    let start = Instant::now();
    let run = catch_unwind(AssertUnwindSafe(|| hecke_run(&exec))).unwrap_or_else(|_| Err("panic in Hecke run".into()));
    println!("Hecke run over {} primes: {:.1}s", EXPECTED.len(), start.elapsed().as_secs_f64());
    report.run(1, "Hecke eigensystems at split primes of norm < 200", || criterion_1(&run));
    report.run(2, "genus of the rank-3 lattice over Q(sqrt -7)", || criterion_2(&run));
    report.run(3, "Eisenstein and endoscopic eigenvalue identities", || criterion_3(&run));
    report.run(4, "Hecke operators commute", || criterion_4(&exec, &run));
    report.run(5, "E8 genus, mass and theta series", || criterion_5(&exec));
    report.run(6, "isometry and short vectors against brute force", criterion_6);
    report.run(7, "neighbor invariants", criterion_7);
    if report.failed > 0 {
        println!("{} criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all 7 criteria passed");
}
