//! Neighbor invariant checks shared by the core tests and the acceptance
//! suite. Unlike the rest of `support`, this drives the library.

use kneser_core::arith::Rat;
use kneser_core::hecke::degree;
use kneser_core::lattice::{AmbientSpace, Lattice};
use kneser_core::neighbor::{NeighborContext, NeighborResult};
use kneser_core::qmat::QMat;
use kneser_core::ring::{CoefficientRing, PrimeIdeal, Splitting};

use super::{e8, to_zmat, Gram};

pub fn hermitian(disc: i64, n: usize) -> Lattice {
    Lattice::standard(AmbientSpace::standard(CoefficientRing::new(disc).unwrap(), n))
}

pub fn quadratic(g: &Gram) -> Lattice {
    Lattice::standard(AmbientSpace::rational(&to_zmat(g)).unwrap())
}

/// Representative of the non-standard class in the rank-3 genus over
/// `Z[(1+sqrt -7)/2]`, given by an explicit basis.
pub fn lambda2() -> Lattice {
    let l1 = hermitian(-7, 3);
    let h = Rat::new;
    let rows = vec![
        vec![h(1, 1), h(-1, 1), h(0, 1), h(0, 1), h(0, 1), h(0, 1)],
        vec![h(1, 1), h(0, 1), h(1, 1), h(0, 1), h(0, 1), h(0, 1)],
        vec![h(-3, 2), h(1, 2), h(-1, 2), h(1, 2), h(-1, 2), h(1, 2)],
    ];
    Lattice::span(l1.ambient().clone(), &QMat::from_rat_rows(&rows)).unwrap()
}

/// Checks one neighbor; returns true when the reverse-neighbor check ran.
pub fn check(l: &Lattice, pr: &PrimeIdeal, k: usize, nb: &NeighborResult, reverse: bool) -> bool {
    let ring = *l.ring();
    let p = &nb.lattice;
    assert!(p.is_integral().unwrap());
    assert_eq!(p.discriminant().unwrap(), l.discriminant().unwrap());
    assert!(p.is_ring_module().unwrap());
    // Both quotients by the intersection have order N(P)^k.
    let q = pr.norm().pow(k as u32);
    let i = l.intersect(p).unwrap();
    assert_eq!(l.index_of(&i).unwrap(), Some(q));
    assert_eq!(p.index_of(&i).unwrap(), Some(q));
    assert_eq!(nb.index, q);
    // Quotient modules: conj(P) kills L/(L∩N) and P kills N/(L∩N).
    let cp = ring.conj_prime(pr);
    assert!(i.contains(&l.scale_prime(&cp, 1).unwrap()).unwrap());
    assert!(i.contains(&p.scale_prime(pr, 1).unwrap()).unwrap());
    let f = l.invariant_factors(p, pr).unwrap();
    let n = l.ambient().dim();
    if let Some(conj) = &f.at_conj {
        // Split: P^-1 k times at P, conj(P) k times at conj(P).
        let mut down = vec![-1; k];
        down.extend(vec![0; n - k]);
        let mut up = vec![0; n - k];
        up.extend(vec![1; k]);
        assert_eq!((&f.at_p, conj), (&down, &up));
    } else {
        // k of each of -1 and +1, the rest 0.
        let mut e = f.exponents.clone();
        e.sort();
        let mut expect = vec![-1; k];
        expect.extend(vec![0; n - 2 * k]);
        expect.extend(vec![1; k]);
        assert_eq!(e, expect);
    }
    // Unchanged away from p: the sum also has p-power index over each.
    assert_eq!(l.sum(p).unwrap().index_of(l).unwrap(), Some(q));
    if reverse {
        let back = NeighborContext::new(p, &cp).unwrap();
        assert!(back.neighbors(k).unwrap().iter().any(|x| &x.lattice == l));
    }
    reverse
}

pub fn run_case(l: &Lattice, pr: &PrimeIdeal, k: usize, reverse_every: usize) -> (usize, usize) {
    let ctx = NeighborContext::new(l, pr).unwrap();
    let nbs = ctx.neighbors(k).unwrap();
    if pr.splitting == Splitting::Split {
        let n = l.ambient().dim();
        assert_eq!(nbs.len() as i128, degree(pr.norm(), k, n, Splitting::Split).unwrap());
    }
    let mut rev = 0;
    for (j, nb) in nbs.iter().enumerate() {
        if check(l, pr, k, nb, reverse_every > 0 && j % reverse_every == 0) {
            rev += 1;
        }
    }
    (nbs.len(), rev)
}

/// The standard battery: both coefficient-ring cases, several primes and
/// `k`; returns `(neighbors checked, reverse checks)`.
pub fn battery() -> (usize, usize) {
    let mut total = 0;
    let mut reversed = 0;
    let mut add = |(n, r): (usize, usize)| {
        total += n;
        reversed += r;
    };
    let m7 = CoefficientRing::new(-7).unwrap();
    let l1 = hermitian(-7, 3);
    let l2 = lambda2();
    for &(p, side) in &[(2, 0), (2, 1), (11, 0), (11, 1), (23, 0)] {
        let pr = m7.split_prime(p).unwrap()[side];
        add(run_case(&l1, &pr, 1, if p > 11 { 0 } else { 7 }));
    }
    add(run_case(&l1, &m7.split_prime(2).unwrap()[0], 2, 1));
    add(run_case(&l1, &m7.split_prime(2).unwrap()[0], 3, 1));
    add(run_case(&l2, &m7.split_prime(2).unwrap()[0], 1, 1));
    add(run_case(&l2, &m7.split_prime(11).unwrap()[1], 1, 19));
    // Inert prime: non-split lifting.
    add(run_case(&l1, &m7.split_prime(3).unwrap()[0], 1, 5));
    let m4 = CoefficientRing::new(-4).unwrap();
    add(run_case(&hermitian(-4, 3), &m4.split_prime(5).unwrap()[0], 1, 5));
    let m3 = CoefficientRing::new(-3).unwrap();
    add(run_case(&hermitian(-3, 3), &m3.split_prime(7).unwrap()[1], 1, 9));
    add(run_case(&hermitian(-3, 4), &m3.split_prime(7).unwrap()[0], 2, 40));
    // Orthogonal case.
    let z = CoefficientRing::integers();
    let id = |n: usize| -> Gram { (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect() };
    for (n, p) in [(3, 3), (3, 5), (3, 7), (4, 3), (4, 5), (5, 3)] {
        add(run_case(&quadratic(&id(n)), &z.split_prime(p).unwrap()[0], 1, 1));
    }
    add(run_case(&quadratic(&id(4)), &z.split_prime(5).unwrap()[0], 2, 1));
    let e8l = quadratic(&e8());
    let ctx = NeighborContext::new(&e8l, &z.split_prime(3).unwrap()[0]).unwrap();
    let subs = ctx.subspaces(1).unwrap();
    assert_eq!(subs.len(), 1120);
    for (j, x) in subs.iter().enumerate().step_by(7) {
        let nb = ctx.neighbor(x).unwrap();
        if check(&e8l, &z.split_prime(3).unwrap()[0], 1, &nb, j % 70 == 0) {
            reversed += 1;
        }
        total += 1;
    }
    (total, reversed)
}
