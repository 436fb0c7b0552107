mod support;

use kneser_core::isometry::{find_isometry, Prepared};
use kneser_core::lattice::{AmbientSpace, Lattice};
use kneser_core::qmat::QMat;
use kneser_core::ring::{CoefficientRing, RingElt};
use kneser_core::shortvec::theta_series;
use kneser_core::zmat::ZMat;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::*;

const DISCS: [i64; 9] = [-3, -4, -7, -8, -11, -15, -19, -20, -23];

fn ring() -> impl Strategy<Value = CoefficientRing> {
    prop::sample::select(DISCS.to_vec()).prop_map(|d| CoefficientRing::new(d).unwrap())
}

fn elt() -> impl Strategy<Value = RingElt> {
    (-60i128..60, -60i128..60).prop_map(|(a, b)| RingElt::new(a, b))
}

/// Full-rank sublattice of `Z_L^2` spanned by random rows.
fn sublattice(amb: &std::sync::Arc<AmbientSpace>, rows: &[i128]) -> Option<Lattice> {
    let m = amb.zdim();
    let z = ZMat::from_rows(&rows.chunks(m).map(|r| r.to_vec()).collect::<Vec<_>>());
    Lattice::span(amb.clone(), &QMat::from_int(z)).ok()
}

fn rows() -> impl Strategy<Value = Vec<i128>> {
    prop::collection::vec(-5i128..6, 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(r in ring(), x in elt(), y in elt()) {
        prop_assert_eq!(r.norm(r.mul(x, y)), r.norm(x) * r.norm(y));
        prop_assert_eq!(r.conj(r.conj(x)), x);
        prop_assert_eq!(r.mul(x, r.conj(x)), RingElt::int(r.norm(x)));
        prop_assert_eq!(x + r.conj(x), RingElt::int(r.trace(x)));
    }

    #[test]
    fn second_isomorphism_index(r in ring(), a in rows(), b in rows()) {
        let amb = AmbientSpace::standard(r, 2);
        let (Some(la), Some(lb)) = (sublattice(&amb, &a), sublattice(&amb, &b)) else {
            return Err(TestCaseError::reject("rank deficient"));
        };
        let i = la.intersect(&lb).unwrap();
        let s = la.sum(&lb).unwrap();
        prop_assert!(i.is_ring_module().unwrap() && s.is_ring_module().unwrap());
        prop_assert_eq!(la.index_of(&i).unwrap(), s.index_of(&lb).unwrap());
        prop_assert_eq!(lb.index_of(&i).unwrap(), s.index_of(&la).unwrap());
    }

    #[test]
    fn dual_is_an_involution(r in ring(), a in rows()) {
        let amb = AmbientSpace::standard(r, 2);
        let Some(l) = sublattice(&amb, &a) else {
            return Err(TestCaseError::reject("rank deficient"));
        };
        let d = l.dual().unwrap();
        prop_assert_eq!(d.dual().unwrap(), l.clone());
        // Integral lattices sit inside their dual with index the discriminant.
        if l.is_integral().unwrap() {
            prop_assert!(d.contains(&l).unwrap());
            prop_assert_eq!(l.discriminant().unwrap(), l.discriminant_by_dual().unwrap());
        }
    }

    #[test]
    fn canonical_basis_ignores_generators(r in ring(), a in rows(), seed in any::<u64>()) {
        let amb = AmbientSpace::standard(r, 2);
        let Some(l) = sublattice(&amb, &a) else {
            return Err(TestCaseError::reject("rank deficient"));
        };
        let mut rng = StdRng::seed_from_u64(seed);
        let u = to_zmat(&random_unimodular(&mut rng, 4, 6));
        let moved = QMat::new(l.den(), u.checked_mul(l.numerators()).unwrap());
        prop_assert_eq!(Lattice::from_rows(amb.clone(), &moved).unwrap(), l);
    }

    #[test]
    fn isometry_survives_basis_change(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_form(&mut rng, n, 4);
        let u = random_unimodular(&mut rng, n, 8);
        let h = congruence(&u, &g);
        prop_assume!(max_abs(&h) < 1 << 20);
        let (a, b) = (to_zmat(&g), to_zmat(&h));
        let w = find_isometry(&Prepared::new(std::slice::from_ref(&a)).unwrap(), std::slice::from_ref(&b)).unwrap();
        let w = w.expect("congruent forms must be isometric");
        prop_assert_eq!(w.checked_mul(&b).unwrap().checked_mul(&w.transpose()).unwrap(), a.clone());
        prop_assert_eq!(theta_series(&a, 8).unwrap(), theta_series(&b, 8).unwrap());
    }
}
