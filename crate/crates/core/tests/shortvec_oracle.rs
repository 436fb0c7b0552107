mod support;

use kneser_core::lattice::{AmbientSpace, Lattice};
use kneser_core::shortvec::{short_vectors, theta_coeffs, theta_series};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::*;

/// Nonzero vectors up to sign, normalized so the first nonzero entry is positive.
fn half(vs: Vec<(Vec<i128>, i128)>) -> Vec<(Vec<i128>, i128)> {
    let mut out: Vec<_> = vs
        .into_iter()
        .filter(|(x, _)| x.iter().any(|&c| c != 0))
        .filter(|(x, _)| x.iter().find(|&&c| c != 0).copied().unwrap() > 0)
        .collect();
    out.sort();
    out
}

#[test]
fn short_vectors_match_box_enumeration() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for _ in 0..240 {
        let n = rng.gen_range(1..=4);
        let g = random_form(&mut rng, n, 5);
        let bound = rng.gen_range(0..=12);
        let sv = short_vectors(&to_zmat(&g), bound).unwrap();
        let mut got: Vec<(Vec<i128>, i128)> = sv.vectors.iter().cloned().zip(sv.norms.iter().copied()).collect();
        got.sort();
        assert_eq!(got, half(box_vectors(&g, bound)), "form {g:?} bound {bound}");
    }
}

#[test]
fn theta_series_matches_box_counts() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let g = random_form(&mut rng, n, 4);
        let cutoff = 10;
        let mut expect = vec![0u64; cutoff + 1];
        for (_, q) in box_vectors(&g, cutoff as i128) {
            expect[q as usize] += 1;
        }
        assert_eq!(theta_series(&to_zmat(&g), cutoff as i128).unwrap(), expect);
    }
}

#[test]
fn e8_theta_against_box() {
    let expect = e8_theta_box(4);
    assert_eq!(expect, vec![1, 0, 240, 0, 2160]);
    let l = Lattice::standard(AmbientSpace::rational(&to_zmat(&e8())).unwrap());
    assert_eq!(theta_coeffs(&l, 4).unwrap(), expect);
}

#[test]
fn large_entries_take_rational_path() {
    // Scaled to force the exact fallback.
    let s: i128 = 1 << 40;
    let g = vec![vec![2 * s, s], vec![s, 2 * s]];
    let sv = short_vectors(&to_zmat(&g), 2 * s).unwrap();
    assert_eq!(sv.vectors.len(), 3);
}
