//! Exact Fincke-Pohst enumeration of short vectors, theta series and
//! isometry-class fingerprints.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{rat_floor, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::reduce::reduce_gram;
use crate::zmat::ZMat;

/// Vectors `x != 0` with `x G x^T <= bound`, one per `{x, -x}` pair (first
/// nonzero coordinate positive), sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectors {
    pub bound: Int,
    pub vectors: Vec<Vec<Int>>,
    pub norms: Vec<Int>,
}

/// Rational Cholesky data: `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
struct Cholesky {
    q: Vec<Vec<Rat>>,
}

impl Cholesky {
    fn new(g: &ZMat) -> Result<Self> {
        let n = g.nrows();
        let mut q: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from_integer(g[(i, j)])).collect()).collect();
        for i in 0..n {
            if q[i][i] <= Rat::from_integer(0) {
                return Err(Error::NotPositiveDefinite);
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] = q[i][j] / q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = q[k][i] * q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        Ok(Cholesky { q })
    }
}

/// Calls `f(x, Q(x))` for every `x != 0` with `Q(x) <= bound`, one of each
/// `{x, -x}` (the last nonzero coordinate is positive). `g` must be positive
/// definite; it should be reduced for speed.
pub fn for_each_short_vector<F: FnMut(&[Int], Int)>(g: &ZMat, bound: Int, mut f: F) -> Result<()> {
    let n = g.nrows();
    if n == 0 || bound <= 0 {
        return Ok(());
    }
    let ch = Cholesky::new(g)?;
    if let Some(sc) = Scaled::new(&ch) {
        let mut found = Vec::new();
        let mut x = vec![0 as Int; n];
        let budget = bound.checked_mul(sc.s).ok_or(Error::Overflow);
        if let Ok(budget) = budget {
            if sc
                .enumerate(n - 1, &mut x, budget, true, &mut |x, rest| {
                    found.extend_from_slice(x);
                    found.push(rest);
                })
                .is_some()
            {
                for chunk in found.chunks(n + 1) {
                    f(&chunk[..n], (budget - chunk[n]) / sc.s);
                }
                return Ok(());
            }
        }
    }
    let q = &ch.q;
    let mut x = vec![0 as Int; n];
    // Budget remaining above level i.
    let mut budget = vec![Rat::from_integer(0); n + 1];
    budget[n] = Rat::from_integer(bound);
    enumerate(q, g, n, n - 1, &mut x, &mut budget, true, &mut f);
    Ok(())
}

/// The Cholesky data over a common denominator: with `A_i = sum_{j>i}
/// a_ij x_j`, level `i` costs `k_i (v e_i + A_i)^2`, and everything is scaled
/// by `s` so that costs are integers.
struct Scaled {
    a: Vec<Vec<Int>>,
    e: Vec<Int>,
    k: Vec<Int>,
    s: Int,
}

impl Scaled {
    fn new(ch: &Cholesky) -> Option<Self> {
        let q = &ch.q;
        let n = q.len();
        let mut e = vec![1 as Int; n];
        let mut a = vec![vec![0 as Int; n]; n];
        let mut s: Int = 1;
        for i in 0..n {
            for j in i + 1..n {
                e[i] = crate::arith::lcm(e[i], *q[i][j].denom());
            }
            for j in i + 1..n {
                a[i][j] = q[i][j].numer().checked_mul(e[i] / q[i][j].denom())?;
            }
            let w = q[i][i].denom().checked_mul(e[i].checked_mul(e[i])?)?;
            s = crate::arith::lcm(s, w);
            if s > (1 << 60) {
                return None;
            }
        }
        let k = (0..n)
            .map(|i| {
                let w = q[i][i].denom() * e[i] * e[i];
                q[i][i].numer().checked_mul(s / w)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Scaled { a, e, k, s })
    }

    /// Returns `None` on overflow. Emits `(x, remaining budget)`.
    fn enumerate<F: FnMut(&[Int], Int)>(
        &self,
        i: usize,
        x: &mut [Int],
        t: Int,
        all_zero_above: bool,
        f: &mut F,
    ) -> Option<()> {
        let n = x.len();
        let mut acc: Int = 0;
        for j in i + 1..n {
            if x[j] != 0 {
                acc = acc.checked_add(self.a[i][j].checked_mul(x[j])?)?;
            }
        }
        let (e, k) = (self.e[i], self.k[i]);
        let cost = |v: Int| -> Option<Int> {
            let d = v.checked_mul(e)?.checked_add(acc)?;
            k.checked_mul(d.checked_mul(d)?)
        };
        let start = crate::arith::round_div(-acc, e);
        let lo_limit = if all_zero_above { 0 } else { Int::MIN };
        let mut visit = |v: Int, x: &mut [Int], c: Int| -> Option<()> {
            x[i] = v;
            if i == 0 {
                if !(all_zero_above && v == 0) {
                    f(x, t - c);
                }
                Some(())
            } else {
                self.enumerate(i - 1, x, t - c, all_zero_above && v == 0, f)
            }
        };
        let mut v = start.max(lo_limit);
        loop {
            let c = cost(v)?;
            if c > t {
                break;
            }
            visit(v, x, c)?;
            v += 1;
        }
        let mut v = start - 1;
        while v >= lo_limit {
            let c = cost(v)?;
            if c > t {
                break;
            }
            visit(v, x, c)?;
            v -= 1;
        }
        x[i] = 0;
        Some(())
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate<F: FnMut(&[Int], Int)>(
    q: &[Vec<Rat>],
    g: &ZMat,
    n: usize,
    i: usize,
    x: &mut Vec<Int>,
    budget: &mut Vec<Rat>,
    all_zero_above: bool,
    f: &mut F,
) {
    let mut c = Rat::from_integer(0);
    for j in i + 1..n {
        if x[j] != 0 {
            c -= q[i][j] * Rat::from_integer(x[j]);
        }
    }
    let t = budget[i + 1];
    let qii = q[i][i];
    let cost = |v: Int| {
        let d = Rat::from_integer(v) - c;
        qii * d * d
    };
    let start = rat_floor(&(c + Rat::new(1, 2)));
    let visit = |v: Int, x: &mut Vec<Int>, budget: &mut Vec<Rat>, f: &mut F| {
        x[i] = v;
        let rest = t - cost(v);
        if i == 0 {
            if !(all_zero_above && v == 0) {
                let norm = quad(g, x);
                f(x, norm);
            }
        } else {
            budget[i] = rest;
            enumerate(q, g, n, i - 1, x, budget, all_zero_above && v == 0, f);
        }
    };
    let lo_limit = if all_zero_above { 0 } else { Int::MIN };
    let mut v = start.max(lo_limit);
    while cost(v) <= t {
        visit(v, x, budget, f);
        v += 1;
    }
    let mut v = start - 1;
    while v >= lo_limit && cost(v) <= t {
        visit(v, x, budget, f);
        v -= 1;
    }
    x[i] = 0;
}

/// `x G x^T`.
pub fn quad(g: &ZMat, x: &[Int]) -> Int {
    let n = x.len();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut r = 0;
        for j in 0..n {
            r += g[(i, j)] * x[j];
        }
        s += x[i] * r;
    }
    s
}

fn normalize_sign(v: &mut [Int]) {
    if v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
}

/// Complete list of short vectors of a positive definite Gram matrix.
pub fn short_vectors(g: &ZMat, bound: Int) -> Result<ShortVectors> {
    if !g.is_positive_definite()? {
        return Err(Error::NotPositiveDefinite);
    }
    let red = reduce_gram(g);
    let mut found: Vec<(Vec<Int>, Int)> = Vec::new();
    for_each_short_vector(&red.gram, bound, |y, norm| {
        let mut v = red.transform.vec_mul(y);
        normalize_sign(&mut v);
        found.push((v, norm));
    })?;
    found.sort();
    let (vectors, norms) = found.into_iter().unzip();
    Ok(ShortVectors { bound, vectors, norms })
}

/// `#{x : x G x^T = m}` for `m = 0..=cutoff`.
pub fn theta_series(g: &ZMat, cutoff: Int) -> Result<Vec<u64>> {
    if !g.is_positive_definite()? {
        return Err(Error::NotPositiveDefinite);
    }
    let red = reduce_gram(g);
    theta_of_reduced(&red.gram, cutoff)
}

fn theta_of_reduced(g: &ZMat, cutoff: Int) -> Result<Vec<u64>> {
    let mut theta = vec![0u64; cutoff.max(0) as usize + 1];
    theta[0] = 1;
    for_each_short_vector(g, cutoff, |_, norm| theta[norm as usize] += 2)?;
    Ok(theta)
}

/// Theta series of the first trace form of an integral lattice.
pub fn theta_coeffs(l: &Lattice, cutoff: Int) -> Result<Vec<u64>> {
    let forms = l.integral_trace_forms()?;
    theta_series(&forms[0], cutoff)
}

/// Cheap isometry invariants. Equal fingerprints are necessary for isometry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub discriminant: Int,
    pub zrank: usize,
    pub theta: Vec<u64>,
    /// Minimum of the first trace form.
    pub minimum: Int,
    pub aut_order: Option<u128>,
}

impl Fingerprint {
    /// The part compared during registry lookup (excludes the lazily filled
    /// automorphism order).
    pub fn key(&self) -> (Int, usize, &[u64], Int) {
        (self.discriminant, self.zrank, &self.theta, self.minimum)
    }
}

/// Default theta cutoff: twice the largest diagonal entry of the reduced
/// first trace form.
pub fn default_cutoff(l: &Lattice) -> Result<Int> {
    let forms = l.integral_trace_forms()?;
    let red = reduce_gram(&forms[0]);
    Ok(2 * (0..red.gram.nrows()).map(|i| red.gram[(i, i)]).max().unwrap_or(1))
}

pub fn fingerprint(l: &Lattice, cutoff: Int) -> Result<Fingerprint> {
    let forms = l.integral_trace_forms()?;
    let disc = crate::lattice::discriminant_from_trace_form(l, &forms[0])?;
    let red = reduce_gram(&forms[0]);
    fingerprint_of_reduced(&red.gram, disc, cutoff)
}

/// Fingerprint from an already reduced first trace form.
pub fn fingerprint_of_reduced(reduced: &ZMat, discriminant: Int, cutoff: Int) -> Result<Fingerprint> {
    let theta = theta_of_reduced(reduced, cutoff)?;
    let minimum = match theta.iter().skip(1).position(|&c| c > 0) {
        Some(i) => i as Int + 1,
        None => {
            // Above the cutoff; the smallest reduced diagonal entry bounds it.
            let top = (0..reduced.nrows()).map(|i| reduced[(i, i)]).min().unwrap_or(1);
            let mut min = top;
            for_each_short_vector(reduced, top, |_, nrm| min = min.min(nrm))?;
            min
        }
    };
    Ok(Fingerprint { discriminant, zrank: reduced.nrows(), theta, minimum, aut_order: None })
}
