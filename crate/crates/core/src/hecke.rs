//! Hecke operators on functions on the class set of a genus, and their
//! simultaneous eigensystems over `Q`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::genus::{ClassEntry, GenusRecord, Registry};
use crate::neighbor::{gaussian_binomial, NeighborContext};
use crate::ring::{PrimeIdeal, Splitting};
use crate::zmat::ZMat;

/// Entry `(i, j)` counts neighbors of representative `i` in class `j`.
pub const CONVENTION: &str = "rows=source";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub prime: PrimeIdeal,
    pub k: usize,
    pub matrix: ZMat,
    pub convention: &'static str,
    /// Number of classification witnesses checked while assembling.
    pub witnesses_verified: usize,
}

impl HeckeMatrix {
    /// Common row sum, if all rows agree.
    pub fn row_sum(&self) -> Option<Int> {
        let sums: Vec<Int> = self.matrix.row_iter().map(|r| r.iter().sum()).collect();
        match sums.first() {
            Some(&s) if sums.iter().all(|&x| x == s) => Some(s),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `T_{P,k}` on the classes of `record`.
pub fn hecke_matrix<E: Executor>(record: &GenusRecord, pr: &PrimeIdeal, k: usize, exec: &E) -> Result<HeckeMatrix> {
    let reg = Registry::from_record(record)?;
    hecke_matrix_registry(&reg, pr, k, exec)
}

/// As [`hecke_matrix`], reusing a prepared registry.
pub fn hecke_matrix_registry<E: Executor>(reg: &Registry, pr: &PrimeIdeal, k: usize, exec: &E) -> Result<HeckeMatrix> {
    let h = reg.len();
    if h == 0 {
        return Err(Error::IncompleteGenus);
    }
    let ring = *reg.entries[0].lattice.ring();
    if !ring.is_integers() && !pr.is_split() {
        return Err(Error::UnsupportedCase("Hecke operators at non-split primes".into()));
    }
    let mut matrix = ZMat::zeros(h, h);
    let mut verified = 0;
    for i in 0..h {
        let ctx = NeighborContext::new(&reg.entries[i].lattice, pr)?;
        let subs = ctx.subspaces(k)?;
        let cutoff = reg.cutoff;
        let hits = exec.map(&subs, |x| -> Result<usize> {
            let nb = ctx.neighbor(x)?;
            let cand = ClassEntry::with_forms(nb.lattice, nb.forms, cutoff)?;
            match reg.lookup(&cand, 0..h) {
                Ok(Some((j, _))) => Ok(j),
                Ok(None) | Err(Error::NotInRegistry) => Err(Error::IncompleteGenus),
                Err(e) => Err(e),
            }
        });
        for j in hits {
            matrix[(i, j?)] += 1;
            verified += 1;
        }
    }
    Ok(HeckeMatrix { prime: *pr, k, matrix, convention: CONVENTION, witnesses_verified: verified })
}

/// Number of `P^k`-neighbors of a rank `n` lattice at a split prime of norm
/// `q`: the number of `k`-subspaces of `F_q^n`.
pub fn degree(q: Int, k: usize, n: usize, splitting: Splitting) -> Result<Int> {
    match splitting {
        Splitting::Split => gaussian_binomial(n as u32, k as u32, q),
        _ => Err(Error::UnsupportedCase("closed neighbor count only for split primes".into())),
    }
}

/// `q^2 + q + 1`, the degree of `T_{P,1}` in rank 3.
pub fn eisenstein_eigenvalue(q: Int) -> Int {
    q * q + q + 1
}

pub fn check_commute(a: &HeckeMatrix, b: &HeckeMatrix) -> Result<bool> {
    Ok(a.matrix.checked_mul(&b.matrix)? == b.matrix.checked_mul(&a.matrix)?)
}

/// Checks `sum_i T_ij / |Aut_i| = kappa / |Aut_j|` for every column `j`.
pub fn weighted_column_sums_ok(t: &HeckeMatrix, aut_orders: &[u128]) -> bool {
    let Some(kappa) = t.row_sum() else { return false };
    let h = t.size();
    if aut_orders.len() != h {
        return false;
    }
    let m = |i: usize| BigRational::new(BigInt::one(), BigInt::from(aut_orders[i]));
    (0..h).all(|j| {
        let s = (0..h).fold(BigRational::zero(), |acc, i| acc + m(i) * BigInt::from(t.matrix[(i, j)]));
        s == m(j) * BigInt::from(kappa)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalue {
    Rational(BigRational),
    /// The operator acts on the block with this characteristic polynomial
    /// (coefficients from the constant term up), which has no rational root.
    Algebraic(Vec<BigRational>),
}

impl Eigenvalue {
    pub fn as_integer(&self) -> Option<Int> {
        match self {
            Eigenvalue::Rational(r) if r.is_integer() => r.to_integer().to_i128(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigensystem {
    pub label: String,
    /// One entry per input matrix.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Dimension of the common invariant subspace.
    pub multiplicity: usize,
    /// Basis of the subspace, as functions on the classes.
    pub basis: Vec<Vec<BigRational>>,
}

type QVec = Vec<BigRational>;

/// Simultaneous decomposition of `Q^h` under commuting Hecke matrices.
pub fn eigensystems(mats: &[HeckeMatrix]) -> Result<Vec<Eigensystem>> {
    let Some(first) = mats.first() else { return Ok(Vec::new()) };
    let h = first.size();
    for a in mats {
        if a.size() != h {
            return Err(Error::DimensionMismatch("Hecke matrices of different sizes".into()));
        }
        for b in mats {
            if !check_commute(a, b)? {
                return Err(Error::NonCommuting);
            }
        }
    }
    let qmats: Vec<Vec<QVec>> =
        mats.iter().map(|m| m.matrix.row_iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).collect();
    let identity: Vec<QVec> = (0..h).map(|i| unit(h, i)).collect();
    let mut blocks: Vec<(Vec<QVec>, Vec<Eigenvalue>)> = vec![(identity, Vec::new())];
    for (t, m) in qmats.iter().zip(mats) {
        let bound = m.matrix.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<Int>()).max().unwrap_or(0);
        let mut next = Vec::new();
        for (basis, values) in blocks {
            for (sub, ev) in split_block(t, &basis, bound) {
                let mut v = values.clone();
                v.push(ev);
                next.push((sub, v));
            }
        }
        blocks = next;
    }
    let ones: QVec = vec![BigRational::one(); h];
    let mut out: Vec<Eigensystem> = blocks
        .into_iter()
        .map(|(basis, eigenvalues)| {
            let eis = in_span(&basis, &ones)
                && mats
                    .iter()
                    .zip(&eigenvalues)
                    .all(|(m, e)| matches!((m.row_sum(), e), (Some(s), Eigenvalue::Rational(r)) if *r == rat(s)));
            Eigensystem {
                label: if eis { "eisenstein".into() } else { String::new() },
                multiplicity: basis.len(),
                eigenvalues,
                basis,
            }
        })
        .collect();
    out.sort_by_key(|s| s.label.is_empty());
    let mut n = 0;
    for s in out.iter_mut().filter(|s| s.label.is_empty()) {
        n += 1;
        s.label = alloc::format!("system-{n}");
    }
    Ok(out)
}

fn rat(x: Int) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn unit(h: usize, i: usize) -> QVec {
    let mut v = vec![BigRational::zero(); h];
    v[i] = BigRational::one();
    v
}

/// `T v` with `T` acting on column vectors.
fn apply(t: &[QVec], v: &[BigRational]) -> QVec {
    t.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |a, (x, y)| a + x * y)).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [QVec]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel of `a` (acting on column vectors).
fn kernel(a: &[QVec], cols: usize) -> Vec<QVec> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in `basis`, if it lies in the span.
fn coords(basis: &[QVec], v: &[BigRational]) -> Option<QVec> {
    let k = basis.len();
    let h = v.len();
    let mut aug: Vec<QVec> = (0..h)
        .map(|i| {
            let mut row: QVec = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![BigRational::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        c[p] = aug[row][k].clone();
    }
    Some(c)
}

fn in_span(basis: &[QVec], v: &[BigRational]) -> bool {
    coords(basis, v).is_some()
}

fn combine(basis: &[QVec], c: &[BigRational]) -> QVec {
    let h = basis[0].len();
    let mut v = vec![BigRational::zero(); h];
    for (b, x) in basis.iter().zip(c) {
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += x * bi;
        }
    }
    v
}

fn mat_mul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).fold(BigRational::zero(), |s, (x, r)| s + x * &r[j])).collect())
        .collect()
}

fn shift(m: &[QVec], r: &BigRational) -> Vec<QVec> {
    let mut out = m.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= r;
    }
    out
}

/// Characteristic polynomial `det(xI - m)` by Faddeev-LeVerrier, constant
/// term first.
pub fn charpoly(m: &[QVec]) -> Vec<BigRational> {
    let n = m.len();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut mk: Vec<QVec> = (0..n).map(|_| vec![BigRational::zero(); n]).collect();
    for k in 1..=n {
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr = (0..n).fold(BigRational::zero(), |s, i| s + &am[i][i]);
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    c
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Divides `p` by `(x - r)`, assuming `r` is a root.
fn deflate(p: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

/// Splits the invariant subspace spanned by `basis` into generalized
/// eigenspaces of `t` for its integer eigenvalues (in increasing order),
/// plus the complementary invariant block if any eigenvalues are irrational.
fn split_block(t: &[QVec], basis: &[QVec], bound: Int) -> Vec<(Vec<QVec>, Eigenvalue)> {
    let k = basis.len();
    // Columns of `m` are the coordinates of `t b_j`.
    let images: Vec<QVec> = basis.iter().map(|b| coords(basis, &apply(t, b)).expect("invariant block")).collect();
    let m: Vec<QVec> = (0..k).map(|i| (0..k).map(|j| images[j][i].clone()).collect()).collect();
    let mut poly = charpoly(&m);
    let mut roots: Vec<(BigRational, usize)> = Vec::new();
    // Rational eigenvalues of an integer matrix are integers bounded by the
    // largest absolute row sum.
    let mut r = -bound;
    while r <= bound && poly.len() > 1 {
        let x = rat(r);
        let mut mult = 0;
        while poly.len() > 1 && eval(&poly, &x).is_zero() {
            poly = deflate(&poly, &x);
            mult += 1;
        }
        if mult > 0 {
            roots.push((x, mult));
        }
        r += 1;
    }
    let mut out = Vec::new();
    let mut rest = ident(k);
    for (x, mult) in &roots {
        let s = shift(&m, x);
        let mut pw = ident(k);
        for _ in 0..*mult {
            pw = mat_mul(&pw, &s);
            rest = mat_mul(&rest, &s);
        }
        let sub: Vec<QVec> = kernel(&pw, k).iter().map(|c| combine(basis, c)).collect();
        out.push((sub, Eigenvalue::Rational(x.clone())));
    }
    if poly.len() > 1 {
        // Column space of the product over the rational factors.
        let mut cols: Vec<QVec> = (0..k).map(|j| (0..k).map(|i| rest[i][j].clone()).collect()).collect();
        let piv = rref(&mut cols);
        let sub: Vec<QVec> = cols[..piv.len()].iter().map(|c| combine(basis, c)).collect();
        let monic = normalize(poly);
        out.push((sub, Eigenvalue::Algebraic(monic)));
    }
    out
}

fn ident(k: usize) -> Vec<QVec> {
    (0..k).map(|i| unit(k, i)).collect()
}

fn normalize(p: Vec<BigRational>) -> Vec<BigRational> {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    if lead.is_zero() {
        return p;
    }
    p.into_iter().map(|c| c / &lead).collect()
}
