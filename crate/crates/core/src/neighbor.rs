//! Isotropic subspaces modulo a prime and the neighbors they define,
//! `L(P, X) = P^{-1} X + (L ∩ conj(P) X^#)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{inv_mod, modp, Int};
use crate::error::{Error, Result};
use crate::field::{kernel_mod, rank_mod, rref_mod, Fe, ResidueField};
use crate::lattice::{discriminant_from_trace_form, Lattice};
use crate::qmat::QMat;
use crate::ring::{PrimeIdeal, RingElt, Splitting};
use crate::zmat::{dot, ZMat};

/// A totally isotropic subspace of `L / PL`, with lifts to `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropicSubspace {
    pub prime: PrimeIdeal,
    pub k: usize,
    /// Reduced row echelon basis over the residue field, in the residue basis
    /// of the context that produced it.
    pub echelon: Vec<Vec<Fe>>,
    /// Lifts in lattice coordinates, adjusted so that `phi(X, X) ⊆ P conj(P)`.
    pub lifts: Vec<Vec<Int>>,
}

#[derive(Clone, Debug)]
pub struct NeighborResult {
    pub lattice: Lattice,
    pub subspace: IsotropicSubspace,
    /// `[L : L ∩ N] = [N : L ∩ N]`.
    pub index: Int,
    /// Integral trace forms of the neighbor.
    pub forms: Vec<ZMat>,
}

/// Precomputed data for neighbors of one lattice at one prime.
#[derive(Clone, Debug)]
pub struct NeighborContext {
    lattice: Lattice,
    prime: PrimeIdeal,
    field: ResidueField,
    m: usize,
    n: usize,
    d: usize,
    /// `phi(x, y) = x G0 y^T + (x G1 y^T) w` in lattice coordinates.
    g0: ZMat,
    g1: ZMat,
    /// `w` in lattice coordinates.
    w: ZMat,
    /// Residue basis `v_1..v_n` of `L / PL` in lattice coordinates.
    residue_basis: Vec<Vec<Int>>,
    /// Reduced Gram matrix of the residue form (non-split primes only).
    residue_gram: Option<Vec<Vec<Fe>>>,
    /// Split primes: `e = 1 mod P`, `e = 0 mod conj(P)`.
    idempotent: Option<RingElt>,
    /// Integer discriminant of the lattice.
    disc: Int,
}

impl NeighborContext {
    pub fn new(lattice: &Lattice, prime: &PrimeIdeal) -> Result<Self> {
        let ring = *lattice.ring();
        let p = prime.p;
        if prime.splitting == Splitting::Ramified {
            return Err(Error::BadPrime(p as i64));
        }
        if p == 2 && !prime.is_split() {
            return Err(Error::BadPrime(p as i64));
        }
        let [g0q, g1q] = lattice.phi_grams()?;
        let (Some(g0), Some(g1)) = (g0q.to_int(), g1q.to_int()) else {
            return Err(Error::NotIntegral);
        };
        let phi1 = lattice.integral_trace_forms()?.swap_remove(0);
        let disc = discriminant_from_trace_form(lattice, &phi1)?;
        if disc % p == 0 {
            return Err(Error::BadPrime(p as i64));
        }
        let w = lattice.omega_matrix()?.to_int().ok_or(Error::NotRingModule)?;
        let m = lattice.zrank();
        let d = ring.degree();
        let n = m / d;
        let field = ring.residue_field(prime);
        let mut ctx = NeighborContext {
            lattice: lattice.clone(),
            prime: *prime,
            field,
            m,
            n,
            d,
            g0,
            g1,
            w,
            residue_basis: Vec::new(),
            residue_gram: None,
            idempotent: None,
            disc,
        };
        ctx.residue_basis = ctx.find_residue_basis()?;
        if prime.is_split() {
            let r = prime.root.unwrap();
            let rbar = ring.conj_prime(prime).root.unwrap();
            let b = inv_mod(r - rbar, p).ok_or(Error::BadPrime(p as i64))?;
            ctx.idempotent = Some(RingElt::new(modp(-b * rbar, p), b));
        } else {
            let mut gram = vec![vec![Fe::ZERO; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let v = ctx.phi(&ctx.residue_basis[i], &ctx.residue_basis[j]);
                    gram[i][j] = ring.residue(prime, v);
                }
            }
            ctx.residue_gram = Some(gram);
        }
        Ok(ctx)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    fn phi(&self, x: &[Int], y: &[Int]) -> RingElt {
        let a = dot(&self.g0.vec_mul(x), y);
        let b = dot(&self.g1.vec_mul(x), y);
        RingElt::new(a, b)
    }

    /// `c * x` for lattice coordinates `x`.
    fn ring_mul(&self, c: RingElt, x: &[Int]) -> Vec<Int> {
        let wx = if self.d == 2 && c.b != 0 { self.w.vec_mul(x) } else { vec![0; self.m] };
        x.iter().zip(&wx).map(|(a, b)| c.a * a + c.b * b).collect()
    }

    /// Rows spanning the `F_p`-space `PL / pL` inside `L / pL` (in lattice
    /// coordinates mod p).
    fn p_lattice_rows(&self) -> Vec<Vec<Int>> {
        if self.prime.f == 2 || self.d == 1 {
            return Vec::new();
        }
        let pi = self.prime.pi;
        let mut rows: Vec<Vec<Int>> = (0..self.m)
            .map(|j| {
                let mut e = vec![0; self.m];
                e[j] = 1;
                self.ring_mul(pi, &e)
            })
            .collect();
        rref_mod(&mut rows, self.prime.p);
        rows
    }

    /// Greedy choice of `v_1..v_n` among unit vectors whose residue-field
    /// multiples span `L / PL`.
    fn find_residue_basis(&self) -> Result<Vec<Vec<Int>>> {
        let p = self.prime.p;
        let mut span = self.p_lattice_rows();
        let mut basis = Vec::new();
        for j in 0..self.m {
            if basis.len() == self.n {
                break;
            }
            let mut e = vec![0; self.m];
            e[j] = 1;
            let mut trial = span.clone();
            trial.push(e.clone());
            if self.prime.f == 2 {
                trial.push(self.w.vec_mul(&e));
            }
            let r = rank_mod(&trial, p);
            if r == span.len() + self.prime.f as usize {
                rref_mod(&mut trial, p);
                span = trial;
                basis.push(e);
            }
        }
        if basis.len() != self.n {
            return Err(Error::VerificationFailed("no residue basis".into()));
        }
        Ok(basis)
    }

    fn lift_fe(&self, x: Fe) -> RingElt {
        if self.prime.f == 2 {
            RingElt::new(x.u, x.v)
        } else {
            RingElt::int(x.u)
        }
    }

    /// Lattice coordinates of a lift of a residue vector.
    fn lift(&self, c: &[Fe]) -> Vec<Int> {
        let mut out = vec![0; self.m];
        for (ci, v) in c.iter().zip(&self.residue_basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.ring_mul(self.lift_fe(*ci), v)) {
                *o += x;
            }
        }
        out.iter().map(|&x| modp(x, self.prime.p)).collect()
    }

    /// Residue form `B(x, y) = sum x_i G_ij frob(y_j)`.
    fn residue_form(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let k = &self.field;
        let g = self.residue_gram.as_ref().expect("non-split prime");
        let mut s = Fe::ZERO;
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() {
                    continue;
                }
                s = k.add(s, k.mul(k.mul(x[i], g[i][j]), k.frob(y[j])));
            }
        }
        s
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n || (!self.prime.is_split() && 2 * k > self.n) {
            return Err(Error::KTooLarge { k, n: self.n });
        }
        Ok(())
    }

    /// All `k`-dimensional totally isotropic subspaces (every subspace when
    /// `P` splits), in reduced echelon form, in a fixed order.
    pub fn subspaces(&self, k: usize) -> Result<Vec<IsotropicSubspace>> {
        self.check_k(k)?;
        let mut out = Vec::new();
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        let elements = self.field.elements();
        self.extend_echelon(k, 0, &mut rows, &mut Vec::new(), &elements, &mut |rows| {
            out.push(rows.to_vec());
        });
        out.into_iter().map(|e| self.subspace_from_echelon(e)).collect()
    }

    /// Number of `k`-subspaces without lifting them.
    pub fn count_subspaces(&self, k: usize) -> Result<usize> {
        self.check_k(k)?;
        let mut count = 0;
        let elements = self.field.elements();
        self.extend_echelon(k, 0, &mut Vec::new(), &mut Vec::new(), &elements, &mut |_| count += 1);
        Ok(count)
    }

    /// Recursive echelon construction: row `r` has its pivot after the
    /// previous one, in a column where all earlier rows vanish.
    fn extend_echelon<F: FnMut(&[Vec<Fe>])>(
        &self,
        k: usize,
        min_col: usize,
        rows: &mut Vec<Vec<Fe>>,
        pivots: &mut Vec<usize>,
        elements: &[Fe],
        emit: &mut F,
    ) {
        if rows.len() == k {
            emit(rows);
            return;
        }
        let remaining = k - rows.len();
        for c in min_col..=self.n - remaining {
            if rows.iter().any(|r| !r[c].is_zero()) {
                continue;
            }
            let free: Vec<usize> = (c + 1..self.n).collect();
            let total = (elements.len() as u64).pow(free.len() as u32);
            let mut row = vec![Fe::ZERO; self.n];
            row[c] = Fe::ONE;
            for idx in 0..total {
                let mut t = idx;
                for &j in &free {
                    row[j] = elements[(t % elements.len() as u64) as usize];
                    t /= elements.len() as u64;
                }
                if self.residue_gram.is_some() {
                    let zero = Fe::ZERO;
                    if self.residue_form(&row, &row) != zero || rows.iter().any(|r| self.residue_form(r, &row) != zero)
                    {
                        continue;
                    }
                }
                // Earlier rows must vanish on this pivot; they do by the check above.
                rows.push(row.clone());
                pivots.push(c);
                self.extend_echelon(k, c + 1, rows, pivots, elements, emit);
                rows.pop();
                pivots.pop();
            }
        }
    }

    /// Lifts an echelon basis, adjusting the lifts so that `phi(X, X)` lies
    /// in `P conj(P)`.
    pub fn subspace_from_echelon(&self, echelon: Vec<Vec<Fe>>) -> Result<IsotropicSubspace> {
        let p = self.prime.p;
        let k = echelon.len();
        let mut lifts: Vec<Vec<Int>> = echelon.iter().map(|c| self.lift(c)).collect();
        if let Some(e) = self.idempotent {
            for x in lifts.iter_mut() {
                *x = self.ring_mul(e, x).iter().map(|&v| modp(v, p * p)).collect();
            }
        } else {
            lifts = self.adjust_lifts(lifts)?;
        }
        let sub = IsotropicSubspace { prime: self.prime, k, echelon, lifts };
        self.check_isotropic(&sub)?;
        Ok(sub)
    }

    /// `x_i <- x_i + p sum_l c_il y_l` with `phi(x_i, y_l) = delta_il mod p`.
    fn adjust_lifts(&self, xs: Vec<Vec<Int>>) -> Result<Vec<Vec<Int>>> {
        let p = self.prime.p;
        let k = xs.len();
        let ring = *self.lattice.ring();
        // Linear conditions phi(x_i, y) on y, split into Z-components.
        let mut rows: Vec<Vec<Int>> = Vec::new();
        for x in &xs {
            rows.push(self.g0.vec_mul(x));
            if self.d == 2 {
                rows.push(self.g1.vec_mul(x));
            }
        }
        let mut ys = Vec::with_capacity(k);
        for l in 0..k {
            let mut rhs = vec![0; rows.len()];
            rhs[l * self.d] = 1;
            ys.push(solve_mod(&rows, &rhs, p).ok_or(Error::NotIsotropic)?);
        }
        let s: Vec<Vec<RingElt>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let v = self.phi(&xs[i], &xs[j]);
                        debug_assert!(v.a % p == 0 && v.b % p == 0);
                        RingElt::new(v.a / p, v.b / p)
                    })
                    .collect()
            })
            .collect();
        let inv2 = inv_mod(2, p).ok_or(Error::BadPrime(p as i64))?;
        let mut out = xs.clone();
        for i in 0..k {
            for l in 0..k {
                let c = if l > i {
                    -s[i][l]
                } else if l == i {
                    RingElt::int(-s[i][i].a * inv2)
                } else {
                    continue;
                };
                let c = RingElt::new(modp(c.a, p), modp(c.b, p));
                let cy = self.ring_mul(c, &ys[l]);
                for (o, v) in out[i].iter_mut().zip(cy) {
                    *o += p * v;
                }
            }
            let _ = ring;
            for o in out[i].iter_mut() {
                *o = modp(*o, p * p);
            }
        }
        Ok(out)
    }

    fn check_isotropic(&self, x: &IsotropicSubspace) -> Result<()> {
        // P conj(P) is (p) when P splits and (p^2) otherwise.
        let q = if self.prime.is_split() { self.prime.p } else { self.prime.p * self.prime.p };
        for a in &x.lifts {
            for b in &x.lifts {
                let v = self.phi(a, b);
                if v.a % q != 0 || v.b % q != 0 {
                    return Err(Error::NotIsotropic);
                }
            }
        }
        Ok(())
    }

    /// The neighbor `P^{-1} X + (L ∩ conj(P) X^#)`, verified.
    pub fn neighbor(&self, x: &IsotropicSubspace) -> Result<NeighborResult> {
        if x.prime != self.prime {
            return Err(Error::DimensionMismatch("subspace belongs to another prime".into()));
        }
        self.check_isotropic(x)?;
        let p = self.prime.p;
        let m = self.m;
        let k = x.k;
        let ring = *self.lattice.ring();
        // L ∩ conj(P) X^# = {y : phi(x_i, y) in P}.
        let mut cond: Vec<Vec<Int>> = Vec::new();
        for xi in &x.lifts {
            let a = self.g0.vec_mul(xi);
            let b = self.g1.vec_mul(xi);
            match (self.prime.f, self.prime.root) {
                (2, _) => {
                    cond.push(a);
                    cond.push(b);
                }
                (_, Some(r)) if self.d == 2 => {
                    cond.push(a.iter().zip(&b).map(|(u, v)| u + r * v).collect());
                }
                _ => cond.push(a),
            }
        }
        let kernel = kernel_mod(&cond, m, p);
        let f = self.prime.f as usize;
        if kernel.len() != m - f * k {
            return Err(Error::NotIsotropic);
        }
        // p * N in lattice coordinates; p^2 Z^m is implied by the modulus.
        let mut gens: Vec<Vec<Int>> = kernel.iter().map(|v| v.iter().map(|c| c * p).collect()).collect();
        if self.prime.is_split() {
            let rbar = ring.conj_prime(&self.prime).root.unwrap();
            for xi in &x.lifts {
                gens.push(xi.iter().map(|c| c * p).collect());
                gens.push(self.ring_mul(RingElt::new(-rbar, 1), xi));
            }
        } else {
            for xi in &x.lifts {
                gens.push(xi.clone());
                if self.d == 2 {
                    gens.push(self.w.vec_mul(xi));
                }
            }
        }
        let h = ZMat::from_rows(&gens).hnf(Some(p * p))?;
        if h.nrows() != m {
            return Err(Error::VerificationFailed("neighbor is not full rank".into()));
        }
        let lb = self.lattice.numerators();
        let num = h.checked_mul(lb)?;
        let den = self.lattice.den().checked_mul(p).ok_or(Error::Overflow)?;
        let nb = Lattice::from_rows_trusted(self.lattice.ambient().clone(), den, &num)?;
        let q = self.field.order();
        let index = q.checked_pow(k as u32).ok_or(Error::Overflow)?;
        let forms = self.verify(&nb, &h, index)?;
        Ok(NeighborResult { lattice: nb, subspace: x.clone(), index, forms })
    }

    fn verify(&self, nb: &Lattice, h: &ZMat, index: Int) -> Result<Vec<ZMat>> {
        let fail = |what: &str| Err(Error::VerificationFailed(format!("neighbor {what}")));
        let [g0, g1] = nb.phi_grams()?;
        if !g0.is_integral() || !g1.is_integral() {
            return fail("is not integral");
        }
        let forms = nb.trace_forms()?;
        if forms.iter().any(|f| !f.is_integral()) {
            return fail("has a non-integral trace form");
        }
        let forms: Vec<ZMat> = forms.into_iter().map(|f| f.num).collect();
        if discriminant_from_trace_form(nb, &forms[0])? != self.disc {
            return fail("changed the discriminant");
        }
        // [L : K] = index by the kernel dimension, and [N : K] = [L : K]
        // exactly when N has the covolume of L, i.e. det(pN) = p^m in
        // lattice coordinates.
        let p = self.prime.p;
        let det_pn = h.triangular_det()?.abs();
        let pm = p.checked_pow(self.m as u32).ok_or(Error::Overflow)?;
        if det_pn != pm || index <= 1 {
            return fail("has the wrong index");
        }
        if !nb.is_ring_module()? {
            return fail("is not a module");
        }
        Ok(forms)
    }

    /// All neighbors for `k`-dimensional subspaces.
    pub fn neighbors(&self, k: usize) -> Result<Vec<NeighborResult>> {
        self.subspaces(k)?.iter().map(|x| self.neighbor(x)).collect()
    }
}

/// One solution of `A y = b` over `F_p`, for `A` given by rows.
pub fn solve_mod(a: &[Vec<Int>], b: &[Int], p: Int) -> Option<Vec<Int>> {
    let m = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Int>> = a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain([bi]).collect()).collect();
    let pivots = rref_mod(&mut aug, p);
    if pivots.contains(&m) {
        return None;
    }
    let mut y = vec![0; m];
    for (row, &c) in aug.iter().zip(&pivots) {
        y[c] = row[m];
    }
    Some(y)
}

/// Gaussian binomial `[n choose k]_q`, the number of `k`-subspaces of
/// `F_q^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: Int) -> Result<Int> {
    if k > n {
        return Ok(0);
    }
    let mut num: Int = 1;
    let mut den: Int = 1;
    for i in 0..k {
        let a = q.checked_pow(n - i).ok_or(Error::Overflow)? - 1;
        let b = q.checked_pow(i + 1).ok_or(Error::Overflow)? - 1;
        num = num.checked_mul(a).ok_or(Error::Overflow)?;
        den = den.checked_mul(b).ok_or(Error::Overflow)?;
        let g = crate::arith::gcd(num, den);
        num /= g;
        den /= g;
    }
    Ok(num / den)
}

impl Lattice {
    /// Canonical lattice from a square nonsingular numerator matrix whose
    /// determinant is used as the HNF modulus.
    pub fn from_rows_trusted(
        ambient: alloc::sync::Arc<crate::lattice::AmbientSpace>,
        den: Int,
        num: &ZMat,
    ) -> Result<Lattice> {
        let det = num.triangular_det_or_det()?.abs();
        if det == 0 {
            return Err(Error::Degenerate);
        }
        Lattice::from_rows_with_modulus(ambient, &QMat { den, num: num.clone() }, det)
    }
}
