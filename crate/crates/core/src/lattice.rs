//! Ambient Hermitian (or quadratic) spaces and lattices in them.
//!
//! A lattice is stored through its underlying `Z`-module: a basis of rows in
//! flattened ambient coordinates, where coordinate `d*i + s` is the
//! coefficient of `w^s e_i` (`d = 1` over `Z`, `d = 2` otherwise). The basis
//! is kept as `N / den` with `N` in row Hermite normal form, so two lattices
//! are equal exactly when their stored data agree.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{gcd, lcm, valuation, Int, Rat};
use crate::error::{Error, Result};
use crate::qmat::{self, QMat};
use crate::ring::{CoefficientRing, FieldElt, PrimeIdeal, RingElt, Splitting};
use crate::zmat::ZMat;

/// `V = L^n` with a Hermitian form `phi`, linear in the first argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientSpace {
    ring: CoefficientRing,
    n: usize,
    gram: Vec<FieldElt>,
    /// `phi(e_u, e_v) = (phi[0][u][v] + phi[1][u][v] w) / den` on flattened
    /// basis vectors.
    den: Int,
    phi: [ZMat; 2],
    /// `tr phi(a_k x, y)` for `a_0 = 1`, `a_1 = w`; same denominator.
    traces: Vec<ZMat>,
    /// Multiplication by `w` on row vectors.
    omega: ZMat,
}

impl AmbientSpace {
    /// Builds the space from an `n x n` conjugate-symmetric Gram matrix.
    pub fn new(ring: CoefficientRing, gram: Vec<Vec<FieldElt>>) -> Result<Arc<Self>> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("Gram matrix must be square and nonempty".into()));
        }
        let zero = Rat::from_integer(0);
        for i in 0..n {
            for j in 0..n {
                let g = gram[i][j];
                if ring.is_integers() && g.b != zero {
                    return Err(Error::DimensionMismatch("w-component in a form over Z".into()));
                }
                if ring.conj_field(g) != gram[j][i] {
                    return Err(Error::DimensionMismatch("Gram matrix is not conjugate-symmetric".into()));
                }
            }
        }
        let d = ring.degree();
        let m = d * n;
        let w = FieldElt::from(ring.omega());
        let wbar = FieldElt::from(ring.conj(ring.omega()));
        let one = FieldElt::from(RingElt::ONE);
        let mut vals = vec![FieldElt::zero(); m * m];
        for i in 0..n {
            for s in 0..d {
                for j in 0..n {
                    for r in 0..d {
                        let mut v = gram[i][j];
                        v = ring.mul_field(if s == 1 { w } else { one }, v);
                        v = ring.mul_field(v, if r == 1 { wbar } else { one });
                        vals[(d * i + s) * m + d * j + r] = v;
                    }
                }
            }
        }
        let den = vals.iter().fold(1, |acc, v| lcm(lcm(acc, *v.a.denom()), *v.b.denom()));
        let scale = |x: Rat| x.numer() * (den / x.denom());
        let phi0 = ZMat::from_flat(m, m, vals.iter().map(|v| scale(v.a)).collect());
        let phi1 = ZMat::from_flat(m, m, vals.iter().map(|v| scale(v.b)).collect());
        let (t, nn) = (ring.t(), ring.n());
        let traces = if d == 1 {
            vec![phi0.clone()]
        } else {
            let tr0 = phi0.scale(2).add(&phi1.scale(t));
            // w (c0 + c1 w) = -n c1 + (c0 + t c1) w
            let tr1 = phi1.scale(-2 * nn).add(&phi0.add(&phi1.scale(t)).scale(t));
            vec![tr0, tr1]
        };
        let mut omega = ZMat::zeros(m, m);
        if d == 1 {
            omega = ZMat::identity(m);
        } else {
            for i in 0..n {
                omega[(2 * i, 2 * i + 1)] = 1;
                omega[(2 * i + 1, 2 * i)] = -nn;
                omega[(2 * i + 1, 2 * i + 1)] = t;
            }
        }
        let gram = gram.into_iter().flatten().collect();
        let space = AmbientSpace { ring, n, gram, den, phi: [phi0, phi1], traces, omega };
        if !space.traces[0].is_positive_definite()? {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Arc::new(space))
    }

    /// The standard form `sum x_i conj(y_i)`.
    pub fn standard(ring: CoefficientRing, n: usize) -> Arc<Self> {
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElt::from(RingElt::ONE) } else { FieldElt::zero() }).collect())
            .collect();
        Self::new(ring, gram).expect("standard form is positive definite")
    }

    /// A quadratic space over `Z` with the given integral Gram matrix.
    pub fn rational(gram: &ZMat) -> Result<Arc<Self>> {
        let g = (0..gram.nrows())
            .map(|i| (0..gram.ncols()).map(|j| FieldElt::from(RingElt::int(gram[(i, j)]))).collect())
            .collect();
        Self::new(CoefficientRing::integers(), g)
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    /// Rank over the coefficient field.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Rank over `Q`.
    pub fn zdim(&self) -> usize {
        self.n * self.ring.degree()
    }

    pub fn gram(&self) -> &[FieldElt] {
        &self.gram
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> FieldElt {
        self.gram[i * self.n + j]
    }

    pub fn omega_matrix(&self) -> &ZMat {
        &self.omega
    }

    pub fn form_den(&self) -> Int {
        self.den
    }

    pub fn phi_matrices(&self) -> &[ZMat; 2] {
        &self.phi
    }

    pub fn trace_matrices(&self) -> &[ZMat] {
        &self.traces
    }

    /// `phi(x, y)` for flattened ambient vectors.
    pub fn phi(&self, x: &[Rat], y: &[Rat]) -> Result<FieldElt> {
        let m = self.zdim();
        if x.len() != m || y.len() != m {
            return Err(Error::DimensionMismatch("vector length differs from ambient rank".into()));
        }
        let mut out = [Rat::from_integer(0); 2];
        for (k, o) in out.iter_mut().enumerate() {
            for u in 0..m {
                for v in 0..m {
                    let c = self.phi[k][(u, v)];
                    if c != 0 {
                        *o += x[u] * y[v] * c;
                    }
                }
            }
            *o /= Rat::from_integer(self.den);
        }
        Ok(FieldElt::new(out[0], out[1]))
    }

    /// Matrix of multiplication by `c` on row vectors.
    pub fn mult_matrix(&self, c: RingElt) -> ZMat {
        let m = self.zdim();
        if self.ring.is_integers() {
            return ZMat::scalar(m, c.a);
        }
        ZMat::scalar(m, c.a).add(&self.omega.scale(c.b))
    }
}

/// A full-rank `Z_L`-lattice in an ambient space.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: Arc<AmbientSpace>,
    den: Int,
    basis: ZMat,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den
            && self.basis == other.basis
            && (Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient)
    }
}

impl Eq for Lattice {}

impl core::hash::Hash for Lattice {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.den.hash(state);
        self.basis.hash(state);
    }
}

/// Invariant factors of one lattice relative to another at a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub prime: PrimeIdeal,
    /// Exponents of `P` (ascending).
    pub at_p: Vec<i64>,
    /// Exponents of `conj(P)` (ascending) when `P` splits.
    pub at_conj: Option<Vec<i64>>,
    /// Per-component exponents of the norm: `at_p[i] + at_conj[i]` when
    /// split, else `at_p`.
    pub exponents: Vec<i64>,
}

impl Lattice {
    /// Canonical lattice spanned by the rows of `rows / den`. `modulus`, if
    /// given, must satisfy `modulus * Z^m` inside the numerator row span.
    fn canonical(ambient: Arc<AmbientSpace>, den: Int, rows: &ZMat, modulus: Option<Int>) -> Result<Self> {
        let m = ambient.zdim();
        let h = rows.hnf(modulus)?;
        if h.nrows() != m {
            return Err(Error::Degenerate);
        }
        let g = gcd(h.content(), den);
        let (den, basis) = if g > 1 { (den / g, h.scale_div(g)) } else { (den, h) };
        Ok(Lattice { ambient, den, basis })
    }

    /// The lattice spanned by the rows of `basis` (any number of rows), which
    /// must be full rank and closed under `w`.
    pub fn from_rows(ambient: Arc<AmbientSpace>, basis: &QMat) -> Result<Self> {
        if basis.num.ncols() != ambient.zdim() {
            return Err(Error::DimensionMismatch("basis width differs from ambient rank".into()));
        }
        let l = Self::canonical(ambient, basis.den, &basis.num, None)?;
        if !l.is_ring_module()? {
            return Err(Error::NotRingModule);
        }
        Ok(l)
    }

    /// Canonical lattice from `basis` where `modulus * Z^m` is known to lie in
    /// the numerator row span; no module check.
    pub fn from_rows_with_modulus(ambient: Arc<AmbientSpace>, basis: &QMat, modulus: Int) -> Result<Self> {
        Self::canonical(ambient, basis.den, &basis.num, Some(modulus))
    }

    /// The `Z_L`-span of `rows`.
    pub fn span(ambient: Arc<AmbientSpace>, rows: &QMat) -> Result<Self> {
        let w = ambient.omega_matrix().clone();
        let num =
            if ambient.ring().is_integers() { rows.num.clone() } else { rows.num.vstack(&rows.num.checked_mul(&w)?) };
        Self::canonical(ambient, rows.den, &num, None)
    }

    /// `Z_L^n`.
    pub fn standard(ambient: Arc<AmbientSpace>) -> Self {
        let m = ambient.zdim();
        Lattice { ambient, den: 1, basis: ZMat::identity(m) }
    }

    pub fn ambient(&self) -> &Arc<AmbientSpace> {
        &self.ambient
    }

    pub fn ring(&self) -> &CoefficientRing {
        self.ambient.ring()
    }

    pub fn zrank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn den(&self) -> Int {
        self.den
    }

    /// HNF numerator rows.
    pub fn numerators(&self) -> &ZMat {
        &self.basis
    }

    pub fn basis(&self) -> QMat {
        QMat { den: self.den, num: self.basis.clone() }
    }

    /// Basis rows as rationals.
    pub fn basis_rows(&self) -> Vec<Vec<Rat>> {
        self.basis.row_iter().map(|r| r.iter().map(|&x| Rat::new(x, self.den)).collect()).collect()
    }

    fn same_space(&self, other: &Lattice) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("lattices live in different ambient spaces".into()))
        }
    }

    /// `w` acting in the lattice basis: `B W B^{-1}`.
    pub fn omega_matrix(&self) -> Result<QMat> {
        let (tden, tinv) = self.basis.triangular_inverse()?;
        let prod = self.basis.checked_mul(self.ambient.omega_matrix())?.checked_mul(&tinv)?;
        Ok(QMat::new(tden, prod))
    }

    pub fn is_ring_module(&self) -> Result<bool> {
        Ok(self.omega_matrix()?.is_integral())
    }

    /// `(phi_0, phi_1)` Gram matrices: `phi(b_i, b_j) = G0 + G1 w`.
    pub fn phi_grams(&self) -> Result<[QMat; 2]> {
        let d2 = self.den.checked_mul(self.den).and_then(|x| x.checked_mul(self.ambient.den));
        let d2 = d2.ok_or(Error::Overflow)?;
        let b = &self.basis;
        let bt = b.transpose();
        let g0 = b.checked_mul(&self.ambient.phi[0])?.checked_mul(&bt)?;
        let g1 = b.checked_mul(&self.ambient.phi[1])?.checked_mul(&bt)?;
        Ok([QMat::new(d2, g0), QMat::new(d2, g1)])
    }

    /// Gram matrices of the trace forms `tr phi(a_k x, y)` in the canonical
    /// basis: `phi_1` (symmetric, positive definite) and, over a quadratic
    /// order, `phi_2`.
    pub fn trace_forms(&self) -> Result<Vec<QMat>> {
        let d2 = self.den.checked_mul(self.den).and_then(|x| x.checked_mul(self.ambient.den));
        let d2 = d2.ok_or(Error::Overflow)?;
        let bt = self.basis.transpose();
        self.ambient.traces.iter().map(|a| Ok(QMat::new(d2, self.basis.checked_mul(a)?.checked_mul(&bt)?))).collect()
    }

    /// Integral trace forms; fails unless the lattice is integral.
    pub fn integral_trace_forms(&self) -> Result<Vec<ZMat>> {
        if !self.is_integral()? {
            return Err(Error::NotIntegral);
        }
        Ok(self.trace_forms()?.into_iter().map(|q| q.num).collect())
    }

    /// `phi(L, L)` inside `Z_L`.
    pub fn is_integral(&self) -> Result<bool> {
        let [g0, g1] = self.phi_grams()?;
        Ok(g0.is_integral() && g1.is_integral())
    }

    /// Coordinates of `other`'s basis in this lattice's basis.
    pub fn coords_of(&self, other: &Lattice) -> Result<QMat> {
        self.same_space(other)?;
        let (tden, tinv) = self.basis.triangular_inverse()?;
        let den = other.den.checked_mul(tden).ok_or(Error::Overflow)?;
        let num = other.basis.checked_mul(&tinv)?.checked_mul(&ZMat::scalar(tinv.nrows(), self.den))?;
        Ok(QMat::new(den, num))
    }

    /// Coordinates of an ambient vector in this lattice's basis.
    pub fn coords_of_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        let m = self.zrank();
        let q = QMat::from_rat_rows(&[v.to_vec()]);
        let (tden, tinv) = self.basis.triangular_inverse()?;
        let num = q.num.checked_mul(&tinv)?;
        let den = q.den * tden;
        Ok((0..m).map(|j| Rat::new(num[(0, j)] * self.den, den)).collect())
    }

    pub fn contains_vec(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.coords_of_vec(v)?.iter().all(|x| x.is_integer()))
    }

    /// Whether `other` is a sublattice.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        Ok(self.coords_of(other)?.is_integral())
    }

    /// `[self : sub]` when `sub` is contained in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Result<Option<Int>> {
        let c = self.coords_of(sub)?;
        if !c.is_integral() {
            return Ok(None);
        }
        Ok(Some(c.num.triangular_det_or_det()?.abs()))
    }

    /// `v * B`: ambient vector of integer lattice coordinates, as `num / den`.
    pub fn vec_from_coords(&self, c: &[Int]) -> (Vec<Int>, Int) {
        (self.basis.vec_mul(c), self.den)
    }

    fn common_den(&self, other: &Lattice) -> Result<(Int, ZMat, ZMat)> {
        let den = lcm(self.den, other.den);
        let m = self.zrank();
        let a = self.basis.checked_mul(&ZMat::scalar(m, den / self.den))?;
        let b = other.basis.checked_mul(&ZMat::scalar(m, den / other.den))?;
        Ok((den, a, b))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.same_space(other)?;
        let (den, a, b) = self.common_den(other)?;
        let modulus = exponent(&self.basis).and_then(|e| e.checked_mul(den / self.den));
        Self::canonical(self.ambient.clone(), den, &a.vstack(&b), modulus)
    }

    /// Dual with respect to the standard dot product of coordinates.
    fn dot_dual(&self) -> Result<Lattice> {
        let (tden, tinv) = self.basis.triangular_inverse()?;
        let q = QMat::new(tden, tinv.transpose().checked_mul(&ZMat::scalar(tinv.nrows(), self.den))?);
        Self::canonical(self.ambient.clone(), q.den, &q.num, None)
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.same_space(other)?;
        self.dot_dual()?.sum(&other.dot_dual()?)?.dot_dual()
    }

    /// `c * L`.
    pub fn scale(&self, c: RingElt) -> Result<Lattice> {
        let mm = self.ambient.mult_matrix(c);
        let num = self.basis.checked_mul(&mm)?;
        // A square nonsingular numerator contains |det| Z^m.
        let nc = self.ring().norm(c).abs();
        if nc == 0 {
            return Err(Error::Degenerate);
        }
        // N(c) Z^m lies in the span of the multiplication matrix.
        let modulus = exponent(&self.basis).and_then(|e| e.checked_mul(nc));
        Self::canonical(self.ambient.clone(), self.den, &num, modulus)
    }

    /// `c * L` for rational `c`.
    pub fn scale_rat(&self, c: Rat) -> Result<Lattice> {
        let den = self.den.checked_mul(*c.denom()).ok_or(Error::Overflow)?;
        let num = self.basis.checked_mul(&ZMat::scalar(self.zrank(), *c.numer()))?;
        if *c.numer() == 0 {
            return Err(Error::Degenerate);
        }
        let modulus = exponent(&self.basis).and_then(|e| e.checked_mul(c.numer().abs()));
        Self::canonical(self.ambient.clone(), den, &num, modulus)
    }

    /// `P^e * L` for a prime ideal and any integer exponent.
    pub fn scale_prime(&self, pr: &PrimeIdeal, e: i64) -> Result<Lattice> {
        if e == 0 {
            return Ok(self.clone());
        }
        let self_conj = pr.is_self_conjugate() && pr.splitting != Splitting::Ramified;
        if self_conj {
            // P = (p).
            let c = Rat::from_integer(pr.p);
            let mut out = self.clone();
            for _ in 0..e.unsigned_abs() {
                out = out.scale_rat(if e > 0 { c } else { c.recip() })?;
            }
            return Ok(out);
        }
        let ring = *self.ring();
        let (ideal, div) = if e > 0 { (*pr, false) } else { (ring.conj_prime(pr), true) };
        let mut out = self.clone();
        for _ in 0..e.unsigned_abs() {
            let a = out.scale(RingElt::int(ideal.p))?;
            let b = out.scale(ideal.pi)?;
            out = a.sum(&b)?;
            if div {
                out = out.scale_rat(Rat::new(1, ideal.p))?;
            }
        }
        Ok(out)
    }

    /// `L^# = {x : phi(L, x) in Z_L}`.
    pub fn dual(&self) -> Result<Lattice> {
        let a = &self.ambient.traces[0];
        let anb = a.checked_mul(&self.basis.transpose())?;
        let (iden, inv) = qmat::inverse(&anb)?;
        let scale = self.den.checked_mul(self.ambient.den).ok_or(Error::Overflow)?;
        let mut q = QMat::new(iden, inv.checked_mul(&ZMat::scalar(inv.nrows(), scale))?);
        if !self.ring().is_integers() {
            let delta = self.ambient.mult_matrix(self.ring().sqrt_disc());
            q = QMat::new(q.den, q.num.checked_mul(&delta)?);
        }
        Self::canonical(self.ambient.clone(), q.den, &q.num, None)
    }

    /// `[L^# : L]` for an integral lattice, as `det(phi_1) / |D|^n`.
    pub fn discriminant(&self) -> Result<Int> {
        let phi1 = self.integral_trace_forms()?.swap_remove(0);
        discriminant_from_trace_form(self, &phi1)
    }

    /// `[L^# : L]` computed from the dual lattice.
    pub fn discriminant_by_dual(&self) -> Result<Int> {
        if !self.is_integral()? {
            return Err(Error::NotIntegral);
        }
        self.dual()?.index_of(self)?.ok_or(Error::NotIntegral)
    }

    /// Invariant factors of `other` relative to `self` at `P`.
    pub fn invariant_factors(&self, other: &Lattice, pr: &PrimeIdeal) -> Result<InvariantFactors> {
        self.same_space(other)?;
        let p = pr.p;
        let big = self.sum(other)?;
        let small = self.intersect(other)?;
        let idx = big.index_of(&small)?.ok_or(Error::Degenerate)?;
        let mut rest = idx;
        while rest % p == 0 {
            rest /= p;
        }
        if rest != 1 {
            return Err(Error::LatticesDifferAwayFromP(p as i64));
        }
        let n = self.ambient.dim();
        let vbound = valuation(idx, p) as i64;
        let at_p = self.exponents_at(other, pr, vbound, n)?;
        let at_conj =
            if pr.is_split() { Some(self.exponents_at(other, &self.ring().conj_prime(pr), vbound, n)?) } else { None };
        let exponents = match &at_conj {
            Some(c) => {
                let mut e: Vec<i64> = at_p.iter().zip(c).map(|(a, b)| a + b).collect();
                e.sort_unstable();
                e
            }
            None => at_p.clone(),
        };
        Ok(InvariantFactors { prime: *pr, at_p, at_conj, exponents })
    }

    /// Elementary divisor exponents at one prime from the index function
    /// `F(j) = v_p [L + P^j M : L]`, which equals
    /// `f * sum_i max(0, -(r_i + j))` plus a constant.
    fn exponents_at(&self, other: &Lattice, pr: &PrimeIdeal, vbound: i64, n: usize) -> Result<Vec<i64>> {
        let p = pr.p;
        let f = pr.f as i64;
        let idx = |j: i64| -> Result<i64> {
            let scaled = other.scale_prime(pr, j)?;
            let s = self.sum(&scaled)?;
            let k = s.index_of(self)?.ok_or(Error::Degenerate)?;
            Ok(valuation(k, p) as i64)
        };
        let lo = -vbound - 1;
        let hi = vbound + 1;
        let mut vals = Vec::new();
        for j in lo..=hi + 1 {
            vals.push(idx(j)?);
        }
        // count(r <= s) = (F(-s-1) - F(-s)) / f
        let at = |j: i64| vals[(j - lo) as usize];
        let mut out = Vec::new();
        let mut prev = 0;
        for s in -vbound..=vbound {
            let c = (at(-s - 1) - at(-s)) / f;
            for _ in prev..c {
                out.push(s);
            }
            prev = c;
        }
        if out.len() != n {
            return Err(Error::VerificationFailed("invariant factor count".into()));
        }
        Ok(out)
    }
}

/// Least `e > 0` with `e * Z^m` inside the row span of a nonsingular
/// upper-triangular matrix, or `None` on overflow.
fn exponent(t: &ZMat) -> Option<Int> {
    let (den, inv) = t.triangular_inverse().ok()?;
    let den = den.abs();
    Some(den / gcd(den, inv.content()))
}

/// `det(phi_1) / |D|^n`: the trace dual has index `det(phi_1)` over `L` and
/// contains `L^#` with index `N(sqrt(D))^n`.
pub fn discriminant_from_trace_form(l: &Lattice, phi1: &ZMat) -> Result<Int> {
    let det = phi1.det()?.abs();
    let ring = l.ring();
    if ring.is_integers() {
        return Ok(det);
    }
    let dn = ring.disc().abs().checked_pow(l.ambient().dim() as u32).ok_or(Error::Overflow)?;
    if det % dn != 0 {
        return Err(Error::VerificationFailed("trace form determinant".into()));
    }
    Ok(det / dn)
}

impl ZMat {
    /// Determinant, using the diagonal when upper triangular.
    pub fn triangular_det_or_det(&self) -> Result<Int> {
        let upper = (0..self.nrows()).all(|i| (0..i).all(|j| self[(i, j)] == 0));
        if upper {
            self.triangular_det()
        } else {
            self.det()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: Int, b: Int) -> Rat {
        Rat::new(a, b)
    }

    #[test]
    fn trace_forms_rank_one() {
        let ring = CoefficientRing::new(-7).unwrap();
        let l = Lattice::standard(AmbientSpace::standard(ring, 1));
        let f = l.integral_trace_forms().unwrap();
        assert_eq!(f[0], ZMat::from_rows(&[[2, 1], [1, 4]]));
        // phi_2(x, y) = tr(w phi(x, y)), hand-expanded on {1, w}.
        assert_eq!(f[1], ZMat::from_rows(&[[1, 4], [-3, 2]]));
    }

    #[test]
    fn a2_dual_and_discriminant() {
        let a2 = AmbientSpace::rational(&ZMat::from_rows(&[[2, 1], [1, 2]])).unwrap();
        let l = Lattice::standard(a2);
        let d = l.dual().unwrap();
        assert_eq!(d.index_of(&l).unwrap(), Some(3));
        assert_eq!(l.discriminant().unwrap(), 3);
        assert_eq!(d.dual().unwrap(), l);
    }

    #[test]
    fn standard_hermitian_is_unimodular() {
        let ring = CoefficientRing::new(-7).unwrap();
        let l = Lattice::standard(AmbientSpace::standard(ring, 3));
        assert_eq!(l.dual().unwrap(), l);
        assert_eq!(l.discriminant().unwrap(), 1);
    }

    #[test]
    fn phi_sesquilinear_values() {
        let ring = CoefficientRing::new(-7).unwrap();
        let v = AmbientSpace::standard(ring, 2);
        let e1 = [q(1, 1), q(0, 1), q(0, 1), q(0, 1)];
        let we1 = [q(0, 1), q(1, 1), q(0, 1), q(0, 1)];
        assert_eq!(v.phi(&e1, &e1).unwrap(), FieldElt::from(RingElt::ONE));
        assert_eq!(v.phi(&we1, &e1).unwrap(), FieldElt::from(ring.omega()));
        assert_eq!(v.phi(&we1, &we1).unwrap(), FieldElt::from(RingElt::int(2)));
    }

    #[test]
    fn ideal_scaling() {
        let ring = CoefficientRing::new(-7).unwrap();
        let l = Lattice::standard(AmbientSpace::standard(ring, 2));
        let two = ring.split_prime(2).unwrap();
        let pp = l.scale_prime(&two[0], 1).unwrap().scale_prime(&two[1], 1).unwrap();
        assert_eq!(pp, l.scale(RingElt::int(2)).unwrap());
        assert_eq!(l.scale_prime(&two[0], 1).unwrap().scale_prime(&two[0], -1).unwrap(), l);
        assert_eq!(l.sum(&l).unwrap(), l);
        assert_eq!(l.intersect(&l.dual().unwrap()).unwrap(), l);
    }

    #[test]
    fn scaled_cubic_invariant_factors() {
        let z3 = AmbientSpace::rational(&ZMat::identity(3)).unwrap();
        let l = Lattice::standard(z3);
        let p3 = CoefficientRing::integers().split_prime(3).unwrap()[0];
        let m = l.scale_rat(Rat::from_integer(3)).unwrap();
        assert_eq!(l.invariant_factors(&m, &p3).unwrap().exponents, vec![1, 1, 1]);
        assert_eq!(m.invariant_factors(&l, &p3).unwrap().exponents, vec![-1, -1, -1]);
        let m5 = l.scale_rat(Rat::from_integer(5)).unwrap();
        assert_eq!(l.invariant_factors(&m5, &p3), Err(Error::LatticesDifferAwayFromP(3)));
    }
}
