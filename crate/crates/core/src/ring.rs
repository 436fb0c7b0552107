//! The coefficient ring: `Z`, or the maximal order `Z[w]` of an imaginary
//! quadratic field, with `w^2 = t*w - n`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{gcd, is_prime, is_square, isqrt, kronecker_prime, modp, sqrt_mod, Int, Rat};
use crate::error::{Error, Result};
use crate::field::{Fe, ResidueField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Integers,
    ImaginaryQuadratic,
}

/// `Z` (discriminant sentinel 1) or an imaginary quadratic maximal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientRing {
    disc: Int,
    t: Int,
    n: Int,
}

/// `a + b*w`; `b = 0` over `Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElt {
    pub a: Int,
    pub b: Int,
}

impl RingElt {
    pub const ZERO: RingElt = RingElt { a: 0, b: 0 };
    pub const ONE: RingElt = RingElt { a: 1, b: 0 };

    pub const fn new(a: Int, b: Int) -> Self {
        RingElt { a, b }
    }

    pub const fn int(a: Int) -> Self {
        RingElt { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl core::ops::Neg for RingElt {
    type Output = RingElt;
    fn neg(self) -> Self {
        RingElt { a: -self.a, b: -self.b }
    }
}

impl core::ops::Add for RingElt {
    type Output = RingElt;
    fn add(self, o: Self) -> Self {
        RingElt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl core::ops::Sub for RingElt {
    type Output = RingElt;
    fn sub(self, o: Self) -> Self {
        RingElt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}*w"),
            (a, b) if b < 0 => write!(f, "{a} - {}*w", -b),
            (a, b) => write!(f, "{a} + {b}*w"),
        }
    }
}

/// An element `a + b*w` of the fraction field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElt {
    pub a: Rat,
    pub b: Rat,
}

impl FieldElt {
    pub fn new(a: Rat, b: Rat) -> Self {
        FieldElt { a, b }
    }

    pub fn zero() -> Self {
        FieldElt { a: Rat::from_integer(0), b: Rat::from_integer(0) }
    }

    pub fn is_zero(&self) -> bool {
        self.a == Rat::from_integer(0) && self.b == Rat::from_integer(0)
    }
}

impl core::ops::Add for FieldElt {
    type Output = FieldElt;
    fn add(self, o: Self) -> Self {
        FieldElt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl From<RingElt> for FieldElt {
    fn from(x: RingElt) -> Self {
        FieldElt { a: Rat::from_integer(x.a), b: Rat::from_integer(x.b) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
    /// A rational prime of `Z`.
    Rational,
}

/// A prime ideal `P = (p, pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: Int,
    pub splitting: Splitting,
    /// Second generator: `w - r` when `f = 1` over a quadratic order, else `p`.
    pub pi: RingElt,
    /// Residue of `w` modulo `P` when `f = 1` over a quadratic order.
    pub root: Option<Int>,
    pub f: u32,
    /// A generator of `P` with norm `p^f` if one was certified.
    pub generator: Option<RingElt>,
}

impl PrimeIdeal {
    /// Absolute norm `p^f`.
    pub fn norm(&self) -> Int {
        self.p.pow(self.f)
    }

    pub fn is_split(&self) -> bool {
        self.splitting == Splitting::Split
    }

    /// `P != conj(P)`.
    pub fn is_self_conjugate(&self) -> bool {
        !self.is_split()
    }
}

impl CoefficientRing {
    /// `disc = 1` gives `Z`; otherwise `disc` must be a negative fundamental
    /// discriminant.
    pub fn new(disc: i64) -> Result<Self> {
        let d = disc as Int;
        if d == 1 {
            return Ok(CoefficientRing { disc: 1, t: 0, n: 0 });
        }
        if d > 1 {
            return Err(Error::RealQuadraticUnsupported(disc));
        }
        if !is_fundamental(d) {
            return Err(Error::NonFundamentalDiscriminant(disc));
        }
        let t = if modp(d, 4) == 1 { 1 } else { 0 };
        Ok(CoefficientRing { disc: d, t, n: (t * t - d) / 4 })
    }

    pub fn integers() -> Self {
        CoefficientRing { disc: 1, t: 0, n: 0 }
    }

    pub fn kind(&self) -> RingKind {
        if self.disc == 1 {
            RingKind::Integers
        } else {
            RingKind::ImaginaryQuadratic
        }
    }

    pub fn is_integers(&self) -> bool {
        self.disc == 1
    }

    /// Rank over `Z`.
    pub fn degree(&self) -> usize {
        if self.is_integers() {
            1
        } else {
            2
        }
    }

    pub fn disc(&self) -> Int {
        self.disc
    }

    /// Trace of `w`.
    pub fn t(&self) -> Int {
        self.t
    }

    /// Norm of `w`.
    pub fn n(&self) -> Int {
        self.n
    }

    pub fn omega(&self) -> RingElt {
        RingElt::new(0, 1)
    }

    pub fn mul(&self, x: RingElt, y: RingElt) -> RingElt {
        RingElt { a: x.a * y.a - self.n * x.b * y.b, b: x.a * y.b + x.b * y.a + self.t * x.b * y.b }
    }

    pub fn mul_field(&self, x: FieldElt, y: FieldElt) -> FieldElt {
        let n = Rat::from_integer(self.n);
        let t = Rat::from_integer(self.t);
        FieldElt { a: x.a * y.a - n * x.b * y.b, b: x.a * y.b + x.b * y.a + t * x.b * y.b }
    }

    pub fn conj(&self, x: RingElt) -> RingElt {
        RingElt { a: x.a + self.t * x.b, b: -x.b }
    }

    pub fn conj_field(&self, x: FieldElt) -> FieldElt {
        FieldElt { a: x.a + Rat::from_integer(self.t) * x.b, b: -x.b }
    }

    pub fn norm(&self, x: RingElt) -> Int {
        x.a * x.a + self.t * x.a * x.b + self.n * x.b * x.b
    }

    pub fn trace(&self, x: RingElt) -> Int {
        if self.is_integers() {
            x.a
        } else {
            2 * x.a + self.t * x.b
        }
    }

    /// `sqrt(D) = 2w - t`.
    pub fn sqrt_disc(&self) -> RingElt {
        RingElt::new(-self.t, 2)
    }

    /// Number of classes of reduced positive definite binary forms of
    /// discriminant `D`.
    pub fn class_number(&self) -> Int {
        if self.is_integers() {
            return 1;
        }
        let d = self.disc;
        let mut h = 0;
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                if gcd(gcd(a, b), c) == 1 {
                    h += 1;
                }
            }
            a += 1;
        }
        h
    }

    /// Whether every ideal class is its own conjugate up to squares, i.e.
    /// the class group is an elementary abelian 2-group. Then traversal by
    /// principal primes reaches the whole genus.
    pub fn class_group_is_two_torsion(&self) -> bool {
        if self.is_integers() {
            return true;
        }
        let t = crate::arith::factor(self.disc).len() as u32;
        self.class_number() == 1 << (t - 1)
    }

    pub fn residue_field(&self, pr: &PrimeIdeal) -> ResidueField {
        ResidueField::new(pr.p, pr.f, self.t, self.n)
    }

    /// Reduction modulo `P`.
    pub fn residue(&self, pr: &PrimeIdeal, x: RingElt) -> Fe {
        match (pr.f, pr.root) {
            (2, _) => Fe::new(modp(x.a, pr.p), modp(x.b, pr.p)),
            (_, Some(r)) => Fe::new(modp(x.a + x.b * r, pr.p), 0),
            _ => Fe::new(modp(x.a, pr.p), 0),
        }
    }

    pub fn contains(&self, pr: &PrimeIdeal, x: RingElt) -> bool {
        let r = self.residue(pr, x);
        r.u == 0 && r.v == 0
    }

    /// The conjugate ideal (itself unless split).
    pub fn conj_prime(&self, pr: &PrimeIdeal) -> PrimeIdeal {
        if !pr.is_split() {
            return *pr;
        }
        let r = modp(self.t - pr.root.expect("split prime has a root"), pr.p);
        PrimeIdeal { root: Some(r), pi: RingElt::new(-r, 1), generator: pr.generator.map(|g| self.conj(g)), ..*pr }
    }

    /// Prime ideals above the rational prime `p`, split pairs ordered by the
    /// residue of `w`.
    pub fn split_prime(&self, p: Int) -> Result<Vec<PrimeIdeal>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as i64));
        }
        if self.is_integers() {
            if p == 2 {
                return Err(Error::DyadicUnsupported);
            }
            return Ok(alloc::vec![PrimeIdeal {
                p,
                splitting: Splitting::Rational,
                pi: RingElt::int(p),
                root: None,
                f: 1,
                generator: Some(RingElt::int(p)),
            }]);
        }
        let kr = kronecker_prime(self.disc, p);
        if p == 2 && kr != 1 {
            return Err(Error::DyadicUnsupported);
        }
        let prime = |root: Int, splitting| PrimeIdeal {
            p,
            splitting,
            pi: RingElt::new(-root, 1),
            root: Some(root),
            f: 1,
            generator: None,
        };
        let out = match kr {
            -1 => alloc::vec![PrimeIdeal {
                p,
                splitting: Splitting::Inert,
                pi: RingElt::int(p),
                root: None,
                f: 2,
                generator: Some(RingElt::int(p)),
            }],
            0 => {
                // Double root of x^2 - t x + n.
                let r = (0..p).find(|&r| modp(r * r - self.t * r + self.n, p) == 0).unwrap();
                alloc::vec![prime(r, Splitting::Ramified)]
            }
            _ => {
                let mut roots: Vec<Int> = if p == 2 {
                    (0..2).filter(|&r| modp(r * r - self.t * r + self.n, 2) == 0).collect()
                } else {
                    let s = sqrt_mod(self.disc, p).expect("split prime has a square root");
                    let inv2 = (p + 1) / 2;
                    alloc::vec![modp((self.t + s) * inv2, p), modp((self.t - s) * inv2, p)]
                };
                roots.sort_unstable();
                roots.dedup();
                debug_assert_eq!(roots.len(), 2);
                roots.into_iter().map(|r| prime(r, Splitting::Split)).collect()
            }
        };
        let mut out = out;
        for pr in out.iter_mut() {
            if pr.generator.is_none() {
                pr.generator = self.principal_generator(pr).ok();
            }
        }
        Ok(out)
    }

    /// Units of the ring.
    pub fn units(&self) -> Vec<RingElt> {
        let mut u = alloc::vec![RingElt::ONE, RingElt::int(-1)];
        match self.disc {
            -3 => {
                // w^k for k = 1, 2, 4, 5.
                let w = self.omega();
                let w2 = self.mul(w, w);
                u.extend([w, w2, -w, -w2]);
            }
            -4 => u.extend([self.omega(), -self.omega()]),
            _ => {}
        }
        u
    }

    /// The normalized generator of norm `p` of a degree-one prime, by complete
    /// search over the ellipse `N(x) = p`.
    pub fn principal_generator(&self, pr: &PrimeIdeal) -> Result<RingElt> {
        if self.is_integers() || pr.f == 2 {
            return Ok(RingElt::int(pr.p));
        }
        let p = pr.p;
        let d = -self.disc;
        let bmax = isqrt(4 * p / d) + 1;
        let mut found: Vec<RingElt> = Vec::new();
        for b in -bmax..=bmax {
            // a^2 + t b a + n b^2 - p = 0
            let disc = self.t * self.t * b * b - 4 * (self.n * b * b - p);
            if disc < 0 || !is_square(disc) {
                continue;
            }
            let s = isqrt(disc);
            for num in [-self.t * b + s, -self.t * b - s] {
                if num % 2 == 0 {
                    let x = RingElt::new(num / 2, b);
                    if self.norm(x) == p && self.contains(pr, x) {
                        found.push(x);
                    }
                }
            }
        }
        found
            .into_iter()
            .min_by_key(|x| (x.a.abs(), x.b.abs(), x.a < 0, x.b < 0))
            .ok_or(Error::NoGeneratorFound(p as i64))
    }

    /// `tr(pi)^2 - N(pi) = pi^2 + pi*conj(pi) + conj(pi)^2`.
    pub fn endoscopic_eigenvalue(&self, pi: RingElt) -> Int {
        let tr = self.trace(pi);
        tr * tr - self.norm(pi)
    }

    /// Checks the element lies in the ring description (always true here) and
    /// produces a short description used in error messages.
    pub fn describe(&self) -> alloc::string::String {
        if self.is_integers() {
            "Z".into()
        } else {
            format!("Z[w], w^2 = {}w - {} (D = {})", self.t, self.n, self.disc)
        }
    }
}

fn is_fundamental(d: Int) -> bool {
    match modp(d, 4) {
        1 => crate::arith::is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(modp(m, 4), 2 | 3) && crate::arith::is_squarefree(m)
        }
        _ => false,
    }
}
