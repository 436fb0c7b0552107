//! Residue fields `F_p` and `F_{p^2}` and linear algebra over them.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{inv_mod, modp, Int};

/// `u + v*theta` with `theta` the image of `w`; `v = 0` in prime fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    pub u: Int,
    pub v: Int,
}

impl Fe {
    pub const ZERO: Fe = Fe { u: 0, v: 0 };
    pub const ONE: Fe = Fe { u: 1, v: 0 };

    pub const fn new(u: Int, v: Int) -> Self {
        Fe { u, v }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

/// `F_p` (`f = 1`) or `F_p[theta]/(theta^2 - t*theta + n)` (`f = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    pub p: Int,
    pub f: u32,
    t: Int,
    n: Int,
}

impl ResidueField {
    pub fn new(p: Int, f: u32, t: Int, n: Int) -> Self {
        let k = ResidueField { p, f, t: modp(t, p), n: modp(n, p) };
        if f == 2 {
            assert!(
                (0..p).all(|r| modp(r * r - t * r + n, p) != 0),
                "minimal polynomial of w splits modulo an inert prime"
            );
        }
        k
    }

    pub fn prime(p: Int) -> Self {
        ResidueField { p, f: 1, t: 0, n: 0 }
    }

    pub fn order(&self) -> Int {
        self.p.pow(self.f)
    }

    pub fn from_int(&self, a: Int) -> Fe {
        Fe::new(modp(a, self.p), 0)
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        Fe::new((x.u + y.u) % self.p, (x.v + y.v) % self.p)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        Fe::new(modp(x.u - y.u, self.p), modp(x.v - y.v, self.p))
    }

    pub fn neg(&self, x: Fe) -> Fe {
        Fe::new(modp(-x.u, self.p), modp(-x.v, self.p))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.p;
        if self.f == 1 {
            return Fe::new(x.u * y.u % p, 0);
        }
        let bb = x.v * y.v % p;
        Fe::new(modp(x.u * y.u - self.n * bb, p), (x.u * y.v + x.v * y.u + self.t * bb) % p)
    }

    /// Frobenius, which is the conjugation of the quadratic order.
    pub fn frob(&self, x: Fe) -> Fe {
        if self.f == 1 {
            return x;
        }
        Fe::new((x.u + self.t * x.v) % self.p, modp(-x.v, self.p))
    }

    pub fn norm(&self, x: Fe) -> Int {
        self.mul(x, self.frob(x)).u
    }

    pub fn inv(&self, x: Fe) -> Fe {
        assert!(!x.is_zero(), "inverse of zero in a residue field");
        let nrm = inv_mod(self.norm(x), self.p).expect("nonzero norm is invertible");
        let c = self.frob(x);
        Fe::new(c.u * nrm % self.p, c.v * nrm % self.p)
    }

    /// All elements in a fixed order starting with 0, 1.
    pub fn elements(&self) -> Vec<Fe> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let vmax = if self.f == 2 { self.p } else { 1 };
        for v in 0..vmax {
            for u in 0..self.p {
                out.push(Fe::new(u, v));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<Fe>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(s) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, s);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c];
                    for j in 0..ncols {
                        let t = self.mul(f, rows[r][j]);
                        rows[i][j] = self.sub(rows[i][j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        pivots
    }
}

/// Reduced row echelon form of an integer matrix modulo the prime `p`; zero
/// rows are dropped. Returns the pivot columns.
pub fn rref_mod(rows: &mut Vec<Vec<Int>>, p: Int) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            *x = modp(*x, p);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(s) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, s);
        let inv = inv_mod(rows[r][c], p).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..ncols {
                    rows[i][j] = modp(rows[i][j] - f * rows[r][j], p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel `{x : A x = 0}` over `F_p` of an `r x m` matrix.
pub fn kernel_mod(a: &[Vec<Int>], m: usize, p: Int) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = a.to_vec();
    let pivots = if rows.is_empty() { Vec::new() } else { rref_mod(&mut rows, p) };
    let mut out = Vec::new();
    for free in (0..m).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; m];
        v[free] = 1;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = modp(-row[free], p);
        }
        out.push(v);
    }
    out
}

pub fn rank_mod(rows: &[Vec<Int>], p: Int) -> usize {
    let mut r = rows.to_vec();
    if r.is_empty() {
        return 0;
    }
    rref_mod(&mut r, p).len()
}
