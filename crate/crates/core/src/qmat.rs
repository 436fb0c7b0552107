//! Rational matrices in the form `numerator / den` and exact inversion.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{gcd, lcm, Int};
use crate::error::{Error, Result};
use crate::zmat::ZMat;

fn to_int(x: &BigInt) -> Result<Int> {
    x.to_i128().ok_or(Error::Overflow)
}

/// Inverse of a nonsingular square integer matrix as `(den, N)` with
/// `A^{-1} = N / den`, `den > 0` minimal.
pub fn inverse(a: &ZMat) -> Result<(Int, ZMat)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "inverse of non-square matrix");
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(a[(i, j)]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::Degenerate)?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    let mut den = BigInt::one();
    for row in &m {
        for x in &row[n..] {
            den = num_integer::Integer::lcm(&den, x.denom());
        }
    }
    let mut out = ZMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &m[i][n + j] * BigRational::from_integer(den.clone());
            out[(i, j)] = to_int(x.numer())?;
        }
    }
    Ok((to_int(&den.abs())?, out))
}

/// A rational matrix `num / den` with `den > 0` and no common factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMat {
    pub den: Int,
    pub num: ZMat,
}

impl QMat {
    pub fn new(den: Int, num: ZMat) -> Self {
        assert!(den != 0);
        let (den, num) = if den < 0 { (-den, num.scale(-1)) } else { (den, num) };
        let g = gcd(num.content(), den);
        if g > 1 {
            QMat { den: den / g, num: num.scale_div(g) }
        } else {
            QMat { den, num }
        }
    }

    pub fn from_int(num: ZMat) -> Self {
        QMat { den: 1, num }
    }

    /// Builds from rows of rationals.
    pub fn from_rat_rows(rows: &[Vec<crate::arith::Rat>]) -> Self {
        let den = rows.iter().flatten().fold(1, |d, x| lcm(d, *x.denom()));
        let num: Vec<Vec<Int>> =
            rows.iter().map(|r| r.iter().map(|x| x.numer() * (den / x.denom())).collect()).collect();
        QMat::new(den, ZMat::from_rows(&num))
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn mul(&self, other: &QMat) -> Result<QMat> {
        let den = self.den.checked_mul(other.den).ok_or(Error::Overflow)?;
        Ok(QMat::new(den, self.num.checked_mul(&other.num)?))
    }

    pub fn transpose(&self) -> QMat {
        QMat { den: self.den, num: self.num.transpose() }
    }

    pub fn inverse(&self) -> Result<QMat> {
        let (d, inv) = inverse(&self.num)?;
        Ok(QMat::new(d, inv.checked_mul(&ZMat::scalar(inv.nrows(), self.den))?))
    }

    pub fn entry(&self, i: usize, j: usize) -> crate::arith::Rat {
        crate::arith::Rat::new(self.num[(i, j)], self.den)
    }

    pub fn to_int(&self) -> Option<ZMat> {
        self.is_integral().then(|| self.num.clone())
    }
}
