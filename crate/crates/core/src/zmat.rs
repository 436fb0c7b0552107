//! Dense integer matrices with Hermite normal form and fraction-free
//! determinants. Rows are lattice vectors throughout the crate.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{gcd, Int};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl ZMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: Int) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows<R: AsRef<[Int]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        ZMat { rows: rows.len(), cols, data }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols);
        ZMat { rows, cols, data }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Int] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Int]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.row_iter().map(<[Int]>::to_vec).collect()
    }

    pub fn as_flat(&self) -> &[Int] {
        &self.data
    }

    pub fn transpose(&self) -> ZMat {
        let mut t = ZMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = ZMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self * other` with overflow detection.
    pub fn checked_mul(&self, other: &ZMat) -> Result<ZMat> {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = ZMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a.checked_mul(other[(k, j)]).ok_or(Error::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(v).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a != 0 {
                for (o, &b) in out.iter_mut().zip(self.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: Int) -> ZMat {
        ZMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &ZMat) -> ZMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ZMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn content(&self) -> Int {
        self.data.iter().fold(0, |g, &x| gcd(g, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn vstack(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ZMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `B G B^T` for a square `G`.
    pub fn congruence(&self, g: &ZMat) -> ZMat {
        self.mul(g).mul(&self.transpose())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<Int> {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                let Some(s) = (k + 1..n).find(|&s| a[(s, k)] != 0) else {
                    return Ok(0);
                };
                a.swap_rows(k, s);
                sign = -sign;
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let aik = a[(i, k)];
                for j in k + 1..n {
                    let x = piv
                        .checked_mul(a[(i, j)])
                        .zip(aik.checked_mul(a[(k, j)]))
                        .and_then(|(u, v)| u.checked_sub(v))
                        .ok_or(Error::Overflow)?;
                    a[(i, j)] = x / prev;
                }
                a[(i, k)] = 0;
            }
            prev = piv;
        }
        Ok(sign * a[(n - 1, n - 1)])
    }

    /// Leading principal minors `d_1, ..., d_n`.
    pub fn leading_minors(&self) -> Result<Vec<Int>> {
        (1..=self.rows)
            .map(|k| {
                let sub = ZMat::from_rows(&(0..k).map(|i| self.row(i)[..k].to_vec()).collect::<Vec<_>>());
                sub.det()
            })
            .collect()
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Ok(false);
        }
        Ok(self.leading_minors()?.iter().all(|&d| d > 0))
    }

    /// Row-style Hermite normal form of the row lattice: upper triangular in
    /// echelon shape, positive pivots, entries above a pivot reduced into
    /// `[0, pivot)`. Zero rows are dropped.
    ///
    /// When `modulus` is given, the caller guarantees that `modulus * Z^n` is
    /// contained in the row lattice; entries are then kept reduced modulo it.
    pub fn hnf(&self, modulus: Option<Int>) -> Result<ZMat> {
        let n = self.cols;
        let mut rows: Vec<Vec<Int>> = self.to_rows();
        if let Some(m) = modulus {
            assert!(m > 0, "HNF modulus must be positive");
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x = x.rem_euclid(m);
                }
            }
            for c in 0..n {
                let mut e = vec![0; n];
                e[c] = m;
                rows.push(e);
            }
        }
        let mut r = 0;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for j in 0..n {
            loop {
                // Row with smallest nonzero |entry| in column j among rows r..
                let mut best: Option<usize> = None;
                for (i, row) in rows.iter().enumerate().skip(r) {
                    if row[j] != 0 && best.is_none_or(|b| row[j].abs() < rows[b][j].abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                rows.swap(r, b);
                let mut done = true;
                let (head, tail) = rows.split_at_mut(r + 1);
                let prow = &head[r];
                let pv = prow[j];
                for row in tail.iter_mut() {
                    if row[j] != 0 {
                        let q = row[j].div_euclid(pv);
                        if q != 0 {
                            for (x, &y) in row[j..].iter_mut().zip(&prow[j..]) {
                                *x = y.checked_mul(q).and_then(|t| x.checked_sub(t)).ok_or(Error::Overflow)?;
                            }
                        }
                        if let Some(m) = modulus {
                            for x in row[j + 1..].iter_mut() {
                                *x = x.rem_euclid(m);
                            }
                        }
                        if row[j] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if r < rows.len() && rows[r][j] != 0 {
                if rows[r][j] < 0 {
                    for x in rows[r].iter_mut() {
                        *x = -*x;
                    }
                }
                if let Some(m) = modulus {
                    for x in rows[r][j + 1..].iter_mut() {
                        *x = x.rem_euclid(m);
                    }
                }
                pivots.push((r, j));
                r += 1;
            }
        }
        rows.truncate(r);
        // Reduce entries above each pivot.
        for &(pr, pc) in pivots.iter() {
            let pv = rows[pr][pc];
            for i in 0..pr {
                let q = rows[i][pc].div_euclid(pv);
                if q != 0 {
                    let (head, tail) = rows.split_at_mut(pr);
                    for (x, &y) in head[i][pc..].iter_mut().zip(&tail[0][pc..]) {
                        *x = y.checked_mul(q).and_then(|t| x.checked_sub(t)).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(if rows.is_empty() { ZMat::zeros(0, n) } else { ZMat::from_rows(&rows) })
    }

    /// Product of the diagonal of an upper-triangular square matrix.
    pub fn triangular_det(&self) -> Result<Int> {
        (0..self.rows).try_fold(1 as Int, |acc, i| acc.checked_mul(self[(i, i)]).ok_or(Error::Overflow))
    }

    /// Inverse of a nonsingular upper-triangular matrix as `(den, N)` with
    /// `self^{-1} = N / den`.
    pub fn triangular_inverse(&self) -> Result<(Int, ZMat)> {
        let n = self.rows;
        let den = self.triangular_det()?;
        if den == 0 {
            return Err(Error::Degenerate);
        }
        // Solve self * X = den * I column by column, back substitution.
        let mut x = ZMat::zeros(n, n);
        for c in 0..n {
            for i in (0..n).rev() {
                let mut s: Int = if i == c { den } else { 0 };
                for k in i + 1..n {
                    s = s
                        .checked_sub(self[(i, k)].checked_mul(x[(k, c)]).ok_or(Error::Overflow)?)
                        .ok_or(Error::Overflow)?;
                }
                debug_assert_eq!(s % self[(i, i)], 0);
                x[(i, c)] = s / self[(i, i)];
            }
        }
        let g = gcd(x.content(), den);
        let (den, x) = if g > 1 { (den / g, x.scale_div(g)) } else { (den, x) };
        Ok(if den < 0 { (-den, x.scale(-1)) } else { (den, x) })
    }

    /// Exact division of every entry.
    pub fn scale_div(&self, c: Int) -> ZMat {
        ZMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| {
                    debug_assert_eq!(x % c, 0);
                    x / c
                })
                .collect(),
        }
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<ZMat> {
        let (den, inv) = crate::qmat::inverse(self)?;
        if den != 1 {
            return Err(Error::VerificationFailed("matrix is not unimodular".into()));
        }
        Ok(inv)
    }
}

impl core::ops::Index<(usize, usize)> for ZMat {
    type Output = Int;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ZMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_det() {
        let m = ZMat::from_rows(&[[2, 1, 0], [1, 2, 1], [0, 1, 2]]);
        assert_eq!(m.det().unwrap(), 4);
        let s = ZMat::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(s.det().unwrap(), -1);
        let z = ZMat::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(z.det().unwrap(), 0);
    }

    #[test]
    fn hnf_shape_and_lattice() {
        let m = ZMat::from_rows(&[[4, 6, 2], [2, 4, 6], [6, 2, 4], [1, 1, 1]]);
        let h = m.hnf(None).unwrap();
        assert_eq!(h.nrows(), 3);
        for i in 0..3 {
            assert!(h[(i, i)] > 0);
            for k in 0..i {
                assert_eq!(h[(i, k)], 0);
                assert!(h[(k, i)] >= 0 && h[(k, i)] < h[(i, i)]);
            }
        }
        // Index of the lattice equals |det| of any square basis.
        let sq = ZMat::from_rows(&[[4, 6, 2], [2, 4, 6], [1, 1, 1]]);
        let hs = sq.hnf(None).unwrap();
        assert_eq!(hs.triangular_det().unwrap(), sq.det().unwrap().abs());
    }

    #[test]
    fn modular_hnf_agrees() {
        let m = ZMat::from_rows(&[[3, 5, 7], [2, 9, 4], [8, 1, 6]]);
        let d = m.det().unwrap().abs();
        assert_eq!(m.hnf(None).unwrap(), m.hnf(Some(d)).unwrap());
        assert_eq!(m.hnf(None).unwrap(), m.hnf(Some(3 * d)).unwrap());
    }

    #[test]
    fn triangular_inverse_roundtrip() {
        let m = ZMat::from_rows(&[[2, 1, 3], [0, 3, 1], [0, 0, 4]]);
        let (den, inv) = m.triangular_inverse().unwrap();
        assert_eq!(m.mul(&inv), ZMat::scalar(3, den));
    }
}
