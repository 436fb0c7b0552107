//! Basis reduction of positive definite integral Gram matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{round_div, Int};
use crate::error::{Error, Result};
use crate::zmat::ZMat;

/// A reduced Gram matrix together with the basis change producing it:
/// `gram = transform * original * transform^T`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub gram: ZMat,
    pub transform: ZMat,
    /// `transform^{-1}`, which is integral.
    pub inverse: ZMat,
}

/// LLL-reduces (`delta = 3/4`) in exact integer arithmetic; if intermediate
/// values overflow, falls back to pairwise size reduction, which is always
/// safe.
pub fn reduce_gram(g: &ZMat) -> Reduced {
    lll(g).unwrap_or_else(|_| size_reduce(g))
}

struct State {
    g: ZMat,
    h: ZMat,
    hinv: ZMat,
}

impl State {
    fn new(g: &ZMat) -> Self {
        let n = g.nrows();
        State { g: g.clone(), h: ZMat::identity(n), hinv: ZMat::identity(n) }
    }

    fn finish(self) -> Reduced {
        Reduced { gram: self.g, transform: self.h, inverse: self.hinv }
    }

    /// `b_k -= q b_l`; leaves the state untouched on overflow.
    fn sub_row(&mut self, k: usize, l: usize, q: Int) -> Result<()> {
        let n = self.g.nrows();
        let ms = |a: Int, b: Int| q.checked_mul(b).and_then(|x| a.checked_sub(x)).ok_or(Error::Overflow);
        let ma = |a: Int, b: Int| q.checked_mul(b).and_then(|x| a.checked_add(x)).ok_or(Error::Overflow);
        let h: Vec<Int> = (0..n).map(|j| ms(self.h[(k, j)], self.h[(l, j)])).collect::<Result<_>>()?;
        let hinv: Vec<Int> = (0..n).map(|i| ma(self.hinv[(i, l)], self.hinv[(i, k)])).collect::<Result<_>>()?;
        // Row then column update of the Gram matrix.
        let row: Vec<Int> = (0..n).map(|j| ms(self.g[(k, j)], self.g[(l, j)])).collect::<Result<_>>()?;
        let gkk = ms(row[k], row[l])?;
        for j in 0..n {
            self.h[(k, j)] = h[j];
            self.hinv[(j, l)] = hinv[j];
            self.g[(k, j)] = row[j];
            self.g[(j, k)] = row[j];
        }
        self.g[(k, k)] = gkk;
        Ok(())
    }

    fn swap(&mut self, a: usize, b: usize) {
        let n = self.g.nrows();
        self.h.swap_rows(a, b);
        self.g.swap_rows(a, b);
        for i in 0..n {
            let t = self.g[(i, a)];
            self.g[(i, a)] = self.g[(i, b)];
            self.g[(i, b)] = t;
            let t = self.hinv[(i, a)];
            self.hinv[(i, a)] = self.hinv[(i, b)];
            self.hinv[(i, b)] = t;
        }
    }
}

fn mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: Int, b: Int) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

fn add(a: Int, b: Int) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// Integral LLL on a Gram matrix with `d_i` the leading Gram minors and
/// `lam[k][j] = d_{j} mu_{kj}` kept integral.
pub fn lll(g0: &ZMat) -> Result<Reduced> {
    let n = g0.nrows();
    let mut st = State::new(g0);
    if n <= 1 {
        return Ok(st.finish());
    }
    // d[i + 1] = d_i in 1-based notation; d[0] = 1.
    let mut d: Vec<Int> = vec![0; n + 1];
    let mut lam = vec![vec![0 as Int; n]; n];
    d[0] = 1;
    d[1] = st.g[(0, 0)];
    let mut k = 1;
    let mut kmax = 0;
    let redi = |st: &mut State, lam: &mut Vec<Vec<Int>>, d: &[Int], k: usize, l: usize| -> Result<()> {
        if mul(2, lam[k][l])?.abs() > d[l + 1] {
            let q = round_div(lam[k][l], d[l + 1]);
            st.sub_row(k, l, q)?;
            lam[k][l] = sub(lam[k][l], mul(q, d[l + 1])?)?;
            for i in 0..l {
                lam[k][i] = sub(lam[k][i], mul(q, lam[l][i])?)?;
            }
        }
        Ok(())
    };
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = st.g[(k, j)];
                for i in 0..j {
                    u = sub(mul(d[i + 1], u)?, mul(lam[k][i], lam[j][i])?)? / d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u <= 0 {
                        return Err(Error::NotPositiveDefinite);
                    }
                    d[k + 1] = u;
                }
            }
        }
        loop {
            redi(&mut st, &mut lam, &d, k, k - 1)?;
            let lhs = mul(mul(4, d[k + 1])?, d[k - 1])?;
            let rhs = sub(mul(3, mul(d[k], d[k])?)?, mul(4, mul(lam[k][k - 1], lam[k][k - 1])?)?)?;
            if lhs < rhs {
                // SWAPI(k)
                st.swap(k, k - 1);
                for j in 0..k - 1 {
                    let t = lam[k][j];
                    lam[k][j] = lam[k - 1][j];
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1];
                let b = add(mul(d[k - 1], d[k + 1])?, mul(l, l)?)? / d[k];
                for i in k + 1..=kmax {
                    let t = lam[i][k];
                    lam[i][k] = sub(mul(d[k + 1], lam[i][k - 1])?, mul(l, t)?)? / d[k];
                    lam[i][k - 1] = add(mul(b, t)?, mul(l, lam[i][k])?)? / d[k + 1];
                }
                d[k] = b;
                if k > 1 {
                    k -= 1;
                }
            } else {
                break;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            redi(&mut st, &mut lam, &d, k, l)?;
        }
        k += 1;
    }
    Ok(st.finish())
}

/// Repeated pairwise size reduction (`|2 g_ij| <= g_jj`), sorted by norm.
pub fn size_reduce(g0: &ZMat) -> Reduced {
    let n = g0.nrows();
    let mut st = State::new(g0);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let gjj = st.g[(j, j)];
                let gij = st.g[(i, j)];
                if 2 * gij.abs() > gjj {
                    let q = round_div(gij, gjj);
                    if q != 0 && st.sub_row(i, j, q).is_ok() {
                        changed = true;
                    }
                }
            }
        }
    }
    st.finish()
}
