//! Small exact integer helpers shared by every module.

use crate::error::{Error, Result};

/// Machine integer used for all exact lattice arithmetic.
pub type Int = i128;

/// Exact rationals over [`Int`].
pub type Rat = num_rational::Ratio<Int>;

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: Int, b: Int) -> Int {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1, 0);
    let (mut old_t, mut t) = (0, 1);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Least nonnegative residue.
#[inline]
pub fn modp(a: Int, m: Int) -> Int {
    a.rem_euclid(m)
}

pub fn inv_mod(a: Int, m: Int) -> Option<Int> {
    let (g, x, _) = ext_gcd(modp(a, m), m);
    (g == 1).then(|| modp(x, m))
}

pub fn pow_mod(mut base: Int, mut exp: u64, m: Int) -> Int {
    let mut acc = 1 % m;
    base = modp(base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: Int) -> Int {
    assert!(n >= 0, "isqrt of negative number");
    num_integer::Roots::sqrt(&n)
}

pub fn is_square(n: Int) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

pub fn is_prime(n: Int) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factor(mut n: Int) -> alloc::vec::Vec<(Int, u32)> {
    let mut out = alloc::vec::Vec::new();
    n = n.abs();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: Int) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: Int, p: Int) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: Int, p: Int) -> i32 {
    let a = modp(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d | p)` for a prime `p` (including `p = 2`).
pub fn kronecker_prime(d: Int, p: Int) -> i32 {
    if p == 2 {
        if d % 2 == 0 {
            0
        } else if matches!(modp(d, 8), 1 | 7) {
            1
        } else {
            -1
        }
    } else {
        legendre(d, p)
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: Int, p: Int) -> Option<Int> {
    let a = modp(a, p);
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q as u64, p);
    let mut t = pow_mod(a, q as u64, p);
    let mut r = pow_mod(a, ((q + 1) / 2) as u64, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Nearest integer to `num / den` (`den > 0`), i.e. `floor(num/den + 1/2)`.
pub fn round_div(num: Int, den: Int) -> Int {
    debug_assert!(den > 0);
    (2 * num + den).div_euclid(2 * den)
}

#[inline]
pub fn checked_mul_add(acc: Int, a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).and_then(|x| x.checked_add(acc)).ok_or(Error::Overflow)
}

pub fn rat_floor(r: &Rat) -> Int {
    r.numer().div_euclid(*r.denom())
}
