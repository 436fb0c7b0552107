//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the enumeration, reduction or search code under test.
#![allow(dead_code, clippy::needless_range_loop)]

pub mod neighbors;

use kneser_core::zmat::ZMat;
use rand::rngs::StdRng;
use rand::Rng;

pub type Gram = Vec<Vec<i128>>;

pub fn to_zmat(g: &Gram) -> ZMat {
    ZMat::from_rows(g)
}

pub fn quad(g: &Gram, x: &[i128]) -> i128 {
    let n = x.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * g[i][j] * x[j];
        }
    }
    s
}

pub fn bilinear(g: &Gram, x: &[i128], y: &[i128]) -> i128 {
    let n = x.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

/// Determinant by cofactor expansion along the first row.
pub fn det(g: &Gram) -> i128 {
    let n = g.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return g[0][0];
    }
    let mut s = 0;
    for j in 0..n {
        let minor: Gram =
            g[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        s += sign * g[0][j] * det(&minor);
    }
    s
}

pub fn is_pd(g: &Gram) -> bool {
    (1..=g.len()).all(|k| det(&g[..k].iter().map(|r| r[..k].to_vec()).collect()) > 0)
}

/// `|x_i| <= sqrt(bound * (G^-1)_ii)` for every `x` with `x G x^T <= bound`.
pub fn box_radius(g: &Gram, bound: i128) -> Vec<i128> {
    let n = g.len();
    let d = det(g);
    (0..n)
        .map(|i| {
            let minor: Gram =
                (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c]).collect()).collect();
            let cof = det(&minor);
            // Largest k with k^2 * d <= bound * cof.
            let mut k = 0;
            while (k + 1) * (k + 1) * d <= bound * cof {
                k += 1;
            }
            k
        })
        .collect()
}

/// Every `x` in the box of `box_radius` with `x G x^T <= bound`.
pub fn box_vectors(g: &Gram, bound: i128) -> Vec<(Vec<i128>, i128)> {
    let r = box_radius(g, bound);
    let n = g.len();
    let mut out = Vec::new();
    let mut x: Vec<i128> = r.iter().map(|&k| -k).collect();
    loop {
        let q = quad(g, &x);
        if q <= bound {
            out.push((x.clone(), q));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < r[i] {
                x[i] += 1;
                break;
            }
            x[i] = -r[i];
            i += 1;
        }
    }
}

/// Rows are images of the basis of `a` in the basis of `b`.
pub fn brute_isometries(a: &Gram, b: &Gram, stop_at_first: bool) -> Vec<Gram> {
    let n = a.len();
    let cands: Vec<Vec<Vec<i128>>> = (0..n)
        .map(|i| box_vectors(b, a[i][i]).into_iter().filter(|(_, q)| *q == a[i][i]).map(|(x, _)| x).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if cands.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let rows: Gram = (0..n).map(|i| cands[i][idx[i]].clone()).collect();
        if (0..n).all(|i| (0..n).all(|j| bilinear(b, &rows[i], &rows[j]) == a[i][j])) {
            out.push(rows);
            if stop_at_first {
                return out;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            idx[i] += 1;
            if idx[i] < cands[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Random positive definite symmetric matrix with `|entries| <= max`.
pub fn random_form(rng: &mut StdRng, n: usize, max: i128) -> Gram {
    loop {
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            g[i][i] = rng.gen_range(1..=max);
            for j in 0..i {
                let v = rng.gen_range(-max..=max);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if is_pd(&g) {
            return g;
        }
    }
}

/// Random unimodular matrix from signed permutations and elementary moves.
pub fn random_unimodular(rng: &mut StdRng, n: usize, moves: usize) -> Gram {
    let mut u: Gram = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    for _ in 0..moves {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j {
                    let c = rng.gen_range(-2..=2);
                    for k in 0..n {
                        u[i][k] += c * u[j][k];
                    }
                }
            }
            1 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                u.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for k in 0..n {
                    u[i][k] = -u[i][k];
                }
            }
        }
    }
    u
}

pub fn congruence(u: &Gram, g: &Gram) -> Gram {
    let n = g.len();
    (0..n).map(|i| (0..n).map(|j| bilinear(g, &u[i], &u[j])).collect()).collect()
}

pub fn max_abs(g: &Gram) -> i128 {
    g.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
}

/// Cartan matrix of E8.
pub fn e8() -> Gram {
    vec![
        vec![2, -1, 0, 0, 0, 0, 0, 0],
        vec![-1, 2, -1, 0, 0, 0, 0, 0],
        vec![0, -1, 2, -1, 0, 0, 0, -1],
        vec![0, 0, -1, 2, -1, 0, 0, 0],
        vec![0, 0, 0, -1, 2, -1, 0, 0],
        vec![0, 0, 0, 0, -1, 2, -1, 0],
        vec![0, 0, 0, 0, 0, -1, 2, 0],
        vec![0, 0, -1, 0, 0, 0, 0, 2],
    ]
}

/// Theta coefficients of E8 up to `cutoff`, counting `y in Z^8` with all
/// coordinates of one parity, `sum y = 0 mod 4` and `|y|^2 = 4k` (the lattice
/// `D8+` scaled by 2) inside the box `|y_i| <= 2 sqrt(cutoff)`.
pub fn e8_theta_box(cutoff: usize) -> Vec<u64> {
    let mut r = 0i64;
    while (r + 1) * (r + 1) <= 4 * cutoff as i64 {
        r += 1;
    }
    let mut counts = vec![0u64; cutoff + 1];
    let mut y = [-r; 8];
    loop {
        let parity = y[0].rem_euclid(2);
        if y.iter().all(|v| v.rem_euclid(2) == parity) && y.iter().sum::<i64>().rem_euclid(4) == 0 {
            let n: i64 = y.iter().map(|v| v * v).sum();
            if n % 4 == 0 && (n / 4) as usize <= cutoff {
                counts[(n / 4) as usize] += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == 8 {
                return counts;
            }
            if y[i] < r {
                y[i] += 1;
                break;
            }
            y[i] = -r;
            i += 1;
        }
    }
}

/// `|Aut(E8)|` by orbit-stabilizer along the simple roots: at each level,
/// counts the roots that can replace the next simple root while fixing the
/// earlier ones and still extend to a full assignment of the root basis.
pub fn e8_aut_by_roots() -> u128 {
    let g = e8();
    let roots: Vec<Vec<i128>> = box_vectors(&g, 2).into_iter().filter(|(_, q)| *q == 2).map(|(x, _)| x).collect();
    assert_eq!(roots.len(), 240);
    let basis: Vec<Vec<i128>> = (0..8).map(|i| (0..8).map(|j| (i == j) as i128).collect()).collect();
    let mut order: u128 = 1;
    for level in 0..8 {
        let mut prefix: Vec<Vec<i128>> = basis[..level].to_vec();
        let mut orbit = 0u128;
        for r in &roots {
            if (0..level).all(|j| bilinear(&g, r, &prefix[j]) == g[level][j]) {
                prefix.push(r.clone());
                if extends(&g, &roots, &mut prefix) {
                    orbit += 1;
                }
                prefix.pop();
            }
        }
        order *= orbit;
    }
    order
}

fn extends(g: &Gram, roots: &[Vec<i128>], prefix: &mut Vec<Vec<i128>>) -> bool {
    let k = prefix.len();
    if k == g.len() {
        return true;
    }
    for r in roots {
        if (0..k).all(|j| bilinear(g, r, &prefix[j]) == g[k][j]) {
            prefix.push(r.clone());
            let ok = extends(g, roots, prefix);
            prefix.pop();
            if ok {
                return true;
            }
        }
    }
    false
}
