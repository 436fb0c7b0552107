//! Isometry testing and automorphism groups by backtracking over short
//! vectors, preserving every trace form simultaneously.
//!
//! A map is a matrix whose rows are the images of the source basis in
//! target coordinates; it is an isometry when `g F_k(target) g^T = F_k(source)`
//! for every form.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::reduce::{reduce_gram, Reduced};
use crate::shortvec::for_each_short_vector;
use crate::zmat::{dot, ZMat};

/// Orders at or below this are cross-checked by counting every automorphism.
pub const AUT_ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryReport {
    pub isometric: bool,
    pub witness: Option<ZMat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    pub generators: Vec<ZMat>,
    pub order: u128,
    /// Whether the order was confirmed by exhaustive enumeration.
    pub enumerated: bool,
}

/// Forms in a reduced basis, ready to serve as the source of searches.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub forms: Vec<ZMat>,
    pub reduction: Reduced,
    pub reduced: Vec<ZMat>,
    /// Largest diagonal entry of the reduced first form.
    pub bound: Int,
    /// Own short vectors up to `bound`, kept when this is a frequent target.
    cands: Option<Arc<Candidates>>,
}

impl Prepared {
    pub fn new(forms: &[ZMat]) -> Result<Self> {
        if forms.is_empty() || !forms[0].is_positive_definite()? {
            return Err(Error::NotPositiveDefinite);
        }
        let reduction = reduce_gram(&forms[0]);
        let reduced: Vec<ZMat> = forms.iter().map(|f| reduction.transform.congruence(f)).collect();
        let bound = (0..reduced[0].nrows()).map(|i| reduced[0][(i, i)]).max().unwrap_or(0);
        Ok(Prepared { forms: forms.to_vec(), reduction, reduced, bound, cands: None })
    }

    /// Precomputes the candidate images used when this is the target of
    /// [`find_isometry_prepared`].
    pub fn cache_candidates(&mut self) -> Result<()> {
        if self.cands.is_none() {
            self.cands = Some(Arc::new(Candidates::new(&self.reduced, self.bound)?));
        }
        Ok(())
    }

    /// Candidates up to `bound`, from the cache when it covers the bound.
    fn candidates(&self, bound: Int) -> Result<Arc<Candidates>> {
        match &self.cands {
            Some(c) if self.bound >= bound => Ok(c.clone()),
            _ => Ok(Arc::new(Candidates::new(&self.reduced, bound)?)),
        }
    }

    pub fn dim(&self) -> usize {
        self.forms[0].nrows()
    }
}

/// Candidate images on the target side: all `v` with `v F_0 v^T <= bound`,
/// both signs, in reduced target coordinates.
#[derive(Debug)]
struct Candidates {
    vecs: Vec<Vec<Int>>,
    /// `vf[c][k] = v_c * F_k`.
    vf: Vec<Vec<Vec<Int>>>,
    /// `norms[c][k] = v_c F_k v_c^T`.
    norms: Vec<Vec<Int>>,
    /// `pairs[(y * len + c) * forms + k] = v_y F_k v_c^T`, when small enough.
    pairs: Option<Vec<Int>>,
}

/// Largest candidate count for which the pair table is built.
const PAIR_TABLE_LIMIT: usize = 1500;

impl Candidates {
    fn new(target: &[ZMat], bound: Int) -> Result<Self> {
        let mut vecs = Vec::new();
        for_each_short_vector(&target[0], bound, |x, _| {
            vecs.push(x.to_vec());
            vecs.push(x.iter().map(|c| -c).collect());
        })?;
        vecs.sort();
        let vf: Vec<Vec<Vec<Int>>> = vecs.iter().map(|v| target.iter().map(|f| f.vec_mul(v)).collect()).collect();
        let norms = vf.iter().zip(&vecs).map(|(fs, v)| fs.iter().map(|fv| dot(fv, v)).collect()).collect();
        let pairs = (vecs.len() <= PAIR_TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(vecs.len() * vecs.len() * target.len());
            for fy in &vf {
                for c in &vecs {
                    for f in fy {
                        t.push(dot(f, c));
                    }
                }
            }
            t
        });
        Ok(Candidates { vecs, vf, norms, pairs })
    }
}

struct Search<'a> {
    src: &'a [ZMat],
    cands: &'a Candidates,
    m: usize,
}

impl Search<'_> {
    fn initial_lists(&self) -> Vec<Vec<u32>> {
        (0..self.m)
            .map(|i| {
                (0..self.cands.vecs.len() as u32)
                    .filter(|&c| self.src.iter().enumerate().all(|(k, a)| self.cands.norms[c as usize][k] == a[(i, i)]))
                    .collect()
            })
            .collect()
    }

    /// Keeps candidates `y` for position `q` compatible with `c` at `pos`.
    fn filter(&self, list: &[u32], q: usize, pos: usize, c: u32) -> Vec<u32> {
        if let Some(t) = &self.cands.pairs {
            let n = self.cands.vecs.len();
            let nf = self.src.len();
            let (c, q0) = (c as usize, q);
            return list
                .iter()
                .copied()
                .filter(|&y| {
                    let y = y as usize;
                    y != c
                        && self.src.iter().enumerate().all(|(k, a)| {
                            t[(y * n + c) * nf + k] == a[(q0, pos)] && t[(c * n + y) * nf + k] == a[(pos, q0)]
                        })
                })
                .collect();
        }
        let cv = &self.cands.vecs[c as usize];
        let cf = &self.cands.vf[c as usize];
        list.iter()
            .copied()
            .filter(|&y| {
                y != c
                    && self.src.iter().enumerate().all(|(k, a)| {
                        dot(&self.cands.vf[y as usize][k], cv) == a[(q, pos)]
                            && dot(&cf[k], &self.cands.vecs[y as usize]) == a[(pos, q)]
                    })
            })
            .collect()
    }

    /// Depth-first search. `lists[q]` holds the live candidates of every
    /// unassigned position; `fixed_order` forces positions in index order.
    fn dfs<F: FnMut(&[u32]) -> ControlFlow<()>>(
        &self,
        assign: &mut Vec<Option<u32>>,
        lists: &[Vec<u32>],
        fixed_order: bool,
        visit: &mut F,
    ) -> ControlFlow<()> {
        let open: Vec<usize> = (0..self.m).filter(|&q| assign[q].is_none()).collect();
        if open.is_empty() {
            let sol: Vec<u32> = assign.iter().map(|a| a.unwrap()).collect();
            return visit(&sol);
        }
        let pos = if fixed_order { open[0] } else { *open.iter().min_by_key(|&&q| (lists[q].len(), q)).unwrap() };
        for &c in &lists[pos] {
            let mut next: Vec<Vec<u32>> = vec![Vec::new(); self.m];
            let mut dead = false;
            for &q in &open {
                if q == pos {
                    continue;
                }
                next[q] = self.filter(&lists[q], q, pos, c);
                if next[q].is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            assign[pos] = Some(c);
            let r = self.dfs(assign, &next, fixed_order, visit);
            assign[pos] = None;
            r?;
        }
        ControlFlow::Continue(())
    }

    fn matrix(&self, sol: &[u32]) -> ZMat {
        let rows: Vec<Vec<Int>> = sol.iter().map(|&c| self.cands.vecs[c as usize].clone()).collect();
        ZMat::from_rows(&rows)
    }
}

fn preserves(g: &ZMat, src: &[ZMat], dst: &[ZMat]) -> bool {
    src.len() == dst.len()
        && src
            .iter()
            .zip(dst)
            .all(|(a, b)| g.checked_mul(b).and_then(|x| x.checked_mul(&g.transpose())).ok().as_ref() == Some(a))
}

/// An isometry from the source forms onto the target forms, if one exists.
pub fn find_isometry(src: &Prepared, target: &[ZMat]) -> Result<Option<ZMat>> {
    let m = src.dim();
    if target.len() != src.forms.len() || target.iter().any(|f| f.nrows() != m) {
        return Ok(None);
    }
    find_isometry_prepared(src, &Prepared::new(target)?)
}

/// As [`find_isometry`], with both sides already reduced.
pub fn find_isometry_prepared(src: &Prepared, dst: &Prepared) -> Result<Option<ZMat>> {
    let m = src.dim();
    if dst.forms.len() != src.forms.len() || dst.dim() != m {
        return Ok(None);
    }
    if src.forms[0].det()? != dst.forms[0].det()? {
        return Ok(None);
    }
    let cands = dst.candidates(src.bound)?;
    let search = Search { src: &src.reduced, cands: &cands, m };
    let lists = search.initial_lists();
    if lists.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut found = None;
    let mut assign = vec![None; m];
    let _ = search.dfs(&mut assign, &lists, false, &mut |sol| {
        let y = search.matrix(sol);
        if y.det().map(|d| d.abs() == 1).unwrap_or(false) {
            found = Some(y);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let Some(y) = found else { return Ok(None) };
    // Source basis -> reduced source -> reduced target -> target basis.
    let tinv = src.reduction.inverse.clone();
    let g = tinv.checked_mul(&y)?.checked_mul(&dst.reduction.transform)?;
    if !preserves(&g, &src.forms, &dst.forms) {
        return Err(Error::VerificationFailed("isometry witness does not preserve the forms".into()));
    }
    Ok(Some(g))
}

/// Checks a witness against precomputed forms and `w`-matrices.
pub fn verify_with(g: &ZMat, src: &[ZMat], w_src: &ZMat, dst: &[ZMat], w_dst: &ZMat) -> bool {
    g.det().map(|d| d.abs() == 1).unwrap_or(false)
        && preserves(g, src, dst)
        && w_src.checked_mul(g).ok() == g.checked_mul(w_dst).ok()
}

/// `g` is unimodular, preserves every trace form and commutes with `w`.
pub fn verify_isometry(g: &ZMat, l: &Lattice, p: &Lattice) -> bool {
    let m = l.zrank();
    if g.nrows() != m || g.ncols() != m || p.zrank() != m {
        return false;
    }
    if !g.det().map(|d| d.abs() == 1).unwrap_or(false) {
        return false;
    }
    let (Ok(fl), Ok(fp)) = (l.integral_trace_forms(), p.integral_trace_forms()) else {
        return false;
    };
    if !preserves(g, &fl, &fp) {
        return false;
    }
    match (l.omega_matrix(), p.omega_matrix()) {
        (Ok(wl), Ok(wp)) => {
            let (Some(wl), Some(wp)) = (wl.to_int(), wp.to_int()) else { return false };
            wl.checked_mul(g).ok() == g.checked_mul(&wp).ok()
        }
        _ => false,
    }
}

pub fn is_isometric(l: &Lattice, p: &Lattice) -> Result<IsometryReport> {
    if l.ring() != p.ring() {
        return Err(Error::RingMismatch);
    }
    let fl = l.integral_trace_forms()?;
    let fp = p.integral_trace_forms()?;
    let witness = find_isometry(&Prepared::new(&fl)?, &fp)?;
    if let Some(g) = &witness {
        if !verify_isometry(g, l, p) {
            return Err(Error::VerificationFailed("isometry witness failed verification".into()));
        }
    }
    Ok(IsometryReport { isometric: witness.is_some(), witness })
}

/// Automorphism group of a family of forms, by a stabilizer chain along the
/// reduced basis.
pub fn automorphisms_forms(forms: &[ZMat]) -> Result<AutGroup> {
    let prep = Prepared::new(forms)?;
    let m = prep.dim();
    let cands = prep.candidates(prep.bound)?;
    let search = Search { src: &prep.reduced, cands: &cands, m };
    let index_of = |v: &[Int]| cands.vecs.binary_search_by(|w| w.as_slice().cmp(v)).ok().map(|i| i as u32);
    let ident: Vec<u32> = (0..m)
        .map(|i| {
            let mut e = vec![0; m];
            e[i] = 1;
            index_of(&e).expect("basis vector among candidates")
        })
        .collect();
    // Generators in reduced coordinates, tagged by the level they were found at.
    let mut gens: Vec<(usize, ZMat)> = Vec::new();
    let mut order: u128 = 1;
    let base_lists = search.initial_lists();
    for level in (0..m).rev() {
        // Candidates for position `level` with positions < level fixed.
        let mut assign: Vec<Option<u32>> = vec![None; m];
        let mut lists = base_lists.clone();
        let mut ok = true;
        for (s, &e) in ident.iter().enumerate().take(level) {
            assign[s] = Some(e);
            for q in 0..m {
                if assign[q].is_none() {
                    lists[q] = search.filter(&lists[q], q, s, e);
                    ok &= !lists[q].is_empty();
                }
            }
        }
        debug_assert!(ok, "identity extends");
        let target = ident[level];
        let level_gens = |gens: &[(usize, ZMat)]| -> Vec<ZMat> {
            gens.iter().filter(|(l, _)| *l >= level).map(|(_, g)| g.clone()).collect()
        };
        let mut orbit = orbit_of(&cands.vecs[target as usize], &level_gens(&gens));
        let mut excluded: BTreeSet<Vec<Int>> = BTreeSet::new();
        for &c in &lists[level] {
            let v = &cands.vecs[c as usize];
            if orbit.contains(v) || excluded.contains(v) {
                continue;
            }
            let mut a2 = assign.clone();
            let mut l2: Vec<Vec<u32>> = vec![Vec::new(); m];
            let mut dead = false;
            for q in level + 1..m {
                l2[q] = search.filter(&lists[q], q, level, c);
                dead |= l2[q].is_empty();
            }
            let mut found = None;
            if !dead {
                a2[level] = Some(c);
                let _ = search.dfs(&mut a2, &l2, false, &mut |sol| {
                    let y = search.matrix(sol);
                    if y.det().map(|d| d.abs() == 1).unwrap_or(false) {
                        found = Some(y);
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                });
            }
            match found {
                Some(g) => {
                    gens.push((level, g));
                    orbit = orbit_of(&cands.vecs[target as usize], &level_gens(&gens));
                }
                None => {
                    for w in orbit_of(v, &level_gens(&gens)) {
                        excluded.insert(w);
                    }
                }
            }
        }
        order = order.checked_mul(orbit.len() as u128).ok_or(Error::Overflow)?;
    }
    let tinv = prep.reduction.inverse.clone();
    let t = &prep.reduction.transform;
    let generators: Vec<ZMat> =
        gens.into_iter().map(|(_, g)| tinv.checked_mul(&g).and_then(|x| x.checked_mul(t))).collect::<Result<_>>()?;
    for g in &generators {
        if !preserves(g, forms, forms) {
            return Err(Error::VerificationFailed("automorphism generator".into()));
        }
    }
    let mut enumerated = false;
    if order <= AUT_ENUMERATION_LIMIT {
        let count = count_automorphisms(&search)?;
        if count != order {
            return Err(Error::VerificationFailed("automorphism count disagrees with stabilizer chain".into()));
        }
        enumerated = true;
    }
    Ok(AutGroup { generators, order, enumerated })
}

fn count_automorphisms(search: &Search<'_>) -> Result<u128> {
    let lists = search.initial_lists();
    let mut count: u128 = 0;
    let mut assign = vec![None; search.m];
    let _ = search.dfs(&mut assign, &lists, false, &mut |sol| {
        if search.matrix(sol).det().map(|d| d.abs() == 1).unwrap_or(false) {
            count += 1;
        }
        if count > AUT_ENUMERATION_LIMIT {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(count)
}

/// Orbit of a row vector under right multiplication by the generators.
fn orbit_of(v: &[Int], gens: &[ZMat]) -> BTreeSet<Vec<Int>> {
    let mut seen = BTreeSet::new();
    seen.insert(v.to_vec());
    let mut stack = vec![v.to_vec()];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.vec_mul(&x);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

pub fn automorphisms(l: &Lattice) -> Result<AutGroup> {
    let forms = l.integral_trace_forms()?;
    let aut = automorphisms_forms(&forms)?;
    for g in &aut.generators {
        if !verify_isometry(g, l, l) {
            return Err(Error::VerificationFailed("automorphism does not commute with w".into()));
        }
    }
    Ok(aut)
}
