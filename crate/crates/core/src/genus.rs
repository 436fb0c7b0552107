//! Genus enumeration by breadth-first traversal of the neighbor graph.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{is_squarefree, Int};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::isometry::{automorphisms, find_isometry_prepared, verify_with, Prepared};
use crate::lattice::{discriminant_from_trace_form, Lattice};
use crate::neighbor::NeighborContext;
use crate::ring::PrimeIdeal;
use crate::shortvec::{default_cutoff, fingerprint_of_reduced, Fingerprint};
use crate::zmat::ZMat;

/// A lattice with everything needed to classify against it.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub lattice: Lattice,
    pub prepared: Prepared,
    pub omega: ZMat,
    pub fingerprint: Fingerprint,
}

impl ClassEntry {
    /// Entry for a class representative, prepared as a lookup target.
    pub fn new(lattice: Lattice, cutoff: Int) -> Result<Self> {
        let forms = lattice.integral_trace_forms()?;
        let mut e = Self::with_forms(lattice, forms, cutoff)?;
        e.prepared.cache_candidates()?;
        Ok(e)
    }

    /// `forms` must be the integral trace forms of `lattice`.
    pub fn with_forms(lattice: Lattice, forms: Vec<ZMat>, cutoff: Int) -> Result<Self> {
        let disc = discriminant_from_trace_form(&lattice, &forms[0])?;
        let prepared = Prepared::new(&forms)?;
        let fingerprint = fingerprint_of_reduced(&prepared.reduced[0], disc, cutoff)?;
        let omega = lattice.omega_matrix()?.to_int().ok_or(Error::NotRingModule)?;
        Ok(ClassEntry { lattice, prepared, omega, fingerprint })
    }
}

/// Class representatives with fingerprint filtering.
#[derive(Clone, Debug)]
pub struct Registry {
    pub entries: Vec<ClassEntry>,
    pub cutoff: Int,
}

impl Registry {
    pub fn new(cutoff: Int) -> Self {
        Registry { entries: Vec::new(), cutoff }
    }

    pub fn from_record(record: &GenusRecord) -> Result<Self> {
        let mut reg = Registry::new(record.theta_cutoff);
        for l in &record.representatives {
            reg.push(ClassEntry::new(l.clone(), record.theta_cutoff)?)?;
        }
        Ok(reg)
    }

    pub fn push(&mut self, mut entry: ClassEntry) -> Result<()> {
        entry.prepared.cache_candidates()?;
        self.entries.push(entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first entry in `range` isometric to `cand`, with a verified
    /// witness mapping `cand` onto it.
    pub fn lookup(&self, cand: &ClassEntry, range: Range<usize>) -> Result<Option<(usize, ZMat)>> {
        for j in range {
            let rep = &self.entries[j];
            if rep.fingerprint.key() != cand.fingerprint.key() {
                continue;
            }
            if let Some(g) = find_isometry_prepared(&cand.prepared, &rep.prepared)? {
                if !verify_with(&g, &cand.prepared.forms, &cand.omega, &rep.prepared.forms, &rep.omega) {
                    return Err(Error::VerificationFailed("classification witness".into()));
                }
                return Ok(Some((j, g)));
            }
        }
        Ok(None)
    }

    /// Class index of `l` and a witness `g` mapping `l` onto it.
    pub fn classify(&self, l: &Lattice) -> Result<(usize, ZMat)> {
        let cand = ClassEntry::new(l.clone(), self.cutoff)?;
        self.lookup(&cand, 0..self.len())?.ok_or(Error::NotInRegistry)
    }
}

/// One edge of the neighbor graph: subspace number `subspace` (in
/// enumeration order) at `primes[prime]` leads from `parent` to `child`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraversalStep {
    pub parent: usize,
    pub prime: usize,
    pub subspace: usize,
    pub child: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusRecord {
    pub representatives: Vec<Lattice>,
    pub aut_orders: Vec<u128>,
    pub fingerprints: Vec<Fingerprint>,
    pub traversal_log: Vec<TraversalStep>,
    pub primes: Vec<PrimeIdeal>,
    pub theta_cutoff: Int,
}

impl GenusRecord {
    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GenusOptions {
    /// Accept Hermitian lattices of even rank without checking niceness at
    /// ramified primes.
    pub force: bool,
    pub theta_cutoff: Option<Int>,
}

/// Refuses inputs for which neighbor traversal is not known to reach the
/// whole genus.
pub fn check_hypotheses(l: &Lattice, primes: &[PrimeIdeal], force: bool) -> Result<()> {
    let ring = *l.ring();
    let n = l.ambient().dim();
    let disc = l.discriminant()?;
    let refuse = |msg: alloc::string::String| Err(Error::HypothesesUnverifiable(msg));
    if primes.is_empty() {
        return refuse("no traversal primes".into());
    }
    if ring.is_integers() {
        if n < 3 {
            return refuse(format!("rank {n} < 3"));
        }
        if !is_squarefree(disc) {
            return refuse(format!("discriminant {disc} is not squarefree"));
        }
    } else {
        if n < 2 {
            return refuse(format!("rank {n} < 2"));
        }
        if n.is_multiple_of(2) && !force {
            return refuse("even rank: niceness at ramified primes is unchecked".into());
        }
        if !ring.class_group_is_two_torsion() {
            return refuse(format!("class group of discriminant {} is not 2-torsion", ring.disc()));
        }
    }
    for pr in primes {
        if disc % pr.p == 0 {
            return refuse(format!("prime {} divides the discriminant", pr.p));
        }
        if ring.is_integers() {
            if pr.p == 2 {
                return Err(Error::DyadicUnsupported);
            }
        } else {
            if !pr.is_split() {
                return refuse(format!("prime {} is not split", pr.p));
            }
            if pr.generator.is_none() {
                return Err(Error::NonPrincipalTraversalPrime(pr.p as i64));
            }
        }
    }
    Ok(())
}

/// Enumerates the classes in the genus of `l` by P-neighbor steps.
pub fn genus_enumerate<E: Executor>(
    l: &Lattice,
    primes: &[PrimeIdeal],
    opts: GenusOptions,
    exec: &E,
) -> Result<GenusRecord> {
    check_hypotheses(l, primes, opts.force)?;
    let cutoff = match opts.theta_cutoff {
        Some(c) => c,
        None => default_cutoff(l)?,
    };
    let mut reg = Registry::new(cutoff);
    reg.push(ClassEntry::new(l.clone(), cutoff)?)?;
    let mut log = Vec::new();
    let mut i = 0;
    while i < reg.len() {
        for (pi, pr) in primes.iter().enumerate() {
            let ctx = NeighborContext::new(&reg.entries[i].lattice, pr)?;
            let subs = ctx.subspaces(1)?;
            let known = reg.len();
            let results = {
                let reg = &reg;
                exec.map(&subs, |x| -> Result<(ClassEntry, Option<usize>)> {
                    let nb = ctx.neighbor(x)?;
                    let cand = ClassEntry::with_forms(nb.lattice, nb.forms, cutoff)?;
                    let hit = reg.lookup(&cand, 0..known)?.map(|(j, _)| j);
                    Ok((cand, hit))
                })
            };
            for (s, r) in results.into_iter().enumerate() {
                let (cand, hit) = r?;
                let child = match hit {
                    Some(j) => j,
                    None => match reg.lookup(&cand, known..reg.len())? {
                        Some((j, _)) => j,
                        None => {
                            reg.push(cand)?;
                            reg.len() - 1
                        }
                    },
                };
                log.push(TraversalStep { parent: i, prime: pi, subspace: s, child });
            }
        }
        i += 1;
    }
    let auts: Vec<u128> =
        exec.map(&reg.entries, |e| automorphisms(&e.lattice).map(|a| a.order)).into_iter().collect::<Result<_>>()?;
    verify_distinct(&reg)?;
    let mut fingerprints: Vec<Fingerprint> = reg.entries.iter().map(|e| e.fingerprint.clone()).collect();
    for (f, a) in fingerprints.iter_mut().zip(&auts) {
        f.aut_order = Some(*a);
    }
    Ok(GenusRecord {
        representatives: reg.entries.into_iter().map(|e| e.lattice).collect(),
        aut_orders: auts,
        fingerprints,
        traversal_log: log,
        primes: primes.to_vec(),
        theta_cutoff: cutoff,
    })
}

/// Pairwise non-isometry: distinct fingerprints, or a failed exhaustive search.
fn verify_distinct(reg: &Registry) -> Result<()> {
    for a in 0..reg.len() {
        for b in a + 1..reg.len() {
            let (ea, eb) = (&reg.entries[a], &reg.entries[b]);
            if ea.fingerprint.key() == eb.fingerprint.key()
                && find_isometry_prepared(&ea.prepared, &eb.prepared)?.is_some()
            {
                return Err(Error::VerificationFailed(format!("representatives {a} and {b} are isometric")));
            }
        }
    }
    Ok(())
}

/// `sum 1/|Aut(L_i)|`.
pub fn mass(record: &GenusRecord) -> BigRational {
    record
        .aut_orders
        .iter()
        .fold(BigRational::zero(), |acc, &a| acc + BigRational::new(BigInt::from(1), BigInt::from(a)))
}

/// Class index of `l` in the record and a witness mapping `l` onto it.
pub fn classify(record: &GenusRecord, l: &Lattice) -> Result<(usize, ZMat)> {
    Registry::from_record(record)?.classify(l)
}
