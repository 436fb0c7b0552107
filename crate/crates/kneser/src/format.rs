//! JSON encodings of lattices, genus files and Hecke results.
//!
//! Rationals are written as strings `"p"` or `"p/q"` in lowest terms; input
//! also accepts JSON integers. A ring element `a + b w` is a pair `[a, b]`;
//! over `Z` (`disc = 1`) entries are plain rationals.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use kneser_core::arith::{Int, Rat};
use kneser_core::genus::{GenusRecord, TraversalStep};
use kneser_core::hecke::{Eigensystem, Eigenvalue, HeckeMatrix};
use kneser_core::lattice::{AmbientSpace, Lattice};
use kneser_core::qmat::QMat;
use kneser_core::ring::{CoefficientRing, FieldElt, PrimeIdeal};
use kneser_core::shortvec::{fingerprint, Fingerprint};

use crate::error::{CliError, Result};

pub const GENUS_FORMAT: &str = "kneser-genus-v1";

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

pub fn parse_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            n.as_i64().map(|x| Rat::from_integer(x as Int)).ok_or_else(|| parse_err(format!("not an integer: {n}")))
        }
        Value::String(s) => parse_rat_str(s),
        _ => Err(parse_err(format!("expected a rational, got {v}"))),
    }
}

pub fn parse_rat_str(s: &str) -> Result<Rat> {
    let bad = || parse_err(format!("bad rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<Int>().map_err(|_| bad())?, q.trim().parse::<Int>().map_err(|_| bad())?),
        None => (s.trim().parse::<Int>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

pub fn rat_str(r: &Rat) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn big_rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_elt(v: &Value) -> Result<FieldElt> {
    match v {
        Value::Array(ab) if ab.len() == 2 => Ok(FieldElt::new(parse_rat(&ab[0])?, parse_rat(&ab[1])?)),
        Value::Array(_) => Err(parse_err("ring elements are pairs [a, b]")),
        _ => Ok(FieldElt::new(parse_rat(v)?, Rat::from_integer(0))),
    }
}

fn elt_value(x: &FieldElt, degree: usize) -> Value {
    if degree == 1 {
        Value::String(rat_str(&x.a))
    } else {
        Value::Array(vec![Value::String(rat_str(&x.a)), Value::String(rat_str(&x.b))])
    }
}

pub fn ring_of(disc: i64) -> Result<CoefficientRing> {
    if disc == 1 {
        Ok(CoefficientRing::integers())
    } else {
        Ok(CoefficientRing::new(disc)?)
    }
}

/// A lattice: the ambient Hermitian (or quadratic) space plus optional span
/// generators. Without `gram` the form is the identity of size `rank`;
/// without `basis` the lattice is the standard one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub disc: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Value>>>,
}

pub fn parse_ambient(disc: i64, rank: Option<usize>, gram: Option<&[Vec<Value>]>) -> Result<Arc<AmbientSpace>> {
    let ring = ring_of(disc)?;
    match gram {
        Some(g) => {
            let rows =
                g.iter().map(|r| r.iter().map(parse_elt).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            if let Some(n) = rank {
                if n != rows.len() {
                    return Err(CliError::Validation(format!("rank {n} but Gram matrix has {} rows", rows.len())));
                }
            }
            Ok(AmbientSpace::new(ring, rows)?)
        }
        None => {
            let n = rank.ok_or_else(|| CliError::Validation("either gram or rank is required".into()))?;
            if n == 0 {
                return Err(CliError::Validation("rank must be positive".into()));
            }
            Ok(AmbientSpace::standard(ring, n))
        }
    }
}

/// Span of generator vectors given as `n` ring or field elements each.
pub fn parse_lattice_in(ambient: &Arc<AmbientSpace>, basis: Option<&[Vec<Value>]>) -> Result<Lattice> {
    let Some(rows) = basis else { return Ok(Lattice::standard(ambient.clone())) };
    let n = ambient.dim();
    let d = ambient.ring().degree();
    let mut flat = Vec::with_capacity(rows.len());
    for r in rows {
        if r.len() != n {
            return Err(CliError::Validation(format!("basis vector of length {} in rank {n}", r.len())));
        }
        let mut v = Vec::with_capacity(n * d);
        for x in r {
            let e = parse_elt(x)?;
            if d == 1 && e.b != Rat::from_integer(0) {
                return Err(CliError::Validation("w-component in a lattice over Z".into()));
            }
            v.push(e.a);
            if d == 2 {
                v.push(e.b);
            }
        }
        flat.push(v);
    }
    if flat.is_empty() {
        return Err(CliError::Validation("empty basis".into()));
    }
    Ok(Lattice::span(ambient.clone(), &QMat::from_rat_rows(&flat))?)
}

pub fn gram_json(ambient: &AmbientSpace) -> Vec<Vec<Value>> {
    let n = ambient.dim();
    let d = ambient.ring().degree();
    (0..n).map(|i| (0..n).map(|j| elt_value(&ambient.gram_entry(i, j), d)).collect()).collect()
}

/// `Z`-basis rows of `l` as vectors of ring or field elements.
pub fn basis_json(l: &Lattice) -> Vec<Vec<Value>> {
    let d = l.ring().degree();
    let zero = Rat::from_integer(0);
    l.basis_rows()
        .iter()
        .map(|row| {
            row.chunks(d).map(|c| elt_value(&FieldElt::new(c[0], if d == 2 { c[1] } else { zero }), d)).collect()
        })
        .collect()
}

impl LatticeJson {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let amb = parse_ambient(self.disc, self.rank, self.gram.as_deref())?;
        parse_lattice_in(&amb, self.basis.as_deref())
    }

    /// Canonical encoding: explicit Gram matrix and the HNF basis.
    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeJson {
            disc: l.ring().disc() as i64,
            rank: Some(l.ambient().dim()),
            gram: Some(gram_json(l.ambient())),
            basis: Some(basis_json(l)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeJson {
    pub p: i64,
    /// Residue of `w` modulo the prime, selecting one of two split primes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<i64>,
}

impl PrimeJson {
    pub fn of(pr: &PrimeIdeal) -> Self {
        PrimeJson { p: pr.p as i64, root: pr.root.map(|r| r as i64) }
    }

    pub fn resolve(&self, ring: &CoefficientRing) -> Result<PrimeIdeal> {
        let primes = ring.split_prime(self.p as Int)?;
        match self.root {
            None => Ok(primes[0]),
            Some(r) => primes
                .into_iter()
                .find(|pr| pr.root == Some(r as Int))
                .ok_or_else(|| CliError::Validation(format!("no prime above {} with root {r}", self.p))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerprintJson {
    pub discriminant: i64,
    pub zrank: usize,
    pub theta: Vec<u64>,
    pub minimum: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<u128>,
}

impl From<&Fingerprint> for FingerprintJson {
    fn from(f: &Fingerprint) -> Self {
        FingerprintJson {
            discriminant: f.discriminant as i64,
            zrank: f.zrank,
            theta: f.theta.clone(),
            minimum: f.minimum as i64,
            aut_order: f.aut_order,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassJson {
    pub basis: Vec<Vec<Value>>,
    pub aut_order: u128,
    pub fingerprint: FingerprintJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenusFile {
    pub format: String,
    pub input_hash: String,
    pub disc: i64,
    pub gram: Vec<Vec<Value>>,
    pub primes: Vec<PrimeJson>,
    pub theta_cutoff: i64,
    pub class_number: usize,
    pub mass: String,
    pub classes: Vec<ClassJson>,
    /// `[parent, prime index, subspace position, child]` per neighbor step.
    pub traversal: Vec<[usize; 4]>,
}

impl GenusFile {
    pub fn from_record(rec: &GenusRecord, input_hash: &str) -> Self {
        let amb = rec.representatives[0].ambient();
        GenusFile {
            format: GENUS_FORMAT.into(),
            input_hash: input_hash.into(),
            disc: amb.ring().disc() as i64,
            gram: gram_json(amb),
            primes: rec.primes.iter().map(PrimeJson::of).collect(),
            theta_cutoff: rec.theta_cutoff as i64,
            class_number: rec.class_number(),
            mass: big_rat_str(&kneser_core::genus::mass(rec)),
            classes: rec
                .representatives
                .iter()
                .zip(&rec.aut_orders)
                .zip(&rec.fingerprints)
                .map(|((l, &a), f)| ClassJson { basis: basis_json(l), aut_order: a, fingerprint: f.into() })
                .collect(),
            traversal: rec.traversal_log.iter().map(|s| [s.parent, s.prime, s.subspace, s.child]).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: GenusFile = serde_json::from_str(text)?;
        if f.format != GENUS_FORMAT {
            return Err(parse_err(format!("unknown genus file format {:?}", f.format)));
        }
        Ok(f)
    }

    /// Rebuilds the record, recomputing fingerprints as a consistency check.
    pub fn to_record(&self) -> Result<GenusRecord> {
        let amb = parse_ambient(self.disc, None, Some(&self.gram))?;
        let ring = *amb.ring();
        if self.classes.is_empty() || self.class_number != self.classes.len() {
            return Err(CliError::Validation("class count does not match class list".into()));
        }
        let cutoff = self.theta_cutoff as Int;
        let mut reps = Vec::new();
        let mut fps = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            let l = parse_lattice_in(&amb, Some(&c.basis))?;
            let mut f = fingerprint(&l, cutoff)?;
            f.aut_order = Some(c.aut_order);
            if FingerprintJson::from(&f) != c.fingerprint {
                return Err(CliError::Validation(format!("class {i}: stored fingerprint does not match the lattice")));
            }
            reps.push(l);
            fps.push(f);
        }
        let primes = self.primes.iter().map(|p| p.resolve(&ring)).collect::<Result<Vec<_>>>()?;
        let h = reps.len();
        let traversal_log = self
            .traversal
            .iter()
            .map(|&[parent, prime, subspace, child]| {
                if parent >= h || child >= h || prime >= primes.len() {
                    return Err(CliError::Validation("traversal step out of range".into()));
                }
                Ok(TraversalStep { parent, prime, subspace, child })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GenusRecord {
            representatives: reps,
            aut_orders: self.classes.iter().map(|c| c.aut_order).collect(),
            fingerprints: fps,
            traversal_log,
            primes,
            theta_cutoff: cutoff,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub prime: PrimeJson,
    pub norm: i64,
    pub k: usize,
    pub matrix: Vec<Vec<i64>>,
    pub row_sum: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endoscopic: Option<i64>,
    pub witnesses_verified: usize,
}

impl MatrixJson {
    pub fn new(m: &HeckeMatrix, degree: Option<Int>, endoscopic: Option<Int>) -> Self {
        MatrixJson {
            prime: PrimeJson::of(&m.prime),
            norm: m.prime.norm() as i64,
            k: m.k,
            matrix: m.matrix.row_iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect(),
            row_sum: m.row_sum().map(|x| x as i64),
            degree: degree.map(|x| x as i64),
            endoscopic: endoscopic.map(|x| x as i64),
            witnesses_verified: m.witnesses_verified,
        }
    }
}

pub fn eigenvalue_json(e: &Eigenvalue) -> Value {
    match e {
        Eigenvalue::Rational(r) => Value::String(big_rat_str(r)),
        Eigenvalue::Algebraic(p) => {
            serde_json::json!({ "charpoly": p.iter().map(big_rat_str).collect::<Vec<_>>() })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub label: String,
    pub multiplicity: usize,
    /// One entry per matrix, in the order of `matrices`.
    pub eigenvalues: Vec<Value>,
    pub basis: Vec<Vec<String>>,
}

impl From<&Eigensystem> for SystemJson {
    fn from(s: &Eigensystem) -> Self {
        SystemJson {
            label: s.label.clone(),
            multiplicity: s.multiplicity,
            eigenvalues: s.eigenvalues.iter().map(eigenvalue_json).collect(),
            basis: s.basis.iter().map(|v| v.iter().map(big_rat_str).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeckeJson {
    pub convention: String,
    pub genus_hash: String,
    pub class_number: usize,
    pub matrices: Vec<MatrixJson>,
    pub commute: bool,
    pub eigensystems: Vec<SystemJson>,
}

/// Indented JSON in which arrays without nested objects stay on one line.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut out = String::new();
    render(&serde_json::to_value(v)?, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(a) => a.iter().any(has_object),
        _ => false,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(a) if has_object(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                render(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}
