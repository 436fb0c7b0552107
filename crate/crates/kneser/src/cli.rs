//! Subcommands. Every command produces deterministic JSON; wall-clock
//! timings only appear in the `hecke --table` text.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kneser_core::arith::Int;
use kneser_core::exec::Executor;
use kneser_core::genus::{genus_enumerate, GenusOptions, Registry};
use kneser_core::hecke::{check_commute, degree, eigensystems, hecke_matrix_registry, Eigenvalue, HeckeMatrix};
use kneser_core::isometry::{automorphisms, is_isometric};
use kneser_core::neighbor::NeighborContext;
use kneser_core::ring::{PrimeIdeal, Splitting};
use kneser_core::shortvec::theta_coeffs;
use kneser_core::zmat::ZMat;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache;
use crate::error::{CliError, Result};
use crate::exec::RayonExec;
use crate::format::{self, GenusFile, HeckeJson, LatticeJson, MatrixJson, PrimeJson, SystemJson};

#[derive(Debug, Parser)]
#[command(name = "kneser", version, about = "Genus enumeration and Hecke operators for definite lattices")]
pub struct Cli {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the classes in the genus of a lattice.
    Genus(GenusArgs),
    /// Hecke matrices and eigensystems on a genus file.
    Hecke(HeckeArgs),
    /// List the neighbors of a lattice at one prime.
    Neighbors(NeighborsArgs),
    /// Decide whether two lattices are isometric.
    Isometry(IsometryArgs),
    /// Automorphism group order and generators.
    Aut(LatticeArg),
    /// Theta series coefficients of the trace form.
    Theta(ThetaArgs),
}

#[derive(Debug, Args)]
pub struct LatticeArg {
    pub lattice: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    pub lattice: PathBuf,
    /// Rational primes; over an imaginary quadratic ring the first prime
    /// above each is used.
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<i64>,
    /// Accept even-rank Hermitian input without a niceness check.
    #[arg(long)]
    pub force: bool,
    /// Theta cutoff for class fingerprints.
    #[arg(long)]
    pub cutoff: Option<i64>,
}

#[derive(Debug, Args)]
pub struct HeckeArgs {
    pub genus: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<i64>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Print a text table of eigenvalues per prime with timings.
    #[arg(long)]
    pub table: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Side {
    #[default]
    First,
    Conj,
}

#[derive(Debug, Args)]
pub struct NeighborsArgs {
    pub lattice: PathBuf,
    #[arg(long)]
    pub prime: i64,
    /// Which prime above a split `p` to use.
    #[arg(long, value_enum, default_value_t = Side::First)]
    pub side: Side,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct IsometryArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    pub lattice: PathBuf,
    #[arg(long)]
    pub cutoff: i64,
}

/// Result of a command: JSON for the output file or stdout, and optional
/// text that goes to stdout instead.
pub struct Outcome {
    pub json: String,
    pub text: Option<String>,
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_lattice(path: &PathBuf) -> Result<kneser_core::lattice::Lattice> {
    LatticeJson::parse(&read(path)?)?.to_lattice()
}

fn matrix_json(g: &ZMat) -> Vec<Vec<i64>> {
    g.row_iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

fn json_outcome<T: Serialize>(v: &T) -> Result<Outcome> {
    Ok(Outcome { json: format::to_json_string(v)?, text: None })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::Validation("--jobs must be at least 1".into()));
    }
    let exec = RayonExec::new(jobs).map_err(|e| CliError::Validation(e.to_string()))?;
    match &cli.command {
        Command::Genus(a) => genus(a, &exec),
        Command::Hecke(a) => hecke(a, &exec),
        Command::Neighbors(a) => neighbors(a),
        Command::Isometry(a) => {
            let l = read_lattice(&a.first)?;
            let p = read_lattice(&a.second)?;
            let r = is_isometric(&l, &p)?;
            json_outcome(&json!({
                "isometric": r.isometric,
                "witness": r.witness.as_ref().map(matrix_json),
            }))
        }
        Command::Aut(a) => {
            let l = read_lattice(&a.lattice)?;
            let g = automorphisms(&l)?;
            json_outcome(&json!({
                "order": g.order,
                "enumerated": g.enumerated,
                "generators": g.generators.iter().map(matrix_json).collect::<Vec<_>>(),
            }))
        }
        Command::Theta(a) => {
            if a.cutoff < 0 {
                return Err(CliError::Validation("cutoff must be nonnegative".into()));
            }
            let l = read_lattice(&a.lattice)?;
            json_outcome(&json!({ "cutoff": a.cutoff, "theta": theta_coeffs(&l, a.cutoff as Int)? }))
        }
    }
}

fn primes_above(ring: &kneser_core::ring::CoefficientRing, ps: &[i64]) -> Result<Vec<PrimeIdeal>> {
    ps.iter().map(|&p| PrimeJson { p, root: None }.resolve(ring)).collect()
}

/// Canonical text hashed to address a genus computation.
pub fn genus_input_key(
    l: &kneser_core::lattice::Lattice,
    primes: &[PrimeIdeal],
    force: bool,
    cutoff: Option<i64>,
) -> Result<String> {
    let v = json!({
        "lattice": LatticeJson::from_lattice(l),
        "primes": primes.iter().map(PrimeJson::of).collect::<Vec<_>>(),
        "force": force,
        "cutoff": cutoff,
    });
    Ok(serde_json::to_string(&v)?)
}

fn genus<E: Executor>(a: &GenusArgs, exec: &E) -> Result<Outcome> {
    let l = read_lattice(&a.lattice)?;
    let primes = primes_above(l.ring(), &a.primes)?;
    let hash = cache::input_hash(&genus_input_key(&l, &primes, a.force, a.cutoff)?);
    let dir = cache::cache_dir();
    if let Some(text) = dir.as_ref().and_then(|d| cache::load(d, &hash)) {
        // Only trust entries that parse and rebuild.
        if let Ok(f) = GenusFile::parse(&text) {
            if f.input_hash == hash && f.to_record().is_ok() {
                return Ok(Outcome { json: text, text: None });
            }
        }
    }
    let opts = GenusOptions { force: a.force, theta_cutoff: a.cutoff.map(|c| c as Int) };
    let rec = genus_enumerate(&l, &primes, opts, exec)?;
    let out = format::to_json_string(&GenusFile::from_record(&rec, &hash))?;
    if let Some(d) = dir {
        cache::store(&d, &hash, &out)?;
    }
    Ok(Outcome { json: out, text: None })
}

/// Degree of `T_{P,k}` when a closed form exists.
fn expected_degree(m: &HeckeMatrix, n: usize) -> Option<Int> {
    match m.prime.splitting {
        Splitting::Split => degree(m.prime.norm(), m.k, n, Splitting::Split).ok(),
        _ => None,
    }
}

fn hecke<E: Executor>(a: &HeckeArgs, exec: &E) -> Result<Outcome> {
    let file = GenusFile::parse(&read(&a.genus)?)?;
    let rec = file.to_record()?;
    let ring = *rec.representatives[0].ring();
    let n = rec.representatives[0].ambient().dim();
    let primes = primes_above(&ring, &a.primes)?;
    let reg = Registry::from_record(&rec)?;
    let mut mats = Vec::new();
    let mut times = Vec::new();
    for pr in &primes {
        let t = Instant::now();
        mats.push(hecke_matrix_registry(&reg, pr, a.k, exec)?);
        times.push(t.elapsed());
    }
    let mut commute = true;
    for (i, x) in mats.iter().enumerate() {
        for y in &mats[i + 1..] {
            commute &= check_commute(x, y)?;
        }
    }
    let systems = eigensystems(&mats)?;
    let matrices: Vec<MatrixJson> = mats
        .iter()
        .map(|m| {
            let endo = (!ring.is_integers() && a.k == 1)
                .then(|| m.prime.generator.map(|g| ring.endoscopic_eigenvalue(g)))
                .flatten();
            MatrixJson::new(m, expected_degree(m, n), endo)
        })
        .collect();
    let out = HeckeJson {
        convention: kneser_core::hecke::CONVENTION.into(),
        genus_hash: file.input_hash.clone(),
        class_number: rec.class_number(),
        matrices,
        commute,
        eigensystems: systems.iter().map(SystemJson::from).collect(),
    };
    let json = format::to_json_string(&out)?;
    let text = a.table.then(|| table(&mats, &systems, &times));
    Ok(Outcome { json, text })
}

fn table(mats: &[HeckeMatrix], systems: &[kneser_core::hecke::Eigensystem], times: &[std::time::Duration]) -> String {
    let names: Vec<String> = (0..systems.len())
        .map(|i| match (b'a' + i as u8) as char {
            c if c <= 'z' => format!("{c}_p"),
            _ => format!("s{i}_p"),
        })
        .collect();
    let mut s = format!("{:>6}", "N(p)");
    for n in &names {
        s += &format!(" {n:>10}");
    }
    s += &format!(" {:>10}\n", "time");
    for (i, m) in mats.iter().enumerate() {
        s += &format!("{:>6}", m.prime.norm());
        for sys in systems {
            let v = match &sys.eigenvalues[i] {
                Eigenvalue::Rational(r) => format::big_rat_str(r),
                Eigenvalue::Algebraic(_) => "alg".into(),
            };
            s += &format!(" {v:>10}");
        }
        s += &format!(" {:>9.2}s\n", times[i].as_secs_f64());
    }
    s
}

fn neighbors(a: &NeighborsArgs) -> Result<Outcome> {
    let l = read_lattice(&a.lattice)?;
    let ring = *l.ring();
    let mut primes = ring.split_prime(a.prime as Int)?;
    let pr = match a.side {
        Side::First => primes.remove(0),
        Side::Conj => {
            let first = primes[0];
            ring.conj_prime(&first)
        }
    };
    let ctx = NeighborContext::new(&l, &pr)?;
    let nbs = ctx.neighbors(a.k)?;
    let f = ctx.field().f;
    let list: Vec<Value> = nbs
        .iter()
        .map(|nb| {
            let echelon: Vec<Vec<Value>> = nb
                .subspace
                .echelon
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| if f == 1 { json!(e.u as i64) } else { json!([e.u as i64, e.v as i64]) })
                        .collect()
                })
                .collect();
            json!({
                "subspace": echelon,
                "index": nb.index as i64,
                "lattice": LatticeJson::from_lattice(&nb.lattice),
            })
        })
        .collect();
    json_outcome(&json!({
        "prime": PrimeJson::of(&pr),
        "k": a.k,
        "count": list.len(),
        "neighbors": list,
    }))
}
