//! `pbdom`: JSON in, JSON out.
//!
//! Exit status: 0 success or verdict true, 1 verdict false, 2 bad input or
//! usage, 3 a checked structural result failed on the given instance.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pbdom_core::corpus;
use pbdom_core::diagram::{functor_from_domain, reconstruct_and_verify, verify_pba_roundtrip};
use pbdom_core::domain::{check_def31, check_prop42};
use pbdom_core::json::Json;
use pbdom_core::lattice::{
    all_isos, boolean_lattice, enumerate_posets, partition_lattice, random_lattices,
};
use pbdom_core::limits::MAX_ENUMERATION_SIZE;
use pbdom_core::orient::{enumerate_orientations, orient_sub, Orientation};
use pbdom_core::pba::{lift_domain_iso, pba_iso_search, sub};
use pbdom_core::verify::{run_criterion, VerifyConfig, CRITERIA};
use pbdom_core::{Error, FinBool, FinPoset, PieceBool, Result};

#[derive(Parser)]
#[command(
    name = "pbdom",
    version,
    about = "Piecewise Boolean algebras and their domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Def31,
    Prop42,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a poset is a piecewise Boolean domain.
    CheckDomain {
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
    },
    /// The domain of Boolean subalgebras of a piecewise Boolean algebra.
    Sub { pba: PathBuf },
    /// Rebuild an algebra from an oriented domain and check it.
    Reconstruct {
        poset: PathBuf,
        #[arg(long)]
        orientation: PathBuf,
    },
    /// Colimit of the subalgebra diagram, checked isomorphic to the input.
    Roundtrip { pba: PathBuf },
    /// Emit a generated or named object.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// The orientation an algebra induces on its domain.
    Orient { pba: PathBuf },
    /// The diagram an oriented domain determines.
    Extend {
        poset: PathBuf,
        orientation: PathBuf,
    },
    /// Search for an isomorphism, and lift every isomorphism of domains.
    Iso { left: PathBuf, right: PathBuf },
    /// Run the acceptance criteria.
    VerifyAll {
        #[arg(long, default_value_t = MAX_ENUMERATION_SIZE)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random lattices for the recogniser check.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Run only these criteria.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum Gen {
    PartitionLattice {
        n: usize,
    },
    DualPartitionLattice {
        n: usize,
    },
    BooleanLattice {
        k: usize,
    },
    /// A Boolean algebra with `n` atoms, as a one-block algebra.
    BooleanAlgebra {
        n: usize,
    },
    RandomLattice {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every poset with exactly `k` elements, up to isomorphism.
    Posets {
        k: usize,
    },
    /// Every orientation of a domain.
    Orientations {
        poset: PathBuf,
    },
    /// A named corpus algebra; without a name, the list of names.
    Corpus {
        name: Option<String>,
    },
}

struct Outcome {
    value: Value,
    status: u8,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, status: 0 }
    }

    fn verdict(value: Value, holds: bool) -> Self {
        Outcome {
            value,
            status: if holds { 0 } else { 1 },
        }
    }
}

fn read(path: &Path) -> Result<String> {
    let mut s = String::new();
    let r = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(s)
}

fn load<T: Json>(path: &Path) -> Result<T> {
    T::from_json_str(&read(path)?)
}

fn labels(p: &PieceBool, elems: &[usize]) -> Vec<String> {
    let mut v: Vec<String> = elems.iter().map(|&c| p.label(c).to_string()).collect();
    v.sort();
    v
}

fn oriented(poset: &Path, orientation: &Path) -> Result<(FinPoset, Orientation)> {
    let l: FinPoset = load(poset)?;
    let o: Orientation = load(orientation)?;
    if l != *o.domain() {
        return Err(Error::usage("the orientation is for a different poset"));
    }
    Ok((l, o))
}

fn run(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::CheckDomain { poset, route } => {
            let l: FinPoset = load(&poset)?;
            match route {
                RouteArg::Def31 => {
                    let r = check_def31(&l);
                    Outcome::verdict(serde_json::to_value(&r)?, r.verdict)
                }
                RouteArg::Prop42 => {
                    let r = check_prop42(&l);
                    Outcome::verdict(serde_json::to_value(&r)?, r.verdict)
                }
                RouteArg::Both => {
                    let (a, b) = (check_def31(&l), check_prop42(&l));
                    if a.verdict != b.verdict {
                        return Err(Error::logic(format!(
                            "recognition routes disagree: {}",
                            json!({ "def31": a, "prop42": b })
                        )));
                    }
                    Outcome::verdict(
                        json!({ "verdict": a.verdict, "def31": a, "prop42": b }),
                        a.verdict,
                    )
                }
            }
        }
        Command::Sub { pba } => {
            let p: PieceBool = load(&pba)?;
            let s = sub(&p)?;
            let carriers: BTreeMap<&str, Vec<String>> = (0..s.len())
                .map(|i| (s.poset().label(i), labels(&p, s.carrier(i))))
                .collect();
            Outcome::ok(json!({ "poset": s.poset().to_repr(), "carriers": carriers }))
        }
        Command::Reconstruct { poset, orientation } => {
            let (l, o) = oriented(&poset, &orientation)?;
            let report = check_def31(&l);
            if !report.verdict {
                return Ok(Outcome::verdict(json!({ "domain": report }), false));
            }
            let r = reconstruct_and_verify(&l, &o)?;
            let p = r.colimit.pba();
            let iso: BTreeMap<&str, Value> = (0..l.len())
                .map(|x| {
                    let node = r.iso[x];
                    (l.label(x), json!({ "subalgebra": r.sub.poset().label(node), "elements": labels(p, r.sub.carrier(node)) }))
                })
                .collect();
            Outcome::ok(json!({ "pba": p.to_repr(), "iso": iso }))
        }
        Command::Roundtrip { pba } => {
            let p: PieceBool = load(&pba)?;
            let (d, c, iso) = verify_pba_roundtrip(&p)?;
            let map: BTreeMap<&str, &str> = (0..p.len())
                .map(|b| (p.label(b), c.pba().label(iso.apply(b))))
                .collect();
            Outcome::ok(json!({
                "domain_size": d.diagram.base().len(),
                "colimit": c.pba().to_repr(),
                "iso": map,
            }))
        }
        Command::Gen { what } => Outcome::ok(generate(what)?),
        Command::Orient { pba } => {
            let p: PieceBool = load(&pba)?;
            Outcome::ok(orient_sub(&p)?.to_value())
        }
        Command::Extend { poset, orientation } => {
            let (l, o) = oriented(&poset, &orientation)?;
            Outcome::ok(functor_from_domain(&l, &o)?.to_value())
        }
        Command::Iso { left, right } => {
            let (p, q): (PieceBool, PieceBool) = (load(&left)?, load(&right)?);
            let found = pba_iso_search(&p, &q);
            let (sp, sq) = (sub(&p)?, sub(&q)?);
            let lifts: Vec<Value> = all_isos(sp.poset(), sq.poset())
                .iter()
                .map(|phi| {
                    let map: BTreeMap<&str, &str> = phi
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (sp.poset().label(i), sq.poset().label(j)))
                        .collect();
                    match lift_domain_iso(&p, &q, phi) {
                        Ok(fs) => json!({ "domain_iso": map, "lifts": fs.len() }),
                        Err(e) => json!({ "domain_iso": map, "lifts": 0, "error": e.to_string() }),
                    }
                })
                .collect();
            let map = found.as_ref().map(|f| {
                (0..p.len())
                    .map(|c| (p.label(c).to_string(), q.label(f.apply(c)).to_string()))
                    .collect::<BTreeMap<_, _>>()
            });
            Outcome::verdict(
                json!({ "isomorphic": found.is_some(), "map": map, "domain_isos": lifts }),
                found.is_some(),
            )
        }
        Command::VerifyAll {
            max_size,
            seed,
            random,
            only,
        } => {
            if max_size > MAX_ENUMERATION_SIZE {
                return Err(Error::usage(format!(
                    "--max-size is capped at {MAX_ENUMERATION_SIZE}"
                )));
            }
            let cfg = VerifyConfig {
                max_size,
                seed,
                random_lattices: random,
            };
            let ids: Vec<u8> = CRITERIA
                .iter()
                .map(|c| c.0)
                .filter(|id| only.is_empty() || only.contains(id))
                .collect();
            let outcomes: Vec<_> = ids.iter().map(|&id| run_criterion(id, &cfg)).collect();
            let passed = outcomes.iter().all(|o| o.passed);
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let value = json!({
                "config": { "max_size": max_size, "seed": seed, "random_lattices": random },
                "passed": passed,
                "criteria": outcomes,
            });
            Outcome {
                value,
                status: if passed { 0 } else { 3 },
            }
        }
    })
}

fn generate(what: Gen) -> Result<Value> {
    Ok(match what {
        Gen::PartitionLattice { n } => partition_lattice(n)?.to_value(),
        Gen::DualPartitionLattice { n } => partition_lattice(n)?.dual().to_value(),
        Gen::BooleanLattice { k } => {
            if k > MAX_ENUMERATION_SIZE {
                return Err(Error::resource(format!(
                    "boolean lattices are capped at {MAX_ENUMERATION_SIZE} atoms"
                )));
            }
            boolean_lattice(k).to_value()
        }
        Gen::BooleanAlgebra { n } => {
            if n == 0 || n > pbdom_core::limits::max_atoms() {
                return Err(Error::resource(format!(
                    "need 1 <= n <= {}",
                    pbdom_core::limits::max_atoms()
                )));
            }
            let atoms = (0..n).map(|i| format!("a{i}")).collect();
            PieceBool::from_bool(&FinBool::new(atoms)?).to_value()
        }
        Gen::RandomLattice { seed } => random_lattices(seed, 1)[0].to_value(),
        Gen::Posets { k } => {
            Value::Array(enumerate_posets(k)?.iter().map(Json::to_value).collect())
        }
        Gen::Orientations { poset } => {
            let l: FinPoset = load(&poset)?;
            if !check_def31(&l).verdict {
                return Err(Error::usage("orientations need a piecewise Boolean domain"));
            }
            Value::Array(enumerate_orientations(&l).map(|o| o.to_value()).collect())
        }
        Gen::Corpus { name: None } => {
            json!(corpus::pbas().iter().map(|(n, _)| *n).collect::<Vec<_>>())
        }
        Gen::Corpus { name: Some(n) } => corpus::pba(&n)?.to_value(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(
                std::io::stdout().lock(),
                "{}",
                serde_json::to_string_pretty(&out.value).expect("plain data serialises")
            );
            ExitCode::from(out.status)
        }
        Err(e) => {
            let kind = match &e {
                Error::Usage(_) => "usage",
                Error::Structural(_) => "structural",
                Error::Resource(_) => "resource",
                Error::Logic(_) => "logic",
                Error::Parse(_) => "parse",
            };
            eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
            ExitCode::from(if e.is_logic() { 3 } else { 2 })
        }
    }
}
