//! Command-line front end: input files, fixtures, and report rendering.

pub mod commands;
pub mod input;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use pairs_core::field::{PrimeField, Rationals};
use pairs_core::fixtures;
use serde_json::json;

use commands::{BettiMethod, Ctx, SliceArg, Theorem};
use input::{FieldSpec, InputSpec};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "pairs", version, about = "Ideals of pairs of matroid realizations: Betti tables, primes, derivations")]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Scan window for degreewise computations (default n + 2).
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Degree bound B for the linear-type check (default 4).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    /// Delete zero columns instead of refusing them.
    #[arg(long, global = true)]
    pub drop_loops: bool,
    /// Accept a prime field with p <= n.
    #[arg(long, global = true)]
    pub allow_small_prime: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Everything: matroid data, Betti tables, primes, derivations.
    Analyze { target: String },
    /// Bigraded Betti table.
    Betti {
        target: String,
        #[arg(long, value_enum, default_value = "both")]
        method: BettiMethod,
        /// Show Tor of S/a instead of Tor of a.
        #[arg(long)]
        quotient: bool,
    },
    /// Flats, cyclic flats and components.
    Flats { target: String },
    /// Minimal and associated primes, optionally of a slice.
    Primes {
        target: String,
        #[arg(long, value_enum)]
        slice: Option<SliceArg>,
        /// Also list candidates that were tested and rejected.
        #[arg(long)]
        rejected: bool,
    },
    /// The module of logarithmic derivations.
    Der { target: String },
    /// Check one theorem on a realization.
    Verify {
        target: String,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Compare two realizations of one matroid.
    Compare {
        a: String,
        b: String,
        /// Search for a certificate that the derivation modules differ.
        #[arg(long)]
        recipe: bool,
    },
    /// Built-in realizations.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    List,
}

/// A fixture name or a path to an input file.
pub fn resolve(target: &str) -> Result<InputSpec> {
    if let Some(f) = fixtures::lookup(target) {
        return Ok(InputSpec::from_fixture(&f));
    }
    let p = PathBuf::from(target);
    if p.exists() {
        return Ok(InputSpec::from_file(Path::new(target))?);
    }
    bail!("{target:?} is neither a fixture name (see `pairs fixtures list`) nor a readable file")
}

macro_rules! with_field {
    ($spec:expr, $k:ident => $body:expr) => {
        match $spec.field {
            FieldSpec::Rational => {
                let $k = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $k = PrimeField::new(p)?;
                $body
            }
        }
    };
}

impl Cli {
    fn ctx<K: pairs_core::field::Field>(&self, spec: InputSpec, k: &K) -> Result<Ctx<K>> {
        Ctx::new(spec, k, self.window, self.bound, self.drop_loops, self.allow_small_prime)
    }

    /// Runs the command and returns its report.
    pub fn run(&self) -> Result<Report> {
        match &self.command {
            Command::Fixtures { action: FixturesAction::List } => Ok(fixture_list()),
            Command::Compare { a, b, recipe } => {
                let (sa, sb) = (resolve(a)?, resolve(b)?);
                if sa.field != sb.field {
                    bail!("the two realizations are over different fields");
                }
                with_field!(sa, k => {
                    let ca = self.ctx(sa.clone(), &k)?;
                    let cb = self.ctx(sb, &k)?;
                    commands::check_same_ground(&ca, &cb)?;
                    commands::compare(&ca, &cb, *recipe)
                })
            }
            Command::Analyze { target } => {
                let s = resolve(target)?;
                with_field!(s, k => commands::analyze(&self.ctx(s.clone(), &k)?))
            }
            Command::Betti { target, method, quotient } => {
                let s = resolve(target)?;
                with_field!(s, k => Ok(commands::betti(&self.ctx(s.clone(), &k)?, *method, *quotient)))
            }
            Command::Flats { target } => {
                let s = resolve(target)?;
                with_field!(s, k => Ok(commands::flats(&self.ctx(s.clone(), &k)?)))
            }
            Command::Primes { target, slice, rejected } => {
                let s = resolve(target)?;
                with_field!(s, k => commands::primes(&self.ctx(s.clone(), &k)?, *slice, *rejected))
            }
            Command::Der { target } => {
                let s = resolve(target)?;
                with_field!(s, k => commands::der(&self.ctx(s.clone(), &k)?))
            }
            Command::Verify { target, theorem } => {
                let s = resolve(target)?;
                with_field!(s, k => commands::verify(&self.ctx(s.clone(), &k)?, *theorem))
            }
        }
    }
}

fn fixture_list() -> Report {
    let mut rep = Report::new("fixtures", "list");
    let list = fixtures::registry();
    let mut text = String::new();
    for f in &list {
        text.push_str(&format!("{:<12} n = {:<2} {}\n", f.name, f.n(), f.description));
    }
    text.push_str("also: boolean(n), u(r,n) for any parameters\n");
    rep.section(
        "fixtures",
        json!(list.iter().map(|f| json!({"name": f.name, "n": f.n(), "rows": f.rows.len(), "description": f.description})).collect::<Vec<_>>()),
        text,
    );
    rep
}

/// Exit status: 0 success, 1 error, 2 a verification failed.
pub fn main_with(cli: Cli) -> i32 {
    match cli.run() {
        Ok(rep) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&rep.to_json()).expect("serializable") + "\n"
            } else {
                rep.to_text()
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), out.as_bytes());
            if let Some(v) = rep.first_failure() {
                eprintln!("verification failed: {}{}", v.assertion, v.failure.as_ref().map(|f| format!(" at {f}")).unwrap_or_default());
                2
            } else {
                0
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": format!("{e:#}")}));
            }
            eprintln!("error: {e:#}");
            1
        }
    }
}
