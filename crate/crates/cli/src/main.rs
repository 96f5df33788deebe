mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hypertoric::exact::io::{parse_int_list, parse_matrix};
use hypertoric::{GaleDualPair, Int, Quiver};
use sha2::{Digest, Sha256};

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Gale dual B and the Lawrence lifting
    Gale,
    /// Unimodularity from both sides of the Gale pair
    Unimodular,
    /// Circuits, cocircuits, f- and h-vectors of the matroid of B
    Matroid,
    /// Betti numbers three ways: h-vector, Hilbert function, bounded complex
    Betti,
    /// Chambers of the secondary arrangement (restricted to pos(A))
    Chambers,
    /// Triangulation from θ with its Stanley-Reisner and irrelevant ideals
    Triangulate,
    /// Bounded faces and lattice points of the slice at θ
    Bounded,
    /// Volume polynomials of bounded regions and their annihilator
    Cogenerators,
    /// Multiplication by a random degree-one class and the g-vector
    Lefschetz,
    /// Boundary matrix, cycles, trees and cuts of a quiver
    Quiver,
    /// Product-of-ALE classification
    AleCheck,
    /// Three-way Betti, annihilator, star-collapsibility and Lefschetz checks
    VerifyAll,
}

#[derive(Args, Clone)]
pub struct Opts {
    /// Matrix file: header `d n`, then d rows
    #[arg(long, global = true, conflicts_with = "quiver")]
    matrix: Option<PathBuf>,
    /// Quiver file: header `V E`, then E lines `tail head`
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,
    /// Comma-separated integers
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Comma-separated integers; θ = −Aψ when given
    #[arg(long, global = true, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Replace A by [A, −A]
    #[arg(long, global = true)]
    lawrence: bool,
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Human-readable output
    #[arg(long, global = true)]
    table: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    max_degree: Option<usize>,
}

#[derive(Parser)]
#[command(name = "hypertoric", version, about = "Exact toric and hypertoric combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

pub struct Input {
    pub pair: GaleDualPair,
    pub quiver: Option<Quiver>,
    pub names: Vec<String>,
    pub theta: Option<Vec<Int>>,
    pub psi: Option<Vec<Int>>,
    pub lawrence: bool,
    pub digest: String,
    pub seed: u64,
    pub max_degree: Option<usize>,
}

impl Input {
    pub fn theta(&self) -> Result<&[Int]> {
        self.theta
            .as_deref()
            .ok_or_else(|| anyhow!("this command needs --theta or --psi"))
    }

    pub fn quiver(&self) -> Result<&Quiver> {
        self.quiver
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs --quiver"))
    }
}

/// Errors that mean "the input is fine but an invariant failed".
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn load(opts: &Opts) -> Result<Input> {
    let mut hasher = Sha256::new();
    let (mut pair, quiver, mut names) = match (&opts.matrix, &opts.quiver) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            hasher.update(b"matrix\0");
            hasher.update(text.as_bytes());
            let a = parse_matrix(&text).with_context(|| format!("in {}", path.display()))?;
            let names: Vec<String> = (0..a.cols()).map(|i| format!("x{i}")).collect();
            (GaleDualPair::from_matrix(a)?, None, names)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            hasher.update(b"quiver\0");
            hasher.update(text.as_bytes());
            let q = Quiver::parse(&text).with_context(|| format!("in {}", path.display()))?;
            let names = (0..q.edges().len())
                .map(|e| format!("x{}", q.edge_label(e)))
                .collect();
            (q.gale_pair()?, Some(q), names)
        }
        _ => bail!("exactly one of --matrix or --quiver is required"),
    };
    if opts.lawrence {
        pair = pair.lawrence();
        let base: Vec<String> = names.iter().map(|s| s[1..].to_string()).collect();
        names = base
            .iter()
            .map(|s| format!("z{s}"))
            .chain(base.iter().map(|s| format!("w{s}")))
            .collect();
    }
    let parse = |s: &Option<String>, what: &str| -> Result<Option<Vec<Int>>> {
        s.as_deref()
            .map(|t| parse_int_list(t).with_context(|| format!("parsing --{what}")))
            .transpose()
    };
    let mut theta = parse(&opts.theta, "theta")?;
    let psi = parse(&opts.psi, "psi")?;
    if let Some(p) = &psi {
        if p.len() != pair.n() {
            bail!("--psi has {} entries, expected {}", p.len(), pair.n());
        }
        let derived: Vec<Int> = pair.a().mul_vec(p).into_iter().map(|x| -x).collect();
        match &theta {
            Some(t) if t != &derived => bail!("--theta and --psi disagree: −Aψ = {derived:?}"),
            _ => theta = Some(derived),
        }
    }
    if let Some(t) = &theta {
        if t.len() != pair.d() {
            bail!("--theta has {} entries, expected {}", t.len(), pair.d());
        }
    }
    for (flag, val) in [("theta", &theta), ("psi", &psi)] {
        if let Some(v) = val {
            hasher.update(format!("\0{flag}={v:?}").as_bytes());
        }
    }
    hasher.update(format!("\0lawrence={}", opts.lawrence).as_bytes());
    Ok(Input {
        pair,
        quiver,
        names,
        theta,
        psi,
        lawrence: opts.lawrence,
        digest: hex::encode(hasher.finalize()),
        seed: opts.seed,
        max_degree: opts.max_degree,
    })
}

fn run(cmd: Command, opts: &Opts) -> Result<report::Report> {
    let input = load(opts)?;
    commands::dispatch(cmd, &input)
}

/// Library errors that signal a failed invariant rather than bad input.
fn is_verification_error(e: &anyhow::Error) -> bool {
    use hypertoric::Error as E;
    if e.downcast_ref::<VerificationFailed>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<E>(),
        Some(
            E::AnnihilatorMismatch { .. }
                | E::NotInjective { .. }
                | E::NonGenericD
                | E::CriterionMismatch { .. }
                | E::ChamberCrossed(_)
                | E::NegativeBetti { .. }
        )
    )
}

fn main() -> ExitCode {
    let full = Cli::parse();
    match run(full.command, &full.opts) {
        Ok(rep) => {
            if full.opts.table {
                print!("{}", rep.to_table());
            } else {
                println!("{}", rep.to_json());
            }
            let failed = rep.failures();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_verification_error(&e) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
