use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use grass::cli::{self, IndexVariant};
use grass::grass::IdempotentPair;
use grass::{Result, StructuredMatrix};

/// Virtual idempotents: verification suites, indices, regularization, reduction.
#[derive(Parser)]
#[command(name = "grass", version)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the seeded identity suites.
    Verify {
        /// all, grassmann, regular, stab, analytic or fredholm
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
    /// χ and index pair of a Fredholm pair (ψ, φ).
    Index {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// f, raw or reduced (the last two index the tensor square)
        #[arg(long, default_value = "f")]
        variant: String,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Regularize an idempotent pair.
    Regularize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Replace a pair by a finitely supported one, with the connecting unit.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Worked examples: qu1, shift, bilateral.
    Demo { name: String },
}

fn ring_arg(s: &Option<String>) -> Result<Option<grass::Ring>> {
    s.as_deref().map(cli::parse_ring).transpose()
}

fn matrix(path: &PathBuf, ring: Option<&grass::Ring>) -> Result<StructuredMatrix> {
    let m = StructuredMatrix::from_json(&cli::read_json(path)?)?;
    match ring {
        Some(r) => cli::convert(&m, r),
        None => Ok(m),
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Verify { suite, seed, cases } => {
            let report = cli::cmd_verify(&suite, seed, cases)?;
            for f in &report.failures {
                log::warn!("{} failed (seed {}): {}", f.construction, f.seed, f.detail);
            }
            emit(&report.to_json());
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::Index { psi, phi, variant, ring } => {
            let ring = ring_arg(&ring)?;
            let variant = IndexVariant::parse(&variant)?;
            emit(&cli::cmd_index(&matrix(&psi, ring.as_ref())?, &matrix(&phi, ring.as_ref())?, variant)?);
            Ok(0)
        }
        Cmd::Regularize { input, ring } => {
            let ring = ring_arg(&ring)?;
            let p = IdempotentPair::from_json(&cli::read_json(&input)?)?;
            emit(&cli::cmd_regularize(&p, ring.as_ref())?);
            Ok(0)
        }
        Cmd::Reduce { input, eps, ring } => {
            let ring = ring_arg(&ring)?;
            let p = IdempotentPair::from_json(&cli::read_json(&input)?)?;
            emit(&cli::cmd_reduce(&p, eps, ring.as_ref())?);
            Ok(0)
        }
        Cmd::Demo { name } => {
            let (text, ok) = cli::cmd_demo(&name)?;
            print!("{text}");
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GRASS_LOG", "warn")).init();
    let args = Args::parse();
    match run(args.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = cli::exit_code(&e);
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
