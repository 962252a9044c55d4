mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heckeft::lattice::Budget;
use heckeft::{Error, Field, FqContext};

#[derive(Parser, Debug)]
#[command(
    name = "heckeft",
    version,
    about = "Hecke operators on Drinfeld modular forms over F_q[t]"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Size of the constant field F_q.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,
    /// Modulus of F_q over F_p as comma-separated coefficients, lowest first.
    #[arg(long = "field-modulus", global = true)]
    pub field_modulus: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// small, medium, large, or a candidate count.
    #[arg(long, global = true, env = "HECKEFT_BUDGET", default_value = "medium")]
    pub budget: String,
    /// Laurent precision (relative, in powers of 1/t).
    #[arg(long, global = true, env = "HECKEFT_PREC", default_value_t = 60)]
    pub prec: i64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Goss polynomials of a finite lattice, or with generic coefficients.
    Goss {
        #[arg(long = "K")]
        k_max: usize,
        /// Comma-separated basis of L in F_q(t); empty for L = {0}.
        #[arg(long)]
        lattice: Option<String>,
        /// Print only G_k.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Right coset representatives of GL_r(A) diag(p,1,...,1) GL_r(A).
    Cosets {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        p: String,
    },
    #[command(subcommand)]
    Hecke(HeckeCommand),
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Rank-2 u-expansion of a form, optionally followed by T_p.
    Expand {
        #[arg(long, value_enum)]
        form: FormName,
        /// Weight, for the Eisenstein series.
        #[arg(long)]
        k: Option<u32>,
        /// Number of Eisenstein series fed to the inversion, for alpha.
        #[arg(long = "J")]
        j: Option<usize>,
        #[arg(long)]
        p: Option<String>,
        /// Truncation of the input expansion.
        #[arg(long = "M")]
        m: usize,
    },
    /// Tests whether T_p f is a multiple of f.
    Eigen {
        #[arg(long, value_enum)]
        form: FormName,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        p: String,
        #[arg(long = "M")]
        m: usize,
    },
    /// The u^(q-1) coefficient of T_t(Delta^2) against its closed form.
    Nonexample {
        #[arg(long = "M")]
        m: Option<usize>,
    },
    /// Runs the invariant suite and prints a pass/fail table.
    Verify,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCommand {
    /// Product of two elements, e.g. 'T(t,1)' 'T(t,1)'.
    Mul {
        #[arg(long, default_value_t = 2)]
        r: usize,
        x: String,
        y: String,
    },
    /// Writes a p-primary element as a polynomial in T_1..T_r.
    Express {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        p: String,
        x: String,
    },
    /// The sum of all double cosets of determinant N.
    Tn {
        #[arg(long, default_value_t = 2)]
        r: usize,
        n: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// Hermite form and elementary divisors of a matrix given as 't,1;0,t'.
    Snf { rows: String },
    /// Sublattices of A^r with the given index type, e.g. '(t,1)'.
    Enum {
        #[arg(long = "type")]
        index_type: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormName {
    G1,
    Delta,
    Delta2,
    Eisenstein,
    Alpha,
}

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or an exhausted budget.
    Usage(String),
    /// A mathematical check came out false.
    Check,
    Internal(String),
}

impl Failure {
    pub fn flag(flag: &str, err: impl std::fmt::Display) -> Self {
        Failure::Usage(format!("{flag}: {err}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidField(_)
            | Error::Parse(_)
            | Error::Reducible(_)
            | Error::RankMismatch(..)
            | Error::InvalidIndexType(_)
            | Error::MixedPrimeSupport(_)
            | Error::OutOfRange(_)
            | Error::BudgetExceeded { .. }
            | Error::PrecisionExhausted(_)
            | Error::Insufficient(_)
            | Error::Singular
            | Error::DependentBasis => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

/// The field named by --q and --field-modulus.
pub fn build_field(g: &Global) -> Result<Field, Failure> {
    let Some(m) = &g.field_modulus else {
        return FqContext::of_order(g.q).map_err(|e| Failure::flag("--q", e));
    };
    let mut p = 2;
    while p <= g.q && !g.q.is_multiple_of(p) {
        p += 1;
    }
    let (mut e, mut rest) = (0, g.q);
    while rest > 1 && rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Failure::flag(
            "--q",
            format!("{} is not a prime power", g.q),
        ));
    }
    let coeffs = m
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::flag("--field-modulus", e))?;
    FqContext::new(p, e, Some(coeffs)).map_err(|e| Failure::flag("--field-modulus", e))
}

pub fn parse_budget(g: &Global) -> Result<Budget, Failure> {
    Budget::from_str(&g.budget).map_err(|e| Failure::flag("--budget", e))
}

/// Writes a report; a closed pipe is not an error worth reporting.
fn emit(out: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::execute(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err((Failure::Check, out)) => {
            emit(&out);
            ExitCode::from(1)
        }
        Err((Failure::Usage(msg), _)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err((Failure::Internal(msg), _)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
