//! Command-line front end for `fermat-core`.
//!
//! Every experiment is one subcommand; output is a CSV table (header row
//! first) or one JSON document `{config, rows, runtime_seconds}`.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, ValueEnum};
use serde::Serialize;

mod checkpoint;
mod commands;
pub mod output;

pub use output::{Cell, Table};

macro_rules! subcommands {
    ($($variant:ident => $name:literal [$($op:literal),*] $about:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand, Serialize)]
        pub enum Command {
            $(
                #[command(name = $name, about = $about)]
                #[serde(rename = $name)]
                $variant,
            )*
        }

        impl Command {
            pub const ALL: &'static [Command] = &[$(Command::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Command::$variant => $name,)*
                }
            }

            /// Library operations this subcommand reaches.
            pub fn operations(self) -> &'static [&'static str] {
                match self {
                    $(Command::$variant => &[$($op),*],)*
                }
            }
        }
    };
}

subcommands! {
    Prime => "prime" ["is_prime", "next_prime", "prime_range"]
        "Primality and next prime of --n, or the primes in [--lo, --hi]";
    PowMod => "pow-mod" ["pow_mod"] "--a ^ --n mod --m";
    Factor => "factor" ["factorize", "euler_phi", "moebius", "divisors"]
        "Factorization, φ, μ and divisors of --n";
    Order => "order" ["multiplicative_order"] "Multiplicative order of --a modulo --p";
    PhiSq => "phi-sq" ["phi_squared_sum"] "Σ φ(d)² over d | p-1";
    Cyclotomic => "cyclotomic" ["phi_m_eval", "reduce"] "Φ_m(a) and its reduced value";
    FactorCongruence => "factor-congruence" ["factor_congruence_check"]
        "Check that every prime factor of the reduced Φ_m(a) is 1 mod m";
    Coprime => "coprime" ["pairwise_coprime_check"] "Pairwise coprimality of the reduced Φ_m(a), m <= --m";
    Wieferich => "wieferich" ["wieferich_equivalence_check"] "q_p(a) = 0 against p² | Φ̃_{o_p(a)}(a)";
    Quotient => "quotient" ["fermat_quotient"] "Fermat quotient q_p(a)";
    Variants => "variants" ["quotient_variants"] "q, q', q'' and their agreement";
    FirstZero => "first-zero" ["first_solution_search"] "Least prime p in [--lo, --hi] with q_p(a) = 0";
    Solutions => "solutions" ["solutions_in_range"] "z in [2, p) with q_p(z) = 0";
    ZerosP2 => "zeros-p2" ["solutions_mod_p2"] "Z in [1, p²) with p ∤ Z and q_p(Z) = 0";
    Lift => "lift" ["lift_to_solution"] "Lift z = --a to Z = z + λp with q_p(Z) = --v";
    Crt => "crt" ["crt_solutions"] "CRT-combined solutions modulo the product of the p²";
    OrdersOfPowers => "orders-of-powers" ["orders_of_powers"] "Orders of g, g², … below p (g = --a)";
    Theta => "theta" ["theta_offsets"] "Offsets θ_j of the powers of a modulo p²";
    Classify => "classify" ["classify_primes"]
        "Primes in (--lo, --hi] by number of solutions, against the Poisson model";
    Coverage => "coverage" ["value_coverage"] "Residues never taken by q_p";
    LambdaStats => "lambda-stats" ["lambda_multiplicity", "multiplicity_survey"]
        "λ(z) = v witnesses at --p, or a survey over (--lo, --hi]";
    NtEquidist => "nt-equidist" ["equidistribution_nt"] "Solutions below (p-1)/t, primes p < --bound";
    Moments => "moments" ["sigma_moment"] "σ_n(p), exactly accumulated";
    BinomTail => "binom-tail" ["binomial_tail", "tail_upper_bound_check"] "P(X >= n), X ~ Bin(p-2, 1/p)";
    Ratio => "ratio" ["ratio_encadre"] "Normalized tail ratio and its two-sided bound";
    Epsilon => "epsilon" ["epsilon_exponent"] "Exponent ε with P = p^(-ε)";
    Cp => "cp" ["c_p", "c_p_bruteforce"] "Local coefficient c_p of Φ_m";
    PmProduct => "pm-product" ["p_m_product"] "∏ (1 - c_p/p²) over p = 1 + n·m, n <= --n";
    LocalTable => "local-table" ["local_solution_table"] "Solutions A mod p² with their orders";
    DpProduct => "dp-product" ["dp_product"] "∏ D_p for p <= --x with the Mertens split";
    CrtCount => "crt-count" ["crt_exact_count"] "Exact count of nonzero-quotient residues mod ∏ p²";
    Survey => "survey" ["survey_nonzero"] "A in [2, --y] with q_p(A) != 0 for all p <= --x";
    UpsilonEta => "upsilon-eta" ["upsilon", "eta", "eta_minus_upsilon"] "υ(p), η(p, C) and η - υ";
    SPartial => "s-partial" ["s_partial"] "S(x) = Σ_{p<=x} Σ_{d|p-1} φ(d)² / (p (p-1)²)";
    Series => "series" ["series_sums"] "Binomial, Stirling and full-tail series";
    P0 => "p0" ["p0_solver"] "Threshold prime p_0(a, C)";
    AvgCount => "avg-count" ["average_solution_count"] "Mean number of zero quotients, a in [--lo, --hi], p < --bound";
    TableSmall => "table-small" ["first_zeros_table"] "(a, p) with q_p(a) = 0, a in [--lo, --hi], p < --bound";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Numeric parameters; each subcommand reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize)]
pub struct Params {
    #[arg(long, global = true)]
    pub a: Option<u64>,
    /// A prime; arbitrary size where the computation allows it, or a
    /// comma-separated list for `crt`.
    #[arg(long, global = true)]
    pub p: Option<String>,
    #[arg(long, global = true)]
    pub lo: Option<u64>,
    #[arg(long, global = true)]
    pub hi: Option<u64>,
    #[arg(long, global = true)]
    pub m: Option<u64>,
    #[arg(long, global = true)]
    pub n: Option<u64>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// A residue, or a comma-separated list for `lambda-stats`.
    #[arg(long, global = true)]
    pub v: Option<String>,
    #[arg(long, global = true)]
    pub y: Option<u64>,
    #[arg(long, global = true)]
    pub x: Option<u64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long, global = true)]
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Parser, Serialize)]
#[command(name = "fermatq", version, about = "Fermat quotient and cyclotomic value experiments")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: Params,
    #[arg(long, global = true, default_value_t = default_threads())]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file holding a resumable cursor (`first-zero`, `survey`).
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fermat_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("checkpoint {0}")]
    Checkpoint(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use fermat_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(E::InvalidInput(_) | E::NotPrime(_) | E::DivisibleBase { .. } | E::NoBracket { .. }) => 2,
            _ => 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        if let (Some(lo), Some(hi)) = (self.params.lo, self.params.hi) {
            if lo > hi {
                return Err(CliError::Usage(format!("--lo {lo} exceeds --hi {hi}")));
            }
        }
        Ok(())
    }
}

/// Runs one configuration, writing the report to `out` and progress and
/// errors to `err`. Returns the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32 {
    match try_run(config, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                let mut cmd = <RunConfig as clap::CommandFactory>::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(config.command.name()) {
                    let _ = writeln!(err, "\n{}", sub.render_usage());
                }
            }
            e.exit_code()
        }
    }
}

fn try_run(config: &RunConfig, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build a pool of {} threads: {e}", config.threads)))?;
    let start = Instant::now();
    let table = pool.install(|| commands::execute(config, err))?;
    match config.format {
        Format::Csv => table.write_csv(out)?,
        Format::Json => table.write_json(out, config, start.elapsed().as_secs_f64())?,
    }
    Ok(())
}
