//! `e2sieve`: exact certification of sieve ratio bounds, with quadrature
//! oracles and admissible-tuple utilities.

use clap::{Parser, Subcommand};
use e2sieve_cli::commands::{
    cmd_certify, cmd_oracle_forms, cmd_oracle_monomials, cmd_oracle_x0, cmd_table,
    cmd_tuple_check, cmd_tuple_search, CertifySource, TupleSource,
};
use e2sieve_cli::{CommandOutput, ExitStatus, GlobalOpts};
use std::io::{self, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "e2sieve",
    version,
    about = "Exact quadratic-form certification of sieve ratio bounds",
    long_about = "Builds the sieve functionals as exact quadratic forms, maximizes and \
                  certifies the ratio that drives the bound table, and verifies the \
                  admissible tuples behind each diameter. All certified claims are \
                  established in exact arithmetic; exit code 0 means every requested \
                  claim was proved."
)]
struct Cli {
    /// First rung of the certification precision schedule, in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,

    /// Last rung of the certification precision schedule, in bits.
    #[arg(long, global = true, default_value_t = 1024)]
    max_precision_bits: u32,

    /// Seed for every randomized component.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Largest denominator when snapping float vectors to rationals.
    #[arg(long, global = true, default_value = "1000000000000000000000")]
    denominator_bound: String,

    /// Attach wall-clock times to records (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute, certify, and print all eight bound-table rows.
    Table {
        /// Directory holding the coefficient fixtures k*.json.
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
    /// Certify that the ratio exceeds ν for one configuration.
    Certify {
        /// Simplex dimension.
        #[arg(long)]
        k: usize,
        /// Level of distribution, e.g. "1" or "1/2".
        #[arg(long)]
        theta: String,
        /// The integer the ratio must exceed.
        #[arg(long)]
        nu: u32,
        /// Coefficient file with the exact vector to certify.
        #[arg(long, conflicts_with = "optimize")]
        coeffs: Option<PathBuf>,
        /// Derive the vector from scratch on this many basis terms.
        #[arg(long)]
        optimize: Option<usize>,
    },
    /// Numerical cross-checks of the exact machinery.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
    /// Admissible-tuple verification and search.
    Tuple {
        #[command(subcommand)]
        what: TupleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Monomial simplex integrals against their closed forms.
    Monomials {
        /// Largest complement/power exponent to sweep.
        #[arg(long, default_value_t = 2)]
        max_b: usize,
        /// Largest second-power-sum exponent to sweep.
        #[arg(long, default_value_t = 1)]
        max_c: usize,
        /// Largest simplex dimension to sweep.
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        /// Check the alternating binomial identity up to this n.
        #[arg(long, default_value_t = 12)]
        binomial_n: usize,
    },
    /// Assembled quadratic forms against direct quadrature.
    Forms {
        /// Simplex dimension (tilde checks need 2 to 4).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Number of leading basis terms in the test mixture.
        #[arg(long, default_value_t = 3)]
        terms: usize,
        /// Level of distribution for the tilde forms.
        #[arg(long, default_value = "1/2")]
        theta: String,
        /// Monte Carlo sample count (larger k) or node hint.
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        /// Integration cutoff for the weighted integrals.
        #[arg(long, default_value_t = 1e-3)]
        eta: f64,
    },
    /// Scalar-layer integrals against quadrature and the series route.
    X0 {
        /// Level of distribution.
        #[arg(long, default_value = "1/2")]
        theta: String,
        /// Integration cutoff for the tail-convergence checks.
        #[arg(long, default_value_t = 1e-3)]
        eta: f64,
        /// Largest first index of the mu table to check.
        #[arg(long, default_value_t = 2)]
        max_m: usize,
        /// Largest second index of the mu table to check.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum TupleCmd {
    /// Verify admissibility and report the diameter of a tuple.
    Check {
        /// File holding the tuple (whitespace- or comma-separated).
        file: Option<PathBuf>,
        /// Check the bundled witness for this dimension instead.
        #[arg(long, conflicts_with = "file")]
        bundled: Option<usize>,
    },
    /// Search for a narrow admissible tuple.
    Search {
        /// Tuple size to search for.
        #[arg(long)]
        k: usize,
        /// "greedy_residue_sieve" or "shifted_primes".
        #[arg(long, default_value = "greedy_residue_sieve")]
        strategy: String,
        /// Work budget in class evaluations.
        #[arg(long, default_value_t = 40_000_000)]
        max_evals: u64,
        /// Write the tuple found to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> e2sieve::Result<CommandOutput> {
    let denominator_bound = cli
        .denominator_bound
        .parse()
        .map_err(|_| e2sieve::Error::Parse(format!(
            "bad denominator bound {:?}",
            cli.denominator_bound
        )))?;
    let opts = GlobalOpts {
        precision_bits: cli.precision_bits,
        max_precision_bits: cli.max_precision_bits,
        seed: cli.seed,
        denominator_bound,
        timings: cli.timings,
    };
    match cli.command {
        Command::Table { fixtures } => cmd_table(&fixtures, &opts),
        Command::Certify {
            k,
            theta,
            nu,
            coeffs,
            optimize,
        } => {
            let source = match (coeffs, optimize) {
                (Some(path), None) => CertifySource::File(path),
                (None, Some(n)) => CertifySource::Optimize(n),
                _ => {
                    return Err(e2sieve::Error::InvalidInput(
                        "pass exactly one of --coeffs FILE or --optimize N".into(),
                    ))
                }
            };
            cmd_certify(k, &theta, nu, &source, &opts)
        }
        Command::Oracle { what } => match what {
            OracleCmd::Monomials {
                max_b,
                max_c,
                max_k,
                binomial_n,
            } => cmd_oracle_monomials(max_b, max_c, max_k, binomial_n, &opts),
            OracleCmd::Forms {
                k,
                terms,
                theta,
                samples,
                eta,
            } => cmd_oracle_forms(k, terms, &theta, samples, eta, &opts),
            OracleCmd::X0 {
                theta,
                eta,
                max_m,
                max_n,
            } => cmd_oracle_x0(&theta, eta, max_m, max_n, &opts),
        },
        Command::Tuple { what } => match what {
            TupleCmd::Check { file, bundled } => {
                let source = match (file, bundled) {
                    (Some(path), None) => TupleSource::File(path),
                    (None, Some(k)) => TupleSource::Bundled(k),
                    _ => {
                        return Err(e2sieve::Error::InvalidInput(
                            "pass a tuple file or --bundled K".into(),
                        ))
                    }
                };
                cmd_tuple_check(&source, &opts)
            }
            TupleCmd::Search {
                k,
                strategy,
                max_evals,
                out,
            } => cmd_tuple_search(k, &strategy, max_evals, out.as_deref(), &opts),
        },
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not input errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(ExitStatus::InputError.code());
        }
    };
    match run(cli) {
        Ok(output) => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for record in &output.records {
                match serde_json::to_string(record) {
                    Ok(line) => emit(&mut out, &line, true),
                    Err(e) => {
                        eprintln!("record serialization failed: {e}");
                        std::process::exit(ExitStatus::InputError.code());
                    }
                }
            }
            emit(&mut out, &output.summary, false);
            std::process::exit(output.status.code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(ExitStatus::InputError.code());
        }
    }
}

/// Writes to stdout, exiting quietly if the reader has closed the pipe
/// (e.g. `e2sieve table | head`).
fn emit(out: &mut impl Write, text: &str, newline: bool) {
    let result = if newline {
        writeln!(out, "{text}")
    } else {
        write!(out, "{text}")
    };
    if let Err(e) = result {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: failed writing to stdout: {e}");
        std::process::exit(ExitStatus::InputError.code());
    }
}
