//! `clique-spectra`: distance spectra of clique trees and verification
//! sweeps over them.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails
//! and 2 on usage or input errors.

mod commands;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clique_spectra::enumeration::EnumSpec;
use clique_spectra::graph::GraphFile;
use clique_spectra::{clique_path, CliqueTree};

use commands::{Ranges, Target};
use output::{Format, Rendered};

const THREADS_VAR: &str = "CLIQUE_SPECTRA_THREADS";

#[derive(Parser)]
#[command(name = "clique-spectra", version, about = "Distance spectra and energy of clique trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Block sizes of a clique path, e.g. 3,2,4.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// JSON graph file with a `blocks` list.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, spectral radius, energy and inertia of one graph.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Block structure, edges and distance matrix of one graph.
    Graph {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification sweep.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        n1_max: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Quotient matrix of P_{n1+1,2,...,2,n2+1} with k blocks.
    Quotient {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n2: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximum distance energy over all clique trees with the given block
    /// multiset, or with n vertices and k blocks.
    Extremal {
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["n", "k"])]
        sizes: Option<Vec<usize>>,
        #[arg(long, requires = "k")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        k: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load(source: &Source) -> Result<CliqueTree, UsageError> {
    if let Some(sizes) = &source.sizes {
        if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
            return Err(UsageError(format!("--sizes: block size must be at least 2, got {s}")));
        }
        return clique_path(sizes).map_err(|e| UsageError(format!("--sizes: {e}")));
    }
    let path = source.graph.as_ref().expect("clap enforces one source");
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("--graph {}: {e}", path.display())))?;
    GraphFile::parse(&text)
        .and_then(|f| f.build())
        .map_err(|e| UsageError(format!("--graph {}: {e}", path.display())))
}

fn check_min(flag: &str, value: Option<usize>, min: usize) -> Result<(), UsageError> {
    match value {
        Some(v) if v < min => Err(UsageError(format!("--{flag} must be at least {min}, got {v}"))),
        _ => Ok(()),
    }
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| UsageError(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| UsageError(format!("{THREADS_VAR}: {e}")))
}

fn run(cli: Cli) -> Result<(Rendered, OutputArgs), UsageError> {
    configure_threads()?;
    Ok(match cli.command {
        Command::Spectrum { source, output } => (commands::spectrum(&load(&source)?)?, output),
        Command::Graph { source, output } => (commands::graph(&load(&source)?), output),
        Command::Verify {
            target,
            n_max,
            k_max,
            n1_max,
            n,
            k,
            output,
        } => {
            check_min("n-max", n_max, 2)?;
            check_min("k-max", k_max, 2)?;
            check_min("n1-max", n1_max, 1)?;
            check_min("n", n, 2)?;
            check_min("k", k, 1)?;
            if k.is_some() && n.is_none() {
                return Err(UsageError("--k requires --n".into()));
            }
            if (n.is_some() || k.is_some()) && target != Target::Conjecture {
                return Err(UsageError("--n and --k apply only to the conjecture target".into()));
            }
            if let (Some(n), Some(k)) = (n, k) {
                if k >= n {
                    return Err(UsageError(format!("--k must be at most n - 1 = {}, got {k}", n - 1)));
                }
            }
            let ranges = Ranges {
                n_max,
                k_max,
                n1_max,
                n,
                k,
            };
            let reports = commands::verify(target, &ranges)?;
            (commands::reports(commands::target_name(target), reports), output)
        }
        Command::Quotient { n1, k, n2, output } => {
            check_min("n1", Some(n1), 1)?;
            check_min("n2", Some(n2), 1)?;
            check_min("k", Some(k), 2)?;
            (commands::quotient(n1, k, n2)?, output)
        }
        Command::Extremal { sizes, n, k, output } => {
            let spec = match (sizes, n, k) {
                (Some(sizes), _, _) => EnumSpec::multiset(&sizes),
                (None, Some(n), Some(k)) => EnumSpec::by_nk(n, k),
                _ => return Err(UsageError("either --sizes or both --n and --k are required".into())),
            };
            (commands::extremal(&spec)?, output)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((rendered, out)) => {
            if let Err(e) = output::emit(&rendered, out.format, out.out.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if rendered.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
