mod commands;
mod render;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lefpath::exact::ExactRational;
use lefpath::lattice::SystemFilter;

use commands::{HessianArgs, LatticeCheck};
use render::Outcome;
use scan::{Format, Mode, ScanConfig};

#[derive(Parser)]
#[command(name = "lefpath", version, about = "Exact Lefschetz and lattice-path checks for A(m,2) = Q[e1,e2]/(f_m, e2^m)")]
struct Cli {
    /// Print a JSON object {schema_version, command, inputs, results} instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    VertexDisjoint,
    DoublyVertexDisjoint,
}

impl From<FilterArg> for SystemFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => SystemFilter::All,
            FilterArg::VertexDisjoint => SystemFilter::VertexDisjoint,
            FilterArg::DoublyVertexDisjoint => SystemFilter::DoublyVertexDisjoint,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function of A(m,n)
    Hilbert {
        m: usize,
        n: usize,
        /// Use the closed form (n = 2 only)
        #[arg(long)]
        closed_form: bool,
    },
    /// Degree-i Hessian of the dual generator F_m, evaluated at (c1, c2)
    Hessian {
        m: usize,
        i: usize,
        /// Print the determinant
        #[arg(long)]
        det: bool,
        /// Print the rank
        #[arg(long)]
        rank: bool,
        /// Use the integer path-count matrix, (3m-3-2i)! times the Hessian at (1,0)
        #[arg(long)]
        paths: bool,
        /// Value of E1, e.g. 1 or 2/3 (default 1)
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<ExactRational>,
        /// Value of E2 (default 0)
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<ExactRational>,
    },
    /// Lattice-path checks for degree i
    Lattice {
        m: usize,
        i: usize,
        #[arg(value_enum)]
        check: LatticeCheck,
    },
    /// Per-degree SL / HLP / Hodge-Riemann verdicts for A(m,2)
    Report { m: usize },
    /// Run checks over ranges of m (and n)
    #[command(after_help = scan::CSV_HELP)]
    Scan {
        /// Range of m, e.g. 2..20 (inclusive) or 5
        #[arg(long, value_parser = scan::parse_range)]
        m: std::ops::RangeInclusive<usize>,
        /// Range of n for hilbert and partitions modes
        #[arg(long, value_parser = scan::parse_range, default_value = "2")]
        n: std::ops::RangeInclusive<usize>,
        /// Checks to run; repeat or comma-separate
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        mode: Vec<Mode>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Write to this file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads
        #[arg(long, env = "LEFPATH_JOBS", default_value_t = default_jobs())]
        jobs: usize,
    },
    /// The relation f_m and dual generator F_m, with their identities checked
    Presentation { m: usize },
    /// List path systems for degree i
    Systems {
        m: usize,
        i: usize,
        #[arg(long, value_enum, default_value = "doubly-vertex-disjoint")]
        filter: FilterArg,
        /// Print at most this many systems
        #[arg(long)]
        limit: Option<usize>,
        /// Group doubly vertex-disjoint systems by their flipped system
        #[arg(long)]
        classes: bool,
    },
    /// Partitions with parts <= n, none repeated m or more times
    Partitions {
        m: usize,
        n: usize,
        /// List the partitions
        #[arg(long)]
        list: bool,
    },
    /// Coefficients of C(x)^m (or its reciprocal) through x^order
    Catalan {
        m: usize,
        order: usize,
        #[arg(long)]
        reciprocal: bool,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> Result<bool> {
    let (name, outcome, output, force_json): (&str, Outcome, Option<PathBuf>, bool) = match cli.command {
        Command::Hilbert { m, n, closed_form } => ("hilbert", commands::hilbert(m, n, closed_form)?, None, false),
        Command::Hessian { m, i, det, rank, paths, c1, c2 } => (
            "hessian",
            commands::hessian(HessianArgs { m, i, det, rank, paths, c1, c2 })?,
            None,
            false,
        ),
        Command::Lattice { m, i, check } => ("lattice", commands::lattice(m, i, check)?, None, false),
        Command::Report { m } => ("report", commands::report(m)?, None, false),
        Command::Scan { m, n, mode, format, output, jobs } => {
            let cfg = ScanConfig { m, n, modes: mode, format, jobs };
            ("scan", scan::scan(&cfg)?, output, format == Format::Json)
        }
        Command::Presentation { m } => ("presentation", commands::presentation(m)?, None, false),
        Command::Systems { m, i, filter, limit, classes } => {
            ("systems", commands::systems(m, i, filter.into(), limit, classes)?, None, false)
        }
        Command::Partitions { m, n, list } => ("partitions", commands::partitions(m, n, list)?, None, false),
        Command::Catalan { m, order, reciprocal } => ("catalan", commands::catalan(m, order, reciprocal)?, None, false),
    };
    let body = if cli.json || force_json {
        serde_json::to_string_pretty(&outcome.envelope(name))?
    } else {
        outcome.text.clone()
    };
    match output {
        Some(path) => {
            std::fs::write(&path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{body}"),
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
