//! blochwork: exact homological algebra from the command line. Every
//! subcommand emits one deterministic report; json is the source of truth
//! and csv/text are projections of the same document. Exit codes: 0 all
//! verifications passed, 1 a verification failed (stderr says which),
//! 2 usage or configuration error.

mod cache;
mod render;
mod reports;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cache::Cache;
use reports::HomologySpec;

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or configuration; exit 2.
    Usage(String),
    /// A verification failed or a budget was exceeded; exit 1.
    Failed(String),
    /// The report could not be written; exit 2.
    Io(String),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy)]
pub enum Kind {
    Homology,
    ExtTable,
    E2,
    Kunneth,
    Bloch,
    WitnessVerify,
    WitnessClasses,
    PaperTables,
}

#[derive(Parser)]
#[command(
    name = "blochwork",
    version,
    about = "Exact homological algebra workbench: group homology, Ext tables, Bloch groups, cyclotomic witness chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; json is canonical, csv and text are projections
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Report cache directory (default .blochwork-cache, or $BLOCHWORK_CACHE_DIR)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Compute without reading or writing the report cache
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Bar-complex homology of a small finite group
    Homology {
        #[command(subcommand)]
        family: Family,
    },
    /// ext(Z/2, Z/n) and ext(Z/n, Z/2) with the parity case split, for n up to a bound
    ExtTable {
        /// Largest n in the table
        #[arg(long)]
        max_n: u64,
    },
    /// E2 page entries E2[p,q] = H_p(S2, H_q(T2)) for the monomial group GM2(n)
    E2 {
        /// Order of the root of unity
        #[arg(long)]
        n: u64,
    },
    /// Kunneth decomposition of H_3 of the rank-2 torus Z/n x Z/n
    Kunneth {
        /// Order of the cyclic factors
        #[arg(long)]
        n: u64,
    },
    /// Pre-Bloch group, Bloch group, Milnor K2 and the four-term sequence over F_q
    Bloch {
        /// Field order, a prime power
        #[arg(long)]
        q: u64,
    },
    /// Cyclotomic witness chains over GM2(n)
    Witness {
        #[command(subcommand)]
        action: WitnessAction,
    },
    /// Bundled report artifacts
    Report {
        #[command(subcommand)]
        which: ReportKind,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The cyclic group Z/n, with closed-form comparison
    Cyclic {
        #[arg(long)]
        n: u64,
        /// Highest homology degree to report
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Cap on the top bar-basis size
        #[arg(long)]
        budget: Option<u128>,
    },
    /// The product Z/n x Z/m
    Product {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// The monomial group GM2(n) of order 2n²
    Group {
        /// Order of the root of unity
        #[arg(long = "gm2")]
        gm2: u64,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long)]
        budget: Option<u128>,
    },
}

#[derive(Subcommand)]
enum WitnessAction {
    /// Check the four boundary identities and the chi decomposition (even n)
    Verify {
        #[arg(long)]
        n: u64,
    },
    /// Resolve the homology classes of omega and chi (budgeted to n = 2)
    Classes {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum ReportKind {
    /// Ext case split, E2 page entries, and the witness identity checklist
    PaperTables,
}

fn describe(command: &Command) -> (Kind, String) {
    let key = |tail: String| format!("blochwork/1 {tail}");
    match command {
        Command::Homology { family } => {
            let tail = match family {
                Family::Cyclic { n, max_degree, budget } => {
                    format!("homology cyclic n={n} max-degree={max_degree} budget={budget:?}")
                }
                Family::Product { n, m, max_degree, budget } => {
                    format!("homology product n={n} m={m} max-degree={max_degree} budget={budget:?}")
                }
                Family::Group { gm2, max_degree, budget } => {
                    format!("homology gm2 n={gm2} max-degree={max_degree} budget={budget:?}")
                }
            };
            (Kind::Homology, key(tail))
        }
        Command::ExtTable { max_n } => (Kind::ExtTable, key(format!("ext-table max-n={max_n}"))),
        Command::E2 { n } => (Kind::E2, key(format!("e2 n={n}"))),
        Command::Kunneth { n } => (Kind::Kunneth, key(format!("kunneth n={n}"))),
        Command::Bloch { q } => (Kind::Bloch, key(format!("bloch q={q}"))),
        Command::Witness { action } => match action {
            WitnessAction::Verify { n } => {
                (Kind::WitnessVerify, key(format!("witness verify n={n}")))
            }
            WitnessAction::Classes { n } => {
                (Kind::WitnessClasses, key(format!("witness classes n={n}")))
            }
        },
        Command::Report { which } => match which {
            ReportKind::PaperTables => (Kind::PaperTables, key("report paper-tables".to_string())),
        },
    }
}

fn compute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Homology { family } => {
            let (spec, max_degree, budget) = match family {
                Family::Cyclic { n, max_degree, budget } => {
                    (HomologySpec::Cyclic { n: *n }, *max_degree, *budget)
                }
                Family::Product { n, m, max_degree, budget } => {
                    (HomologySpec::Product { n: *n, m: *m }, *max_degree, *budget)
                }
                Family::Group { gm2, max_degree, budget } => {
                    (HomologySpec::Gm2 { n: *gm2 }, *max_degree, *budget)
                }
            };
            reports::homology(&spec, max_degree, budget)
        }
        Command::ExtTable { max_n } => reports::ext_table(*max_n),
        Command::E2 { n } => reports::e2(*n),
        Command::Kunneth { n } => reports::kunneth(*n),
        Command::Bloch { q } => reports::bloch(*q),
        Command::Witness { action } => match action {
            WitnessAction::Verify { n } => reports::witness_verify(*n),
            WitnessAction::Classes { n } => reports::witness_classes(*n),
        },
        Command::Report { which } => match which {
            ReportKind::PaperTables => reports::paper_tables(),
        },
    }
}

fn cache_for(cli: &Cli) -> Cache {
    if cli.no_cache {
        return Cache::disabled();
    }
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("BLOCHWORK_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".blochwork-cache"));
    Cache::new(Some(dir))
}

fn emit(cli: &Cli, rendered: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{rendered}\n"))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{rendered}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(format!("cannot write report: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let (kind, cache_key) = describe(&cli.command);
    let json = cache_for(cli).get_or_compute(&cache_key, || compute(&cli.command))?;
    let value: serde_json::Value =
        serde_json::from_str(&json).expect("cached reports are valid JSON");
    let failures = render::verdict(kind, &value);
    emit(cli, &render::render(kind, cli.format, &value, &json))?;
    for f in &failures {
        eprintln!("verification failed: {f}");
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
