mod cache;
mod compute;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffsum_core::{Error, FieldOrder, PrecisionConfig};

use cache::{CacheDir, TableKind};

/// Exit status: 0 success / every claim holds, 1 a claim failed, 2 undecided
/// or not enough certified digits, 3 usage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Undecided = 2,
    Usage = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// An error plus the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Usage,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InsufficientPrecision { .. } => Status::Undecided,
            _ => Status::Usage,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ffsum", version, about = "Certified Erdős sums over F_q[x]")]
pub struct Cli {
    /// Directory for cached count tables.
    #[arg(long, global = true, env = "FFSUM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified value of F(I_{k,q}), the sum of 1/(deg f q^deg f) over monic f with k irreducible factors.
    Compute(ComputeArgs),
    /// A grid of certified values, k ascending then q ascending.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Build, inspect or clear cached count tables.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u32,
    /// Largest irreducible degree counted exactly (default depends on q).
    #[arg(long = "degree-bound")]
    degree_bound: Option<u32>,
    #[arg(long, default_value_t = 256)]
    bits: u32,
    /// Decimal digits to print; an error if fewer are certified.
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON record here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7")]
    q: Vec<u64>,
    /// `K`, `A..B` (inclusive) or a comma list.
    #[arg(long, default_value = "1..10")]
    k: String,
    /// Degree bound for every q (default depends on q).
    #[arg(long = "degree-bound")]
    degree_bound: Option<u32>,
    #[arg(long, default_value_t = 256)]
    bits: u32,
    /// Print exactly this many truncated digits per cell instead of all certified ones.
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Mertens,
    Lemma32,
    BanksMartin,
    Bounds,
    Universal,
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Field order (banks-martin, oracle).
    #[arg(long)]
    q: Option<u64>,
    /// Largest field order (mertens, lemma32, bounds, universal).
    #[arg(long)]
    qmax: Option<u64>,
    /// Largest degree cutoff (mertens, lemma32).
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest k (banks-martin, bounds).
    #[arg(long)]
    kmax: Option<u32>,
    /// Largest enumerated degree (oracle).
    #[arg(long)]
    maxdeg: Option<u32>,
    #[arg(long = "degree-bound")]
    degree_bound: Option<u32>,
    #[arg(long, default_value_t = 256)]
    bits: u32,
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Compute a table and store it.
    Build {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long)]
        q: u64,
        #[arg(long = "degree-bound")]
        degree_bound: u32,
        /// Largest k (smooth tables).
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// List cached tables and re-check their invariants.
    Inspect,
    /// Remove cached tables, optionally only one kind or one q.
    Clear {
        #[arg(value_enum)]
        kind: Option<TableKind>,
        #[arg(long)]
        q: Option<u64>,
    },
}

/// Degree bounds used for the published tables.
pub fn default_degree_bound(q: u64) -> u32 {
    match q {
        2 => 200,
        3 | 4 => 150,
        _ => 110,
    }
}

pub fn field(q: u64) -> Result<FieldOrder, Failure> {
    FieldOrder::new(q).map_err(Failure::from)
}

pub fn precision(bits: u32) -> Result<PrecisionConfig, Failure> {
    PrecisionConfig::new(bits).map_err(Failure::from)
}

fn cache_dir(cli: &Option<PathBuf>) -> Result<Option<CacheDir>, Failure> {
    cli.as_ref()
        .map(|p| {
            CacheDir::new(p)
                .map_err(|e| Failure::usage(format!("cache directory {}: {e}", p.display())))
        })
        .transpose()
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let cache = cache_dir(&cli.cache_dir)?;
    match cli.command {
        Command::Compute(args) => compute::compute(&args, cache.as_ref()),
        Command::Table(args) => compute::table(&args, cache.as_ref()),
        Command::Verify(args) => verify::verify(&args),
        Command::Cache { action } => {
            let cache = cache.ok_or_else(|| {
                Failure::usage("no cache directory: pass --cache-dir or set FFSUM_CACHE_DIR")
            })?;
            cache_command(action, &cache)
        }
    }
}

fn cache_command(action: CacheAction, cache: &CacheDir) -> Result<Status, Failure> {
    match action {
        CacheAction::Build {
            kind,
            q,
            degree_bound,
            kmax,
        } => {
            let fq = field(q)?;
            if degree_bound == 0 {
                return Err(Failure::usage("--degree-bound must be positive"));
            }
            let fetch = match kind {
                TableKind::Irreducible => cache.irreducible(fq, degree_bound).map(|r| r.1),
                TableKind::Smooth => cache.smooth(fq, kmax, degree_bound).map(|r| r.1),
            }
            .map_err(Failure::usage)?;
            let k = (kind == TableKind::Smooth).then_some(kmax);
            let name = cache::file_name(kind, q, degree_bound, k);
            match fetch {
                cache::Fetch::Hit => println!("{name}: already cached and valid"),
                cache::Fetch::Built => println!("{name}: built"),
                cache::Fetch::Rebuilt(why) => println!("{name}: rebuilt ({why})"),
            }
            Ok(Status::Ok)
        }
        CacheAction::Inspect => {
            let mut status = Status::Ok;
            let files = cache.list().map_err(|e| Failure::usage(e.to_string()))?;
            if files.is_empty() {
                println!("{}: empty", cache.root().display());
            }
            for path in files {
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                match inspect(&path) {
                    Ok(line) => println!("{name}: {line}"),
                    Err(e) => {
                        println!("{name}: INVALID ({e}); will be rebuilt on next use");
                        status = Status::Failed;
                    }
                }
            }
            Ok(status)
        }
        CacheAction::Clear { kind, q } => {
            let files = cache.list().map_err(|e| Failure::usage(e.to_string()))?;
            let mut removed = 0;
            for path in files {
                let Ok(f) = CacheDir::load(&path) else {
                    if kind.is_none() && q.is_none() {
                        std::fs::remove_file(&path).map_err(|e| Failure::usage(e.to_string()))?;
                        removed += 1;
                    }
                    continue;
                };
                if kind.is_some_and(|k| k != f.kind) || q.is_some_and(|q| q != f.q) {
                    continue;
                }
                std::fs::remove_file(&path).map_err(|e| Failure::usage(e.to_string()))?;
                removed += 1;
            }
            println!("removed {removed} file(s)");
            Ok(Status::Ok)
        }
    }
}

fn inspect(path: &std::path::Path) -> Result<String, String> {
    let f = CacheDir::load(path)?;
    match f.kind {
        TableKind::Irreducible => {
            let t = f.to_irreducible()?;
            let n = t.max_degree().min(12);
            let ok = t.necklace_holds(n);
            Ok(format!(
                "irreducible counts, q = {}, degrees 1..={}; necklace identity at n = {n}: {}",
                f.q,
                t.max_degree(),
                if ok { "holds" } else { "fails" }
            ))
        }
        TableKind::Smooth => {
            let t = f.to_smooth()?;
            let k = t.k_max();
            let n = (k * t.smoothness()).min(12).max(k);
            let ok = k == 0 || t.log_derivative_holds(k, n);
            Ok(format!(
                "smooth counts, q = {}, k <= {k}, degree bound {}; log-derivative identity at (k, n) = ({k}, {n}): {}",
                f.q,
                t.smoothness(),
                if ok { "holds" } else { "fails" }
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Status::Ok.into()
                }
                _ => Status::Usage.into(),
            };
        }
    };
    match run(cli) {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status.into()
        }
    }
}
