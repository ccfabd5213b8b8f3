use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use scext_cli::config::{CACHE_ENV, DEFAULT_ORDER};
use scext_cli::{gc, run, ConfigError, LatticeSel, RunConfig, Suite};

const EXIT_CONFIG: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "scext", version, about = "Exact checks for simple current extensions of lattice VOAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum)]
    lattice: Option<LatticeSel>,

    /// Truncate rank-8 and rank-16 series at q^N.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    order: u32,

    /// Truncate rank-24 theta series at q^N.
    #[arg(long = "theta-order-24", global = true, default_value_t = DEFAULT_ORDER)]
    theta_order_24: u32,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,

    /// Refuse enumerations predicted to exceed this many vectors.
    #[arg(long = "max-vectors", global = true)]
    max_vectors: Option<u64>,

    /// Record per-check wall time (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    Golay,
    Leechlab,
    Qspace,
    Voamod,
    Classify,
    /// Run one suite or all of them.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Delete cache entries with a stale version tag.
    CacheGc {
        dir: Option<PathBuf>,
    },
}

fn config(cli: &Cli, suite: Suite) -> RunConfig {
    let mut cfg = RunConfig::new(suite);
    cfg.lattice = cli.lattice;
    cfg.order = cli.order;
    cfg.theta_order_24 = cli.theta_order_24;
    cfg.threads = cli.threads;
    cfg.json = cli.json.clone();
    cfg.cache = cli.cache.clone();
    cfg.timings = cli.timings;
    if let Some(m) = cli.max_vectors {
        cfg.max_vectors = m;
    }
    cfg
}

fn write_json(path: &Option<PathBuf>, text: &str) -> Result<(), ConfigError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| ConfigError(format!("writing {}: {e}", p.display()))),
        None => Ok(()),
    }
}

fn execute(cli: Cli) -> Result<u8, ConfigError> {
    let suite = match &cli.command {
        Command::Golay => Suite::Golay,
        Command::Leechlab => Suite::Leechlab,
        Command::Qspace => Suite::Qspace,
        Command::Voamod => Suite::Voamod,
        Command::Classify => Suite::Classify,
        Command::Verify { suite } => *suite,
        Command::CacheGc { dir } => {
            let dir = dir.clone().or(cli.cache.clone()).ok_or_else(|| ConfigError(format!("cache-gc needs a directory or {CACHE_ENV}")))?;
            let r = gc(&dir)?;
            for p in &r.unreadable {
                eprintln!("unreadable entry left in place: {}", p.display());
            }
            println!("removed {} entries, freed {} bytes", r.removed.len(), r.freed_bytes);
            write_json(&cli.json, &(serde_json::to_string_pretty(&r).expect("serializes") + "\n"))?;
            return Ok(0);
        }
    };
    let cfg = config(&cli, suite);
    let report = run(&cfg)?;
    print!("{}", report.to_text());
    write_json(&cfg.json, &report.to_json())?;
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
