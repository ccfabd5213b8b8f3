//! Batch runner for the scext checks: configuration, report assembly and
//! cache maintenance behind the `scext` binary.

pub mod checks;
pub mod config;
pub mod report;

use std::path::Path;

use scext::lattice::cache::{cache_gc, GcReport, ThetaCache};

pub use config::{ConfigError, LatticeSel, RunConfig, Suite};
pub use report::{CheckRecord, Status, VerificationReport};

/// Runs the configured suite. Only configuration problems are errors;
/// failing or skipped checks are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<VerificationReport, ConfigError> {
    cfg.validate()?;
    let cache = match &cfg.cache {
        Some(dir) => Some(ThetaCache::open(dir).map_err(|e| ConfigError(format!("cache directory {}: {e}", dir.display())))?),
        None => None,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cfg.threads {
        pool = pool.num_threads(k);
    }
    let pool = pool.build().map_err(|e| ConfigError(format!("thread pool: {e}")))?;
    let mut report = VerificationReport::new(cfg.suite.name());
    pool.install(|| checks::Session::new(cfg, cache).run_suite(cfg.suite, &mut report));
    Ok(report)
}

pub fn gc(dir: &Path) -> Result<GcReport, ConfigError> {
    if !dir.is_dir() {
        return Err(ConfigError(format!("{} is not a directory", dir.display())));
    }
    cache_gc(dir).map_err(|e| ConfigError(e.to_string()))
}
