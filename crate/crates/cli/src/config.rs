use std::path::PathBuf;

use clap::ValueEnum;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "SCEXT_CACHE";

pub const DEFAULT_ORDER: u32 = 3;
pub const ORDER_RANGE: std::ops::RangeInclusive<u32> = 2..=6;
pub const THETA24_RANGE: std::ops::RangeInclusive<u32> = 2..=4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum LatticeSel {
    Sqrt2e8,
    Bw16,
    Leech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Golay,
    Leechlab,
    Qspace,
    Voamod,
    Classify,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Golay => "golay",
            Suite::Leechlab => "leechlab",
            Suite::Qspace => "qspace",
            Suite::Voamod => "voamod",
            Suite::Classify => "classify",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Golay, Suite::Leechlab, Suite::Qspace, Suite::Voamod, Suite::Classify],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub suite: Suite,
    pub lattice: Option<LatticeSel>,
    /// Truncation q^order for rank-8 and rank-16 module data.
    pub order: u32,
    /// Truncation q^order for the rank-24 theta series.
    pub theta_order_24: u32,
    pub max_vectors: u64,
    pub cache: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub threads: Option<usize>,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            suite,
            lattice: None,
            order: DEFAULT_ORDER,
            theta_order_24: DEFAULT_ORDER,
            max_vectors: scext::lattice::enumerate::DEFAULT_CEILING,
            cache: None,
            json: None,
            threads: None,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError(m));
        if !ORDER_RANGE.contains(&self.order) {
            return bad(format!("--order {} outside {ORDER_RANGE:?}", self.order));
        }
        if !THETA24_RANGE.contains(&self.theta_order_24) {
            return bad(format!("--theta-order-24 {} outside {THETA24_RANGE:?}", self.theta_order_24));
        }
        if self.max_vectors == 0 {
            return bad("--max-vectors must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("--threads must be positive".into());
        }
        let allowed: &[LatticeSel] = match self.suite {
            Suite::Golay | Suite::Qspace => &[],
            Suite::Leechlab => &[LatticeSel::Leech],
            Suite::Voamod => &[LatticeSel::Sqrt2e8, LatticeSel::Bw16, LatticeSel::Leech],
            Suite::Classify => &[LatticeSel::Sqrt2e8, LatticeSel::Bw16],
            Suite::All => &[],
        };
        if let Some(l) = self.lattice {
            if !allowed.contains(&l) {
                return bad(format!("--lattice {} does not apply to {}", l.to_possible_value().expect("named").get_name(), self.suite.name()));
            }
        }
        Ok(())
    }

    pub fn max_d(&self) -> u32 {
        2 * self.order
    }

    pub fn max_d_24(&self) -> u32 {
        2 * self.theta_order_24
    }

    /// Whether a lattice-filtered suite includes `l`.
    pub fn wants(&self, l: LatticeSel) -> bool {
        self.lattice.is_none_or(|x| x == l)
    }
}
