//! On-disk cache of theta series, one JSON file per request:
//! `{"version": 1, "key": …, "pairs": [[doubled_exponent, "coefficient"], …]}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{QuotientGroup, RationalLattice};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    version: u32,
    key: String,
    pairs: Vec<(u32, String)>,
}

#[derive(Debug, Deserialize)]
struct VersionOnly {
    version: u32,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Cache(e.to_string())
}

/// Hash of the canonical basis; equal point sets hash equally.
pub fn lattice_hash(l: &RationalLattice) -> String {
    let mut h = Sha256::new();
    h.update((l.ambient_dim() as u64).to_le_bytes());
    for row in l.basis() {
        for &x in row {
            h.update(x.to_le_bytes());
        }
        h.update(b";");
    }
    hex::encode(h.finalize())
}

pub fn request_key(l: &RationalLattice, shift: &[i64], max_d: u32) -> String {
    let shift: Vec<String> = shift.iter().map(i64::to_string).collect();
    format!("theta;lattice={};shift={};max_d={}", lattice_hash(l), shift.join(","), max_d)
}

#[derive(Debug, Clone)]
pub struct ThetaCache {
    dir: PathBuf,
}

impl ThetaCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io)?;
        Ok(ThetaCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.join(format!("{}.json", &digest[..32]))
    }

    pub fn get(&self, key: &str, max_d: u32) -> Option<QSeries> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.version != CACHE_VERSION || e.key != key {
            return None;
        }
        let pairs: Option<Vec<(u32, BigInt)>> = e.pairs.into_iter().map(|(d, c)| c.parse().ok().map(|c| (d, c))).collect();
        QSeries::from_pairs(max_d, pairs?).ok()
    }

    /// Atomically replaces the entry for `key`.
    pub fn put(&self, key: &str, s: &QSeries) -> Result<()> {
        let e = Entry { version: CACHE_VERSION, key: key.to_string(), pairs: s.pairs() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(serde_json::to_string(&e).map_err(io)?.as_bytes()).map_err(io)?;
        tmp.persist(self.path(key)).map_err(io)?;
        Ok(())
    }

    pub fn theta_coset(&self, l: &RationalLattice, shift: &[i64], max_d: u32, ceiling: u64) -> Result<QSeries> {
        let key = request_key(l, shift, max_d);
        if let Some(s) = self.get(&key, max_d) {
            return Ok(s);
        }
        let s = l.theta_coset(shift, max_d, ceiling)?;
        self.put(&key, &s)?;
        Ok(s)
    }
}

/// Theta of a coset, through the cache when one is given.
pub fn theta_cached(cache: Option<&ThetaCache>, l: &RationalLattice, shift: &[i64], max_d: u32, ceiling: u64) -> Result<QSeries> {
    match cache {
        Some(c) => c.theta_coset(l, shift, max_d, ceiling),
        None => l.theta_coset(shift, max_d, ceiling),
    }
}

/// Class thetas of `sup / sub` for every `sub` in `subs`, indexed by mask.
/// Entries are keyed like single cosets, by `sub` and the class
/// representative, so they are shared with [`theta_cached`]. A miss on any
/// class triggers one enumeration of `sup` for all of them.
pub fn binned_theta_cached(
    cache: Option<&ThetaCache>,
    sup: &RationalLattice,
    subs: &[&RationalLattice],
    max_d: u32,
    ceiling: u64,
) -> Result<Vec<(QuotientGroup, Vec<QSeries>)>> {
    let groups: Vec<QuotientGroup> = subs.iter().map(|s| sup.quotient(s)).collect::<Result<_>>()?;
    let keys: Vec<Vec<String>> = groups
        .iter()
        .zip(subs)
        .map(|(g, s)| (0..1u64 << g.invariants().len()).map(|m| request_key(s, &g.element_of_mask(m), max_d)).collect())
        .collect();
    if let Some(c) = cache {
        let hit: Option<Vec<Vec<QSeries>>> = keys.iter().map(|ks| ks.iter().map(|k| c.get(k, max_d)).collect()).collect();
        if let Some(h) = hit {
            return Ok(groups.into_iter().zip(h).collect());
        }
    }
    let refs: Vec<&QuotientGroup> = groups.iter().collect();
    let bins = sup.binned_theta(&refs, max_d, ceiling)?;
    if let Some(c) = cache {
        for (ks, b) in keys.iter().zip(&bins) {
            for (k, s) in ks.iter().zip(b) {
                c.put(k, s)?;
            }
        }
    }
    Ok(groups.into_iter().zip(bins).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GcReport {
    pub freed_bytes: u64,
    pub removed: Vec<PathBuf>,
    pub unreadable: Vec<PathBuf>,
}

/// Deletes entries whose version tag is not current. Files that cannot be
/// read or parsed are reported and left alone.
pub fn cache_gc(dir: &Path) -> Result<GcReport> {
    let mut report = GcReport::default();
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    for p in entries {
        let parsed = fs::read_to_string(&p).ok().and_then(|t| serde_json::from_str::<VersionOnly>(&t).ok());
        match parsed {
            Some(v) if v.version == CACHE_VERSION => {}
            Some(_) => {
                let size = fs::metadata(&p).map(|m| m.len()).unwrap_or(0);
                fs::remove_file(&p).map_err(io)?;
                report.freed_bytes += size;
                report.removed.push(p);
            }
            None => report.unreadable.push(p),
        }
    }
    Ok(report)
}
