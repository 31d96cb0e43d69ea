use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complex::{build_nm_complex, DEFAULT_ENUMERATION_CAP};
use crate::graph::{canonical_form, Graph, DEFAULT_CANON_CAP};
use crate::homology::{reduced_betti, BettiTable, FieldSpec};

use super::CliError;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "NMK_CACHE_DIR";

/// SHA-256 of the parts joined by a unit separator, as hex.
pub fn digest_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0x1f]);
        }
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

/// Flat directory of JSON files named by content digest.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// `$NMK_CACHE_DIR`, or `.nmk-cache` in the working directory.
    pub fn from_env() -> io::Result<Self> {
        Self::open(std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".nmk-cache")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes through a temporary file so readers never see partial data.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<(), CliError> {
        let path = self.path(key);
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(value)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn store_text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        Ok(path)
    }
}

fn graph_key(g: &Graph) -> String {
    match canonical_form(g, DEFAULT_CANON_CAP) {
        Ok(c) => format!("canon:{}:{:?}:{:x}", c.vertex_count, c.classes, c.code),
        Err(_) => format!("raw:{}", g.to_edge_list()),
    }
}

/// Betti numbers of `NM_k(g)`, read from or written to the cache. Returns
/// the table and whether it came from the cache.
pub fn betti_cached(cache: Option<&Cache>, g: &Graph, k: usize, field: FieldSpec) -> Result<(BettiTable, bool), CliError> {
    let key = digest_hex(&[&graph_key(g), "homology", &k.to_string(), &field.to_string()]);
    if let Some(t) = cache.and_then(|c| c.load::<BettiTable>(&key)) {
        return Ok((t, true));
    }
    let complex = build_nm_complex(g, k, DEFAULT_ENUMERATION_CAP)?;
    let t = reduced_betti(&complex, field)?;
    if let Some(c) = cache {
        c.store(&key, &t)?;
    }
    Ok((t, false))
}
