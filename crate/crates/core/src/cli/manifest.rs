use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::cache::digest_hex;
use super::{Cache, CliError};

/// Record of one command run. The digest covers everything but the
/// timestamp, so reruns with the same inputs reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub caps: BTreeMap<String, u64>,
    pub field: Option<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub result_digest: String,
}

impl RunManifest {
    pub fn new<T: Serialize>(
        command: &str,
        parameters: serde_json::Value,
        seed: u64,
        field: Option<String>,
        result: &T,
    ) -> Result<Self, CliError> {
        let caps = default_caps();
        let result_digest = Self::digest(command, &parameters, seed, &caps, field.as_deref(), result)?;
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Ok(RunManifest { command: command.to_string(), parameters, seed, caps, field, timestamp, result_digest })
    }

    pub fn digest<T: Serialize>(
        command: &str,
        parameters: &serde_json::Value,
        seed: u64,
        caps: &BTreeMap<String, u64>,
        field: Option<&str>,
        result: &T,
    ) -> Result<String, CliError> {
        Ok(digest_hex(&[
            command,
            &serde_json::to_string(parameters)?,
            &seed.to_string(),
            &serde_json::to_string(caps)?,
            field.unwrap_or(""),
            &serde_json::to_string(result)?,
        ]))
    }

    /// Stores the manifest under its own digest; returns the key.
    pub fn persist(&self, cache: &Cache) -> Result<String, CliError> {
        let key = format!("manifest-{}", &self.result_digest[..16]);
        cache.store(&key, self)?;
        Ok(key)
    }
}

fn default_caps() -> BTreeMap<String, u64> {
    BTreeMap::from([
        ("enumeration".to_string(), crate::complex::DEFAULT_ENUMERATION_CAP),
        ("linalg".to_string(), crate::homology::DEFAULT_LINALG_CAP as u64),
        ("max_vertices".to_string(), crate::graph::MAX_VERTICES as u64),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_the_clock() {
        let p = serde_json::json!({"suite": "x"});
        let a = RunManifest::new("sweep", p.clone(), 3, None, &vec![1, 2]).unwrap();
        let b = RunManifest::new("sweep", p.clone(), 3, None, &vec![1, 2]).unwrap();
        assert_eq!(a.result_digest, b.result_digest);
        let c = RunManifest::new("sweep", p, 4, None, &vec![1, 2]).unwrap();
        assert_ne!(a.result_digest, c.result_digest);
    }
}
