use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vedkit_core::Convention;

pub const SCHEMA_VERSION: u32 = 1;

/// Sign conventions of the localization engine, recorded with every run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionFlags {
    pub sigma: i8,
    pub xi_sign: i8,
    pub tangent: vedkit_core::grassloc::TangentModel,
}

impl From<Convention> for ConventionFlags {
    fn from(c: Convention) -> Self {
        ConventionFlags { sigma: c.sigma, xi_sign: c.xi_sign, tangent: c.tangent }
    }
}

/// One self-describing record per run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub seeds: BTreeMap<String, u64>,
    pub timestamp: String,
    pub convention_flags: ConventionFlags,
    pub cache_hit: bool,
}

impl RunRecord {
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, Value>,
        results: Value,
        seeds: BTreeMap<String, u64>,
        convention: Convention,
    ) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            results,
            seeds,
            timestamp: chrono::Utc::now().to_rfc3339(),
            convention_flags: convention.into(),
            cache_hit: false,
        }
    }

    /// Everything that must be identical between reruns with equal inputs.
    pub fn payload(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "seeds": self.seeds,
            "convention_flags": self.convention_flags,
        })
    }

    fn key(&self) -> CacheKey {
        CacheKey::new(&self.command, &self.parameters, self.convention_flags)
    }
}

/// (command, canonicalized parameters, conventions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey(String);

impl CacheKey {
    pub fn new(command: &str, parameters: &BTreeMap<String, Value>, flags: ConventionFlags) -> Self {
        // BTreeMap serializes with sorted keys, which makes the text canonical.
        let params = serde_json::to_string(parameters).expect("parameters serialize");
        let flags = serde_json::to_string(&flags).expect("flags serialize");
        CacheKey(format!("{command}|{params}|{flags}"))
    }
}

/// Append-only line-delimited cache of run records.
#[derive(Clone, Debug)]
pub struct ResultCache {
    path: Option<PathBuf>,
}

impl ResultCache {
    pub fn open(path: &Path) -> Self {
        ResultCache { path: Some(path.to_path_buf()) }
    }

    pub fn disabled() -> Self {
        ResultCache { path: None }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Most recent record stored under `key`, marked as a cache hit.
    /// Unreadable or malformed lines are skipped.
    pub fn lookup(&self, key: &CacheKey) -> Option<RunRecord> {
        let path = self.path.as_ref()?;
        let file = std::fs::File::open(path).ok()?;
        let mut found = None;
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let Ok(line) = line else { break };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RunRecord>(&line) {
                Ok(rec) if rec.schema_version == SCHEMA_VERSION && &rec.key() == key => found = Some(rec),
                Ok(_) => {}
                Err(e) => log::warn!("{}:{}: skipping malformed cache line: {e}", path.display(), lineno + 1),
            }
        }
        found.map(|mut rec| {
            rec.cache_hit = true;
            rec
        })
    }

    /// Appends one record as a single line.
    pub fn append(&self, record: &RunRecord) -> std::io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut stored = record.clone();
        stored.cache_hit = false;
        let mut line = serde_json::to_string(&stored).map_err(std::io::Error::other)?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        file.write_all(line.as_bytes())?;
        file.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: u64) -> RunRecord {
        let conv = Convention::calibrated().unwrap();
        RunRecord::new(
            "ved",
            BTreeMap::from([("n".to_string(), Value::from(n))]),
            serde_json::json!({ "ved": 13 }),
            BTreeMap::new(),
            conv,
        )
    }

    #[test]
    fn roundtrip_loses_nothing() {
        let rec = sample(3);
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<RunRecord>(&text).unwrap(), rec);
    }

    #[test]
    fn cache_hit_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(&dir.path().join("c.jsonl"));
        let rec = sample(3);
        assert!(cache.lookup(&rec.key()).is_none());
        cache.append(&rec).unwrap();
        cache.append(&sample(4)).unwrap();
        let hit = cache.lookup(&rec.key()).unwrap();
        assert!(hit.cache_hit);
        assert_eq!(hit.payload(), rec.payload());
        assert!(cache.lookup(&sample(5).key()).is_none());
    }

    #[test]
    fn malformed_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, "not json\n\n").unwrap();
        let cache = ResultCache::open(&path);
        let rec = sample(3);
        cache.append(&rec).unwrap();
        assert!(cache.lookup(&rec.key()).is_some());
    }

    #[test]
    fn disabled_cache_is_inert() {
        let cache = ResultCache::disabled();
        let rec = sample(3);
        cache.append(&rec).unwrap();
        assert!(cache.lookup(&rec.key()).is_none());
    }
}
