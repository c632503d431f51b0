//! On-disk cache of computed tables, keyed by canonical job strings.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use wkl_core::verify::check_structural;
use wkl_core::{KlTable, Parallelism, TableKind};

use crate::export::parse_table;

pub const CACHE_VERSION: &str = "wkl-cache-v1";

#[derive(Serialize, Deserialize)]
struct Entry<'a> {
    format_version: String,
    key: String,
    #[serde(borrow)]
    table: &'a RawValue,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `table cartan=B3 theta=1,3` -> `table_cartan-B3_theta-1.3.wkl-cache-v1.json`
    pub fn path_for(&self, key: &str) -> PathBuf {
        let stem: String = key
            .chars()
            .map(|ch| match ch {
                ' ' => '_',
                '=' => '-',
                ',' => '.',
                c if c.is_ascii_alphanumeric() => c,
                _ => '~',
            })
            .collect();
        self.dir.join(format!("{stem}.{CACHE_VERSION}.json"))
    }

    /// Stored table bytes, or `None` on a miss, a version mismatch or a
    /// corrupt entry.
    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        let path = self.path_for(key);
        let raw = fs::read(&path).ok()?;
        let entry: Entry = match serde_json::from_slice(&raw) {
            Ok(e) => e,
            Err(e) => {
                warn!("ignoring corrupt cache entry {}: {e}", path.display());
                return None;
            }
        };
        if entry.format_version != CACHE_VERSION {
            warn!("ignoring cache entry {} with version {:?}", path.display(), entry.format_version);
            return None;
        }
        if entry.key != key {
            warn!("ignoring cache entry {} stored for key {:?}", path.display(), entry.key);
            return None;
        }
        Some(entry.table.get().as_bytes().to_vec())
    }

    /// Stores table bytes with an atomic rename.
    pub fn put(&self, key: &str, table: &[u8]) -> std::io::Result<()> {
        let table: &RawValue =
            serde_json::from_slice(table).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        let entry = Entry {
            format_version: CACHE_VERSION.to_string(),
            key: key.to_string(),
            table,
        };
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.write_all(b"\n")?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// A cached table that parses and passes the structural checks.
    pub fn load_table(&self, key: &str, kind: TableKind) -> Option<KlTable> {
        let bytes = self.get(key)?;
        let table = match parse_table(&bytes, kind) {
            Ok(t) => t,
            Err(e) => {
                warn!("ignoring unreadable cached table for {key:?}: {e}");
                return None;
            }
        };
        let outcome = check_structural(&table, Parallelism::default());
        if !outcome.passed() {
            warn!("ignoring cached table for {key:?}: structural check failed {:?}", outcome.counterexample);
            return None;
        }
        Some(table)
    }

    /// Loads `key`, or computes and stores it.
    pub fn table_or_compute<E>(
        cache: Option<&Cache>,
        key: &str,
        kind: TableKind,
        compute: impl FnOnce() -> Result<KlTable, E>,
    ) -> Result<KlTable, E> {
        if let Some(t) = cache.and_then(|c| c.load_table(key, kind)) {
            log::info!("cache hit for {key:?}");
            return Ok(t);
        }
        let table = compute()?;
        if let Some(c) = cache {
            let bytes = crate::export::export_table(&table, crate::job::Format::Json);
            if let Err(e) = c.put(key, &bytes) {
                warn!("could not write cache entry for {key:?}: {e}");
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get_returns_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let table = br#"{"cartan":"A1","theta":[],"entries":[{"c":0,"d":0,"poly":{"0":1}}]}"#;
        cache.put("table cartan=A1 theta=none", table).unwrap();
        assert_eq!(cache.get("table cartan=A1 theta=none").unwrap(), table.to_vec());
        assert!(cache.get("table cartan=A2 theta=none").is_none());
    }

    #[test]
    fn version_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = "table cartan=A1 theta=none";
        cache.put(key, b"{}").unwrap();
        let path = cache.path_for(key);
        let text = fs::read_to_string(&path).unwrap().replace(CACHE_VERSION, "wkl-cache-v0");
        fs::write(&path, text).unwrap();
        assert!(cache.get(key).is_none());
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = "gverma cartan=B2 theta=1";
        fs::write(cache.path_for(key), "{\"format_version\": ").unwrap();
        assert!(cache.get(key).is_none());
        assert!(cache.load_table(key, TableKind::GeneralizedVerma).is_none());
    }

    #[test]
    fn file_names_are_distinct() {
        let cache = Cache::new("/tmp");
        let a = cache.path_for("table cartan=B3 theta=1,3");
        let b = cache.path_for("table cartan=B3 theta=13");
        assert_ne!(a, b);
        assert!(a.to_str().unwrap().ends_with(".wkl-cache-v1.json"));
    }
}
