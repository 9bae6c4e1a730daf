//! Persistent store for expensive kernel constants.

use crate::bounds;
use crate::engine::Method;
use crate::error::{Error, Result};
use crate::kernels::beta_ns;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA: u32 = 1;
pub const ENV_VAR: &str = "NLPERIM_CACHE";
const C_ISO_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub error: f64,
    pub method: Method,
    pub timestamp: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct File {
    schema: u32,
    entries: BTreeMap<String, Entry>,
}

#[derive(Debug)]
pub struct ConstantsCache {
    path: PathBuf,
    entries: BTreeMap<String, Entry>,
    /// Keys dropped on load because they failed re-validation.
    pub invalidated: Vec<String>,
    dirty: bool,
}

/// $NLPERIM_CACHE, else a file under the user cache directory.
pub fn default_path() -> PathBuf {
    if let Some(p) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(p);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("nlperim").join("constants.json")
}

pub fn key(name: &str, n: usize, s: f64) -> String {
    format!("{name}:n={n}:s={s:?}")
}

fn parse_key(k: &str) -> Option<(&str, usize, f64)> {
    let mut it = k.split(':');
    let name = it.next()?;
    let n = it.next()?.strip_prefix("n=")?.parse().ok()?;
    let s = it.next()?.strip_prefix("s=")?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((name, n, s))
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Value, error and method of a named constant at tolerance `tol`.
fn compute(name: &str, n: usize, s: f64, tol: f64) -> Result<(f64, f64, Method)> {
    if !(s > 0.0 && s < 1.0) || !(1..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("no constant {name} for n = {n}, s = {s}")));
    }
    match name {
        "c_iso" => {
            let v = bounds::compute_c_iso(n, s, tol)?;
            Ok((v, tol * v.abs(), Method::Slice))
        }
        "beta" => Ok((beta_ns(n, s), 0.0, Method::Closedform)),
        "c_s" => Ok((2.0 / (s * (1.0 - s)), 0.0, Method::Closedform)),
        "sigma" => {
            let w = crate::consts::unit_sphere_area(n);
            Ok((w / (s * (1.0 - s)), 0.0, Method::Closedform))
        }
        other => Err(Error::InvalidArgument(format!("unknown constant {other:?}"))),
    }
}

impl ConstantsCache {
    /// Empty cache bound to `path`; nothing is read.
    pub fn empty(path: impl Into<PathBuf>) -> Self {
        ConstantsCache { path: path.into(), entries: BTreeMap::new(), invalidated: Vec::new(), dirty: false }
    }

    /// Reads `path` (a missing file is an empty cache) and re-checks every
    /// entry against a ten times coarser recomputation.
    pub fn load(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut c = Self::empty(path.clone());
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(c),
            Err(e) => return Err(Error::Io(format!("{}: {e}", path.display()))),
        };
        let file: File = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(e) => {
                log::warn!("ignoring unreadable constants cache {}: {e}", path.display());
                c.dirty = true;
                return Ok(c);
            }
        };
        if file.schema != SCHEMA {
            log::warn!("ignoring constants cache with schema {} (expected {SCHEMA})", file.schema);
            c.dirty = true;
            return Ok(c);
        }
        for (k, e) in file.entries {
            if c.revalidate(&k, &e) {
                c.entries.insert(k, e);
            } else {
                log::warn!("constants cache entry {k} failed validation and was dropped");
                c.invalidated.push(k);
                c.dirty = true;
            }
        }
        Ok(c)
    }

    fn revalidate(&self, k: &str, e: &Entry) -> bool {
        let Some((name, n, s)) = parse_key(k) else { return false };
        let tol = match name {
            "c_iso" => 10.0 * C_ISO_TOL,
            _ => 0.0,
        };
        match compute(name, n, s, tol) {
            Ok((v, err, _)) => {
                let sigma = err.hypot(e.error).max(1e-13 * v.abs());
                e.value.is_finite() && (e.value - v).abs() <= 5.0 * sigma
            }
            Err(_) => false,
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, k: &str) -> Option<Entry> {
        self.entries.get(k).copied()
    }

    pub fn insert(&mut self, k: String, e: Entry) {
        self.entries.insert(k, e);
        self.dirty = true;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn constant(&mut self, name: &str, n: usize, s: f64) -> Result<f64> {
        let k = key(name, n, s);
        if let Some(e) = self.entries.get(&k) {
            return Ok(e.value);
        }
        let tol = if name == "c_iso" { C_ISO_TOL } else { 0.0 };
        let (value, error, method) = compute(name, n, s, tol)?;
        self.insert(k, Entry { value, error, method, timestamp: now() });
        Ok(value)
    }

    pub fn c_iso(&mut self, n: usize, s: f64) -> Result<f64> {
        self.constant("c_iso", n, s)
    }

    /// Writes the cache if it changed: temporary file, then rename.
    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", self.path.display()));
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        let _lock = Lock::acquire(&self.path)?;
        let file = File { schema: SCHEMA, entries: self.entries.clone() };
        let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))?;
        let dir = self.path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(text.as_bytes()).map_err(io)?;
        tmp.write_all(b"\n").map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&self.path).map_err(|e| io(e.error))?;
        self.dirty = false;
        Ok(())
    }
}

/// Advisory lock file next to the cache, removed on drop.
struct Lock(PathBuf);

impl Lock {
    fn acquire(path: &Path) -> Result<Lock> {
        let mut name = path.as_os_str().to_owned();
        name.push(".lock");
        let lock = PathBuf::from(name);
        for _ in 0..100 {
            match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(_) => return Ok(Lock(lock)),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    let stale = fs::metadata(&lock).and_then(|m| m.modified()).map(|t| t.elapsed().map(|d| d.as_secs() > 60).unwrap_or(false)).unwrap_or(true);
                    if stale {
                        let _ = fs::remove_file(&lock);
                    } else {
                        std::thread::sleep(std::time::Duration::from_millis(50));
                    }
                }
                Err(e) => return Err(Error::Io(format!("{}: {e}", lock.display()))),
            }
        }
        Err(Error::Io(format!("could not lock {}", lock.display())))
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("c.json");
        let mut c = ConstantsCache::load(&path).unwrap();
        assert!(c.is_empty());
        let b = c.constant("beta", 2, 0.5).unwrap();
        let cs = c.constant("c_s", 1, 0.5).unwrap();
        assert_eq!(cs, 8.0);
        c.save().unwrap();
        let again = ConstantsCache::load(&path).unwrap();
        assert_eq!(again.len(), 2);
        assert!(again.invalidated.is_empty());
        assert_eq!(again.get(&key("beta", 2, 0.5)).unwrap().value, b);

        let text = fs::read_to_string(&path).unwrap();
        let mut f: File = serde_json::from_str(&text).unwrap();
        f.entries.get_mut(&key("beta", 2, 0.5)).unwrap().value *= 1.01;
        fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
        let bad = ConstantsCache::load(&path).unwrap();
        assert_eq!(bad.invalidated, vec![key("beta", 2, 0.5)]);
        assert_eq!(bad.len(), 1);
    }

    #[test]
    fn other_schema_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"schema": 99, "entries": {}}"#).unwrap();
        assert!(ConstantsCache::load(&path).unwrap().is_empty());
        fs::write(&path, "not json").unwrap();
        assert!(ConstantsCache::load(&path).unwrap().is_empty());
    }

    #[test]
    fn keys_parse_back() {
        let k = key("c_iso", 2, 0.3);
        assert_eq!(parse_key(&k), Some(("c_iso", 2, 0.3)));
        assert_eq!(parse_key("c_iso:2:0.3"), None);
    }
}
