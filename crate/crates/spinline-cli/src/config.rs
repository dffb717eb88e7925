//! Flat key = value configuration files with one [section] per command.
//!
//! Keys may be set in the file or as long-form flags; flags override the
//! file. The canonical serialized form of the merged configuration is
//! FNV-1a hashed into the output provenance headers so a table can be
//! traced back to the exact run that produced it.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    /// section -> key -> value ("" section for globals).
    map: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let mut map: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(format!("line {}: expected key = value", lineno + 1))?;
            map.entry(section.clone())
                .or_default()
                .insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config { map })
    }

    /// Override or insert a key (used for flag overrides).
    pub fn set(&mut self, section: &str, key: &str, value: String) {
        self.map
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), value);
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.map
            .get(section)
            .and_then(|m| m.get(key))
            .map(|s| s.as_str())
            .or_else(|| {
                // Globals fall through from the anonymous section.
                self.map
                    .get("")
                    .and_then(|m| m.get(key))
                    .map(|s| s.as_str())
            })
    }

    pub fn get_f64(&self, section: &str, key: &str, default: f64) -> Result<f64, String> {
        match self.get(section, key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| format!("{section}.{key}: not a number: {s}")),
        }
    }

    pub fn get_usize(&self, section: &str, key: &str, default: usize) -> Result<usize, String> {
        match self.get(section, key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| format!("{section}.{key}: not an integer: {s}")),
        }
    }

    pub fn get_bool(&self, section: &str, key: &str, default: bool) -> Result<bool, String> {
        match self.get(section, key) {
            None => Ok(default),
            Some(s) => match s {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(format!("{section}.{key}: not a boolean: {s}")),
            },
        }
    }

    pub fn get_str(&self, section: &str, key: &str, default: &str) -> String {
        self.get(section, key).unwrap_or(default).to_string()
    }

    /// Comma-separated float list.
    pub fn get_list(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>, String> {
        match self.get(section, key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| format!("{section}.{key}: bad list entry {x}"))
                })
                .collect(),
        }
    }

    /// Canonical text form (sorted), used for hashing.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (section, kv) in &self.map {
            for (k, v) in kv {
                out.push_str(section);
                out.push('.');
                out.push_str(k);
                out.push('=');
                out.push_str(v);
                out.push('\n');
            }
        }
        out
    }

    pub fn hash(&self) -> u64 {
        fnv1a(self.canonical().as_bytes())
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Linearly or logarithmically spaced grid.
pub fn spaced_grid(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if log {
                lo * (hi / lo).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect()
}
