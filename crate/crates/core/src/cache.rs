//! Persistent avoider counts, one JSON object per line:
//! `{"pattern":"1324","n":8,"count":"15793"}`.
//!
//! Keys are symmetry-class representatives, so all symmetric patterns share a
//! record. Writes append; on load the last record for a key wins and
//! malformed lines are skipped with a warning.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Serialize, Deserialize)]
struct Record {
    pattern: String,
    n: usize,
    count: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStore {
    path: Option<PathBuf>,
    entries: BTreeMap<(Permutation, usize), BigUint>,
}

impl CacheStore {
    /// A cache that is never written to disk.
    pub fn in_memory() -> Self {
        CacheStore::default()
    }

    /// Loads `path`; a missing file gives an empty cache bound to that path.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut store = CacheStore {
            path: Some(path.clone()),
            entries: BTreeMap::new(),
        };
        let file = match File::open(&path) {
            Ok(file) => file,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(store),
            Err(source) => return Err(Error::CacheIo { path, source }),
        };
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| Error::CacheIo {
                path: path.clone(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_record(&line) {
                Some((pattern, n, count)) => {
                    store.entries.insert((pattern.symmetry_class(), n), count);
                }
                None => log::warn!("{}:{}: skipping malformed cache line", path.display(), lineno + 1),
            }
        }
        Ok(store)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, q: &Permutation, n: usize) -> Option<&BigUint> {
        self.entries.get(&(q.symmetry_class(), n))
    }

    /// Records a count, appending it to the backing file if there is one.
    pub fn insert(&mut self, q: &Permutation, n: usize, count: BigUint) -> Result<()> {
        let key = (q.symmetry_class(), n);
        if let Some(path) = &self.path {
            let io_err = |source| Error::CacheIo {
                path: path.clone(),
                source,
            };
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(io_err)?;
            writeln!(file, "{}", record_line(&key.0, n, &count)).map_err(io_err)?;
        }
        self.entries.insert(key, count);
        Ok(())
    }

    /// Writes every entry to `path`, replacing its contents.
    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::CacheIo {
            path: path.to_path_buf(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        for ((pattern, n), count) in &self.entries {
            writeln!(out, "{}", record_line(pattern, *n, count)).map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Permutation, usize, &BigUint)> {
        self.entries.iter().map(|((p, n), c)| (p, *n, c))
    }
}

fn record_line(pattern: &Permutation, n: usize, count: &BigUint) -> String {
    serde_json::to_string(&Record {
        pattern: pattern.to_string(),
        n,
        count: count.to_string(),
    })
    .expect("record serializes")
}

fn parse_record(line: &str) -> Option<(Permutation, usize, BigUint)> {
    let record: Record = serde_json::from_str(line).ok()?;
    let pattern = record.pattern.parse().ok()?;
    let count = record.count.parse().ok()?;
    Some((pattern, record.n, count))
}
