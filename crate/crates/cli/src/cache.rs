//! On-disk count tables: JSON with decimal-string entries, a SHA-256 over the
//! entries, and full re-validation on every load.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ffsum_core::{FieldOrder, IrreducibleCountTable, SmoothCountTable};
use rug::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Irreducible,
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub schema_version: u32,
    pub q: u64,
    pub kind: TableKind,
    pub degree_bound: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_max: Option<u32>,
    pub entries: Vec<Vec<String>>,
    pub sha256: String,
}

fn digest(entries: &[Vec<String>]) -> String {
    let mut h = Sha256::new();
    for row in entries {
        for e in row {
            h.update(e.as_bytes());
            h.update(b",");
        }
        h.update(b";");
    }
    format!("{:x}", h.finalize())
}

fn to_strings(row: &[Integer]) -> Vec<String> {
    row.iter().map(Integer::to_string).collect()
}

fn parse_row(row: &[String]) -> Result<Vec<Integer>, String> {
    row.iter()
        .map(|s| Integer::from_str_radix(s, 10).map_err(|e| format!("bad entry {s:?}: {e}")))
        .collect()
}

impl CacheFile {
    pub fn from_irreducible(t: &IrreducibleCountTable) -> Self {
        let entries = vec![to_strings(t.counts())];
        let sha256 = digest(&entries);
        CacheFile {
            schema_version: SCHEMA_VERSION,
            q: t.q().q(),
            kind: TableKind::Irreducible,
            degree_bound: t.max_degree(),
            k_max: None,
            entries,
            sha256,
        }
    }

    pub fn from_smooth(t: &SmoothCountTable) -> Self {
        let entries: Vec<Vec<String>> = t.rows().iter().map(|r| to_strings(r)).collect();
        let sha256 = digest(&entries);
        CacheFile {
            schema_version: SCHEMA_VERSION,
            q: t.q().q(),
            kind: TableKind::Smooth,
            degree_bound: t.smoothness(),
            k_max: Some(t.k_max()),
            entries,
            sha256,
        }
    }

    fn check_header(&self) -> Result<FieldOrder, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if digest(&self.entries) != self.sha256 {
            return Err("checksum mismatch".into());
        }
        FieldOrder::new(self.q).map_err(|e| e.to_string())
    }

    pub fn to_irreducible(&self) -> Result<IrreducibleCountTable, String> {
        let q = self.check_header()?;
        if self.kind != TableKind::Irreducible || self.entries.len() != 1 {
            return Err("not an irreducible-count table".into());
        }
        let counts = parse_row(&self.entries[0])?;
        if counts.len() != self.degree_bound as usize {
            return Err(format!(
                "{} entries for degree bound {}",
                counts.len(),
                self.degree_bound
            ));
        }
        IrreducibleCountTable::from_counts(q, counts).map_err(|e| e.to_string())
    }

    pub fn to_smooth(&self) -> Result<SmoothCountTable, String> {
        let q = self.check_header()?;
        if self.kind != TableKind::Smooth {
            return Err("not a smooth-count table".into());
        }
        if self.k_max != Some(self.entries.len() as u32 - 1) {
            return Err("k_max does not match the number of rows".into());
        }
        let rows = self
            .entries
            .iter()
            .map(|r| parse_row(r))
            .collect::<Result<Vec<_>, _>>()?;
        SmoothCountTable::from_rows(q, self.degree_bound, rows).map_err(|e| e.to_string())
    }
}

pub fn file_name(kind: TableKind, q: u64, degree_bound: u32, k_max: Option<u32>) -> String {
    match (kind, k_max) {
        (TableKind::Smooth, Some(k)) => format!("smooth-q{q}-k{k}-n{degree_bound}.json"),
        _ => format!("irreducible-q{q}-n{degree_bound}.json"),
    }
}

#[derive(Debug, Clone)]
pub struct CacheDir {
    root: PathBuf,
}

/// What happened when a table was requested from the cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fetch {
    Hit,
    Built,
    /// The file existed but failed validation; it was rebuilt.
    Rebuilt(String),
}

impl CacheDir {
    pub fn new(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(CacheDir { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write(&self, file: &CacheFile) -> io::Result<PathBuf> {
        let path = self
            .root
            .join(file_name(file.kind, file.q, file.degree_bound, file.k_max));
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(file).map_err(io::Error::other)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    fn read(path: &Path) -> Result<Option<CacheFile>, String> {
        match fs::read(path) {
            Ok(bytes) => serde_json::from_slice(&bytes)
                .map(Some)
                .map_err(|e| format!("unreadable: {e}")),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.to_string()),
        }
    }

    pub fn irreducible(
        &self,
        q: FieldOrder,
        degree_bound: u32,
    ) -> Result<(IrreducibleCountTable, Fetch), String> {
        let path = self
            .root
            .join(file_name(TableKind::Irreducible, q.q(), degree_bound, None));
        let problem = match Self::read(&path) {
            Ok(Some(f)) => match f.to_irreducible() {
                Ok(t) => return Ok((t, Fetch::Hit)),
                Err(e) => Some(e),
            },
            Ok(None) => None,
            Err(e) => Some(e),
        };
        let t = IrreducibleCountTable::new(q, degree_bound).map_err(|e| e.to_string())?;
        self.write(&CacheFile::from_irreducible(&t))
            .map_err(|e| e.to_string())?;
        Ok((t, problem.map_or(Fetch::Built, Fetch::Rebuilt)))
    }

    pub fn smooth(
        &self,
        q: FieldOrder,
        k_max: u32,
        degree_bound: u32,
    ) -> Result<(SmoothCountTable, Fetch), String> {
        let path = self.root.join(file_name(
            TableKind::Smooth,
            q.q(),
            degree_bound,
            Some(k_max),
        ));
        let problem = match Self::read(&path) {
            Ok(Some(f)) => match f.to_smooth() {
                Ok(t) => return Ok((t, Fetch::Hit)),
                Err(e) => Some(e),
            },
            Ok(None) => None,
            Err(e) => Some(e),
        };
        let (pi, _) = self.irreducible(q, degree_bound)?;
        let t = SmoothCountTable::new(&pi, k_max, degree_bound).map_err(|e| e.to_string())?;
        self.write(&CacheFile::from_smooth(&t))
            .map_err(|e| e.to_string())?;
        Ok((t, problem.map_or(Fetch::Built, Fetch::Rebuilt)))
    }

    /// Cache files in name order.
    pub fn list(&self) -> io::Result<Vec<PathBuf>> {
        let mut out: Vec<PathBuf> = fs::read_dir(&self.root)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<CacheFile, String> {
        Self::read(path)?.ok_or_else(|| format!("{} does not exist", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path()).unwrap();
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let fq = FieldOrder::new(q).unwrap();
            let (t, how) = cache.irreducible(fq, 120).unwrap();
            assert_eq!(how, Fetch::Built);
            let (back, how) = cache.irreducible(fq, 120).unwrap();
            assert_eq!(how, Fetch::Hit);
            assert_eq!(back, t);
        }
        let fq = FieldOrder::new(3).unwrap();
        let (t, _) = cache.smooth(fq, 4, 20).unwrap();
        let (back, how) = cache.smooth(fq, 4, 20).unwrap();
        assert_eq!((back, how), (t, Fetch::Hit));
    }

    #[test]
    fn flipped_digit_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheDir::new(dir.path()).unwrap();
        let fq = FieldOrder::new(2).unwrap();
        let (t, _) = cache.irreducible(fq, 30).unwrap();
        let path = dir
            .path()
            .join(file_name(TableKind::Irreducible, 2, 30, None));
        let mut f = CacheDir::load(&path).unwrap();
        f.entries[0][11] = "336".into();
        f.sha256 = digest(&f.entries);
        fs::write(&path, serde_json::to_vec(&f).unwrap()).unwrap();
        assert!(f.to_irreducible().is_err());
        let (again, how) = cache.irreducible(fq, 30).unwrap();
        assert!(matches!(how, Fetch::Rebuilt(_)));
        assert_eq!(again, t);
    }
}
