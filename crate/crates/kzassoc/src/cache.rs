//! On-disk cache of exact ideal bases, one JSON file per `(n, degree)`.
//!
//! Files are written to a temporary file in the cache directory and renamed into
//! place, so concurrent runs never observe a partial basis.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kzassoc_core::dkrelations::{BraidPresentation, GradedIdealBasis, IdealError, IdealReducer, IdealRow};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "KZASSOC_CACHE_DIR";

/// Bumped whenever the file layout or the word ordering changes.
pub const BASIS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt cache file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    version: u32,
    n: usize,
    degree: usize,
    generators: usize,
    rows: Vec<RowFile>,
}

#[derive(Serialize, Deserialize)]
struct RowFile {
    pivot: usize,
    /// `(column, numerator, denominator)` in decimal.
    entries: Vec<(usize, String, String)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
}

#[derive(Clone, Debug)]
pub struct BasisCache {
    dir: PathBuf,
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BasisCache { dir: dir.into() }
    }

    /// The flag wins over [`CACHE_ENV`]; an empty variable means no cache.
    pub fn resolve(flag: Option<&Path>) -> Option<Self> {
        match flag {
            Some(dir) => Some(Self::new(dir)),
            None => std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: usize, degree: usize) -> PathBuf {
        self.dir.join(format!("basis-n{n}-d{degree}-v{BASIS_FORMAT_VERSION}.json"))
    }

    /// `Ok(None)` when the file is absent.
    pub fn load(&self, n: usize, degree: usize) -> Result<Option<GradedIdealBasis>, CacheError> {
        let path = self.path(n, degree);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        let corrupt = |reason: String| CacheError::Corrupt { path: path.clone(), reason };
        let file: BasisFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if file.version != BASIS_FORMAT_VERSION || file.n != n || file.degree != degree {
            return Err(corrupt(format!(
                "header (v{}, n={}, d={}) does not match (v{BASIS_FORMAT_VERSION}, n={n}, d={degree})",
                file.version, file.n, file.degree
            )));
        }
        let mut rows = Vec::with_capacity(file.rows.len());
        for row in file.rows {
            let mut entries = Vec::with_capacity(row.entries.len());
            for (col, num, den) in row.entries {
                let num = BigInt::from_str(&num).map_err(|e| corrupt(e.to_string()))?;
                let den = BigInt::from_str(&den).map_err(|e| corrupt(e.to_string()))?;
                if den == BigInt::from(0) {
                    return Err(corrupt(String::from("zero denominator")));
                }
                entries.push((col, BigRational::new(num, den)));
            }
            rows.push(IdealRow { pivot: row.pivot, entries });
        }
        GradedIdealBasis::from_rows(degree, file.generators, rows).map(Some).map_err(|e| corrupt(e.to_string()))
    }

    pub fn store(&self, n: usize, basis: &GradedIdealBasis) -> Result<(), CacheError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CacheError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let file = BasisFile {
            version: BASIS_FORMAT_VERSION,
            n,
            degree: basis.degree(),
            generators: basis.generators(),
            rows: basis
                .rows()
                .iter()
                .map(|r| RowFile {
                    pivot: r.pivot,
                    entries: r
                        .entries
                        .iter()
                        .map(|(c, q)| (*c, q.numer().to_string(), q.denom().to_string()))
                        .collect(),
                })
                .collect(),
        };
        let path = self.path(n, basis.degree());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        serde_json::to_writer(&mut tmp, &file).map_err(|e| CacheError::Io { path: path.clone(), source: e.into() })?;
        tmp.flush().map_err(io_err(&path))?;
        tmp.persist(&path).map_err(|e| CacheError::Io { path: path.clone(), source: e.error })?;
        Ok(())
    }

    /// A reducer for `p` with every degree `2..=max_degree` loaded or built and stored.
    pub fn reducer(&self, p: &BraidPresentation, max_degree: usize) -> Result<(IdealReducer, CacheStats), CacheError> {
        let mut reducer = IdealReducer::new(p);
        let mut stats = CacheStats::default();
        for d in 2..=max_degree {
            match self.load(p.n(), d)? {
                Some(basis) => {
                    reducer.insert_basis(basis)?;
                    stats.hits += 1;
                }
                None => {
                    let basis = reducer.basis(d)?;
                    self.store(p.n(), &basis)?;
                    stats.misses += 1;
                }
            }
        }
        Ok((reducer, stats))
    }
}

/// A reducer for `p`, through the cache when one is configured.
pub fn braid_reducer(
    cache: Option<&BasisCache>,
    p: &BraidPresentation,
    max_degree: usize,
) -> Result<(IdealReducer, CacheStats), CacheError> {
    match cache {
        Some(c) => c.reducer(p, max_degree),
        None => {
            let mut reducer = IdealReducer::new(p);
            for d in 2..=max_degree {
                reducer.basis(d)?;
            }
            Ok((reducer, CacheStats { hits: 0, misses: max_degree.saturating_sub(1) }))
        }
    }
}
