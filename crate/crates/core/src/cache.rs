//! On-disk cache of fitted level-2 Eisenstein representations.
//!
//! One text file per prime:
//!
//! ```text
//! divbeta-eisenstein-level2 v1
//! prime 13
//! weight 12
//! delta_parity 0
//! coefficients 4
//! 3 0 12
//! 2 1 9
//! 1 2 4
//! 0 3 1
//! ```
//!
//! Coefficient lines are `mu_exp eps_exp coeff`, descending `mu_exp`, zeros
//! included. Writes go to a temporary file in the same directory and are
//! renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactnum::PrimeField;
use crate::level2::Level2Poly;

pub const CACHE_ENV: &str = "DIVBETA_CACHE_DIR";
const MAGIC: &str = "divbeta-eisenstein-level2 v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinCache {
    dir: PathBuf,
}

fn configured_dir() -> &'static Mutex<Option<Option<PathBuf>>> {
    static DIR: OnceLock<Mutex<Option<Option<PathBuf>>>> = OnceLock::new();
    DIR.get_or_init(|| Mutex::new(None))
}

/// Override the cache directory for this process (`None` disables caching).
/// Without a call, the `DIVBETA_CACHE_DIR` environment variable is used.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *configured_dir().lock().expect("cache config lock") = Some(dir);
}

impl EisensteinCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        EisensteinCache { dir: dir.into() }
    }

    /// The cache selected by [`set_cache_dir`] or the environment, if any.
    pub fn configured() -> Option<Self> {
        let set = configured_dir().lock().expect("cache config lock").clone();
        match set {
            Some(dir) => dir.map(Self::new),
            None => std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u64) -> PathBuf {
        self.dir.join(format!("eisenstein-level2-p{p}.txt"))
    }

    pub fn load(&self, p: u64) -> Result<Option<Level2Poly<PrimeField>>> {
        let path = self.path_for(p);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let poly = parse(&text).map_err(|m| Error::Cache(format!("{}: {m}", path.display())))?;
        if poly.ring().modulus() != p {
            return Err(Error::Cache(format!("{}: stored prime {} != {p}", path.display(), poly.ring().modulus())));
        }
        Ok(Some(poly))
    }

    pub fn store(&self, poly: &Level2Poly<PrimeField>) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", self.dir.display()));
        std::fs::create_dir_all(&self.dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(render(poly).as_bytes()).map_err(io)?;
        tmp.persist(self.path_for(poly.ring().modulus())).map_err(|e| io(e.error))?;
        Ok(())
    }
}

pub fn render(poly: &Level2Poly<PrimeField>) -> String {
    let d = poly.degree();
    let mut out = format!(
        "{MAGIC}\nprime {}\nweight {}\ndelta_parity {}\ncoefficients {}\n",
        poly.ring().modulus(),
        poly.weight(),
        poly.delta_parity(),
        d + 1
    );
    for a in (0..=d).rev() {
        out.push_str(&format!("{a} {} {}\n", d - a, poly.coeff(a)));
    }
    out
}

pub fn parse(text: &str) -> std::result::Result<Level2Poly<PrimeField>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    if lines.next() != Some(MAGIC) {
        return Err("missing header".into());
    }
    let mut field = |name: &str| -> std::result::Result<u64, String> {
        let line = lines.next().ok_or(format!("missing {name}"))?;
        let rest = line.strip_prefix(name).ok_or(format!("expected {name}, got {line:?}"))?;
        rest.trim().parse().map_err(|e| format!("{name}: {e}"))
    };
    let p = field("prime")?;
    let weight = field("weight")?;
    let parity = field("delta_parity")?;
    let count = field("coefficients")? as usize;
    let ring = PrimeField::new(p).map_err(|e| e.to_string())?;
    let mut coeffs = vec![0u64; count];
    for (k, line) in lines.enumerate() {
        let nums: Vec<u64> =
            line.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|e| format!("line {k}: {e}"))?;
        match nums[..] {
            [a, b, c] if (a + b) as usize + 1 == count && c < p => coeffs[a as usize] = c,
            _ => return Err(format!("bad coefficient line {line:?}")),
        }
    }
    Level2Poly::new(ring, weight, parity as u8, coeffs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level2::Level2Poly;

    #[test]
    fn roundtrip_and_atomic_store() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EisensteinCache::new(dir.path());
        let field = PrimeField::new(13).unwrap();
        let poly = Level2Poly::new(field, 12, 0, vec![1, 4, 9, 12]).unwrap();
        assert_eq!(cache.load(13).unwrap(), None);
        cache.store(&poly).unwrap();
        assert_eq!(cache.load(13).unwrap(), Some(poly.clone()));
        let text = std::fs::read_to_string(cache.path_for(13)).unwrap();
        assert!(text.starts_with("divbeta-eisenstein-level2 v1\nprime 13\nweight 12\ndelta_parity 0\ncoefficients 4\n3 0 12\n"));
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn corrupt_files_are_errors() {
        assert!(parse("nonsense").is_err());
        assert!(parse("divbeta-eisenstein-level2 v1\nprime 13\nweight 12\ndelta_parity 0\ncoefficients 4\n3 0 99\n").is_err());
    }
}
