//! On-disk cache of trace lists, keyed by a hash of the character and size
//! bound. Unreadable or inconsistent entries are reported and rebuilt.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lengthseries_core::charvariety::Character;
use lengthseries_core::farey::{canonical_slope, Slope};
use lengthseries_core::identities::series_terms;
use lengthseries_core::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the entry layout or trace ordering changes.
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    version: u32,
    max_size: u64,
    /// Bit patterns of `κ, x, y, z` (re, im each).
    character: [u64; 8],
    /// `[p, q, re, im]` in size-major canonical order.
    traces: Vec<(i64, i64, f64, f64)>,
}

fn character_bits(c: &Character) -> [u64; 8] {
    let mut out = [0u64; 8];
    for (k, z) in [c.kappa(), c.x(), c.y(), c.z()].into_iter().enumerate() {
        out[2 * k] = z.re.to_bits();
        out[2 * k + 1] = z.im.to_bits();
    }
    out
}

pub fn cache_key(c: &Character, max_size: u64) -> String {
    let mut h = Sha256::new();
    h.update(b"lengthseries-traces");
    h.update(CACHE_VERSION.to_le_bytes());
    h.update(max_size.to_le_bytes());
    for b in character_bits(c) {
        h.update(b.to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct TraceCache {
    dir: PathBuf,
}

/// Whether a lookup was served from disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    Rebuilt,
}

impl TraceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<TraceCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(TraceCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, c: &Character, max_size: u64) -> PathBuf {
        self.dir.join(format!("{}.json", cache_key(c, max_size)))
    }

    fn load(&self, path: &Path, c: &Character, max_size: u64) -> Result<Vec<(Slope, Complex64)>> {
        let text = fs::read_to_string(path)?;
        let e: Entry = serde_json::from_str(&text)?;
        if e.version != CACHE_VERSION {
            bail!("version {} (expected {CACHE_VERSION})", e.version);
        }
        if e.max_size != max_size || e.character != character_bits(c) {
            bail!("entry belongs to a different character or size bound");
        }
        let mut out = Vec::with_capacity(e.traces.len());
        let mut last = 0;
        for (p, q, re, im) in e.traces {
            let s = canonical_slope(p, q)?;
            if (s.p(), s.q()) != (p, q) || s.size() > max_size || s.size() < last {
                bail!("slope {p}/{q} out of place");
            }
            last = s.size();
            out.push((s, Complex64::new(re, im)));
        }
        let base = [Slope::ZERO, Slope::INFINITY, Slope::ONE];
        let want = c.triple();
        for (s, t) in out.iter().filter(|(s, _)| base.contains(s)) {
            let k = base.iter().position(|b| b == s).unwrap();
            if t.re.to_bits() != want[k].re.to_bits() || t.im.to_bits() != want[k].im.to_bits() {
                bail!("base trace at {s} disagrees with the character");
            }
        }
        Ok(out)
    }

    fn store(&self, path: &Path, c: &Character, max_size: u64, traces: &[(Slope, Complex64)]) -> Result<()> {
        let e = Entry {
            version: CACHE_VERSION,
            max_size,
            character: character_bits(c),
            traces: traces.iter().map(|(s, t)| (s.p(), s.q(), t.re, t.im)).collect(),
        };
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(&e)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Traces of every slope up to `max_size`, size-major.
    pub fn traces(&self, c: &Character, max_size: u64) -> Result<(Vec<(Slope, Complex64)>, CacheStatus)> {
        let path = self.path_for(c, max_size);
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match self.load(&path, c, max_size) {
                Ok(t) => {
                    log::debug!("trace cache hit {}", path.display());
                    return Ok((t, CacheStatus::Hit));
                }
                Err(e) => {
                    log::warn!("discarding corrupt cache entry {}: {e}", path.display());
                    status = CacheStatus::Rebuilt;
                }
            }
        }
        let t = series_terms(c, max_size);
        if let Err(e) = self.store(&path, c, max_size, &t) {
            log::warn!("could not write cache entry {}: {e}", path.display());
        }
        Ok((t, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_separate_inputs() {
        let a = Character::from_real_triple(3.0, 3.0, 3.0);
        let b = Character::from_real_triple(3.0, 3.0, 3.0 + 1e-15);
        assert_eq!(cache_key(&a, 10), cache_key(&a, 10));
        assert_ne!(cache_key(&a, 10), cache_key(&a, 11));
        assert_ne!(cache_key(&a, 10), cache_key(&b, 10));
        assert_eq!(cache_key(&a, 10).len(), 64);
    }

    #[test]
    fn warm_and_corrupt_entries() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TraceCache::new(dir.path()).unwrap();
        let c = Character::from_triple(Complex64::new(3.0, 0.1), Complex64::new(3.0, 0.0), Complex64::new(2.5, -0.3));
        let (cold, s0) = cache.traces(&c, 20).unwrap();
        assert_eq!(s0, CacheStatus::Miss);
        let (warm, s1) = cache.traces(&c, 20).unwrap();
        assert_eq!(s1, CacheStatus::Hit);
        assert_eq!(cold, warm);
        fs::write(cache.path_for(&c, 20), b"{ not json").unwrap();
        let (again, s2) = cache.traces(&c, 20).unwrap();
        assert_eq!(s2, CacheStatus::Rebuilt);
        assert_eq!(again, cold);
        assert_eq!(cache.traces(&c, 20).unwrap().1, CacheStatus::Hit);
    }
}
