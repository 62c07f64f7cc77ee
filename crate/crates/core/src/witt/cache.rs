//! In-memory and on-disk cache of structure polynomials.
//!
//! File format (`witt-p{p}-n{n}.txt`, UTF-8):
//!
//! ```text
//! fsplit-witt-polys 1
//! p <p> n <n>
//! sha256 <hex digest of all following lines, each terminated by '\n'>
//! S0 <term> <term> ...
//! ...
//! P0 <term> ...
//! ```
//!
//! One polynomial per line. A term is `<coeff>` for a constant or
//! `<coeff>@<var>^<exp>,<var>^<exp>...` where variable `i < n` is x_i and
//! `n + i` is y_i. Deleting the directory is always safe.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::polys::{IntPoly, Mon, WittStructurePolys};
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "FSPLIT_CACHE_DIR";
const HEADER: &str = "fsplit-witt-polys 1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub memory_hits: u64,
    pub disk_hits: u64,
    pub computed: u64,
    pub corrupt_recovered: u64,
}

type Memory = Mutex<HashMap<(u32, usize), Arc<WittStructurePolys>>>;

static MEMORY: OnceLock<Memory> = OnceLock::new();
static MEMORY_HITS: AtomicU64 = AtomicU64::new(0);
static DISK_HITS: AtomicU64 = AtomicU64::new(0);
static COMPUTED: AtomicU64 = AtomicU64::new(0);
static CORRUPT: AtomicU64 = AtomicU64::new(0);

pub fn cache_stats() -> CacheStats {
    CacheStats {
        memory_hits: MEMORY_HITS.load(Ordering::Relaxed),
        disk_hits: DISK_HITS.load(Ordering::Relaxed),
        computed: COMPUTED.load(Ordering::Relaxed),
        corrupt_recovered: CORRUPT.load(Ordering::Relaxed),
    }
}

/// Cache directory: `$FSPLIT_CACHE_DIR`, else `$XDG_CACHE_HOME/fsplit`,
/// else `$HOME/.cache/fsplit`, else a directory under the system temp dir.
pub fn cache_dir() -> PathBuf {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(d).join("fsplit");
    }
    if let Some(h) = std::env::var_os("HOME") {
        return PathBuf::from(h).join(".cache").join("fsplit");
    }
    std::env::temp_dir().join("fsplit-cache")
}

pub fn cache_file(dir: &Path, p: u32, n: usize) -> PathBuf {
    dir.join(format!("witt-p{p}-n{n}.txt"))
}

/// Structure polynomials for (p, n): memory, then disk, then computation.
/// Length one is trivial and never touches the disk.
pub fn structure_polys(p: u32, n: usize) -> Result<Arc<WittStructurePolys>> {
    let mem = MEMORY.get_or_init(Default::default);
    if let Some(w) = mem.lock().unwrap().get(&(p, n)) {
        MEMORY_HITS.fetch_add(1, Ordering::Relaxed);
        return Ok(w.clone());
    }
    let w = if n <= 1 {
        WittStructurePolys::compute(p, n)?
    } else {
        load_or_compute(&cache_dir(), p, n)?
    };
    let w = Arc::new(w);
    mem.lock().unwrap().insert((p, n), w.clone());
    Ok(w)
}

pub fn load_or_compute(dir: &Path, p: u32, n: usize) -> Result<WittStructurePolys> {
    let path = cache_file(dir, p, n);
    if path.exists() {
        match read_file(&path, p, n) {
            Ok(w) => {
                DISK_HITS.fetch_add(1, Ordering::Relaxed);
                return Ok(w);
            }
            Err(e) => {
                log::warn!("{e}; recomputing {}", path.display());
                CORRUPT.fetch_add(1, Ordering::Relaxed);
            }
        }
    }
    let w = WittStructurePolys::compute(p, n)?;
    COMPUTED.fetch_add(1, Ordering::Relaxed);
    if let Err(e) = write_file(dir, &w) {
        log::warn!("could not write structure polynomial cache: {e}");
    }
    Ok(w)
}

fn format_poly(tag: &str, f: &IntPoly, nvars: usize) -> String {
    let mut line = tag.to_string();
    for (m, c) in f.sorted_terms() {
        line.push(' ');
        line.push_str(&c.to_string());
        let factors: Vec<String> = m[..nvars]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, e)| format!("{v}^{e}"))
            .collect();
        if !factors.is_empty() {
            line.push('@');
            line.push_str(&factors.join(","));
        }
    }
    line
}

fn parse_poly(line: &str, tag: &str, nvars: usize) -> Result<IntPoly> {
    let bad = |why: &str| Error::CacheCorrupt(format!("{why} in line `{tag}`"));
    let mut parts = line.split(' ');
    if parts.next() != Some(tag) {
        return Err(bad("unexpected tag"));
    }
    let mut f = IntPoly::zero();
    for term in parts {
        let (c, rest) = term.split_once('@').unwrap_or((term, ""));
        let c: BigInt = c.parse().map_err(|_| bad("bad coefficient"))?;
        let mut m: Mon = Default::default();
        if !rest.is_empty() {
            for factor in rest.split(',') {
                let (v, e) = factor.split_once('^').ok_or_else(|| bad("bad factor"))?;
                let v: usize = v.parse().map_err(|_| bad("bad variable"))?;
                if v >= nvars {
                    return Err(bad("variable out of range"));
                }
                m[v] = e.parse().map_err(|_| bad("bad exponent"))?;
            }
        }
        f.add_assign_scaled(&IntPoly::term(m, c), &BigInt::from(1));
    }
    Ok(f)
}

fn body(w: &WittStructurePolys) -> String {
    let nvars = 2 * w.n;
    let mut s = String::new();
    for (i, f) in w.sum_int.iter().enumerate() {
        s.push_str(&format_poly(&format!("S{i}"), f, nvars));
        s.push('\n');
    }
    for (i, f) in w.prod_int.iter().enumerate() {
        s.push_str(&format_poly(&format!("P{i}"), f, nvars));
        s.push('\n');
    }
    s
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

pub fn write_file(dir: &Path, w: &WittStructurePolys) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::CacheIo(e.to_string());
    fs::create_dir_all(dir).map_err(io)?;
    let b = body(w);
    let text = format!("{HEADER}\np {} n {}\nsha256 {}\n{b}", w.p, w.n, digest(&b));
    let path = cache_file(dir, w.p, w.n);
    // write-then-rename keeps concurrent readers from seeing partial files
    static SEQ: AtomicU64 = AtomicU64::new(0);
    let tmp = dir.join(format!(
        ".witt-p{}-n{}.{}-{}.tmp",
        w.p,
        w.n,
        std::process::id(),
        SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)?;
    Ok(path)
}

pub fn read_file(path: &Path, p: u32, n: usize) -> Result<WittStructurePolys> {
    let text = fs::read_to_string(path).map_err(|e| Error::CacheIo(e.to_string()))?;
    let corrupt = |why: &str| Error::CacheCorrupt(format!("{}: {why}", path.display()));
    let mut lines = text.splitn(4, '\n');
    if lines.next() != Some(HEADER) {
        return Err(corrupt("bad header"));
    }
    if lines.next() != Some(format!("p {p} n {n}").as_str()) {
        return Err(corrupt("key mismatch"));
    }
    let sum = lines
        .next()
        .and_then(|l| l.strip_prefix("sha256 "))
        .ok_or_else(|| corrupt("missing checksum"))?;
    let b = lines.next().unwrap_or("");
    if digest(b) != sum {
        return Err(corrupt("checksum mismatch"));
    }
    let polys: Vec<&str> = b.lines().collect();
    if polys.len() != 2 * n {
        return Err(corrupt("wrong number of polynomials"));
    }
    let nvars = 2 * n;
    let sum_int = (0..n)
        .map(|i| parse_poly(polys[i], &format!("S{i}"), nvars))
        .collect::<Result<Vec<_>>>()?;
    let prod_int = (0..n)
        .map(|i| parse_poly(polys[n + i], &format!("P{i}"), nvars))
        .collect::<Result<Vec<_>>>()?;
    Ok(WittStructurePolys::from_int(p, n, sum_int, prod_int))
}

/// Cached (p, n) keys present in `dir`.
pub fn list_entries(dir: &Path) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    if let Ok(rd) = fs::read_dir(dir) {
        for e in rd.flatten() {
            let name = e.file_name().to_string_lossy().to_string();
            if let Some(rest) = name.strip_prefix("witt-p").and_then(|r| r.strip_suffix(".txt")) {
                if let Some((p, n)) = rest.split_once("-n") {
                    if let (Ok(p), Ok(n)) = (p.parse(), n.parse()) {
                        out.push((p, n));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Remove cached files from `dir`; returns the number removed.
pub fn clear(dir: &Path) -> Result<usize> {
    let mut k = 0;
    for (p, n) in list_entries(dir) {
        fs::remove_file(cache_file(dir, p, n)).map_err(|e| Error::CacheIo(e.to_string()))?;
        k += 1;
    }
    if let Some(m) = MEMORY.get() {
        m.lock().unwrap().clear();
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tempdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("fsplit-cache-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip() {
        let dir = tempdir("rt");
        let w = WittStructurePolys::compute(3, 3).unwrap();
        write_file(&dir, &w).unwrap();
        let r = read_file(&cache_file(&dir, 3, 3), 3, 3).unwrap();
        assert_eq!(r.sum_int, w.sum_int);
        assert_eq!(r.prod_int, w.prod_int);
        assert_eq!(list_entries(&dir), vec![(3, 3)]);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corruption_detected_and_recovered() {
        let dir = tempdir("corrupt");
        let w = WittStructurePolys::compute(2, 2).unwrap();
        let path = write_file(&dir, &w).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("P2 1@0^1\n");
        fs::write(&path, text).unwrap();
        assert!(matches!(read_file(&path, 2, 2), Err(Error::CacheCorrupt(_))));
        let r = load_or_compute(&dir, 2, 2).unwrap();
        assert_eq!(r.sum_int, w.sum_int);
        assert!(read_file(&path, 2, 2).is_ok());
        assert_eq!(clear(&dir).unwrap(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
