//! Tables of zeta-zero ordinates: ingestion, the binary cache, and the
//! counting functions N(t) and S(t).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};

/// Largest gap between consecutive ordinates accepted by [`ZeroTable::new`].
/// No gap this large occurs below height 10^7, so one signals a corrupt file.
pub const MAX_GAP: f64 = 10.0;

/// Immutable, validated table of zero ordinates (strictly increasing, positive).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    source: String,
    covered_to: f64,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in ordinates.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::BadOrdinate { index, value });
            }
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NotIncreasing { index: i + 1, prev: w[0], next: w[1] });
            }
            if w[1] - w[0] >= MAX_GAP {
                return Err(Error::GapTooLarge { index: i, gap: w[1] - w[0] });
            }
        }
        let covered_to = *ordinates.last().expect("checked nonempty");
        Ok(Self { ordinates, source: source.into(), covered_to })
    }

    /// Declares the table complete up to `height` (at least the last ordinate),
    /// i.e. no zero lies in (last ordinate, height].
    pub fn with_coverage(mut self, height: f64) -> Result<Self> {
        if !(height >= self.max_height()) {
            return domain(format!("coverage {height} is below the last ordinate {}", self.max_height()));
        }
        self.covered_to = height;
        Ok(self)
    }

    /// Height up to which the table is known to be complete.
    pub fn covered_height(&self) -> f64 {
        self.covered_to
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn max_height(&self) -> f64 {
        *self.ordinates.last().expect("table is never empty")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of ordinates `<= t`.
    pub fn count_le(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Number of ordinates `< t`.
    pub fn count_lt(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g < t)
    }

    /// The ordinates in `(0, t]`.
    pub fn up_to(&self, t: f64) -> &[f64] {
        &self.ordinates[..self.count_le(t)]
    }

    /// Fails unless the table is complete up to height `t`.
    pub fn require_height(&self, t: f64) -> Result<()> {
        if t > self.covered_to {
            return Err(Error::OutOfRange { what: "height", value: t, max: self.covered_to });
        }
        Ok(())
    }
}

/// How a query landing exactly on an ordinate is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountConvention {
    pub half_weight_at_jump: bool,
}

impl CountConvention {
    pub const FULL: Self = Self { half_weight_at_jump: false };
    pub const HALF: Self = Self { half_weight_at_jump: true };
}

const CACHE_MAGIC: &[u8; 4] = b"ZVZT";
const CACHE_VERSION: u16 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses the text format: one decimal ordinate per line, `#` comments and
/// blank lines ignored.
pub fn parse_zero_text(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse { line: i + 1, text: line.to_string() })?;
        out.push(v);
    }
    Ok(out)
}

/// Cache file for a source with the given SHA-256. The checksum is part of the
/// name, so editing the source orphans the old cache.
pub fn cache_path(source: &Path, source_sha256: &str) -> PathBuf {
    let name = source.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    source.with_file_name(format!("{name}.{}.zvzt", &source_sha256[..16]))
}

/// Serializes ordinates in the binary cache layout.
pub fn encode_cache(ordinates: &[f64]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(4 + 2 + 8 + 8 * ordinates.len() + 32);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&(ordinates.len() as u64).to_le_bytes());
    let start = buf.len();
    for g in ordinates {
        buf.extend_from_slice(&g.to_le_bytes());
    }
    let digest = Sha256::digest(&buf[start..]);
    buf.extend_from_slice(&digest);
    buf
}

pub fn decode_cache(bytes: &[u8]) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::Cache(m.to_string());
    if bytes.len() < 14 + 32 || &bytes[..4] != CACHE_MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let count = u64::from_le_bytes(bytes[6..14].try_into().unwrap()) as usize;
    let payload_len = count.checked_mul(8).ok_or_else(|| bad("count overflow"))?;
    if bytes.len() != 14 + payload_len + 32 {
        return Err(bad("length does not match count"));
    }
    let payload = &bytes[14..14 + payload_len];
    if Sha256::digest(payload).as_slice() != &bytes[14 + payload_len..] {
        return Err(bad("payload checksum mismatch"));
    }
    Ok(payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

fn remove_stale_caches(source: &Path, keep: &Path) {
    let (Some(dir), Some(name)) = (source.parent(), source.file_name()) else { return };
    let dir = if dir.as_os_str().is_empty() { Path::new(".") } else { dir };
    let prefix = format!("{}.", name.to_string_lossy());
    let Ok(entries) = fs::read_dir(dir) else { return };
    for e in entries.flatten() {
        let fname = e.file_name().to_string_lossy().into_owned();
        if fname.starts_with(&prefix) && fname.ends_with(".zvzt") && e.path() != keep {
            let _ = fs::remove_file(e.path());
        }
    }
}

/// Loads and validates a zero file, using or refreshing the binary cache
/// stored beside it.
pub fn load_zero_file(path: impl AsRef<Path>, expected_count: Option<usize>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(io_err(path))?;
    let checksum = hex(&Sha256::digest(&bytes));
    let cache = cache_path(path, &checksum);

    let ordinates = match fs::read(&cache).ok().and_then(|b| decode_cache(&b).ok()) {
        Some(v) => v,
        None => {
            let text = std::str::from_utf8(&bytes)
                .map_err(|e| Error::Parse { line: 0, text: e.to_string() })?;
            let v = parse_zero_text(text)?;
            // Validate before caching so a corrupt file never produces a cache.
            ZeroTable::new(v.clone(), "")?;
            // A read-only data directory only costs us the cache.
            if let Ok(mut f) = fs::File::create(&cache) {
                if f.write_all(&encode_cache(&v)).is_err() {
                    let _ = fs::remove_file(&cache);
                }
            }
            remove_stale_caches(path, &cache);
            v
        }
    };

    let table = ZeroTable::new(ordinates, format!("{} sha256:{checksum}", path.display()))?;
    if let Some(expected) = expected_count {
        if table.count() != expected {
            return Err(Error::CountMismatch { expected, found: table.count() });
        }
    }
    Ok(table)
}

/// N(t): ordinates `<= t`, with weight one half for an ordinate equal to `t`
/// when the convention asks for it.
pub fn count_zeros(table: &ZeroTable, t: f64, conv: CountConvention) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("count_zeros: t = {t} must be >= 0"));
    }
    table.require_height(t)?;
    let le = table.count_le(t);
    if conv.half_weight_at_jump {
        let lt = table.count_lt(t);
        Ok(lt as f64 + 0.5 * (le - lt) as f64)
    } else {
        Ok(le as f64)
    }
}

/// Smooth part of the zero-counting function, (t/2π)log(t/2π) − t/2π + 7/8.
pub fn smooth_count(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("smooth_count: t = {t} must be > 0"));
    }
    Ok(smooth_count_unchecked(t))
}

#[inline]
pub(crate) fn smooth_count_unchecked(t: f64) -> f64 {
    let x = t / std::f64::consts::TAU;
    x * x.ln() - x + 0.875
}

/// S(t) = N(t) − smooth part, with the O(1/t) term dropped.
pub fn s_of_t(table: &ZeroTable, t: f64, conv: CountConvention) -> Result<f64> {
    if !(t >= 1.0) {
        return domain(format!("s_of_t: t = {t} must be >= 1"));
    }
    Ok(count_zeros(table, t, conv)? - smooth_count_unchecked(t))
}

/// Picks T in [n, n+1] as far as possible from every ordinate and requires
/// that distance to be at least `c / log n`. An interval free of ordinates
/// yields its midpoint; ties go to the smallest T.
pub fn select_well_separated(table: &ZeroTable, n: u64, c: f64) -> Result<f64> {
    if n < 4 {
        return domain(format!("select_well_separated: n = {n} must be >= 4"));
    }
    if !(c > 0.0) {
        return domain(format!("select_well_separated: c = {c} must be > 0"));
    }
    let lo = n as f64;
    let hi = lo + 1.0;
    table.require_height(hi)?;
    let g = table.ordinates();
    let required = c / lo.ln();

    let dist = |t: f64| -> f64 {
        let i = g.partition_point(|&x| x < t);
        let mut d = f64::INFINITY;
        if i < g.len() {
            d = d.min(g[i] - t);
        }
        if i > 0 {
            d = d.min(t - g[i - 1]);
        }
        d
    };

    let first = table.count_lt(lo);
    let last = table.count_le(hi);
    let (best_t, best_d) = if first == last {
        let mid = lo + 0.5;
        (mid, dist(mid))
    } else {
        let mut cands = vec![lo, hi];
        // Midpoints of consecutive ordinates, including the neighbours just
        // outside the interval.
        let from = first.saturating_sub(1);
        let to = (last + 1).min(g.len());
        for w in g[from..to].windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            if (lo..=hi).contains(&m) {
                cands.push(m);
            }
        }
        cands.sort_by(f64::total_cmp);
        let mut best = (cands[0], dist(cands[0]));
        for &t in &cands[1..] {
            let d = dist(t);
            if d > best.1 {
                best = (t, d);
            }
        }
        best
    };

    if best_d < required {
        return Err(Error::NoSeparatedPoint { n, achieved: best_d, required });
    }
    Ok(best_t)
}
