//! Sieve of Eratosthenes with an on-disk cache, plus a smallest-prime-factor table.
//!
//! Membership is stored one bit per integer in `[0, limit]`, least significant bit
//! first. Above [`SEGMENT_THRESHOLD`] the sieve runs segment by segment so the
//! working set stays bounded; the resulting bitset is identical either way.

use std::borrow::Cow;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const SEGMENT_THRESHOLD: u64 = 1 << 24;
const SEGMENT_LEN: u64 = 1 << 20;
const CACHE_MAGIC: &[u8; 4] = b"RGL1";

#[derive(Clone, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    bits: Vec<u64>,
    count: usize,
}

impl std::fmt::Debug for PrimeSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeSieve")
            .field("limit", &self.limit)
            .field("count", &self.count)
            .finish()
    }
}

fn words_for(limit: u64) -> usize {
    ((limit + 1).div_ceil(64)) as usize
}

/// Plain sieve of the odd composites up to `limit`, returned as a bitset.
fn simple_bits(limit: u64) -> Vec<u64> {
    let mut bits = vec![0u64; words_for(limit)];
    let set = |bits: &mut Vec<u64>, n: u64| bits[(n / 64) as usize] |= 1 << (n % 64);
    let clear = |bits: &mut Vec<u64>, n: u64| bits[(n / 64) as usize] &= !(1 << (n % 64));
    if limit >= 2 {
        set(&mut bits, 2);
    }
    let mut n = 3;
    while n <= limit {
        set(&mut bits, n);
        n += 2;
    }
    let mut p = 3u64;
    while p * p <= limit {
        if bits[(p / 64) as usize] >> (p % 64) & 1 == 1 {
            let mut k = p * p;
            while k <= limit {
                clear(&mut bits, k);
                k += 2 * p;
            }
        }
        p += 2;
    }
    bits
}

fn segmented_bits(limit: u64) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = PrimeSieve::from_bits(root, simple_bits(root))
        .primes()
        .skip(1)
        .collect();
    let mut bits = vec![0u64; words_for(limit)];
    bits[0] |= 1 << 2;
    let mut seg = vec![true; SEGMENT_LEN as usize];
    let mut lo = 0u64;
    while lo <= limit {
        let hi = (lo + SEGMENT_LEN - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].iter_mut().for_each(|b| *b = true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut k = start;
            while k <= hi {
                seg[(k - lo) as usize] = false;
                k += 2 * p;
            }
        }
        for (i, &alive) in seg[..len].iter().enumerate() {
            let n = lo + i as u64;
            if alive && n >= 3 && n % 2 == 1 {
                bits[(n / 64) as usize] |= 1 << (n % 64);
            }
        }
        lo = hi + 1;
    }
    bits
}

impl PrimeSieve {
    /// Every prime up to and including `limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        let bits = if limit > SEGMENT_THRESHOLD {
            segmented_bits(limit)
        } else {
            simple_bits(limit)
        };
        Ok(Self::from_bits(limit, bits))
    }

    fn from_bits(limit: u64, bits: Vec<u64>) -> Self {
        let count = bits.iter().map(|w| w.count_ones() as usize).sum();
        PrimeSieve { limit, bits, count }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Number of primes up to the limit.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Membership for `n <= limit`; falls back to Miller-Rabin above it.
    pub fn is_prime(&self, n: u64) -> bool {
        if n > self.limit {
            return super::factor::is_prime_u64(n);
        }
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + tz)
            })
        })
    }

    /// pi(x) for x up to the limit.
    pub fn pi(&self, x: u64) -> usize {
        assert!(x <= self.limit, "pi({x}) beyond sieve limit {}", self.limit);
        let full = (x + 1) / 64;
        let mut n: usize = self.bits[..full as usize]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum();
        let rem = (x + 1) % 64;
        if rem > 0 {
            n += (self.bits[full as usize] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        n
    }

    /// Serialized cache form: `RGL1`, the limit in decimal ASCII, a newline, then the
    /// bitset as little-endian bytes.
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.bits.len() * 8);
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(self.limit.to_string().as_bytes());
        out.push(b'\n');
        let nbytes = (self.limit + 1).div_ceil(8) as usize;
        let raw: Vec<u8> = self.bits.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.extend_from_slice(&raw[..nbytes]);
        out
    }

    /// Parse a cache image, checking magic, limit, length and the unused tail bits.
    pub fn from_cache_bytes(data: &[u8], expected_limit: u64) -> Result<Self> {
        let body = data
            .strip_prefix(CACHE_MAGIC.as_slice())
            .ok_or_else(|| Error::Parse("sieve cache: bad magic".into()))?;
        let nl = body
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Parse("sieve cache: missing header newline".into()))?;
        let limit: u64 = std::str::from_utf8(&body[..nl])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("sieve cache: bad limit".into()))?;
        if limit != expected_limit {
            return Err(Error::Parse(format!(
                "sieve cache: limit {limit} does not match requested {expected_limit}"
            )));
        }
        let raw = &body[nl + 1..];
        let nbytes = (limit + 1).div_ceil(8) as usize;
        if raw.len() != nbytes {
            return Err(Error::Parse(format!(
                "sieve cache: {} payload bytes, expected {nbytes}",
                raw.len()
            )));
        }
        let mut bits = vec![0u64; words_for(limit)];
        for (i, &b) in raw.iter().enumerate() {
            bits[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let tail = (limit + 1) % 64;
        if tail != 0 && bits[bits.len() - 1] >> tail != 0 {
            return Err(Error::Parse("sieve cache: bits set past the limit".into()));
        }
        if bits[0] & 0b11 != 0 || bits[0] & 0b100 == 0 {
            return Err(Error::Parse("sieve cache: corrupt low bits".into()));
        }
        Ok(Self::from_bits(limit, bits))
    }

    /// Load from `path` when it holds a valid image for `limit`; otherwise sieve and
    /// rewrite the file.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<Self> {
        if let Ok(data) = fs::read(path) {
            if let Ok(sieve) = Self::from_cache_bytes(&data, limit) {
                return Ok(sieve);
            }
        }
        let sieve = Self::new(limit)?;
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut f = fs::File::create(path)?;
        f.write_all(&sieve.to_cache_bytes())?;
        Ok(sieve)
    }
}

const TRIAL_CACHE_BOUND: u64 = 1_000_000;

/// Primes up to `bound`, served from a shared table when `bound <= 10^6`.
pub fn trial_primes(bound: u64) -> Cow<'static, [u64]> {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    if bound < 2 {
        return Cow::Borrowed(&[]);
    }
    if bound <= TRIAL_CACHE_BOUND {
        let table = TABLE.get_or_init(|| {
            PrimeSieve::new(TRIAL_CACHE_BOUND)
                .expect("static bound")
                .primes()
                .collect()
        });
        let end = table.partition_point(|&p| p <= bound);
        Cow::Borrowed(&table[..end])
    } else {
        Cow::Owned(PrimeSieve::new(bound).expect("bound >= 2").primes().collect())
    }
}

/// Smallest-prime-factor table on `[0, limit]`.
#[derive(Debug, Clone)]
pub struct SmallestFactorTable {
    spf: Vec<u32>,
}

impl SmallestFactorTable {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut k = i;
                while k <= n {
                    if spf[k] == 0 {
                        spf[k] = i as u32;
                    }
                    k += i;
                }
            }
        }
        SmallestFactorTable { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn smallest_factor(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    pub fn factorize(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// The Moebius function.
    pub fn mobius(&self, n: u32) -> i8 {
        let f = self.factorize(n);
        if f.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Euler's totient.
    pub fn totient(&self, n: u32) -> u64 {
        self.factorize(n)
            .iter()
            .fold(n as u64, |acc, &(p, _)| acc / p as u64 * (p as u64 - 1))
    }

    pub fn divisors(&self, n: u32) -> Vec<u32> {
        let mut divs = vec![1u32];
        for (p, e) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}
