//! Karp-Rabin fingerprints of substrings, used as semisort keys.
//!
//! The fingerprint of `s[x..=y]` is `Σ s[z] · b^(y-z) mod q` for a prime `q`
//! and a base `b` drawn uniformly from `[q, 2q)`. Equal substrings always
//! collide; unequal length-`n` substrings collide with probability at most
//! `(n + 1) / q`, which is negligible for the default 61-bit modulus.

use rayon::prelude::*;
use thiserror::Error;

use crate::scan::all_prefix;
use crate::strings::{StringSet, WorkStats};

/// Default modulus: the Mersenne prime `2^61 - 1`. It exceeds `N^3` for any
/// in-memory input, and reduction stays within double-word arithmetic.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Modulus `q`, base `b in [q, 2q)`, and the seed `b` was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintParams {
    modulus: u64,
    base: u64,
    seed: u64,
}

impl FingerprintParams {
    /// Draws a base from `[q, 2q)` with `q = 2^61 - 1`.
    pub fn from_seed(seed: u64) -> Self {
        Self::with_modulus(MERSENNE_61, seed)
    }

    /// Draws a base from `[q, 2q)` for a caller-chosen prime modulus.
    pub fn with_modulus(modulus: u64, seed: u64) -> Self {
        assert!(modulus > 1, "modulus must be a prime > 1");
        let base = modulus + splitmix64(seed) % modulus;
        Self { modulus, base, seed }
    }

    /// Fixes the base explicitly; it must lie in `[q, 2q)`. Intended for
    /// replaying a run whose parameters are already known.
    pub fn from_parts(modulus: u64, base: u64, seed: u64) -> Self {
        assert!(modulus > 1);
        assert!((modulus..2 * modulus).contains(&base), "base must be in [q, 2q)");
        Self { modulus, base, seed }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// A fingerprint value in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(u64);

impl Fingerprint {
    pub fn value(&self) -> u64 {
        self.0
    }
}

/// The requested substring does not fit inside the string.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("substring of length {len} at {start} exceeds string {index} of length {actual}")]
pub struct RangeError {
    pub index: usize,
    pub start: usize,
    pub len: usize,
    pub actual: usize,
}

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    if q == MERSENNE_61 {
        // Mersenne folding: valid for operands below 2^62.
        debug_assert!(a < 1 << 62 && b < 1 << 62);
        let t = a as u128 * b as u128;
        let folded = (t >> 61) + (t & MERSENNE_61 as u128);
        let folded = ((folded >> 61) + (folded & MERSENNE_61 as u128)) as u64;
        if folded >= MERSENNE_61 {
            folded - MERSENNE_61
        } else {
            folded
        }
    } else {
        (a as u128 * b as u128 % q as u128) as u64
    }
}

#[inline]
fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

/// `1, b, b^2, …, b^(len-1) mod q`, computed as an inclusive scan with
/// modular multiplication.
fn power_table(params: &FingerprintParams, len: usize) -> Vec<u64> {
    let q = params.modulus;
    let b = params.base % q;
    let mut seq = vec![b; len];
    if len > 0 {
        seq[0] = 1 % q;
    }
    all_prefix(&seq, |x, y| mul_mod(x, y, q))
}

/// Fingerprint of the substring of string `i` starting at the 0-based
/// position `start` and spanning `len >= 1` symbols.
///
/// Evaluated with scans: the exponent table `b^0..b^(len-1)`, an elementwise
/// multiply, and a modular sum scan. Records `len` symbol reads.
pub fn fingerprint_substring(
    set: &StringSet,
    i: usize,
    start: usize,
    len: usize,
    params: &FingerprintParams,
    stats: &WorkStats,
) -> Result<Fingerprint, RangeError> {
    let actual = set.len_of(i);
    if len == 0 || start + len > actual {
        return Err(RangeError { index: i, start, len, actual });
    }
    let q = params.modulus;
    let powers = power_table(params, len);
    let symbols = &set.string(i)[start..start + len];
    stats.count(len as u64);
    // Parallelism pays only past the scan block size; the scans below make
    // the same call.
    let term = |(j, &sym): (usize, &u32)| mul_mod(sym as u64 % q, powers[len - 1 - j], q);
    let terms: Vec<u64> = if len >= 1 << 12 {
        symbols.par_iter().enumerate().map(term).collect()
    } else {
        symbols.iter().enumerate().map(term).collect()
    };
    let total = *all_prefix(&terms, |x, y| add_mod(x, y, q)).last().unwrap();
    Ok(Fingerprint(total))
}

/// Fingerprints of the length-`len` prefixes of all `active` strings. Every
/// active string must be at least `len` long. Records `|active| * len` reads.
pub fn fingerprint_prefix_batch(
    set: &StringSet,
    active: &[u32],
    len: usize,
    params: &FingerprintParams,
    stats: &WorkStats,
) -> Result<Vec<Fingerprint>, RangeError> {
    if active.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&short) = active.iter().find(|&&i| set.len_of(i as usize) < len) {
        return Err(RangeError {
            index: short as usize,
            start: 0,
            len,
            actual: set.len_of(short as usize),
        });
    }
    let q = params.modulus;
    let powers = power_table(params, len);
    stats.count(active.len() as u64 * len as u64);
    let out = active
        .par_iter()
        .map(|&i| {
            let symbols = set.prefix(i as usize, len);
            let mut acc = 0u64;
            for (j, &sym) in symbols.iter().enumerate() {
                acc = add_mod(acc, mul_mod(sym as u64 % q, powers[len - 1 - j], q), q);
            }
            Fingerprint(acc)
        })
        .collect();
    Ok(out)
}
