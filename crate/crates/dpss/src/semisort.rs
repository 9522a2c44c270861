//! Semisorting strategies: reorder active string indices so that equal
//! length-`2^r` prefixes become contiguous, and flag where each group starts.
//!
//! Semisorting is weaker than sorting — groups need not appear in key order.
//! `PrefixCompare` reads prefix symbols directly and yields groups in
//! lexicographic order; the fingerprint strategies only guarantee
//! contiguity, exactly so in confirmed mode and with high probability
//! otherwise.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::fingerprint::{fingerprint_prefix_batch, Fingerprint, FingerprintParams};
use crate::mkqs;
use crate::strings::{lex_compare, StringSet, Symbol, WorkStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemisortStrategy {
    /// Multikey comparison sort on the prefix symbols themselves.
    PrefixCompare,
    /// Sort (fingerprint, index) pairs.
    FingerprintSort,
    /// Bucket fingerprints by hash, collect groups per bucket.
    FingerprintGroup,
    /// FingerprintGroup while many strings are active, FingerprintSort once
    /// few remain.
    Hybrid,
}

/// A permutation of the active indices plus a flag per position marking the
/// first element of each group of equal prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemisortOutput {
    pub order: Vec<u32>,
    pub group_start: Vec<bool>,
}

/// Picks the concrete strategy for a round of the hybrid policy: grouping
/// while `k_r >= k / lg^2 k` strings are active, sorting below that, where
/// the sort's deterministic cost is affordable.
pub fn hybrid_select(k: usize, k_r: usize, _round: u32) -> SemisortStrategy {
    let lg = (k.max(2) as f64).log2();
    if (k_r as f64) * lg * lg >= k as f64 {
        SemisortStrategy::FingerprintGroup
    } else {
        SemisortStrategy::FingerprintSort
    }
}

/// Groups `active` by the length-`len` prefixes of their strings. Every
/// active string must be at least `len` symbols long.
///
/// With `confirm_boundaries`, group boundaries are established by direct
/// prefix comparisons, so fingerprint collisions can never split a true
/// group or fake a unique prefix; without it the flags come from fingerprint
/// equality alone and hold with high probability.
pub fn semisort_round(
    set: &StringSet,
    active: &[u32],
    len: usize,
    strategy: SemisortStrategy,
    params: Option<&FingerprintParams>,
    confirm_boundaries: bool,
    stats: &WorkStats,
) -> SemisortOutput {
    debug_assert!(active.iter().all(|&i| set.len_of(i as usize) >= len));
    let k_r = active.len();
    if k_r == 0 {
        return SemisortOutput { order: Vec::new(), group_start: Vec::new() };
    }
    if k_r == 1 {
        return SemisortOutput { order: active.to_vec(), group_start: vec![true] };
    }
    if len == 1 {
        // Single symbols group exactly without hashing.
        return direct_symbol_round(set, active, stats);
    }
    let strategy = match strategy {
        SemisortStrategy::Hybrid => hybrid_select(set.k(), k_r, len.trailing_zeros()),
        other => other,
    };
    match strategy {
        SemisortStrategy::PrefixCompare => {
            let mut order = active.to_vec();
            mkqs::sort_by_prefix(set, &mut order, len, stats);
            let group_start = boundaries_by_comparison(set, &order, len, stats);
            SemisortOutput { order, group_start }
        }
        SemisortStrategy::FingerprintSort | SemisortStrategy::FingerprintGroup => {
            let params = params.expect("fingerprint strategies require parameters");
            let fps = fingerprint_prefix_batch(set, active, len, params, stats)
                .expect("active string shorter than the round prefix");
            let (mut order, keys) = if strategy == SemisortStrategy::FingerprintSort {
                fingerprint_sorted(active, &fps)
            } else {
                fingerprint_grouped(active, &fps)
            };
            let provisional = boundaries_from_keys(&keys);
            let group_start = if confirm_boundaries {
                confirm_runs(set, &mut order, len, &provisional, stats)
            } else {
                provisional
            };
            SemisortOutput { order, group_start }
        }
        SemisortStrategy::Hybrid => unreachable!("hybrid resolved above"),
    }
}

fn direct_symbol_round(set: &StringSet, active: &[u32], stats: &WorkStats) -> SemisortOutput {
    let mut pairs: Vec<(Symbol, u32)> =
        active.iter().map(|&i| (set.string(i as usize)[0], i)).collect();
    stats.count(active.len() as u64);
    pairs.par_sort_unstable();
    let keys: Vec<u64> = pairs.iter().map(|&(s, _)| s as u64).collect();
    let order = pairs.into_iter().map(|(_, i)| i).collect();
    SemisortOutput { order, group_start: boundaries_from_keys(&keys) }
}

fn fingerprint_sorted(active: &[u32], fps: &[Fingerprint]) -> (Vec<u32>, Vec<u64>) {
    let mut pairs: Vec<(u64, u32)> =
        active.iter().zip(fps).map(|(&i, fp)| (fp.value(), i)).collect();
    pairs.par_sort_unstable();
    let keys = pairs.iter().map(|&(v, _)| v).collect();
    let order = pairs.into_iter().map(|(_, i)| i).collect();
    (order, keys)
}

/// Scatters the fingerprints into hash buckets, then makes equal values
/// contiguous inside each bucket. Expected linear work under uniform
/// hashing; groups come out in (bucket, fingerprint) order, not key order.
fn fingerprint_grouped(active: &[u32], fps: &[Fingerprint]) -> (Vec<u32>, Vec<u64>) {
    let k_r = active.len();
    let buckets = k_r.next_power_of_two().min(1 << 16);
    let shift = 64 - buckets.trailing_zeros();
    let slot = |fp: &Fingerprint| (fp.value().wrapping_mul(0x9e37_79b9_7f4a_7c15) >> shift) as usize;

    let mut counts = vec![0usize; buckets];
    for fp in fps {
        counts[slot(fp)] += 1;
    }
    let mut cursor = Vec::with_capacity(buckets);
    let mut at = 0;
    for &c in &counts {
        cursor.push(at);
        at += c;
    }
    let mut pairs: Vec<(u64, u32)> = vec![(0, 0); k_r];
    for (&i, fp) in active.iter().zip(fps) {
        let s = slot(fp);
        pairs[cursor[s]] = (fp.value(), i);
        cursor[s] += 1;
    }

    let mut slices: Vec<&mut [(u64, u32)]> = Vec::with_capacity(buckets);
    let mut rest = pairs.as_mut_slice();
    for &c in &counts {
        let (head, tail) = rest.split_at_mut(c);
        slices.push(head);
        rest = tail;
    }
    slices.into_par_iter().for_each(|bucket| bucket.sort_unstable());

    let keys = pairs.iter().map(|&(v, _)| v).collect();
    let order = pairs.into_iter().map(|(_, i)| i).collect();
    (order, keys)
}

fn boundaries_from_keys(keys: &[u64]) -> Vec<bool> {
    (0..keys.len()).map(|j| j == 0 || keys[j] != keys[j - 1]).collect()
}

fn boundaries_by_comparison(
    set: &StringSet,
    order: &[u32],
    len: usize,
    stats: &WorkStats,
) -> Vec<bool> {
    (0..order.len())
        .into_par_iter()
        .map(|j| {
            j == 0 || {
                let a = set.prefix(order[j - 1] as usize, len);
                let b = set.prefix(order[j] as usize, len);
                lex_compare(a, b, stats).0 != Ordering::Equal
            }
        })
        .collect()
}

/// Confirms the provisional fingerprint runs by direct comparison. A run
/// whose members do not all share one prefix (a collision) is re-sorted by
/// prefix content so its true groups become contiguous before the flags are
/// derived.
fn confirm_runs(
    set: &StringSet,
    order: &mut [u32],
    len: usize,
    provisional: &[bool],
    stats: &WorkStats,
) -> Vec<bool> {
    let k_r = order.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for (j, &flag) in provisional.iter().enumerate().skip(1) {
        if flag {
            runs.push((start, j));
            start = j;
        }
    }
    runs.push((start, k_r));

    let equal_prefix = |a: u32, b: u32| {
        lex_compare(set.prefix(a as usize, len), set.prefix(b as usize, len), stats).0
            == Ordering::Equal
    };
    let mixed: Vec<bool> = runs
        .par_iter()
        .map(|&(s, e)| (s + 1..e).any(|j| !equal_prefix(order[j - 1], order[j])))
        .collect();

    let mut flags = vec![false; k_r];
    for (&(s, e), &is_mixed) in runs.iter().zip(&mixed) {
        flags[s] = true;
        if is_mixed {
            mkqs::sort_by_prefix(set, &mut order[s..e], len, stats);
            for j in s + 1..e {
                flags[j] = !equal_prefix(order[j - 1], order[j]);
            }
        }
    }
    flags
}
