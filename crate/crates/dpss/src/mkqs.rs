//! Multikey ternary comparison sort over string indices.
//!
//! Keys are the string contents capped at a per-call prefix length; a string
//! that ends (or hits the cap) sorts before every longer one, and fully equal
//! keys fall back to ascending index. Large nodes partition through stable
//! parallel compaction, so the result and the symbol-read count are the same
//! for any worker count.

use rayon::prelude::*;

use crate::scan::compact;
use crate::strings::{StringSet, Symbol, WorkStats};

const PAR_NODE: usize = 1 << 13;

/// Sorts `ids` lexicographically by string content capped at `cap` symbols,
/// ties broken by ascending index. One read is counted per live symbol that
/// a partition inspects.
pub(crate) fn sort_by_prefix(set: &StringSet, ids: &mut [u32], cap: usize, stats: &WorkStats) {
    sort_node(set, ids, 0, cap, stats);
}

#[inline]
fn key_at(set: &StringSet, i: u32, depth: usize, cap: usize) -> Option<Symbol> {
    if depth < set.len_of(i as usize).min(cap) {
        Some(set.string(i as usize)[depth])
    } else {
        None
    }
}

fn median3<T: Ord + Copy>(a: T, b: T, c: T) -> T {
    a.min(b).max(a.max(b).min(c))
}

/// Median of three keys at hash-derived positions. Fixed sample positions
/// (first/middle/last) go quadratic on alternating patterns; hashing the
/// node shape decorrelates the sample from the data while staying a pure
/// function of the node, so runs and worker counts still agree.
fn pick_pivot(keys: &[Option<Symbol>], depth: usize) -> Option<Symbol> {
    let n = keys.len() as u64;
    let mut z = (n << 32) ^ depth as u64;
    let mut sample = || {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = z;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        keys[((x ^ (x >> 31)) % n) as usize]
    };
    median3(sample(), sample(), sample())
}

fn sort_node(
    set: &StringSet,
    mut ids: &mut [u32],
    mut depth: usize,
    cap: usize,
    stats: &WorkStats,
) {
    loop {
        let n = ids.len();
        if n <= 1 {
            return;
        }
        let par = n >= PAR_NODE;

        let keys: Vec<Option<Symbol>> = if par {
            ids.par_iter().map(|&i| key_at(set, i, depth, cap)).collect()
        } else {
            ids.iter().map(|&i| key_at(set, i, depth, cap)).collect()
        };
        let live = keys.iter().filter(|k| k.is_some()).count();
        stats.count(live as u64);
        if live == 0 {
            // Every key is exhausted: the capped strings are equal.
            ids.sort_unstable();
            return;
        }

        // `None` orders below any symbol, so ended strings gather left.
        let pivot = pick_pivot(&keys, depth);
        let (lt, eq, gt) = if par {
            let lt_mask: Vec<bool> = keys.par_iter().map(|k| *k < pivot).collect();
            let eq_mask: Vec<bool> = keys.par_iter().map(|k| *k == pivot).collect();
            let gt_mask: Vec<bool> = keys.par_iter().map(|k| *k > pivot).collect();
            (compact(ids, &lt_mask), compact(ids, &eq_mask), compact(ids, &gt_mask))
        } else {
            let mut lt = Vec::new();
            let mut eq = Vec::new();
            let mut gt = Vec::new();
            for (&i, k) in ids.iter().zip(&keys) {
                match k.cmp(&pivot) {
                    std::cmp::Ordering::Less => lt.push(i),
                    std::cmp::Ordering::Equal => eq.push(i),
                    std::cmp::Ordering::Greater => gt.push(i),
                }
            }
            (lt, eq, gt)
        };

        let (lt_len, eq_len) = (lt.len(), eq.len());
        ids[..lt_len].copy_from_slice(&lt);
        ids[lt_len..lt_len + eq_len].copy_from_slice(&eq);
        ids[lt_len + eq_len..].copy_from_slice(&gt);

        let whole = ids;
        let (lt_part, rest) = whole.split_at_mut(lt_len);
        let (eq_part, gt_part) = rest.split_at_mut(eq_len);
        if par {
            rayon::join(
                || sort_node(set, lt_part, depth, cap, stats),
                || sort_node(set, gt_part, depth, cap, stats),
            );
        } else {
            sort_node(set, lt_part, depth, cap, stats);
            sort_node(set, gt_part, depth, cap, stats);
        }

        if pivot.is_none() {
            // The equal part carries no further symbols: order by index.
            eq_part.sort_unstable();
            return;
        }
        // Tail-descend into the equal partition at the next depth.
        ids = eq_part;
        depth += 1;
    }
}
