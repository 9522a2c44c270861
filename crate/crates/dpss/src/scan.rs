//! Data-parallel building blocks: generic inclusive scans, prefix sums, and
//! stable compaction by keep flags.
//!
//! Scans run blocked two-pass: fold each block, scan the block sums, then
//! rescan each block with its carry. The block layout depends only on the
//! input length, so results and instrumentation are identical for any worker
//! count.

use rayon::prelude::*;

const MIN_BLOCK: usize = 1 << 12;
const MAX_BLOCKS: usize = 1 << 12;

fn block_len(n: usize) -> usize {
    n.div_ceil(MAX_BLOCKS).max(MIN_BLOCK)
}

/// Inclusive scan with an associative operator: `out[j] = a_0 ⊕ … ⊕ a_j`.
///
/// The operator must be a pure function of its arguments; the scan is free
/// to re-associate applications across blocks.
pub fn all_prefix<T, F>(values: &[T], op: F) -> Vec<T>
where
    T: Copy + Send + Sync,
    F: Fn(T, T) -> T + Sync,
{
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let block = block_len(n);
    if n <= block {
        return seq_scan(values, &op);
    }

    let sums: Vec<T> = values
        .par_chunks(block)
        .map(|chunk| chunk.iter().copied().reduce(&op).unwrap())
        .collect();
    // Carry for block j is the fold of all blocks before it (small array,
    // scanned sequentially).
    let mut carries = Vec::with_capacity(sums.len());
    let mut acc = sums[0];
    carries.push(acc);
    for &s in &sums[1..] {
        acc = op(acc, s);
        carries.push(acc);
    }

    let mut out = vec![values[0]; n];
    out.par_chunks_mut(block)
        .zip(values.par_chunks(block))
        .enumerate()
        .for_each(|(j, (slot, chunk))| {
            let mut acc = if j == 0 { None } else { Some(carries[j - 1]) };
            for (o, &v) in slot.iter_mut().zip(chunk) {
                let next = match acc {
                    Some(a) => op(a, v),
                    None => v,
                };
                *o = next;
                acc = Some(next);
            }
        });
    out
}

fn seq_scan<T, F>(values: &[T], op: &F) -> Vec<T>
where
    T: Copy,
    F: Fn(T, T) -> T,
{
    let mut out = Vec::with_capacity(values.len());
    let mut acc = values[0];
    out.push(acc);
    for &v in &values[1..] {
        acc = op(acc, v);
        out.push(acc);
    }
    out
}

/// Inclusive prefix sums over `u64` with wrapping addition.
pub fn all_prefix_sums(values: &[u64]) -> Vec<u64> {
    all_prefix(values, u64::wrapping_add)
}

/// Keeps `values[i]` where `keep[i]`, preserving relative order. Destination
/// slots come from a single prefix-sums pass over the keep flags; each block
/// then fills its own contiguous output range.
pub fn compact<T>(values: &[T], keep: &[bool]) -> Vec<T>
where
    T: Copy + Send + Sync,
{
    assert_eq!(values.len(), keep.len());
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let flags: Vec<u64> = keep.iter().map(|&b| b as u64).collect();
    let dest = all_prefix_sums(&flags);
    let total = *dest.last().unwrap() as usize;
    if total == 0 {
        return Vec::new();
    }

    let seed = values[keep.iter().position(|&b| b).unwrap()];
    let mut out = vec![seed; total];
    let block = block_len(n);

    // Kept entries of one input block occupy one contiguous output range, so
    // the output splits into disjoint slices that can be filled in parallel.
    let mut slices: Vec<&mut [T]> = Vec::with_capacity(n.div_ceil(block));
    let mut rest = out.as_mut_slice();
    let mut written = 0usize;
    for start in (0..n).step_by(block) {
        let end_sum = dest[(start + block - 1).min(n - 1)] as usize;
        let (head, tail) = rest.split_at_mut(end_sum - written);
        slices.push(head);
        rest = tail;
        written = end_sum;
    }

    slices
        .into_par_iter()
        .zip(values.par_chunks(block).zip(keep.par_chunks(block)))
        .for_each(|(slot, (vals, flags))| {
            let mut at = 0;
            for (&v, &f) in vals.iter().zip(flags) {
                if f {
                    slot[at] = v;
                    at += 1;
                }
            }
            debug_assert_eq!(at, slot.len());
        });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_prefix_sum_small() {
        assert_eq!(all_prefix(&[1u64, 2, 3], u64::wrapping_add), vec![1, 3, 6]);
    }

    #[test]
    fn all_prefix_singleton() {
        assert_eq!(all_prefix(&[42u64], |a, b| a ^ b), vec![42]);
    }

    #[test]
    fn all_prefix_modular_multiplication() {
        assert_eq!(all_prefix(&[2u64, 3, 4], |a, b| a * b % 5), vec![2, 1, 4]);
    }

    #[test]
    fn all_prefix_sums_examples() {
        assert_eq!(all_prefix_sums(&[0, 1, 0, 1, 1]), vec![0, 1, 1, 2, 3]);
        assert_eq!(all_prefix_sums(&[5]), vec![5]);
        assert!(all_prefix_sums(&[]).is_empty());
    }

    #[test]
    fn scans_match_sequential_fold() {
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [1usize, 2, 100, 1000, 100_000] {
            let values: Vec<u64> = (0..n).map(|_| next() % 10).collect();
            let scanned = all_prefix_sums(&values);
            let mut acc = 0u64;
            for (i, &v) in values.iter().enumerate() {
                acc = acc.wrapping_add(v);
                assert_eq!(scanned[i], acc, "mismatch at {i} of {n}");
            }
        }
    }

    #[test]
    fn compact_moves_kept_entries_to_front() {
        let values = [2u32, 5, 4, 1, 3];
        let keep = [false, true, false, true, true];
        assert_eq!(compact(&values, &keep), vec![5, 1, 3]);
    }

    #[test]
    fn compact_keep_all_and_none() {
        let values: Vec<u32> = (0..100).collect();
        assert_eq!(compact(&values, &[true; 100]), values);
        assert!(compact(&values, &[false; 100]).is_empty());
    }

    #[test]
    fn compact_is_stable_on_large_input() {
        let n = 50_000;
        let values: Vec<u64> = (0..n as u64).collect();
        let keep: Vec<bool> = (0..n).map(|i| i % 3 == 0).collect();
        let got = compact(&values, &keep);
        let want: Vec<u64> = values.iter().copied().filter(|&v| v % 3 == 0).collect();
        assert_eq!(got, want);
    }
}
