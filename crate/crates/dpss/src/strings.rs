//! String-set representation: one flat symbol buffer plus per-string offsets
//! and lengths, lexicographic comparison, truncation, and the symbol-read
//! instrumentation shared by all parallel phases.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering::Relaxed};
use std::sync::Mutex;

use thiserror::Error;

/// A single symbol. Valid symbols lie in `[1, sigma]`; byte inputs are
/// lifted via `b -> b + 1` so the value 0 never occurs in a valid set.
pub type Symbol = u32;

/// Raised while building a [`StringSet`] from untrusted parts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StringSetError {
    #[error("string {index} contains the invalid symbol 0")]
    ZeroSymbol { index: usize },
    #[error("buffer holds {buffer} symbols but the lengths sum to {total}")]
    LengthMismatch { buffer: usize, total: usize },
}

/// Truncation was asked to keep more symbols than a string has.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("requested prefix length {requested} for string {index} of length {actual}")]
pub struct LengthExceeds {
    pub index: usize,
    pub requested: usize,
    pub actual: usize,
}

/// An immutable set of `k` strings over the alphabet `[1, sigma]`, stored as
/// one concatenated buffer plus per-string offsets. Construction validates
/// the symbol range; afterwards the set is freely shareable across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringSet {
    buffer: Vec<Symbol>,
    offsets: Vec<usize>,
    lengths: Vec<usize>,
    sigma: u32,
}

impl StringSet {
    /// Builds a set from one row of symbols per string. The declared `sigma`
    /// is raised to the largest symbol actually present.
    pub fn from_rows(rows: &[Vec<Symbol>], sigma: u32) -> Result<Self, StringSetError> {
        let total = rows.iter().map(Vec::len).sum();
        let mut buffer = Vec::with_capacity(total);
        let mut lengths = Vec::with_capacity(rows.len());
        for row in rows {
            lengths.push(row.len());
            buffer.extend_from_slice(row);
        }
        Self::from_parts(buffer, lengths, sigma)
    }

    /// Builds a set from an already concatenated buffer and string lengths.
    pub fn from_parts(
        buffer: Vec<Symbol>,
        lengths: Vec<usize>,
        sigma: u32,
    ) -> Result<Self, StringSetError> {
        let total: usize = lengths.iter().sum();
        if total != buffer.len() {
            return Err(StringSetError::LengthMismatch { buffer: buffer.len(), total });
        }
        let mut offsets = Vec::with_capacity(lengths.len());
        let mut at = 0;
        for &len in &lengths {
            offsets.push(at);
            at += len;
        }
        let mut max_seen = 1;
        for (index, &len) in lengths.iter().enumerate() {
            let row = &buffer[offsets[index]..offsets[index] + len];
            for &value in row {
                if value == 0 {
                    return Err(StringSetError::ZeroSymbol { index });
                }
                max_seen = max_seen.max(value);
            }
        }
        Ok(Self { buffer, offsets, lengths, sigma: sigma.max(max_seen) })
    }

    /// Lifts byte strings into the set by mapping each byte `b` to the
    /// symbol `b + 1`, so the alphabet becomes `[1, 256]`.
    pub fn from_byte_strings<I, S>(lines: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut buffer = Vec::new();
        let mut offsets = Vec::new();
        let mut lengths = Vec::new();
        for line in lines {
            let bytes = line.as_ref();
            offsets.push(buffer.len());
            lengths.push(bytes.len());
            buffer.extend(bytes.iter().map(|&b| b as Symbol + 1));
        }
        Self { buffer, offsets, lengths, sigma: 256 }
    }

    /// Number of strings `k`.
    pub fn k(&self) -> usize {
        self.lengths.len()
    }

    /// Total number of symbols `N`.
    pub fn total_len(&self) -> usize {
        self.buffer.len()
    }

    /// Declared alphabet upper bound; at least the largest symbol present.
    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn len_of(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn max_len(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// The `i`-th string as a symbol slice.
    pub fn string(&self, i: usize) -> &[Symbol] {
        &self.buffer[self.offsets[i]..self.offsets[i] + self.lengths[i]]
    }

    /// The length-`len` prefix of string `i`; `len` must not exceed it.
    pub fn prefix(&self, i: usize, len: usize) -> &[Symbol] {
        &self.buffer[self.offsets[i]..self.offsets[i] + len]
    }

    pub fn strings(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        (0..self.k()).map(move |i| self.string(i))
    }
}

/// Work instrumentation: a schedule-independent count of symbol reads plus
/// the per-round active counts of the approximation scheme. Every inspected
/// symbol is counted exactly once, so the final tally does not depend on the
/// worker count or interleaving.
#[derive(Debug, Default)]
pub struct WorkStats {
    symbols: AtomicU64,
    rounds: Mutex<Vec<u64>>,
}

impl WorkStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `n` symbol reads.
    pub fn count(&self, n: u64) {
        self.symbols.fetch_add(n, Relaxed);
    }

    pub fn symbols_inspected(&self) -> u64 {
        self.symbols.load(Relaxed)
    }

    /// Appends the active count of one executed round.
    pub fn record_round(&self, k_r: u64) {
        self.rounds.lock().unwrap().push(k_r);
    }

    pub fn rounds_executed(&self) -> usize {
        self.rounds.lock().unwrap().len()
    }

    pub fn per_round_active(&self) -> Vec<u64> {
        self.rounds.lock().unwrap().clone()
    }
}

/// Compares two symbol slices lexicographically and returns the ordering
/// together with the length of their longest common prefix.
///
/// A proper prefix sorts before its extensions. Each compared position reads
/// one symbol from either side, so `2 * min(lcp + 1, min(|a|, |b|))` reads
/// are recorded: the common prefix plus the mismatching pair when one exists.
pub fn lex_compare(a: &[Symbol], b: &[Symbol], stats: &WorkStats) -> (Ordering, usize) {
    let limit = a.len().min(b.len());
    let mut lcp = 0;
    while lcp < limit && a[lcp] == b[lcp] {
        lcp += 1;
    }
    stats.count(2 * limit.min(lcp + 1) as u64);
    let ord = if lcp == limit { a.len().cmp(&b.len()) } else { a[lcp].cmp(&b[lcp]) };
    (ord, lcp)
}

/// Prunes every string `i` to its length-`keep[i]` prefix.
pub fn truncate(set: &StringSet, keep: &[usize]) -> Result<StringSet, LengthExceeds> {
    assert_eq!(keep.len(), set.k());
    let mut buffer = Vec::with_capacity(keep.iter().sum());
    let mut offsets = Vec::with_capacity(set.k());
    let mut lengths = Vec::with_capacity(set.k());
    for (index, &len) in keep.iter().enumerate() {
        if len > set.len_of(index) {
            return Err(LengthExceeds { index, requested: len, actual: set.len_of(index) });
        }
        offsets.push(buffer.len());
        lengths.push(len);
        buffer.extend_from_slice(set.prefix(index, len));
    }
    Ok(StringSet { buffer, offsets, lengths, sigma: set.sigma })
}

/// The result of sorting: `order[rank]` is the 0-based index of the string
/// with that rank. Ties between equal strings keep ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortPermutation {
    order: Vec<u32>,
}

impl SortPermutation {
    pub fn new(order: Vec<u32>) -> Self {
        debug_assert!(is_permutation(&order));
        Self { order }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// FNV-1a checksum of the permutation, used by reports to compare runs
    /// without shipping the whole order.
    pub fn checksum(&self) -> u64 {
        let mut hash = 0xcbf2_9ce4_8422_2325u64;
        for &i in &self.order {
            for byte in i.to_le_bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(0x100_0000_01b3);
            }
        }
        hash
    }
}

fn is_permutation(order: &[u32]) -> bool {
    let mut seen = vec![false; order.len()];
    order.iter().all(|&i| {
        let slot = seen.get_mut(i as usize);
        match slot {
            Some(s) if !*s => {
                *s = true;
                true
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(strings: &[&str]) -> StringSet {
        StringSet::from_byte_strings(strings.iter().map(|s| s.as_bytes()))
    }

    #[test]
    fn lex_compare_mismatch_inside() {
        let s = set(&["euro", "eureka"]);
        let stats = WorkStats::new();
        let (ord, lcp) = lex_compare(s.string(0), s.string(1), &stats);
        assert_eq!((ord, lcp), (Ordering::Greater, 3));
        assert_eq!(stats.symbols_inspected(), 8);
    }

    #[test]
    fn lex_compare_equal() {
        let s = set(&["abc", "abc"]);
        let stats = WorkStats::new();
        let (ord, lcp) = lex_compare(s.string(0), s.string(1), &stats);
        assert_eq!((ord, lcp), (Ordering::Equal, 3));
        assert_eq!(stats.symbols_inspected(), 6);
    }

    #[test]
    fn lex_compare_proper_prefix() {
        let s = set(&["ab", "abc"]);
        let stats = WorkStats::new();
        let (ord, lcp) = lex_compare(s.string(0), s.string(1), &stats);
        assert_eq!((ord, lcp), (Ordering::Less, 2));
        assert_eq!(stats.symbols_inspected(), 4);
    }

    #[test]
    fn lex_compare_antisymmetric() {
        let mut state = 0x7c5c_9df1_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let la = (next() % 6) as usize;
            let lb = (next() % 6) as usize;
            let a: Vec<Symbol> = (0..la).map(|_| 1 + (next() % 2) as u32).collect();
            let b: Vec<Symbol> = (0..lb).map(|_| 1 + (next() % 2) as u32).collect();
            let stats = WorkStats::new();
            let (ord_ab, lcp_ab) = lex_compare(&a, &b, &stats);
            let (ord_ba, lcp_ba) = lex_compare(&b, &a, &stats);
            assert_eq!(ord_ab, ord_ba.reverse());
            assert_eq!(lcp_ab, lcp_ba);
        }
    }

    // Exhaustive agreement with a naive character loop over all pairs of
    // strings of length <= 4 over {1, 2}.
    #[test]
    fn lex_compare_matches_naive_loop() {
        let mut all: Vec<Vec<Symbol>> = vec![vec![]];
        for len in 1..=4usize {
            for code in 0..(1u32 << len) {
                all.push((0..len).map(|j| 1 + ((code >> j) & 1)).collect());
            }
        }
        let stats = WorkStats::new();
        for a in &all {
            for b in &all {
                let naive = {
                    let mut j = 0;
                    while j < a.len() && j < b.len() && a[j] == b[j] {
                        j += 1;
                    }
                    let ord = if j < a.len() && j < b.len() {
                        a[j].cmp(&b[j])
                    } else {
                        a.len().cmp(&b.len())
                    };
                    (ord, j)
                };
                assert_eq!(lex_compare(a, b, &stats), naive);
            }
        }
    }

    #[test]
    fn truncate_prunes_to_prefixes() {
        let s = set(&["eureka", "eurasia", "excells", "europar"]);
        let pruned = truncate(&s, &[4, 4, 2, 4]).unwrap();
        let expected = set(&["eure", "eura", "ex", "euro"]);
        assert_eq!(pruned, expected);
        assert_eq!(pruned.total_len(), 14);
    }

    #[test]
    fn truncate_full_lengths_is_identity() {
        let s = set(&["aa", "b", ""]);
        let lens: Vec<usize> = (0..s.k()).map(|i| s.len_of(i)).collect();
        assert_eq!(truncate(&s, &lens).unwrap(), s);
        let one = set(&["aa"]);
        assert_eq!(truncate(&one, &[1]).unwrap(), set(&["a"]));
    }

    #[test]
    fn truncate_rejects_overlong_request() {
        let s = set(&["ab"]);
        let err = truncate(&s, &[3]).unwrap_err();
        assert_eq!(err, LengthExceeds { index: 0, requested: 3, actual: 2 });
    }

    #[test]
    fn from_parts_validates() {
        assert_eq!(
            StringSet::from_parts(vec![1, 0], vec![2], 2).unwrap_err(),
            StringSetError::ZeroSymbol { index: 0 }
        );
        assert_eq!(
            StringSet::from_parts(vec![1], vec![2], 2).unwrap_err(),
            StringSetError::LengthMismatch { buffer: 1, total: 2 }
        );
        let s = StringSet::from_parts(vec![7, 1], vec![1, 1], 2).unwrap();
        assert_eq!(s.sigma(), 7);
    }

    #[test]
    fn byte_lifting_shifts_by_one() {
        let s = set(&["ab"]);
        assert_eq!(s.string(0), &[b'a' as u32 + 1, b'b' as u32 + 1]);
        assert_eq!(s.sigma(), 256);
    }
}
