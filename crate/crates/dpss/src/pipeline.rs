//! End-to-end sorting pipelines.
//!
//! The distinguishing-prefix-aware pipeline approximates the relevant prefix
//! lengths, prunes every string to its estimate, and sorts the pruned set,
//! so its symbol reads scale with the distinguishing prefix size rather
//! than the total input size. The baseline is a positional radix sorter in
//! the classic style that inspects every symbol by construction, making the
//! difference measurable.

use rayon::prelude::*;

use crate::approx::{approximate, approximate_relaxed, ApproxConfig, ApproxLengths};
use crate::fingerprint::FingerprintParams;
use crate::mkqs;
use crate::scan;
use crate::semisort::SemisortStrategy;
use crate::strings::{truncate, SortPermutation, StringSet, Symbol, WorkStats};

/// Which approximation feeds the pruning step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Full,
    Relaxed,
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub variant: Variant,
    pub strategy: SemisortStrategy,
    pub seed: u64,
    pub confirm_boundaries: bool,
    /// Rewrite the pruned strings over the dense alphabet `[1, m]` before
    /// sorting. The bundled sorter handles arbitrary symbols, so this is
    /// off by default and exists as a composable pass for sorters that
    /// need polynomially bounded alphabets.
    pub reduce_alphabet: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Full,
            strategy: SemisortStrategy::Hybrid,
            seed: 0,
            confirm_boundaries: true,
            reduce_alphabet: false,
        }
    }
}

/// Order-preserving map from the symbols present in a set onto `[1, m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetReductionMap {
    symbols: Vec<Symbol>,
}

impl AlphabetReductionMap {
    /// Rank of a symbol in `[1, m]`, if it occurred in the original set.
    pub fn rank(&self, symbol: Symbol) -> Option<u32> {
        self.symbols.binary_search(&symbol).ok().map(|at| at as u32 + 1)
    }

    /// The distinct symbols of the original set, ascending.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn distinct(&self) -> usize {
        self.symbols.len()
    }
}

/// Rewrites every symbol with its rank among the distinct symbols present,
/// reducing the alphabet to `[1, m]` with `m <= N` while preserving order.
///
/// Runs the flatten/sort/mark/prefix-sum route: position-symbol tuples are
/// sorted by symbol, leftmost occurrences are marked, and prefix sums over
/// the marks turn into ranks. Records one read per symbol.
pub fn reduce_alphabet(set: &StringSet, stats: &WorkStats) -> (StringSet, AlphabetReductionMap) {
    let n = set.total_len();
    let lengths: Vec<usize> = (0..set.k()).map(|i| set.len_of(i)).collect();
    if n == 0 {
        let reduced = StringSet::from_parts(Vec::new(), lengths, 1).unwrap();
        return (reduced, AlphabetReductionMap { symbols: Vec::new() });
    }

    let mut tuples: Vec<(Symbol, u64)> = Vec::with_capacity(n);
    let mut flat = 0u64;
    for i in 0..set.k() {
        for &c in set.string(i) {
            tuples.push((c, flat));
            flat += 1;
        }
    }
    stats.count(n as u64);
    tuples.par_sort_unstable();

    let marks: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|h| (h > 0 && tuples[h - 1].0 != tuples[h].0) as u64)
        .collect();
    let ranks = scan::all_prefix_sums(&marks);

    let mut buffer = vec![0 as Symbol; n];
    for (h, &(_, pos)) in tuples.iter().enumerate() {
        buffer[pos as usize] = ranks[h] as Symbol + 1;
    }
    let symbols: Vec<Symbol> = tuples
        .iter()
        .enumerate()
        .filter(|&(h, _)| h == 0 || marks[h] == 1)
        .map(|(_, &(c, _))| c)
        .collect();

    let m = symbols.len() as u32;
    let reduced = StringSet::from_parts(buffer, lengths, m).unwrap();
    (reduced, AlphabetReductionMap { symbols })
}

/// Sorts a (typically pruned) set with the bundled multikey comparison
/// sorter: `O(k lg k + M)` symbol reads on a set of total length `M`,
/// arbitrary alphabet, ties by ascending index.
pub fn sort_truncated(set: &StringSet, stats: &WorkStats) -> SortPermutation {
    let mut ids: Vec<u32> = (0..set.k() as u32).collect();
    mkqs::sort_by_prefix(set, &mut ids, usize::MAX, stats);
    SortPermutation::new(ids)
}

/// Result of the distinguishing-prefix-aware pipeline, with symbol reads
/// split per phase.
#[derive(Debug)]
pub struct DAwareOutcome {
    pub permutation: SortPermutation,
    pub approx: ApproxLengths,
    pub truncate_symbols: u64,
    pub sort_symbols: u64,
}

impl DAwareOutcome {
    pub fn total_symbols(&self) -> u64 {
        self.approx.stats().symbols_inspected() + self.truncate_symbols + self.sort_symbols
    }
}

/// Approximate, prune, sort. The permutation equals the reference
/// lexicographic order of the original strings; with confirmed boundaries
/// this holds unconditionally, otherwise with high probability over the
/// fingerprint seed.
pub fn d_aware_sort(set: &StringSet, config: &PipelineConfig) -> DAwareOutcome {
    let approx_config = ApproxConfig {
        strategy: config.strategy,
        params: FingerprintParams::from_seed(config.seed),
        confirm_boundaries: config.confirm_boundaries,
    };
    let approx = match config.variant {
        Variant::Full => approximate(set, &approx_config),
        Variant::Relaxed => approximate_relaxed(set, &approx_config),
    };
    let pruned = truncate(set, approx.lengths())
        .expect("approximated lengths never exceed string lengths");
    // Pruning copies each kept symbol once.
    let truncate_symbols = pruned.total_len() as u64;

    let sort_stats = WorkStats::new();
    let permutation = if config.reduce_alphabet {
        let (reduced, _) = reduce_alphabet(&pruned, &sort_stats);
        sort_truncated(&reduced, &sort_stats)
    } else {
        sort_truncated(&pruned, &sort_stats)
    };
    DAwareOutcome {
        permutation,
        approx,
        truncate_symbols,
        sort_symbols: sort_stats.symbols_inspected(),
    }
}

/// The baseline: a positional (last-to-first) radix string sorter. Each
/// position pass reorders every string that is long enough, so it reads
/// exactly `N` symbols no matter how small the distinguishing prefix is.
pub fn baseline_sort(set: &StringSet, stats: &WorkStats) -> SortPermutation {
    let k = set.k();
    let mut by_len: Vec<u32> = (0..k as u32).collect();
    by_len.sort_unstable_by(|&a, &b| {
        set.len_of(b as usize).cmp(&set.len_of(a as usize)).then(a.cmp(&b))
    });

    let mut current: Vec<u32> = Vec::new();
    let mut entered = 0usize;
    for p in (0..set.max_len()).rev() {
        // Strings of length exactly p + 1 join now, ahead of the longer
        // strings already sorted by their suffix past p: a proper prefix
        // sorts first, and the stable pass below keeps it that way.
        if entered < k && set.len_of(by_len[entered] as usize) == p + 1 {
            let mut joined: Vec<u32> = Vec::new();
            while entered < k && set.len_of(by_len[entered] as usize) == p + 1 {
                joined.push(by_len[entered]);
                entered += 1;
            }
            joined.extend_from_slice(&current);
            current = joined;
        }
        stats.count(current.len() as u64);
        current.sort_by_key(|&i| set.string(i as usize)[p]);
    }

    let mut order: Vec<u32> = by_len[entered..].to_vec(); // empty strings, index order
    order.extend_from_slice(&current);
    SortPermutation::new(order)
}
