//! Round-based 2-approximation of the relevant prefix lengths.
//!
//! Round `r` semisorts the surviving strings by their length-`2^r` prefixes
//! and inspects each group: a string whose prefix is unique gets
//! `L[i] = 2^r`, a string too short to continue gets `L[i] = |s_i|`, and the
//! rest advance. A string exiting through uniqueness was still ambiguous at
//! `2^(r-1)`, so `L[i]` lands in `[ℓ_i, 2ℓ_i)`; summing the per-round costs
//! `k_r · 2^r` over all rounds stays below `4D`.
//!
//! The relaxed variant starts at round `⌈lg lg k⌉` instead of 0, trading the
//! bound for `L'[i] ∈ [ℓ_i, 2·max(lg k, ℓ_i))` to spare the early rounds.

use crate::fingerprint::FingerprintParams;
use crate::scan;
use crate::semisort::{semisort_round, SemisortOutput, SemisortStrategy};
use crate::strings::{StringSet, WorkStats};

/// Surviving string indices entering a round, in semisorted order of the
/// previous round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundState {
    pub round: u32,
    pub active: Vec<u32>,
}

impl RoundState {
    pub fn k_r(&self) -> usize {
        self.active.len()
    }
}

/// How the approximation runs: the semisort strategy, the fingerprint
/// parameters, and whether group boundaries are confirmed by direct
/// comparison (exact) or taken from fingerprints alone (w.h.p.).
#[derive(Debug, Clone, Copy)]
pub struct ApproxConfig {
    pub strategy: SemisortStrategy,
    pub params: FingerprintParams,
    pub confirm_boundaries: bool,
}

impl ApproxConfig {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            strategy: SemisortStrategy::Hybrid,
            params: FingerprintParams::from_seed(seed),
            confirm_boundaries: true,
        }
    }
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self::from_seed(0)
    }
}

/// Per-string prefix length estimates plus the work instrumentation of the
/// run that produced them.
#[derive(Debug)]
pub struct ApproxLengths {
    lengths: Vec<usize>,
    relaxed: bool,
    stats: WorkStats,
}

impl ApproxLengths {
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn relaxed(&self) -> bool {
        self.relaxed
    }

    pub fn stats(&self) -> &WorkStats {
        &self.stats
    }

    /// Total pruned size `Σ L[i]`.
    pub fn total(&self) -> u64 {
        self.lengths.iter().map(|&l| l as u64).sum()
    }
}

/// `⌈lg x⌉`, zero for `x <= 1`.
pub fn ceil_lg(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Number of initial rounds the relaxed variant skips: `⌈lg lg k⌉` in
/// integer bit-length arithmetic, zero for `k <= 2`.
pub fn skip_rounds(k: usize) -> u32 {
    if k <= 2 {
        0
    } else {
        ceil_lg(ceil_lg(k) as usize)
    }
}

/// Full variant: for every string with `ℓ_i >= 1`, the result satisfies
/// `ℓ_i <= L[i] < 2ℓ_i`; empty strings get 0.
pub fn approximate(set: &StringSet, config: &ApproxConfig) -> ApproxLengths {
    let stats = WorkStats::new();
    let mut lengths: Vec<Option<usize>> = (0..set.k())
        .map(|i| if set.len_of(i) == 0 { Some(0) } else { None })
        .collect();
    run_rounds(set, config, 0, &mut lengths, &stats);
    finish(lengths, false, stats)
}

/// Relaxed variant: starts at round `⌈lg lg k⌉`; strings shorter than the
/// first prefix length are assigned their own length up front. The result
/// satisfies `L'[i] ∈ [ℓ_i, 2·max(lg k, ℓ_i))`, hence
/// `Σ L'[i] < 2k·lg k + 2D`. For `k < 2` this coincides with the full
/// variant.
pub fn approximate_relaxed(set: &StringSet, config: &ApproxConfig) -> ApproxLengths {
    let stats = WorkStats::new();
    let start = skip_rounds(set.k());
    let threshold = 1usize << start;
    let mut lengths: Vec<Option<usize>> = (0..set.k())
        .map(|i| {
            let len = set.len_of(i);
            if len < threshold {
                Some(len)
            } else {
                None
            }
        })
        .collect();
    run_rounds(set, config, start, &mut lengths, &stats);
    finish(lengths, true, stats)
}

fn run_rounds(
    set: &StringSet,
    config: &ApproxConfig,
    start_round: u32,
    lengths: &mut [Option<usize>],
    stats: &WorkStats,
) {
    let mut state = RoundState {
        round: start_round,
        active: (0..set.k() as u32)
            .filter(|&i| lengths[i as usize].is_none())
            .collect(),
    };
    while !state.active.is_empty() {
        let prefix_len = 1usize << state.round;
        stats.record_round(state.k_r() as u64);
        let groups = semisort_round(
            set,
            &state.active,
            prefix_len,
            config.strategy,
            Some(&config.params),
            config.confirm_boundaries,
            stats,
        );
        state = compaction_phase(set, &state, &groups, lengths);
    }
}

/// One compaction phase: assigns `L` for unique-prefix and too-short
/// entries, and compacts the survivors — in semisorted order — into the
/// next round's state. Uniqueness is read off the confirmed group
/// boundaries (a group of size one), costing no extra symbol reads here.
pub fn compaction_phase(
    set: &StringSet,
    state: &RoundState,
    groups: &SemisortOutput,
    lengths: &mut [Option<usize>],
) -> RoundState {
    let prefix_len = 1usize << state.round;
    let k_r = groups.order.len();
    debug_assert_eq!(k_r, state.k_r());
    let mut keep = vec![false; k_r];
    for (j, keep_slot) in keep.iter_mut().enumerate() {
        let i = groups.order[j] as usize;
        let unique = groups.group_start[j] && (j + 1 == k_r || groups.group_start[j + 1]);
        if unique {
            debug_assert!(lengths[i].is_none(), "length assigned twice");
            lengths[i] = Some(prefix_len.min(set.len_of(i)));
        } else if set.len_of(i) < 2 * prefix_len {
            // Too short for the next round's prefix length.
            debug_assert!(lengths[i].is_none(), "length assigned twice");
            lengths[i] = Some(set.len_of(i));
        } else {
            *keep_slot = true;
        }
    }
    RoundState {
        round: state.round + 1,
        active: scan::compact(&groups.order, &keep),
    }
}

fn finish(lengths: Vec<Option<usize>>, relaxed: bool, stats: WorkStats) -> ApproxLengths {
    let lengths = lengths
        .into_iter()
        .map(|l| l.expect("every string receives a length before termination"))
        .collect();
    ApproxLengths { lengths, relaxed, stats }
}
