//! Parallel string sorting with work bounded by the distinguishing prefix.
//!
//! Sorting `k` strings lexicographically never needs more than the
//! distinguishing prefix — the shortest prefix of each string that is not a
//! prefix of any other (`D` symbols in total). This crate approximates those
//! relevant prefix lengths within a factor of two using rounds of
//! fingerprint-based semisorting, prunes the strings, and hands the pruned
//! set to a string sorter, so the symbol reads of the whole pipeline scale
//! with `D` instead of the total input size `N`.
//!
//! The main entry point is [`pipeline::d_aware_sort`]; the pieces it is
//! built from (scans, fingerprints, semisorting, the approximation rounds)
//! are public modules on their own, and [`oracle`] provides the brute-force
//! ground truth used throughout the test suites.

pub mod approx;
pub mod fingerprint;
pub mod io;
mod mkqs;
pub mod oracle;
pub mod pipeline;
pub mod scan;
pub mod semisort;
pub mod strings;

pub use approx::{approximate, approximate_relaxed, ApproxConfig, ApproxLengths};
pub use fingerprint::{Fingerprint, FingerprintParams};
pub use pipeline::{baseline_sort, d_aware_sort, DAwareOutcome, PipelineConfig, Variant};
pub use semisort::SemisortStrategy;
pub use strings::{lex_compare, truncate, SortPermutation, StringSet, Symbol, WorkStats};
