//! Sequential brute-force ground truth: exact relevant prefix lengths and a
//! reference lexicographic sort. Deliberately unoptimized-first; the
//! sorted-neighbor shortcut is checked against the quadratic definition in
//! the test suites.

use crate::strings::{SortPermutation, StringSet, Symbol};

/// Exact relevant prefix lengths `ℓ_i`, their sum `D` (the distinguishing
/// prefix size), and their maximum `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantPrefixInfo {
    pub ell: Vec<usize>,
    /// `D = Σ ℓ_i`.
    pub total: u64,
    /// `d = max ℓ_i`, zero for an empty set.
    pub longest: usize,
}

fn lcp(a: &[Symbol], b: &[Symbol]) -> usize {
    let mut j = 0;
    let limit = a.len().min(b.len());
    while j < limit && a[j] == b[j] {
        j += 1;
    }
    j
}

fn pack(ell: Vec<usize>) -> RelevantPrefixInfo {
    let total = ell.iter().map(|&l| l as u64).sum();
    let longest = ell.iter().copied().max().unwrap_or(0);
    RelevantPrefixInfo { ell, total, longest }
}

/// Relevant prefix lengths via the sorted-neighbor shortcut: the largest lcp
/// any string has with another is attained at one of its neighbors in
/// sorted order. A single string uses the convention `ℓ_1 = min(|s_1|, 1)`.
pub fn relevant_prefixes(set: &StringSet) -> RelevantPrefixInfo {
    let k = set.k();
    if k == 0 {
        return pack(Vec::new());
    }
    if k == 1 {
        return pack(vec![set.len_of(0).min(1)]);
    }
    let order = reference_sort(set);
    let mut best = vec![0usize; k];
    for w in order.order().windows(2) {
        let (a, b) = (w[0] as usize, w[1] as usize);
        let l = lcp(set.string(a), set.string(b));
        best[a] = best[a].max(l);
        best[b] = best[b].max(l);
    }
    pack((0..k).map(|i| set.len_of(i).min(1 + best[i])).collect())
}

/// Relevant prefix lengths straight from the definition, comparing every
/// pair of strings. Quadratic; test scale only.
pub fn relevant_prefixes_quadratic(set: &StringSet) -> RelevantPrefixInfo {
    let k = set.k();
    if k == 0 {
        return pack(Vec::new());
    }
    if k == 1 {
        return pack(vec![set.len_of(0).min(1)]);
    }
    let ell = (0..k)
        .map(|i| {
            let best = (0..k)
                .filter(|&j| j != i)
                .map(|j| lcp(set.string(i), set.string(j)))
                .max()
                .unwrap();
            set.len_of(i).min(1 + best)
        })
        .collect();
    pack(ell)
}

/// Sequential comparison sort with ties broken by ascending index: the
/// canonical answer every other sorter is measured against.
pub fn reference_sort(set: &StringSet) -> SortPermutation {
    let mut ids: Vec<u32> = (0..set.k() as u32).collect();
    ids.sort_by(|&a, &b| set.string(a as usize).cmp(set.string(b as usize)).then(a.cmp(&b)));
    SortPermutation::new(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::truncate;

    fn set(strings: &[&str]) -> StringSet {
        StringSet::from_byte_strings(strings.iter().map(|s| s.as_bytes()))
    }

    #[test]
    fn four_string_example() {
        let info = relevant_prefixes(&set(&["eureka", "eurasia", "excells", "europar"]));
        assert_eq!(info.ell, vec![4, 4, 2, 4]);
        assert_eq!(info.total, 14);
        assert_eq!(info.longest, 4);
    }

    #[test]
    fn singleton_convention() {
        let info = relevant_prefixes(&set(&["a"]));
        assert_eq!((info.ell.as_slice(), info.total, info.longest), (&[1][..], 1, 1));
        let empty_string = relevant_prefixes(&set(&[""]));
        assert_eq!(empty_string.ell, vec![0]);
    }

    #[test]
    fn identical_strings_cap_at_their_length() {
        let info = relevant_prefixes(&set(&["ab", "ab"]));
        assert_eq!(info.ell, vec![2, 2]);
        assert_eq!(info.total, 4);
        assert_eq!(info.longest, 2);
    }

    #[test]
    fn reference_sort_examples() {
        let order = reference_sort(&set(&["eureka", "eurasia", "excells", "europar"]));
        assert_eq!(order.order(), &[1, 0, 3, 2]);
        assert!(reference_sort(&StringSet::from_rows(&[], 1).unwrap()).is_empty());
        let reversed = reference_sort(&set(&["cc", "bb", "aa"]));
        assert_eq!(reversed.order(), &[2, 1, 0]);
    }

    #[test]
    fn neighbor_shortcut_matches_quadratic_definition() {
        // Exhaustive over all ordered multisets of up to 4 strings with
        // lengths <= 3 over {1, 2}.
        let mut pool: Vec<Vec<u32>> = vec![vec![]];
        for len in 1..=3usize {
            for code in 0..(1u32 << len) {
                pool.push((0..len).map(|j| 1 + ((code >> j) & 1)).collect());
            }
        }
        let mut sets_checked = 0;
        for k in 1..=4usize {
            let mut picks = vec![0usize; k];
            loop {
                let rows: Vec<Vec<u32>> = picks.iter().map(|&p| pool[p].clone()).collect();
                let s = StringSet::from_rows(&rows, 2).unwrap();
                assert_eq!(relevant_prefixes(&s), relevant_prefixes_quadratic(&s));
                sets_checked += 1;
                // odometer over pool indices
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    picks[pos] += 1;
                    if picks[pos] < pool.len() {
                        break;
                    }
                    picks[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
        assert!(sets_checked > 15 * 15 * 15);
    }

    #[test]
    fn distinguishing_size_is_bounded_by_input_size() {
        let s = set(&["abcdef", "abcxyz", "q"]);
        let info = relevant_prefixes(&s);
        assert!(info.total <= s.total_len() as u64);
        assert!(info.longest <= s.max_len());
    }

    #[test]
    fn truncating_to_relevant_prefixes_preserves_the_sort() {
        let s = set(&["banana", "band", "bandit", "apple", "app", "", "banana"]);
        let info = relevant_prefixes(&s);
        let pruned = truncate(&s, &info.ell).unwrap();
        assert_eq!(reference_sort(&pruned), reference_sort(&s));
    }
}
