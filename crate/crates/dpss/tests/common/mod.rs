//! Shared fixtures for the integration suites: a deterministic RNG, a
//! randomized corpus stream, named edge-case families, the exhaustive small
//! enumeration, and a clustered generator with position-indexed tails.

use dpss::strings::StringSet;

/// Splitmix-based generator; identical seeds yield identical corpora on any
/// platform.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Stateless position hash so that extending a string appends symbols
/// without resampling the earlier ones.
pub fn symbol_at(seed: u64, stream: u64, pos: u64, sigma: u32) -> u32 {
    let mut z = seed ^ stream.wrapping_mul(0xa076_1d64_78bd_642f) ^ pos.wrapping_mul(0xe703_7ed1_a0b4_28db);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    1 + ((z ^ (z >> 31)) % sigma as u64) as u32
}

/// One corpus of the randomized stream: mostly small sets, a mid-sized set
/// every 200, a large one every 1000 (the first of them at k = 10^4), with
/// sigma cycling through {2, 26, 2^16} and a mix of fresh strings,
/// duplicates, and proper prefixes of earlier strings.
pub fn random_corpus(rng: &mut Rng, index: usize) -> StringSet {
    let sigma: u32 = [2, 26, 1 << 16][index % 3];
    let k = if index % 1000 == 999 {
        if index == 999 {
            10_000
        } else {
            2_000 + rng.below(8_001) as usize
        }
    } else if index % 200 == 99 {
        64 + rng.below(961) as usize
    } else {
        1 + rng.below(48) as usize
    };
    let max_len = [4u64, 9, 17, 41][index % 4];
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
    for j in 0..k {
        let style = rng.below(8);
        if j > 0 && style == 0 {
            let donor = rng.below(j as u64) as usize;
            rows.push(rows[donor].clone());
        } else if j > 0 && style == 1 {
            let donor = &rows[rng.below(j as u64) as usize];
            let cut = rng.below(donor.len() as u64 + 1) as usize;
            rows.push(donor[..cut].to_vec());
        } else {
            let len = rng.below(max_len) as usize;
            rows.push((0..len).map(|_| 1 + rng.below(sigma as u64) as u32).collect());
        }
    }
    StringSet::from_rows(&rows, sigma).unwrap()
}

/// Hand-picked families the end-to-end criterion calls out by name.
pub fn named_families() -> Vec<(&'static str, StringSet)> {
    let mut families = Vec::new();
    families.push((
        "all equal",
        StringSet::from_byte_strings(std::iter::repeat_n("replica", 100)),
    ));
    let chain: Vec<Vec<u32>> = (0..=50).map(|l| vec![1; l]).collect();
    families.push(("prefix chain", StringSet::from_rows(&chain, 1).unwrap()));
    families.push((
        "empty strings mixed in",
        StringSet::from_byte_strings(["", "b", "", "ba", "b", ""]),
    ));
    families.push(("k = 1", StringSet::from_byte_strings(["only"])));
    families.push(("k = 0", StringSet::from_rows(&[], 1).unwrap()));
    families.push((
        "two-symbol shuffle",
        StringSet::from_byte_strings(["ab", "ba", "aa", "bb", "a", "b", "ab", "ba"]),
    ));
    families
}

/// Every string set with k <= 3 strings (plus the empty set) of lengths
/// <= 3 over the alphabet {1, 2}: 1 + 15 + 15^2 + 15^3 sets.
pub fn exhaustive_small_sets() -> Vec<StringSet> {
    let mut pool: Vec<Vec<u32>> = vec![vec![]];
    for len in 1..=3usize {
        for code in 0..(1u32 << len) {
            pool.push((0..len).map(|j| 1 + ((code >> j) & 1)).collect());
        }
    }
    let mut sets = vec![StringSet::from_rows(&[], 2).unwrap()];
    for k in 1..=3usize {
        let mut picks = vec![0usize; k];
        loop {
            let rows: Vec<Vec<u32>> = picks.iter().map(|&p| pool[p].clone()).collect();
            sets.push(StringSet::from_rows(&rows, 2).unwrap());
            let mut pos = 0;
            while pos < k {
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
    sets
}

/// Clustered corpus: `clusters` groups share a length-`prefix_len` prefix,
/// diverge on one symbol, then carry a position-hashed tail. With cluster
/// sizes at most sigma every relevant prefix ends right after the
/// divergence symbol, so the distinguishing prefix size is exactly
/// `k * (prefix_len + 1)` regardless of `tail`; scaling `tail` extends the
/// strings without touching any earlier symbol.
pub fn clustered_corpus(
    k: usize,
    clusters: usize,
    prefix_len: usize,
    tail: usize,
    sigma: u32,
    seed: u64,
) -> StringSet {
    assert!(clusters <= sigma as usize);
    assert!(k.div_ceil(clusters) <= sigma as usize);
    let rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let cluster = (i % clusters) as u64;
            let member = (i / clusters) as u32;
            let mut row = Vec::with_capacity(prefix_len + 1 + tail);
            for pos in 0..prefix_len {
                row.push(if pos == 0 {
                    1 + cluster as u32
                } else {
                    symbol_at(seed, 1 << 62 | cluster, pos as u64, sigma)
                });
            }
            row.push(1 + member % sigma);
            for pos in 0..tail {
                row.push(symbol_at(seed, i as u64, (prefix_len + 1 + pos) as u64, sigma));
            }
            row
        })
        .collect();
    StringSet::from_rows(&rows, sigma).unwrap()
}
