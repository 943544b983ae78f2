//! Enumeration of `r`-element subsets.

use alloc::vec::Vec;

/// Index combinations `0 ≤ i_0 < … < i_{r-1} < n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, r: usize) -> Self {
        Combinations {
            n,
            idx: (0..r).collect(),
            done: r > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let r = self.idx.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - r + i {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All `r`-subsets of the sorted slice `items`, each sorted, in
/// lexicographic order of positions.
pub fn subsets(items: &[u64], r: usize) -> impl Iterator<Item = Vec<u64>> + '_ {
    Combinations::new(items.len(), r).map(move |ix| ix.into_iter().map(|i| items[i]).collect())
}

/// Like [`subsets`] but also yields the position of each subset's minimum.
pub fn subsets_with_min_position(
    items: &[u64],
    r: usize,
) -> impl Iterator<Item = (usize, Vec<u64>)> + '_ {
    Combinations::new(items.len(), r).map(move |ix| {
        (
            ix.first().copied().unwrap_or(0),
            ix.into_iter().map(|i| items[i]).collect(),
        )
    })
}

/// `r`-subsets in colexicographic order (ordered by largest element first),
/// the order in which an infinite enumeration of `[S]^r` reaches every
/// subset of a finite prefix.
pub fn colex_subsets(items: &[u64], r: usize) -> Vec<Vec<u64>> {
    let mut all: Vec<Vec<usize>> = Combinations::new(items.len(), r).collect();
    all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    all.into_iter()
        .map(|ix| ix.into_iter().map(|i| items[i]).collect())
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Inserts `x` into the sorted tuple `s` (which must not contain it).
pub fn insert_sorted(s: &[u64], x: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(s.len() + 1);
    let pos = s.partition_point(|&y| y < x);
    out.extend_from_slice(&s[..pos]);
    out.push(x);
    out.extend_from_slice(&s[pos..]);
    out
}
