//! Set partitions of `{0..n}` with bounded block size.
//!
//! Partitions are enumerated lazily as restricted-growth strings (RGS):
//! `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`, with the extra constraint that
//! no label is used more than `kmax` times. Block labels appear in order of
//! their smallest element, so the blocks of every emitted partition are
//! already in canonical order.

use std::fmt;

use crate::error::{arg, Error, Result};
use crate::limits::check_enum_n;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
    max_block: usize,
}

impl SetPartition {
    /// Canonicalizes and validates `blocks` as a partition of `{0..n}`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b[0]);
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return arg(format!("blocks {blocks:?} are not disjoint subsets of 0..{n}"));
            }
            seen[i] = true;
        }
        if seen.iter().any(|&s| !s) {
            return arg(format!("blocks {blocks:?} do not cover 0..{n}"));
        }
        let max_block = blocks.iter().map(Vec::len).max().unwrap_or(0);
        Ok(SetPartition { blocks, max_block })
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let labels = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); labels];
        for (i, &l) in rgs.iter().enumerate() {
            blocks[l].push(i);
        }
        let max_block = blocks.iter().map(Vec::len).max().unwrap_or(0);
        SetPartition { blocks, max_block }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn max_block(&self) -> usize {
        self.max_block
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Each block as a bitmask over subsystem indices.
    pub fn masks(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &i| m | (1 << i)))
            .collect()
    }
}

/// Blocks printed 1-based, e.g. `{1,2}{3,4}{5}`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let items: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// Lazy stream of every partition of `{0..n}` with blocks of size ≤ `kmax`.
#[derive(Clone, Debug)]
pub struct PartitionStream {
    kmax: usize,
    rgs: Vec<usize>,
    counts: Vec<usize>,
    state: StreamState,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

impl PartitionStream {
    // Smallest valid labels for positions `from..`, given the prefix.
    fn fill_from(&mut self, from: usize) {
        let mut top = self.rgs[..from].iter().max().map_or(0, |&m| m + 1);
        for i in from..self.rgs.len() {
            let v = (0..=top).find(|&v| self.counts[v] < self.kmax).expect("new label is always free");
            self.rgs[i] = v;
            self.counts[v] += 1;
            if v == top {
                top += 1;
            }
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            let cur = self.rgs[i];
            self.counts[cur] -= 1;
            let top = self.rgs[..i].iter().max().map_or(0, |&m| m + 1);
            if let Some(v) = (cur + 1..=top).find(|&v| self.counts[v] < self.kmax) {
                self.rgs[i] = v;
                self.counts[v] += 1;
                self.fill_from(i + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for PartitionStream {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.fill_from(0);
                self.state = StreamState::Running;
            }
            StreamState::Running => {
                if !self.advance() {
                    self.state = StreamState::Done;
                    return None;
                }
            }
        }
        Some(SetPartition::from_rgs(&self.rgs))
    }
}

/// All partitions of `{0..n}` with block size ≤ `kmax`, in RGS order.
pub fn enumerate_partitions(n: usize, kmax: usize) -> Result<PartitionStream> {
    if n == 0 || kmax == 0 || kmax > n {
        return arg(format!("need 1 <= kmax <= n, got n = {n}, kmax = {kmax}"));
    }
    check_enum_n(n)?;
    Ok(PartitionStream {
        kmax,
        rgs: vec![0; n],
        counts: vec![0; n],
        state: StreamState::Fresh,
    })
}

/// `⌊n/k⌋` contiguous blocks of size `k` followed by one block of `n mod k`.
pub fn compact_partition(n: usize, k: usize) -> Result<SetPartition> {
    if n == 0 || k == 0 || k > n {
        return arg(format!("need 1 <= k <= n, got n = {n}, k = {k}"));
    }
    let blocks: Vec<Vec<usize>> = (0..n).collect::<Vec<_>>().chunks(k).map(<[usize]>::to_vec).collect();
    Ok(SetPartition { blocks, max_block: k })
}

/// Number of partitions of an `n`-set with blocks of size ≤ `kmax`:
/// `c(m) = Σ_{s=1}^{min(kmax,m)} C(m−1, s−1) c(m−s)`, `c(0) = 1`.
pub fn count_partitions(n: usize, kmax: usize) -> Result<u128> {
    if n == 0 || kmax == 0 || kmax > n {
        return arg(format!("need 1 <= kmax <= n, got n = {n}, kmax = {kmax}"));
    }
    let overflow = || Error::Capacity(format!("partition count for n = {n} overflows u128"));
    let mut binom = vec![vec![0u128; n + 1]; n + 1];
    for m in 0..=n {
        binom[m][0] = 1;
        for j in 1..=m {
            binom[m][j] = binom[m - 1][j - 1].checked_add(binom[m - 1][j]).ok_or_else(overflow)?;
        }
    }
    let mut c = vec![0u128; n + 1];
    c[0] = 1;
    for m in 1..=n {
        let mut acc: u128 = 0;
        for s in 1..=kmax.min(m) {
            let term = binom[m - 1][s - 1].checked_mul(c[m - s]).ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        c[m] = acc;
    }
    Ok(c[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    // Independent oracle: label every element with any of n labels, keep the
    // canonical (first-appearance) labelings.
    fn brute_force(n: usize, kmax: usize) -> HashSet<Vec<Vec<usize>>> {
        let mut out = HashSet::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut labels = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                labels.push(c % n);
                c /= n;
            }
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (i, &l) in labels.iter().enumerate() {
                blocks[l].push(i);
            }
            let mut blocks: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
            blocks.sort();
            if blocks.iter().all(|b| b.len() <= kmax) {
                out.insert(blocks);
            }
        }
        out
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_partitions(3, 3).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(3, 2).unwrap().count(), 4);
        assert_eq!(enumerate_partitions(4, 2).unwrap().count(), 10);
        assert_eq!(count_partitions(4, 4).unwrap(), 15);
        assert_eq!(count_partitions(4, 2).unwrap(), 10);
    }

    #[test]
    fn matches_brute_force_oracle() {
        for n in 1..=6 {
            for kmax in 1..=n {
                let oracle = brute_force(n, kmax);
                let got: Vec<Vec<Vec<usize>>> =
                    enumerate_partitions(n, kmax).unwrap().map(|p| p.blocks().to_vec()).collect();
                let unique: HashSet<_> = got.iter().cloned().collect();
                assert_eq!(unique.len(), got.len(), "duplicates at n={n}, kmax={kmax}");
                assert_eq!(unique, oracle, "n={n}, kmax={kmax}");
            }
        }
    }

    #[test]
    fn count_matches_enumeration_up_to_ten() {
        for n in 1..=10 {
            for kmax in 1..=n {
                let len = enumerate_partitions(n, kmax).unwrap().count() as u128;
                assert_eq!(count_partitions(n, kmax).unwrap(), len, "n={n}, kmax={kmax}");
            }
        }
    }

    #[test]
    fn emitted_in_rgs_order_and_canonical() {
        let parts: Vec<SetPartition> = enumerate_partitions(5, 3).unwrap().collect();
        for p in &parts {
            assert!(p.max_block() <= 3);
            assert_eq!(p.max_block(), p.blocks().iter().map(Vec::len).max().unwrap());
            assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
            assert_eq!(SetPartition::from_blocks(5, p.blocks().to_vec()).unwrap(), *p);
        }
        let rgs: Vec<Vec<usize>> = parts
            .iter()
            .map(|p| {
                let mut a = vec![0; 5];
                for (l, b) in p.blocks().iter().enumerate() {
                    for &i in b {
                        a[i] = l;
                    }
                }
                a
            })
            .collect();
        assert!(rgs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parts[0].to_string(), "{1,2,3}{4,5}");
    }

    #[test]
    fn compact_partitions() {
        assert_eq!(compact_partition(5, 2).unwrap().to_string(), "{1,2}{3,4}{5}");
        assert_eq!(compact_partition(4, 4).unwrap().blocks().len(), 1);
        assert_eq!(compact_partition(4, 1).unwrap().blocks().len(), 4);
        assert_eq!(compact_partition(5, 2).unwrap().max_block(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(enumerate_partitions(15, 2), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_partitions(3, 4), Err(Error::Argument(_))));
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(SetPartition::from_blocks(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn bell_fourteen() {
        assert_eq!(count_partitions(14, 14).unwrap(), 190_899_322);
    }
}
