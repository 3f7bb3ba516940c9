//! Genuine multipartite correlations from marginal entropies.
//!
//! For the relative entropy, the closest state that factorizes over a fixed
//! partition is the product of the state's own marginals, and its distance
//! is `Σ_blocks S(ρ_block) − S(ρ)`. The distance to the set of states with
//! clusters of at most `k` subsystems is therefore a minimum of summed
//! marginal entropies over partitions with blocks of size ≤ `k`, which is
//! what [`dist_to_pk`] searches. Every marginal entropy is computed once and
//! kept in a [`SubsetEntropyCache`].

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{arg, Error, Result};
use crate::limits::check_enum_n;
use crate::partitions::{compact_partition, enumerate_partitions, SetPartition};
use crate::state::DensityState;

/// Differences smaller than this in magnitude are floating-point noise.
pub const CLAMP_TOL: f64 = 1e-9;

/// Largest `N` whose cache is filled eagerly under [`FillPolicy::Auto`].
pub const EAGER_FILL_MAX_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillPolicy {
    /// Every subset, computed in parallel up front.
    Eager,
    /// On first request.
    Lazy,
    /// Eager up to [`EAGER_FILL_MAX_N`] subsystems, lazy above.
    Auto,
}

/// Marginal von Neumann entropies (bits) keyed by subset bitmask.
pub struct SubsetEntropyCache<'a> {
    state: &'a DensityState,
    eager: Option<Vec<f64>>,
    lazy: Mutex<HashMap<u64, f64>>,
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 { u64::MAX } else { (1u64 << n) - 1 }
}

impl<'a> SubsetEntropyCache<'a> {
    pub fn new(state: &'a DensityState, policy: FillPolicy) -> Result<Self> {
        let n = state.n();
        if n > 63 {
            return Err(Error::Capacity(format!("{n} subsystems exceed the 63-subsystem cache")));
        }
        let eager = match policy {
            FillPolicy::Eager => true,
            FillPolicy::Lazy => false,
            FillPolicy::Auto => n <= EAGER_FILL_MAX_N,
        };
        let eager = if eager {
            if n > 24 {
                return Err(Error::Capacity(format!("eager fill of 2^{n} subsets")));
            }
            let table = (0..1u64 << n)
                .into_par_iter()
                .map(|mask| state.subset_entropy(&mask_indices(mask)))
                .collect::<Result<Vec<f64>>>()?;
            Some(table)
        } else {
            None
        };
        Ok(SubsetEntropyCache { state, eager, lazy: Mutex::new(HashMap::new()) })
    }

    pub fn state(&self) -> &DensityState {
        self.state
    }

    pub fn n(&self) -> usize {
        self.state.n()
    }

    /// Entropy of the marginal on the subsystems set in `mask` (0 for the
    /// empty set).
    pub fn entropy(&self, mask: u64) -> Result<f64> {
        if mask & !full_mask(self.n()) != 0 {
            return arg(format!("subset mask {mask:#b} out of range"));
        }
        if let Some(table) = &self.eager {
            return Ok(table[mask as usize]);
        }
        if let Some(&v) = self.lazy.lock().expect("cache lock").get(&mask) {
            return Ok(v);
        }
        // evaluated outside the lock
        let v = self.state.subset_entropy(&mask_indices(mask))?;
        self.lazy.lock().expect("cache lock").insert(mask, v);
        Ok(v)
    }

    pub fn full_entropy(&self) -> Result<f64> {
        self.entropy(full_mask(self.n()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Exhaustive search over every bounded partition.
    Brute,
    /// Compact partition only; exact for permutation-invariant states.
    SymmetricFast,
    /// Fast path for permutation-invariant states, brute force otherwise.
    Auto,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(SearchMode::Brute),
            "fast" | "symmetric-fast" => Ok(SearchMode::SymmetricFast),
            "auto" => Ok(SearchMode::Auto),
            _ => arg(format!("unknown mode '{s}' (expected auto, brute or fast)")),
        }
    }
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Brute => "brute",
            SearchMode::SymmetricFast => "fast",
            SearchMode::Auto => "auto",
        }
    }

    fn use_fast(self, state: &DensityState) -> bool {
        match self {
            SearchMode::Brute => false,
            SearchMode::SymmetricFast => true,
            SearchMode::Auto => state.is_permutation_invariant(),
        }
    }
}

/// Distance (bits) to the closest product over a partition with blocks of
/// size ≤ `k`, and the first minimizing partition in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct DistResult {
    pub bits: f64,
    pub partition: SetPartition,
}

fn clamp(raw: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if raw < -CLAMP_TOL {
        return Err(Error::Consistency(format!("{} is negative: {raw:e}", what())));
    }
    Ok(raw.max(0.0))
}

fn partition_entropy(cache: &SubsetEntropyCache, p: &SetPartition) -> Result<f64> {
    p.masks().into_iter().map(|m| cache.entropy(m)).sum()
}

fn dist_resolved(cache: &SubsetEntropyCache, k: usize, fast: bool) -> Result<DistResult> {
    let n = cache.n();
    if k == 0 || k > n {
        return arg(format!("order k = {k} outside 1..={n}"));
    }
    let full = cache.full_entropy()?;
    let (sum, partition) = if k == n {
        (full, compact_partition(n, n)?)
    } else if fast {
        let p = compact_partition(n, k)?;
        (partition_entropy(cache, &p)?, p)
    } else {
        check_enum_n(n)?;
        let mut best: Option<(f64, SetPartition)> = None;
        for p in enumerate_partitions(n, k)? {
            let s = partition_entropy(cache, &p)?;
            // ties keep the earlier partition
            if best.as_ref().is_none_or(|(b, _)| s < b - 1e-12) {
                best = Some((s, p));
            }
        }
        best.expect("at least one partition")
    };
    let bits = clamp(sum - full, || format!("distance to P_{k}"))?;
    Ok(DistResult { bits, partition })
}

/// `S^{k→N}`: relative-entropy distance of the cached state to the closest
/// product of its own marginals over clusters of at most `k` subsystems.
pub fn dist_to_pk(cache: &SubsetEntropyCache, k: usize, mode: SearchMode) -> Result<DistResult> {
    dist_resolved(cache, k, mode.use_fast(cache.state()))
}

/// Correlations of every order of an `N`-partite state, in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationProfile {
    pub n: usize,
    /// `S^{k→N}` for `k = 1..=N`.
    pub dist: Vec<f64>,
    /// Genuine `S^k` for `k = 2..=N`.
    pub genuine: Vec<f64>,
    /// `S^{1→N}`.
    pub total: f64,
    /// Minimizing partition for each `k = 1..=N`.
    pub argmin: Option<Vec<SetPartition>>,
}

impl CorrelationProfile {
    /// Assembles a profile from distances, enforcing monotonicity.
    pub fn from_dist(dist: Vec<f64>, argmin: Option<Vec<SetPartition>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return arg("empty distance list");
        }
        if dist[n - 1].abs() > CLAMP_TOL {
            return Err(Error::Consistency(format!("S^(N->N) = {} is not zero", dist[n - 1])));
        }
        let genuine = (1..n)
            .map(|i| clamp(dist[i - 1] - dist[i], || format!("genuine S^{}", i + 1)))
            .collect::<Result<Vec<f64>>>()?;
        Ok(CorrelationProfile { n, total: dist[0], dist, genuine, argmin })
    }

    pub fn dist_at(&self, k: usize) -> f64 {
        self.dist[k - 1]
    }

    /// `S^k` for `2 ≤ k ≤ N`.
    pub fn genuine_at(&self, k: usize) -> f64 {
        self.genuine[k - 2]
    }
}

pub fn profile_with_cache(cache: &SubsetEntropyCache, mode: SearchMode) -> Result<CorrelationProfile> {
    let fast = mode.use_fast(cache.state());
    let results = (1..=cache.n())
        .into_par_iter()
        .map(|k| dist_resolved(cache, k, fast))
        .collect::<Result<Vec<DistResult>>>()?;
    let (dist, parts): (Vec<f64>, Vec<SetPartition>) =
        results.into_iter().map(|r| (r.bits, r.partition)).unzip();
    CorrelationProfile::from_dist(dist, Some(parts))
}

/// Full correlation profile of `state`.
pub fn profile(state: &DensityState, mode: SearchMode) -> Result<CorrelationProfile> {
    let policy = if mode.use_fast(state) { FillPolicy::Lazy } else { FillPolicy::Auto };
    let cache = SubsetEntropyCache::new(state, policy)?;
    profile_with_cache(&cache, mode)
}

/// Weights over correlation orders, given either per genuine order
/// (`ω_k`, `k = 2..=N`) or per distance (`Ω_i`, `i = 1..N−1`), related by
/// `ω_k = Σ_{i<k} Ω_i`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme {
    Omega(Vec<f64>),
    BigOmega(Vec<f64>),
}

impl WeightScheme {
    /// `ω_k = k − 1`, i.e. `Ω_i = 1`.
    pub fn k_minus_one(n: usize) -> Self {
        WeightScheme::Omega((2..=n).map(|k| (k - 1) as f64).collect())
    }

    /// `ω_k = 1`: weaving equals total correlations.
    pub fn uniform(n: usize) -> Self {
        WeightScheme::Omega(vec![1.0; n.saturating_sub(1)])
    }

    /// `ω_l = δ_{kl}`: weaving equals `S^k`.
    pub fn delta(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return arg(format!("delta weight order {k} outside 2..={n}"));
        }
        Ok(WeightScheme::Omega((2..=n).map(|l| if l == k { 1.0 } else { 0.0 }).collect()))
    }

    pub fn validate(&self) -> Result<()> {
        let v = match self {
            WeightScheme::Omega(v) | WeightScheme::BigOmega(v) => v,
        };
        if let Some(w) = v.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return arg(format!("weights must be finite and non-negative, got {w}"));
        }
        Ok(())
    }

    /// Number of subsystems the scheme is sized for.
    pub fn n(&self) -> usize {
        match self {
            WeightScheme::Omega(v) | WeightScheme::BigOmega(v) => v.len() + 1,
        }
    }

    pub fn omega(&self) -> Vec<f64> {
        match self {
            WeightScheme::Omega(v) => v.clone(),
            WeightScheme::BigOmega(v) => v
                .iter()
                .scan(0.0, |acc, &x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect(),
        }
    }

    pub fn big_omega(&self) -> Vec<f64> {
        match self {
            WeightScheme::BigOmega(v) => v.clone(),
            WeightScheme::Omega(v) => {
                (0..v.len()).map(|i| if i == 0 { v[0] } else { v[i] - v[i - 1] }).collect()
            }
        }
    }
}

/// A recipe for weights at any `N`, as named on the command line:
/// `k-1`, `uniform`, `delta:K` or `file:PATH`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightRule {
    KMinusOne,
    Uniform,
    Delta(usize),
    /// Explicit weights, valid for a single `N`.
    Fixed(WeightScheme),
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum WeightFile {
    List(Vec<f64>),
    Omega { omega: Vec<f64> },
    BigOmega { big_omega: Vec<f64> },
}

impl WeightRule {
    pub fn for_n(&self, n: usize) -> Result<WeightScheme> {
        let w = match self {
            WeightRule::KMinusOne => WeightScheme::k_minus_one(n),
            WeightRule::Uniform => WeightScheme::uniform(n),
            WeightRule::Delta(k) => WeightScheme::delta(n, *k)?,
            WeightRule::Fixed(w) if w.n() == n => w.clone(),
            WeightRule::Fixed(w) => {
                return arg(format!("weights are sized for N = {} but N = {n}", w.n()))
            }
        };
        w.validate()?;
        Ok(w)
    }

    pub fn name(&self) -> String {
        match self {
            WeightRule::KMinusOne => "k-1".into(),
            WeightRule::Uniform => "uniform".into(),
            WeightRule::Delta(k) => format!("delta:{k}"),
            WeightRule::Fixed(WeightScheme::Omega(v)) => format!("omega:{v:?}"),
            WeightRule::Fixed(WeightScheme::BigOmega(v)) => format!("big_omega:{v:?}"),
        }
    }
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(k) = s.strip_prefix("delta:") {
            let k = k.parse().map_err(|_| Error::Argument(format!("bad delta order in '{s}'")))?;
            return Ok(WeightRule::Delta(k));
        }
        if let Some(path) = s.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)?;
            let parsed: WeightFile = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let scheme = match parsed {
                WeightFile::List(v) | WeightFile::Omega { omega: v } => WeightScheme::Omega(v),
                WeightFile::BigOmega { big_omega } => WeightScheme::BigOmega(big_omega),
            };
            scheme.validate()?;
            return Ok(WeightRule::Fixed(scheme));
        }
        match s {
            "k-1" => Ok(WeightRule::KMinusOne),
            "uniform" => Ok(WeightRule::Uniform),
            _ => arg(format!("unknown weights '{s}' (expected k-1, uniform, delta:K or file:PATH)")),
        }
    }
}

/// Both summation forms of the weaving:`(Σ ω_k S^k, Σ Ω_k S^{k→N})`.
pub fn weaving_forms(p: &CorrelationProfile, w: &WeightScheme) -> Result<(f64, f64)> {
    if w.n() != p.n {
        return arg(format!("weights sized for N = {} but the profile has N = {}", w.n(), p.n));
    }
    let by_order: f64 = w.omega().iter().zip(&p.genuine).map(|(o, s)| o * s).sum();
    let by_dist: f64 = w.big_omega().iter().zip(&p.dist).map(|(o, s)| o * s).sum();
    Ok((by_order, by_dist))
}

/// Weighted sum of genuine correlations of every order (bits).
pub fn weaving(p: &CorrelationProfile, w: &WeightScheme) -> Result<f64> {
    let (by_order, by_dist) = weaving_forms(p, w)?;
    let scale = 1.0 + w.omega().iter().map(|x| x.abs()).sum::<f64>();
    if (by_order - by_dist).abs() > CLAMP_TOL * scale {
        return Err(Error::Consistency(format!(
            "weaving forms disagree: {by_order} vs {by_dist}"
        )));
    }
    Ok(by_order)
}

/// Multi-information of `cluster`: summed single-site entropies minus the
/// cluster entropy.
pub fn multi_information(cache: &SubsetEntropyCache, cluster: &[usize]) -> Result<f64> {
    if cluster.is_empty() {
        return arg("multi-information needs a nonempty cluster");
    }
    if let Some(&i) = cluster.iter().find(|&&i| i >= cache.n()) {
        return arg(format!("subsystem {i} out of range"));
    }
    let mask = cluster.iter().fold(0u64, |m, &i| m | 1 << i);
    let singles: f64 = mask_indices(mask).into_iter().map(|i| cache.entropy(1 << i)).sum::<Result<f64>>()?;
    clamp(singles - cache.entropy(mask)?, || format!("multi-information of {cluster:?}"))
}

/// Neural complexity `Σ_{k=1}^{N−1} [k/N · I(N) − ⟨I(cluster of k)⟩]`, the
/// average running over all `C(N, k)` clusters.
pub fn neural_complexity(cache: &SubsetEntropyCache) -> Result<f64> {
    let n = cache.n();
    check_enum_n(n)?;
    let singles: Vec<f64> = (0..n).map(|i| cache.entropy(1 << i)).collect::<Result<_>>()?;
    let tc = |mask: u64| -> Result<f64> {
        let s: f64 = mask_indices(mask).iter().map(|&i| singles[i]).sum();
        Ok(s - cache.entropy(mask)?)
    };
    let total = tc(full_mask(n))?;
    let mut sums = vec![0.0; n + 1];
    let mut counts = vec![0usize; n + 1];
    for mask in 1..full_mask(n) {
        let size = mask.count_ones() as usize;
        sums[size] += tc(mask)?;
        counts[size] += 1;
    }
    Ok((1..n)
        .map(|k| k as f64 / n as f64 * total - sums[k] / counts[k] as f64)
        .sum())
}

/// `⊗_blocks Tr_{rest} ρ`, with subsystems back in their original order.
pub fn product_of_marginals(state: &DensityState, p: &SetPartition) -> Result<DensityState> {
    if p.n() != state.n() {
        return arg("partition does not match the state's subsystem count");
    }
    let mut factors = p.blocks().iter().map(|b| state.partial_trace(b));
    let mut prod = factors.next().expect("nonempty partition")?;
    for f in factors {
        prod = prod.tensor(&f?)?;
    }
    let order: Vec<usize> = p.blocks().concat();
    let mut perm = vec![0; order.len()];
    for (pos, &orig) in order.iter().enumerate() {
        perm[orig] = pos;
    }
    prod.permute(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;

    fn dist(s: &DensityState, k: usize, mode: SearchMode) -> f64 {
        let cache = SubsetEntropyCache::new(s, FillPolicy::Auto).unwrap();
        dist_to_pk(&cache, k, mode).unwrap().bits
    }

    #[test]
    fn k_equal_n_is_zero() {
        let s = make_dicke(4, 1).unwrap();
        assert_eq!(dist(&s, 4, SearchMode::Brute), 0.0);
    }

    #[test]
    fn ghz4_pairs() {
        let s = make_ghz(4, 2).unwrap();
        assert!((dist(&s, 2, SearchMode::Brute) - 2.0).abs() < 1e-10);
        assert!((dist(&s, 2, SearchMode::SymmetricFast) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn bell_product_distances() {
        let s = make_bell_product(4, 2).unwrap();
        assert!(dist(&s, 2, SearchMode::Auto).abs() < 1e-10);
        assert!((dist(&s, 1, SearchMode::Auto) - 4.0).abs() < 1e-10);
        let cache = SubsetEntropyCache::new(&s, FillPolicy::Auto).unwrap();
        let r = dist_to_pk(&cache, 2, SearchMode::Auto).unwrap();
        assert_eq!(r.partition.to_string(), "{1,2}{3,4}");
    }

    #[test]
    fn classical_five_profile() {
        let p = profile(&make_classical(5, 2).unwrap(), SearchMode::Brute).unwrap();
        let expected = [2.0, 1.0, 0.0, 1.0];
        for (g, e) in p.genuine.iter().zip(expected) {
            assert!((g - e).abs() < 1e-10);
        }
        assert!((p.total - 4.0).abs() < 1e-10);
    }

    #[test]
    fn product_state_has_zero_profile() {
        let q = make_dicke(1, 1).unwrap();
        let s = q.tensor(&make_dicke(1, 0).unwrap()).unwrap().tensor(&make_classical(1, 3).unwrap()).unwrap();
        let p = profile(&s, SearchMode::Brute).unwrap();
        assert!(p.dist.iter().all(|&d| d.abs() < 1e-12));
    }

    #[test]
    fn weight_conversion() {
        let w = WeightScheme::k_minus_one(5);
        assert_eq!(w.big_omega(), vec![1.0; 4]);
        assert_eq!(WeightScheme::BigOmega(w.big_omega()).omega(), w.omega());
        let d = WeightScheme::delta(4, 3).unwrap();
        assert_eq!(d.big_omega(), vec![0.0, 1.0, -1.0]);
        assert!(WeightScheme::delta(4, 5).is_err());
        assert!(WeightScheme::Omega(vec![-1.0]).validate().is_err());
    }

    #[test]
    fn weaving_special_weights() {
        let s = make_dicke(4, 2).unwrap();
        let p = profile(&s, SearchMode::Brute).unwrap();
        assert!((weaving(&p, &WeightScheme::uniform(4)).unwrap() - p.total).abs() < 1e-10);
        for k in 2..=4 {
            let w = WeightScheme::delta(4, k).unwrap();
            assert!((weaving(&p, &w).unwrap() - p.genuine_at(k)).abs() < 1e-10);
        }
        let bp = profile(&make_bell_product(4, 2).unwrap(), SearchMode::Auto).unwrap();
        assert!((weaving(&bp, &WeightScheme::k_minus_one(4)).unwrap() - 4.0).abs() < 1e-10);
        assert!(matches!(weaving(&bp, &WeightScheme::uniform(3)), Err(Error::Argument(_))));
    }

    #[test]
    fn multi_information_cases() {
        let bell = make_bell_product(2, 2).unwrap();
        let cache = SubsetEntropyCache::new(&bell, FillPolicy::Auto).unwrap();
        assert!(multi_information(&cache, &[0]).unwrap().abs() < 1e-12);
        assert!((multi_information(&cache, &[0, 1]).unwrap() - 2.0).abs() < 1e-10);
        let c3 = make_classical(3, 2).unwrap();
        let cache = SubsetEntropyCache::new(&c3, FillPolicy::Lazy).unwrap();
        assert!((multi_information(&cache, &[0, 1, 2]).unwrap() - 2.0).abs() < 1e-12);
        assert!(multi_information(&cache, &[]).is_err());
    }

    #[test]
    fn neural_complexity_of_ghz3() {
        // singletons: 1 bit each; pairs: 1 bit; whole: 0.
        // I(full) = 3, I(pair) = 1, I(single) = 0
        // C = (1/3*3 - 0) + (2/3*3 - 1) = 2
        let g = make_ghz(3, 2).unwrap();
        let cache = SubsetEntropyCache::new(&g, FillPolicy::Eager).unwrap();
        assert!((neural_complexity(&cache).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn lazy_and_eager_agree() {
        let s = make_dicke(5, 2).unwrap();
        let a = SubsetEntropyCache::new(&s, FillPolicy::Eager).unwrap();
        let b = SubsetEntropyCache::new(&s, FillPolicy::Lazy).unwrap();
        for mask in 0..32u64 {
            assert!((a.entropy(mask).unwrap() - b.entropy(mask).unwrap()).abs() < 1e-12);
        }
        assert!(a.entropy(64).is_err());
    }

    #[test]
    fn product_of_marginals_restores_order() {
        let b = make_bell_product(2, 2).unwrap();
        let s = make_dicke(1, 0).unwrap().tensor(&b).unwrap();
        let p = SetPartition::from_blocks(3, vec![vec![0], vec![1, 2]]).unwrap();
        let prod = product_of_marginals(&s, &p).unwrap();
        assert!(prod.max_abs_diff(&s).unwrap() < 1e-14);
        let q = SetPartition::from_blocks(3, vec![vec![0, 2], vec![1]]).unwrap();
        let prod = product_of_marginals(&s, &q).unwrap();
        assert_eq!(prod.dims(), &[2, 2, 2]);
        assert!((prod.subset_entropy(&[1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("fast".parse::<SearchMode>().unwrap(), SearchMode::SymmetricFast);
        assert!("slow".parse::<SearchMode>().is_err());
    }

    #[test]
    fn inconsistent_distances_are_rejected() {
        assert!(matches!(
            CorrelationProfile::from_dist(vec![1.0, 1.5, 0.0], None),
            Err(Error::Consistency(_))
        ));
        let p = CorrelationProfile::from_dist(vec![1.0, 1.0 + 1e-12, 0.0], None).unwrap();
        assert_eq!(p.genuine[0], 0.0);
    }
}
