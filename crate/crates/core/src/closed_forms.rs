//! Exact correlation values for the benchmark families at any `N`, without
//! building a state.
//!
//! Permutation-invariant families use the compact-partition formula
//! `S^{k→N} = ⌊N/k⌋ S(ρ_k) + [N mod k ≠ 0] S(ρ_{N mod k}) − S(ρ_N)` with the
//! family's marginal entropies; the pair-product families are sums over
//! independent pairs. Dicke marginals have the hypergeometric spectrum
//! `C(j,i) C(N−j, m−i) / C(N,m)`, evaluated through log-gamma and finite for
//! `N` in the tens of thousands.

use std::fmt;

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::correlations::{WeightRule, WeightScheme};
use crate::error::{arg, Error, Result};
use crate::state::entropy_bits;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormFamily {
    Ghz { n: usize },
    Classical { n: usize, d: usize },
    BellProduct { n: usize, d: usize },
    ClassicalPairProduct { n: usize },
    Dicke1 { n: usize },
    DickeHalf { n: usize },
    QuditClassical { n: usize, d: usize },
    QuditBellProduct { n: usize, d: usize },
    AFamily { n: usize, a: f64 },
}

/// How a family's weaving (with `ω_k = k − 1`) grows with `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingLaw {
    /// `N log₂ N`
    NLogN,
    Linear,
    Quadratic,
}

impl ScalingLaw {
    pub fn normalizer(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            ScalingLaw::NLogN => n * n.log2(),
            ScalingLaw::Linear => n,
            ScalingLaw::Quadratic => n * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalingLaw::NLogN => "N log2 N",
            ScalingLaw::Linear => "N",
            ScalingLaw::Quadratic => "N^2",
        }
    }
}

pub const FAMILY_IDS: [&str; 9] = [
    "ghz",
    "classical",
    "bell-product",
    "classical-pair-product",
    "dicke-1",
    "dicke-half",
    "qudit-classical",
    "qudit-bell-product",
    "a-family",
];

fn ln_binom(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Eigenvalues of the `j`-party marginal of the `(n, m)` Dicke state.
pub fn dicke_marginal_spectrum(n: usize, m: usize, j: usize) -> Vec<f64> {
    let lo = m.saturating_sub(n - j);
    let hi = j.min(m);
    let norm = ln_binom(n, m);
    let raw: Vec<f64> = (lo..=hi).map(|i| (ln_binom(j, i) + ln_binom(n - j, m - i) - norm).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

fn binary_entropy(p: f64) -> f64 {
    entropy_bits([p, 1.0 - p])
}

impl ClosedFormFamily {
    /// Family by id, e.g. `dicke-half`. `d` and `a` are ignored where unused.
    pub fn from_id(id: &str, n: usize, d: usize, a: f64) -> Result<Self> {
        let f = match id {
            "ghz" => ClosedFormFamily::Ghz { n },
            "classical" => ClosedFormFamily::Classical { n, d },
            "bell-product" => ClosedFormFamily::BellProduct { n, d },
            "classical-pair-product" => ClosedFormFamily::ClassicalPairProduct { n },
            "dicke-1" => ClosedFormFamily::Dicke1 { n },
            "dicke-half" => ClosedFormFamily::DickeHalf { n },
            "qudit-classical" => ClosedFormFamily::QuditClassical { n, d },
            "qudit-bell-product" => ClosedFormFamily::QuditBellProduct { n, d },
            "a-family" => ClosedFormFamily::AFamily { n, a },
            _ => {
                return arg(format!(
                    "'{id}' has no closed form (expected one of {})",
                    FAMILY_IDS.join(", ")
                ))
            }
        };
        f.validate()?;
        Ok(f)
    }

    pub fn id(&self) -> &'static str {
        match self {
            ClosedFormFamily::Ghz { .. } => "ghz",
            ClosedFormFamily::Classical { .. } => "classical",
            ClosedFormFamily::BellProduct { .. } => "bell-product",
            ClosedFormFamily::ClassicalPairProduct { .. } => "classical-pair-product",
            ClosedFormFamily::Dicke1 { .. } => "dicke-1",
            ClosedFormFamily::DickeHalf { .. } => "dicke-half",
            ClosedFormFamily::QuditClassical { .. } => "qudit-classical",
            ClosedFormFamily::QuditBellProduct { .. } => "qudit-bell-product",
            ClosedFormFamily::AFamily { .. } => "a-family",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            ClosedFormFamily::Ghz { n }
            | ClosedFormFamily::Classical { n, .. }
            | ClosedFormFamily::BellProduct { n, .. }
            | ClosedFormFamily::ClassicalPairProduct { n }
            | ClosedFormFamily::Dicke1 { n }
            | ClosedFormFamily::DickeHalf { n }
            | ClosedFormFamily::QuditClassical { n, .. }
            | ClosedFormFamily::QuditBellProduct { n, .. }
            | ClosedFormFamily::AFamily { n, .. } => n,
        }
    }

    pub fn d(&self) -> usize {
        match *self {
            ClosedFormFamily::Classical { d, .. }
            | ClosedFormFamily::BellProduct { d, .. }
            | ClosedFormFamily::QuditClassical { d, .. }
            | ClosedFormFamily::QuditBellProduct { d, .. } => d,
            _ => 2,
        }
    }

    /// Same family at a different `N`.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut f = *self;
        match &mut f {
            ClosedFormFamily::Ghz { n: m }
            | ClosedFormFamily::Classical { n: m, .. }
            | ClosedFormFamily::BellProduct { n: m, .. }
            | ClosedFormFamily::ClassicalPairProduct { n: m }
            | ClosedFormFamily::Dicke1 { n: m }
            | ClosedFormFamily::DickeHalf { n: m }
            | ClosedFormFamily::QuditClassical { n: m, .. }
            | ClosedFormFamily::QuditBellProduct { n: m, .. }
            | ClosedFormFamily::AFamily { n: m, .. } => *m = n,
        }
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return arg("N must be positive");
        }
        match *self {
            ClosedFormFamily::BellProduct { .. }
            | ClosedFormFamily::QuditBellProduct { .. }
            | ClosedFormFamily::ClassicalPairProduct { .. }
            | ClosedFormFamily::DickeHalf { .. }
                if !n.is_multiple_of(2) =>
            {
                arg(format!("{} needs even N, got {n}", self.id()))
            }
            ClosedFormFamily::AFamily { a, .. } if !(a > 0.0 && a < 1.0) => {
                arg(format!("a-family amplitude must lie in (0, 1), got {a}"))
            }
            _ if self.d() < 2 => arg(format!("local dimension must be at least 2, got {}", self.d())),
            _ => Ok(()),
        }
    }

    pub fn scaling_law(&self) -> ScalingLaw {
        match self {
            ClosedFormFamily::Ghz { .. }
            | ClosedFormFamily::Classical { .. }
            | ClosedFormFamily::QuditClassical { .. }
            | ClosedFormFamily::AFamily { .. } => ScalingLaw::NLogN,
            ClosedFormFamily::DickeHalf { .. } => ScalingLaw::Quadratic,
            _ => ScalingLaw::Linear,
        }
    }

    /// Entropy of any `j`-party marginal (symmetric families only).
    fn marginal_entropy(&self, j: usize) -> f64 {
        let n = self.n();
        if j == 0 {
            return 0.0;
        }
        match *self {
            ClosedFormFamily::Ghz { .. } => if j < n { 1.0 } else { 0.0 },
            ClosedFormFamily::AFamily { a, .. } => {
                if j < n { binary_entropy(a * a) } else { 0.0 }
            }
            ClosedFormFamily::Classical { d, .. } | ClosedFormFamily::QuditClassical { d, .. } => {
                (d as f64).log2()
            }
            ClosedFormFamily::Dicke1 { .. } => binary_entropy(j as f64 / n as f64),
            ClosedFormFamily::DickeHalf { .. } => entropy_bits(dicke_marginal_spectrum(n, n / 2, j)),
            _ => unreachable!("pair products are not handled by the compact formula"),
        }
    }

    fn dist_with(&self, k: usize, entropy: &dyn Fn(usize) -> f64) -> Result<f64> {
        let n = self.n();
        if k == 0 || k > n {
            return arg(format!("order k = {k} outside 1..={n}"));
        }
        let value = match *self {
            ClosedFormFamily::BellProduct { d, .. } | ClosedFormFamily::QuditBellProduct { d, .. } => {
                if k == 1 { n as f64 * (d as f64).log2() } else { 0.0 }
            }
            ClosedFormFamily::ClassicalPairProduct { .. } => {
                if k == 1 { n as f64 / 2.0 } else { 0.0 }
            }
            _ => {
                let (q, r) = (n / k, n % k);
                let rest = if r == 0 { 0.0 } else { entropy(r) };
                q as f64 * entropy(k) + rest - entropy(n)
            }
        };
        Ok(value.max(0.0))
    }

    /// `S^{k→N}` in bits.
    pub fn cf_dist(&self, k: usize) -> Result<f64> {
        self.validate()?;
        self.dist_with(k, &|j| self.marginal_entropy(j))
    }

    /// `S^{k→N}` for every `k = 1..=N`, sharing marginal entropies.
    pub fn dist_profile(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.n();
        let table: Vec<f64> = match self {
            ClosedFormFamily::BellProduct { .. }
            | ClosedFormFamily::QuditBellProduct { .. }
            | ClosedFormFamily::ClassicalPairProduct { .. } => Vec::new(),
            _ => (0..=n).into_par_iter().map(|j| self.marginal_entropy(j)).collect(),
        };
        (1..=n).map(|k| self.dist_with(k, &|j| table[j])).collect()
    }

    /// Genuine `S^k = S^{k−1→N} − S^{k→N}` for `2 ≤ k ≤ N`.
    pub fn cf_genuine(&self, k: usize) -> Result<f64> {
        if k < 2 || k > self.n() {
            return arg(format!("genuine order k = {k} outside 2..={}", self.n()));
        }
        let diff = self.cf_dist(k - 1)? - self.cf_dist(k)?;
        if diff < -1e-12 {
            return Err(Error::Consistency(format!("closed-form S^{k} = {diff:e} is negative")));
        }
        Ok(diff.max(0.0))
    }

    /// `Σ_{k=1}^{N−1} Ω_k S^{k→N}`.
    pub fn cf_weaving(&self, w: &WeightScheme) -> Result<f64> {
        if w.n() != self.n() {
            return arg(format!("weights sized for N = {} but the family has N = {}", w.n(), self.n()));
        }
        let dist = self.dist_profile()?;
        Ok(w.big_omega().iter().zip(&dist).map(|(o, s)| o * s).sum())
    }
}

impl fmt::Display for ClosedFormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClosedFormFamily::AFamily { n, a } => write!(f, "a-family(N={n}, a={a})"),
            _ => write!(f, "{}(N={}, d={})", self.id(), self.n(), self.d()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub n: usize,
    pub weaving: f64,
    /// `weaving / normalizer(N)` for the family's scaling law.
    pub coefficient: f64,
}

/// Weaving of `family` at each `N` in `ns`, normalized by the family's
/// scaling law.
pub fn cf_scaling_sweep(
    family: &ClosedFormFamily,
    ns: &[usize],
    rule: &WeightRule,
) -> Result<Vec<ScalingPoint>> {
    let law = family.scaling_law();
    ns.par_iter()
        .map(|&n| {
            let f = family.with_n(n)?;
            let weaving = f.cf_weaving(&rule.for_n(n)?)?;
            Ok(ScalingPoint { n, weaving, coefficient: weaving / law.normalizer(n) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn ghz_distances() {
        let f = ClosedFormFamily::Ghz { n: 4 };
        let d: Vec<f64> = (1..=4).map(|k| f.cf_dist(k).unwrap()).collect();
        assert_eq!(d, vec![4.0, 2.0, 2.0, 0.0]);
        assert_eq!(ClosedFormFamily::Ghz { n: 6 }.cf_genuine(4).unwrap(), 0.0);
    }

    #[test]
    fn classical_distances() {
        let f = ClosedFormFamily::Classical { n: 5, d: 2 };
        let d: Vec<f64> = (1..=4).map(|k| f.cf_dist(k).unwrap()).collect();
        assert_eq!(d, vec![4.0, 2.0, 1.0, 1.0]);
        let q = ClosedFormFamily::QuditClassical { n: 4, d: 3 };
        assert!((q.cf_genuine(2).unwrap() - 2.0 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn dicke_half_n4() {
        let f = ClosedFormFamily::DickeHalf { n: 4 };
        assert!((f.cf_dist(3).unwrap() - 2.0).abs() < 1e-12);
        for k in 2..=4 {
            assert!(f.cf_genuine(k).unwrap() > 1e-6);
        }
    }

    #[test]
    fn dicke1_matches_binary_entropy_form() {
        let f = ClosedFormFamily::Dicke1 { n: 7 };
        assert!((f.cf_dist(1).unwrap() - 7.0 * h2(1.0 / 7.0)).abs() < 1e-12);
        assert!((f.cf_dist(3).unwrap() - (2.0 * h2(3.0 / 7.0) + h2(1.0 / 7.0))).abs() < 1e-12);
    }

    #[test]
    fn spectra_are_normalized() {
        for n in [4, 10, 64, 1000] {
            for j in 0..=n {
                let s: f64 = dicke_marginal_spectrum(n, n / 2, j).iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "n={n}, j={j}, sum={s}");
            }
        }
    }

    #[test]
    fn weaving_values() {
        let ghz = ClosedFormFamily::Ghz { n: 4 };
        assert_eq!(ghz.cf_weaving(&WeightScheme::k_minus_one(4)).unwrap(), 8.0);
        let pp = ClosedFormFamily::ClassicalPairProduct { n: 6 };
        assert_eq!(pp.cf_weaving(&WeightScheme::k_minus_one(6)).unwrap(), 3.0);
        for n in [2, 4, 10] {
            let b = ClosedFormFamily::QuditBellProduct { n, d: 3 };
            let w = b.cf_weaving(&WeightScheme::k_minus_one(n)).unwrap();
            assert!((w - n as f64 * 3f64.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn a_family_top_order() {
        for n in 2..7 {
            let f = ClosedFormFamily::AFamily { n, a: 0.6 };
            assert!((f.cf_genuine(n).unwrap() - 2.0 * h2(0.36)).abs() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(ClosedFormFamily::from_id("dicke-half", 5, 2, 0.5).is_err());
        assert!(ClosedFormFamily::from_id("a-family", 3, 2, 1.5).is_err());
        assert!(ClosedFormFamily::from_id("w-state", 3, 2, 0.5).is_err());
        assert!(ClosedFormFamily::Ghz { n: 4 }.cf_dist(5).is_err());
    }

    #[test]
    fn profile_matches_pointwise() {
        let f = ClosedFormFamily::DickeHalf { n: 12 };
        let prof = f.dist_profile().unwrap();
        for k in 1..=12 {
            assert_eq!(prof[k - 1], f.cf_dist(k).unwrap());
        }
    }
}
