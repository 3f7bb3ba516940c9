//! Randomized checks of the structural properties of the correlation
//! measures: faithfulness, monotonicity under adding systems, local
//! channels and partial trace, superadditivity, additivity on products,
//! the two weaving forms, and weaving contractivity.
//!
//! Every property draws from its own seeded ChaCha stream, so a report is a
//! pure function of `(seed, trials)`.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    dist_to_pk, multi_information, product_of_marginals, weaving_forms, CorrelationProfile,
    FillPolicy, SearchMode, SubsetEntropyCache, WeightScheme,
};
use crate::error::Result;
use crate::families::make_classical;
use crate::partitions::{enumerate_partitions, SetPartition};
use crate::random::{random_channel, random_product_over, random_state};
use crate::state::DensityState;

pub const PROPERTY_TOL: f64 = 1e-8;

/// Deliberate defects for negative-control runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fault {
    /// Clamp distances to at least this value instead of 0.
    ClampFloor(f64),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2017, trials: 200, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    /// Largest `lhs − rhs` seen; the property holds while this is at most
    /// the tolerance.
    pub worst_margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

struct Suite {
    fault: Option<Fault>,
}

impl Suite {
    fn dist_and_argmin(&self, s: &DensityState, k: usize) -> Result<(f64, Option<SetPartition>)> {
        if k >= s.n() {
            return Ok((self.faulty(0.0), None));
        }
        let cache = SubsetEntropyCache::new(s, FillPolicy::Auto)?;
        let r = dist_to_pk(&cache, k, SearchMode::Brute)?;
        Ok((self.faulty(r.bits), Some(r.partition)))
    }

    fn dist(&self, s: &DensityState, k: usize) -> Result<f64> {
        Ok(self.dist_and_argmin(s, k)?.0)
    }

    fn faulty(&self, v: f64) -> f64 {
        match self.fault {
            Some(Fault::ClampFloor(floor)) => v.max(floor),
            None => v,
        }
    }

    fn profile(&self, s: &DensityState) -> Result<CorrelationProfile> {
        let dist = (1..=s.n()).map(|k| self.dist(s, k)).collect::<Result<Vec<_>>>()?;
        let mut dist = dist;
        *dist.last_mut().expect("n >= 1") = 0.0;
        CorrelationProfile::from_dist(dist, None)
    }
}

fn qubits(n: usize) -> Vec<usize> {
    vec![2; n]
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Result<SetPartition> {
    let all: Vec<SetPartition> = enumerate_partitions(n, n)?.collect();
    Ok(all.choose(rng).expect("nonempty").clone())
}

fn local_channels(s: &DensityState, rng: &mut ChaCha8Rng) -> Result<DensityState> {
    let mut out = s.clone();
    for site in 0..s.n() {
        let ch = random_channel(s.dims()[site], rng.random_range(1..=3), vec![site], rng)?;
        out = ch.apply(&out)?;
    }
    Ok(out)
}

fn random_big_omega(n: usize, rng: &mut ChaCha8Rng) -> WeightScheme {
    WeightScheme::BigOmega((1..n).map(|_| rng.random::<f64>()).collect())
}

type Check = fn(&Suite, &mut ChaCha8Rng) -> Result<f64>;

fn faithfulness(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let s = if rng.random_bool(0.5) {
        random_product_over(&random_partition(n, rng)?, 2, rng)?
    } else {
        random_state(&qubits(n), rng)?
    };
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=n {
        let (d, argmin) = suite.dist_and_argmin(&s, k)?;
        let diff = match argmin {
            Some(p) => product_of_marginals(&s, &p)?.max_abs_diff(&s)?,
            None => 0.0,
        };
        worst = worst.max(-d);
        // Pinsker: max entry ≤ trace norm ≤ sqrt(2 ln2 · d)
        worst = worst.max(diff - (2.0 * std::f64::consts::LN_2 * d.max(0.0)).sqrt());
        if diff <= 1e-12 {
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

fn adding_system(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let (ns, n) = *[(2, 1), (2, 2), (3, 1)].choose(rng).expect("nonempty");
    let s = random_state(&qubits(ns), rng)?;
    let t = random_state(&qubits(n), rng)?;
    Ok(suite.dist(&s.tensor(&t)?, n)? - suite.dist(&s, n)?)
}

fn local_operations(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let s = random_state(&qubits(n), rng)?;
    let out = local_channels(&s, rng)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=n {
        worst = worst.max(suite.dist(&out, k)? - suite.dist(&s, k)?);
    }
    Ok(worst)
}

fn partial_trace_monotone(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(3..=4);
    let s = random_state(&qubits(n), rng)?;
    let m = rng.random_range(2..n);
    let mut idx: Vec<usize> = (0..n).collect();
    let (keep, _) = idx.partial_shuffle(rng, m);
    let reduced = s.partial_trace(keep)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..m {
        worst = worst.max(suite.dist(&reduced, k)? - suite.dist(&s, k)?);
    }
    Ok(worst)
}

fn superadditivity(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let p = random_partition(n, rng)?;
    let generic = random_state(&qubits(n), rng)?;
    let product = random_product_over(&p, 2, rng)?;
    let cluster_sum = |s: &DensityState| -> Result<f64> {
        let cache = SubsetEntropyCache::new(s, FillPolicy::Auto)?;
        p.blocks().iter().map(|b| multi_information(&cache, b)).sum()
    };
    let below = cluster_sum(&generic)? - suite.dist(&generic, 1)?;
    let equal = (cluster_sum(&product)? - suite.dist(&product, 1)?).abs();
    Ok(below.max(equal))
}

fn product_additivity(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let (na, nb) = *[(1, 1), (1, 2), (2, 1), (2, 2)].choose(rng).expect("nonempty");
    let a = random_state(&qubits(na), rng)?;
    let b = random_state(&qubits(nb), rng)?;
    let ab = a.tensor(&b)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=na + nb {
        let sum = suite.dist(&a, k)? + suite.dist(&b, k)?;
        worst = worst.max((suite.dist(&ab, k)? - sum).abs());
    }
    Ok(worst)
}

fn weaving_dual_forms(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let s = random_state(&qubits(n), rng)?;
    let p = suite.profile(&s)?;
    let w = if rng.random_bool(0.5) {
        random_big_omega(n, rng)
    } else {
        WeightScheme::Omega((2..=n).map(|_| rng.random::<f64>()).collect())
    };
    let (a, b) = weaving_forms(&p, &w)?;
    Ok((a - b).abs())
}

fn weaving_contractivity(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let s = random_state(&qubits(n), rng)?;
    let out = local_channels(&s, rng)?;
    let w = random_big_omega(n, rng);
    let before = weaving_forms(&suite.profile(&s)?, &w)?.0;
    let after = weaving_forms(&suite.profile(&out)?, &w)?.0;
    Ok(after - before)
}

fn fine_graining(suite: &Suite, rng: &mut ChaCha8Rng) -> Result<f64> {
    // a correlated cluster of dims [4,2] (or [2,4]) next to a free qubit;
    // splitting the 4-level system adds one subsystem to the cluster
    let swap = rng.random_bool(0.5);
    let cluster_dims = if swap { [2, 4] } else { [4, 2] };
    let cluster = random_state(&cluster_dims, rng)?;
    let s = cluster.tensor(&random_state(&[2], rng)?)?;
    let refined = s.refine_subsystem(if swap { 1 } else { 0 }, &[2, 2])?;
    Ok(suite.dist(&s, 2)?.max(suite.dist(&refined, 3)?))
}

fn distillation_witness(suite: &Suite, _rng: &mut ChaCha8Rng) -> Result<f64> {
    let five = make_classical(5, 2)?;
    let four = five.partial_trace(&[0, 1, 2, 3])?;
    let s4_of_five = suite.profile(&five)?.genuine_at(4);
    let s4_of_four = suite.profile(&four)?.genuine_at(4);
    Ok(s4_of_five.abs().max((s4_of_four - 1.0).abs()))
}

const RANDOMIZED: [(&str, Check); 9] = [
    ("0S faithfulness", faithfulness),
    ("1S adding a disjoint system", adding_system),
    ("2S local channels", local_operations),
    ("3D partial trace", partial_trace_monotone),
    ("5S superadditivity", superadditivity),
    ("product additivity", product_additivity),
    ("weaving dual forms", weaving_dual_forms),
    ("weaving contractivity", weaving_contractivity),
    ("4D fine graining", fine_graining),
];

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let suite = Suite { fault: cfg.fault };
    let mut properties = Vec::new();
    let checks = RANDOMIZED
        .iter()
        .map(|&(name, check)| (name, check, cfg.trials))
        .chain(std::iter::once(("3S distillation witness", distillation_witness as Check, 1)));
    for (idx, (name, check, trials)) in checks.enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(idx as u64 + 1)));
        let mut worst = f64::NEG_INFINITY;
        let mut violations = 0;
        for _ in 0..trials {
            let margin = check(&suite, &mut rng)?;
            if !(margin <= PROPERTY_TOL) {
                violations += 1;
            }
            worst = worst.max(margin);
        }
        properties.push(PropertyResult {
            name: name.to_string(),
            trials,
            violations,
            worst_margin: worst,
            passed: violations == 0,
        });
    }
    let passed = properties.iter().all(|p| p.passed);
    Ok(SuiteReport { seed: cfg.seed, trials: cfg.trials, tolerance: PROPERTY_TOL, properties, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_run_passes_and_is_deterministic() {
        let cfg = SuiteConfig { seed: 11, trials: 10, fault: None };
        let a = run_suite(&cfg).unwrap();
        assert!(a.passed, "{a:#?}");
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn faulty_clamp_is_caught() {
        let cfg = SuiteConfig { seed: 11, trials: 10, fault: Some(Fault::ClampFloor(0.01)) };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.passed);
        let faith = r.properties.iter().find(|p| p.name == "0S faithfulness").unwrap();
        assert!(!faith.passed);
    }
}
