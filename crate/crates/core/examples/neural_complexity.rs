//! Neural complexity of a few states, and its behaviour when an
//! uncorrelated qubit is appended: `C(ρ ⊗ σ) = (4/3)·C(ρ)` for a two-qubit
//! `ρ` and a single qubit `σ`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weaving::families::{make_classical, make_dicke, make_ghz};
use weaving::random::random_state;
use weaving::{neural_complexity, FillPolicy, SubsetEntropyCache};

fn nc(s: &weaving::DensityState) -> weaving::Result<f64> {
    neural_complexity(&SubsetEntropyCache::new(s, FillPolicy::Eager)?)
}

fn main() -> weaving::Result<()> {
    for (name, s) in [
        ("ghz_3", make_ghz(3, 2)?),
        ("classical_5", make_classical(5, 2)?),
        ("dicke(6,3)", make_dicke(6, 3)?),
    ] {
        println!("C({name}) = {:.6}", nc(&s)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let rho = random_state(&[2, 2], &mut rng)?;
        let sigma = random_state(&[2], &mut rng)?;
        let (c2, c3) = (nc(&rho)?, nc(&rho.tensor(&sigma)?)?);
        println!("C(rho) = {c2:.6}, C(rho ⊗ sigma) = {c3:.6}, ratio = {:.6}", c3 / c2);
    }
    Ok(())
}
