//! A CNOT from the last qubit of `|a_k⟩ = a|0…0⟩ + √(1−a²)|1…1⟩` onto a
//! fresh `|0⟩` yields `|a_{k+1}⟩`: the genuine correlations move up one
//! order with unchanged value `2·h2(a²)`.

use nalgebra::DVector;
use weaving::families::make_a_family;
use weaving::state::C64;
use weaving::{profile, DensityState, KrausChannel, SearchMode};

fn h2(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

pub fn main() -> weaving::Result<()> {
    let zero = DensityState::from_amplitudes(vec![2], DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]))?;
    for a in [0.3, 0.6, std::f64::consts::FRAC_1_SQRT_2] {
        for k in [2, 3, 4] {
            let ak = make_a_family(k, a)?;
            let grown = KrausChannel::cnot(k - 1, k)?.apply(&ak.tensor(&zero)?)?;
            let before = profile(&ak, SearchMode::Brute)?;
            let after = profile(&grown, SearchMode::Brute)?;
            println!(
                "a = {a:.3}, k = {k}: S^{k}(a_k) = {:.6}, S^{}(a_(k+1)) = {:.6}, 2 h2(a^2) = {:.6}",
                before.genuine_at(k),
                k + 1,
                after.genuine_at(k + 1),
                2.0 * h2(a * a)
            );
        }
    }
    Ok(())
}
