//! Closed-form weaving with ω_k = k−1 for N up to 4096, normalized by the
//! growth law of each family.

use weaving::closed_forms::cf_scaling_sweep;
use weaving::cli::doubling_range;
use weaving::{ClosedFormFamily, WeightRule};

fn main() -> weaving::Result<()> {
    let ns = doubling_range(64, 4096);
    for family in [
        ClosedFormFamily::Ghz { n: 64 },
        ClosedFormFamily::Dicke1 { n: 64 },
        ClosedFormFamily::DickeHalf { n: 64 },
        ClosedFormFamily::BellProduct { n: 64, d: 2 },
    ] {
        println!("{} (weaving / {})", family.id(), family.scaling_law().name());
        for p in cf_scaling_sweep(&family, &ns, &WeightRule::KMinusOne)? {
            println!("  N = {:>5}  weaving = {:>14.4}  coefficient = {:.5}", p.n, p.weaving, p.coefficient);
        }
    }
    Ok(())
}
