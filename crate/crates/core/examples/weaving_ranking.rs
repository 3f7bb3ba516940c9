//! Three states with equal total correlations are told apart by how the
//! correlations are distributed over orders. Different weight rules rank
//! them differently.

use weaving::families::{make_bell_product, make_classical_pair_product, make_ghz};
use weaving::{profile, weaving, SearchMode, WeightRule};

pub fn main() -> weaving::Result<()> {
    let n = 4;
    let states = [
        ("bell pairs", make_bell_product(n, 2)?),
        ("ghz", make_ghz(n, 2)?),
        ("classical pairs", make_classical_pair_product(n)?),
    ];
    let rules: Vec<WeightRule> = ["k-1", "uniform", "delta:4", "delta:2"]
        .iter()
        .map(|r| r.parse())
        .collect::<weaving::Result<_>>()?;
    print!("{:<16} {:>7}", "state", "total");
    for r in &rules {
        print!(" {:>9}", r.name());
    }
    println!();
    for (name, s) in &states {
        let p = profile(s, SearchMode::Auto)?;
        print!("{name:<16} {:>7.3}", p.total);
        for r in &rules {
            print!(" {:>9.3}", weaving(&p, &r.for_n(n)?)?);
        }
        println!("   genuine {:?}", p.genuine);
    }
    Ok(())
}
