//! Prints the benchmark table (genuine correlations of every order, total
//! correlations and weaving) at a few N, with the matrix cross-check.
//!
//! Run: `cargo run --example table_one -- 6 3`

use weaving::cli::{cmd_table, TableOptions};
use weaving::{SearchMode, WeightRule};

fn main() -> weaving::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, d) = (args.first().copied().unwrap_or(6), args.get(1).copied().unwrap_or(3));
    let report = cmd_table(&TableOptions {
        n,
        d,
        weights: WeightRule::KMinusOne,
        mode: SearchMode::Brute,
        closed_form_only: n > 8,
    })?;
    println!("N = {n}, d = {d}, weights ω_k = k-1, all values in bits\n");
    println!("{:<24} {:>32} {:>8} {:>8} {:>9} {:>10}", "family", "S^k (k=2..N-1)", "S^N", "total", "weaving", "|cf-mat|");
    for row in &report.rows {
        let cf = &row.closed_form;
        let ks: Vec<String> = cf.genuine_below_n.iter().map(|x| format!("{x:.3}")).collect();
        let diff = row.max_disagreement.map_or("-".to_string(), |x| format!("{x:.1e}"));
        println!(
            "{:<24} {:>32} {:>8.4} {:>8.4} {:>9.4} {:>10}",
            row.state,
            ks.join(" "),
            cf.s_n,
            cf.total,
            cf.weaving,
            diff
        );
    }
    for s in &report.skipped {
        println!("skipped {s}");
    }
    println!("\nclosed form and matrix pipeline agree: {}", report.all_agree());
    Ok(())
}
