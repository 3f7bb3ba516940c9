//! The five-bit classical state `(|00000⟩⟨00000| + |11111⟩⟨11111|)/2`:
//! its genuine correlations are (2, 1, 0, 1) for orders 2..5, so it holds
//! no genuine 4-partite correlations. Discarding one bit produces one.

use weaving::families::make_classical;
use weaving::{profile, SearchMode};

pub fn main() -> weaving::Result<()> {
    let five = make_classical(5, 2)?;
    let p5 = profile(&five, SearchMode::Brute)?;
    println!("rho_5: genuine S^2..S^5 = {:?}", p5.genuine);
    for (k, part) in p5.argmin.as_deref().unwrap_or_default().iter().enumerate() {
        println!("  closest product for k = {}: {part}  (distance {:.3})", k + 1, p5.dist[k]);
    }

    let four = five.partial_trace(&[0, 1, 2, 3])?;
    let p4 = profile(&four, SearchMode::Brute)?;
    println!("rho_4 = Tr_5 rho_5: genuine S^2..S^4 = {:?}", p4.genuine);
    println!(
        "S^4 went from {} to {} under a partial trace",
        p5.genuine_at(4),
        p4.genuine_at(4)
    );
    Ok(())
}
