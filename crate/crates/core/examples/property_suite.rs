//! Runs the randomized property suite, then again with a deliberately
//! broken distance (clamped at a positive floor) to show it is caught.

use weaving::properties::{run_suite, Fault, SuiteConfig};

fn main() -> weaving::Result<()> {
    let honest = run_suite(&SuiteConfig { seed: 2017, trials: 100, fault: None })?;
    let broken = run_suite(&SuiteConfig { seed: 2017, trials: 100, fault: Some(Fault::ClampFloor(0.05)) })?;
    println!("{:<30} {:>14} {:>14}", "property", "honest", "faulty clamp");
    for (h, b) in honest.properties.iter().zip(&broken.properties) {
        let show = |p: &weaving::properties::PropertyResult| {
            if p.passed { "pass".to_string() } else { format!("FAIL ({})", p.violations) }
        };
        println!("{:<30} {:>14} {:>14}", h.name, show(h), show(b));
    }
    println!("\nhonest suite passed: {}, faulty suite passed: {}", honest.passed, broken.passed);
    Ok(())
}
