//! Loads states from JSON files, profiles them, and writes a computed state
//! back out in the same format.
//!
//! Run: `cargo run --example state_file -- path/to/state.json`

use std::path::PathBuf;

use weaving::cli::{cmd_profile, load_state_file, ProfileOptions, StateFileSpec, StateSource};
use weaving::families::make_ghz;
use weaving::{SearchMode, WeightRule};

fn main() -> weaving::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/states");
    let paths: Vec<PathBuf> = match std::env::args().nth(1) {
        Some(p) => vec![p.into()],
        None => ["w3.json", "classical_product.json", "bell_mixed.json"].iter().map(|f| dir.join(f)).collect(),
    };
    for path in paths {
        let state = load_state_file(&path)?;
        let report = cmd_profile(&ProfileOptions {
            state: StateSource::File(path.clone()),
            weights: WeightRule::KMinusOne,
            mode: SearchMode::Brute,
        })?;
        println!(
            "{}: dims {:?}, genuine {:?}, total {}, weaving {}",
            path.file_name().unwrap_or_default().to_string_lossy(),
            state.dims(),
            report.genuine,
            report.total,
            report.weaving
        );
    }

    let spec = StateFileSpec::from_state(&make_ghz(3, 2)?)?;
    let text = serde_json::to_string(&spec).expect("serializable");
    let back = StateFileSpec::parse(&text)?.to_state()?;
    println!("\nghz_3 as a state file:\n{text}");
    println!("reloaded entropy of qubit 1: {} bits", back.subset_entropy(&[0])?);
    Ok(())
}
