//! Runs a few of the examples as tests so they cannot rot.

#[path = "../examples/classical_distillation.rs"]
mod classical_distillation;

#[path = "../examples/cnot_growth.rs"]
mod cnot_growth;

#[path = "../examples/weaving_ranking.rs"]
mod weaving_ranking;

#[test]
fn examples_run() {
    classical_distillation::main().unwrap();
    cnot_growth::main().unwrap();
    weaving_ranking::main().unwrap();
}
