use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weaving::correlations::{profile, SearchMode};
use weaving::families::{make_dicke, make_ghz};
use weaving::random::{random_channel, random_state};
use weaving::{relative_entropy, KrausChannel};

#[test]
fn local_channels_never_increase_any_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..40 {
        let n = 2 + trial % 3;
        let s = random_state(&vec![2; n], &mut rng).unwrap();
        let site = trial % n;
        let ch = random_channel(2, 1 + trial % 3, vec![site], &mut rng).unwrap();
        let out = ch.apply(&s).unwrap();
        let (before, after) = (profile(&s, SearchMode::Brute).unwrap(), profile(&out, SearchMode::Brute).unwrap());
        for (b, a) in before.dist.iter().zip(&after.dist) {
            assert!(a <= &(b + 1e-9), "trial {trial}: {a} > {b}");
        }
    }
}

#[test]
fn depolarizing_one_site_of_ghz() {
    let ghz = make_ghz(3, 2).unwrap();
    let out = KrausChannel::fully_depolarizing(0).apply(&ghz).unwrap();
    let p = profile(&out, SearchMode::Brute).unwrap();
    // the two remaining qubits keep one classical bit of correlation
    assert!((p.total - 1.0).abs() < 1e-10);
    assert!(p.genuine_at(3).abs() < 1e-10);
}

#[test]
fn relative_entropy_contracts_under_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (r, s) = (random_state(&[2, 2], &mut rng).unwrap(), random_state(&[2, 2], &mut rng).unwrap());
        let ch = random_channel(2, 2, vec![1], &mut rng).unwrap();
        let before = relative_entropy(&r, &s).unwrap();
        let after = relative_entropy(&ch.apply(&r).unwrap(), &ch.apply(&s).unwrap()).unwrap();
        assert!(after <= before + 1e-9 || before.is_infinite());
    }
}

#[test]
fn cnot_then_inverse_restores_profile() {
    let s = make_dicke(4, 2).unwrap();
    let cnot = KrausChannel::cnot(0, 3).unwrap();
    let back = cnot.apply(&cnot.apply(&s).unwrap()).unwrap();
    assert!(back.max_abs_diff(&s).unwrap() < 1e-12);
}
