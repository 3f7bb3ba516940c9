use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weaving::random::{random_state, random_unitary};
use weaving::{KrausChannel, WeightScheme};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_undoes_tensor(seed in any::<u64>(), na in 1usize..3, nb in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&vec![2; na], &mut rng).unwrap();
        let b = random_state(&vec![2; nb], &mut rng).unwrap();
        let ab = a.tensor(&b).unwrap();
        let keep_a: Vec<usize> = (0..na).collect();
        let keep_b: Vec<usize> = (na..na + nb).collect();
        prop_assert!(ab.partial_trace(&keep_a).unwrap().max_abs_diff(&a).unwrap() < 1e-12);
        prop_assert!(ab.partial_trace(&keep_b).unwrap().max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&vec![2; n], &mut rng).unwrap();
        let u = random_unitary(1 << n, &mut rng);
        let rotated = KrausChannel::unitary(u, (0..n).collect()).unwrap().apply(&s).unwrap();
        prop_assert!((rotated.entropy().unwrap() - s.entropy().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_subadditive(seed in any::<u64>(), n in 2usize..5, split in 1usize..4) {
        let split = split.min(n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&vec![2; n], &mut rng).unwrap();
        let left: Vec<usize> = (0..split).collect();
        let right: Vec<usize> = (split..n).collect();
        let joint = s.entropy().unwrap();
        let sum = s.subset_entropy(&left).unwrap() + s.subset_entropy(&right).unwrap();
        prop_assert!(joint <= sum + 1e-9);
        // Araki-Lieb
        prop_assert!((s.subset_entropy(&left).unwrap() - s.subset_entropy(&right).unwrap()).abs() <= joint + 1e-9);
    }

    #[test]
    fn weight_forms_interconvert(omega in proptest::collection::vec(0.0f64..5.0, 1..8)) {
        let w = WeightScheme::Omega(omega.clone());
        let back = WeightScheme::BigOmega(w.big_omega()).omega();
        prop_assert_eq!(back.len(), omega.len());
        for (a, b) in back.iter().zip(&omega) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
