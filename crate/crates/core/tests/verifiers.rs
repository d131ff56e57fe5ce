use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shallow_core::f2lin::F2Vector;
use shallow_core::graphs::Graph;
use shallow_core::problems::{
    gen_even_parity_input, verify_hlf_with, verify_php, verify_rphp, HlfCheck, HlfInstance, PhpInstance, RphpInstance,
};

/// Random even-parity input and arbitrary outputs on a random tree.
fn tree_instance(n: usize, rng: &mut ChaCha8Rng) -> RphpInstance {
    let edges = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let g = Graph::new(n, edges).unwrap();
    RphpInstance::new(g, gen_even_parity_input(n, rng).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// On a tree every d is consistent; walking down from vertex 0 gives
    /// the labels z it encodes.
    #[test]
    fn tree_outputs_always_have_labels(n in 1usize..24, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = tree_instance(n, &mut rng);
        let y = F2Vector::random(n, &mut rng);
        let d = F2Vector::random(n - 1, &mut rng);
        let mut z = vec![false; n];
        for (e, &(parent, v)) in inst.graph().edges().iter().enumerate() {
            z[v] = z[parent] ^ d.get(e);
        }
        let zx = (0..n).filter(|&v| z[v] && inst.x().get(v)).count() % 2 == 1;
        let half = (inst.x().weight() / 2) % 2 == 1;
        prop_assert_eq!(verify_rphp(&inst, &y, &d).unwrap(), y.parity() == half ^ zx);
    }

    #[test]
    fn odd_cycle_sum_rejects(n in 3usize..16, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Graph::cycle(n).unwrap();
        let inst = RphpInstance::new(g, gen_even_parity_input(n, &mut rng).unwrap()).unwrap();
        let y = F2Vector::random(n, &mut rng);
        let d = F2Vector::random(n, &mut rng);
        let verdict = verify_rphp(&inst, &y, &d).unwrap();
        // the whole ring is the only cycle
        if d.parity() {
            prop_assert!(!verdict);
        } else {
            let mut z = vec![false; n];
            for i in 1..n {
                z[i] = z[i - 1] ^ d.get(i - 1);
            }
            let zx = (0..n).filter(|&v| z[v] && inst.x().get(v)).count() % 2 == 1;
            let half = (inst.x().weight() / 2) % 2 == 1;
            prop_assert_eq!(verdict, y.parity() == half ^ zx);
        }
    }

    #[test]
    fn php_verdict_ignores_output_order(n in 1usize..30, m in 1usize..40, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = PhpInstance::new(gen_even_parity_input(n, &mut rng).unwrap(), m).unwrap();
        let y = F2Vector::random(m, &mut rng);
        let mut bits: Vec<bool> = y.iter().collect();
        bits.shuffle(&mut rng);
        let shuffled = F2Vector::from_bits(bits);
        prop_assert_eq!(verify_php(&inst, &y).unwrap(), verify_php(&inst, &shuffled).unwrap());
    }
}

#[test]
fn hlf_basis_check_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut accepted = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let inst = HlfInstance::random(n, &mut rng);
        for _ in 0..4 {
            let p = F2Vector::random(n, &mut rng);
            let fast = verify_hlf_with(&inst, &p, HlfCheck::Basis).unwrap();
            assert_eq!(fast, verify_hlf_with(&inst, &p, HlfCheck::BruteForce).unwrap());
            accepted += usize::from(fast);
        }
    }
    assert!(accepted > 0 && accepted < 2000);
}
