use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shallow_core::f2lin::F2Vector;
use shallow_core::graphs::Graph;
use shallow_core::problems::{gen_even_parity_input, verify_php, verify_rphp, PhpInstance, RphpInstance};
use shallow_core::qsim::{
    php_law, rphp_law, sample_php_cat, sample_rphp, statevector_php, statevector_rphp, total_variation, StateVector,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let edges = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::new(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_sample_verifies(n in 1usize..40, m in 1usize..60, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = gen_even_parity_input(n, &mut rng).unwrap();
        let php = PhpInstance::new(x.clone(), m).unwrap();
        let tree = random_tree(n, &mut rng);
        let rphp = RphpInstance::new(tree.clone(), x.clone()).unwrap();
        for _ in 0..50 {
            prop_assert!(verify_php(&php, &sample_php_cat(&x, m, &mut rng).unwrap()).unwrap());
            let s = sample_rphp(&tree, &x, &mut rng).unwrap();
            prop_assert!(verify_rphp(&rphp, &s.y, s.d.as_ref().unwrap()).unwrap());
        }
    }

    #[test]
    fn php_law_matches_statevector(n in 1usize..=10, seed: u64) {
        let x = gen_even_parity_input(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(total_variation(&php_law(&x, n).unwrap(), &statevector_php(&x).unwrap()) < 1e-10);
    }

    /// Trees on up to 7 vertices keep vertex plus edge qubits within the
    /// statevector limit.
    #[test]
    fn rphp_law_matches_statevector(n in 1usize..=7, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(n, &mut rng);
        let x = gen_even_parity_input(n, &mut rng).unwrap();
        prop_assert!(total_variation(&rphp_law(&g, &x).unwrap(), &statevector_rphp(&g, &x).unwrap()) < 1e-10);
    }

    #[test]
    fn gates_preserve_norm(qubits in 1usize..=10, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::zero(qubits).unwrap();
        for _ in 0..200 {
            let q = rng.gen_range(0..qubits);
            match rng.gen_range(0..4) {
                0 => s.h(q),
                1 => s.s(q),
                2 => s.phase(q, rng.gen_range(-3.2..3.2)),
                _ if qubits > 1 => {
                    let t = (q + rng.gen_range(1..qubits)) % qubits;
                    s.cnot(q, t);
                }
                _ => s.h(q),
            }
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}

/// Chi-square of the sample histogram against the uniform law on the
/// parity coset `{y : |y| = |x|/2 mod 2}`.
#[test]
fn samples_are_uniform_on_the_coset() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=8usize {
        for _ in 0..3 {
            let x = gen_even_parity_input(n, &mut rng).unwrap();
            let target = (x.weight() / 2) % 2 == 1;
            let coset: Vec<u64> = (0..1u64 << n).filter(|y| (y.count_ones() % 2 == 1) == target).collect();
            let per_cell = 200usize;
            let samples = per_cell * coset.len();
            let mut counts = vec![0usize; 1 << n];
            for _ in 0..samples {
                counts[sample_php_cat(&x, n, &mut rng).unwrap().as_u64() as usize] += 1;
            }
            let stat: f64 = coset
                .iter()
                .map(|&y| (counts[y as usize] as f64 - per_cell as f64).powi(2) / per_cell as f64)
                .sum();
            let off_coset: usize = (0..1usize << n)
                .filter(|y| !coset.contains(&(*y as u64)))
                .map(|y| counts[y])
                .sum();
            assert_eq!(off_coset, 0);
            if coset.len() > 1 {
                let p = 1.0 - ChiSquared::new((coset.len() - 1) as f64).unwrap().cdf(stat);
                assert!(p > 0.001, "n = {n}, x = {x:?}: chi-square p = {p}");
            }
        }
    }
}

#[test]
fn zero_input_is_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = F2Vector::zeros(6);
    let inst = PhpInstance::new(x.clone(), 6).unwrap();
    for _ in 0..100 {
        let y = sample_php_cat(&x, 6, &mut rng).unwrap();
        assert!(!y.parity());
        assert!(verify_php(&inst, &y).unwrap());
    }
}
