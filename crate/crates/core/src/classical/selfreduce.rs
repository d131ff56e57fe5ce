use rand::Rng;

use crate::problems::{TritVector, WeightedInput};

/// Random self-reduction for the Mod-3 weight: query `inner` once on
/// `a*x + b` for a uniform unit `a` and uniform shift `b`, then undo the
/// shift. A solver right on a `gamma` fraction of uniform inputs becomes one
/// right with probability `gamma` on every input.
pub fn self_reduce_mod3<F, R>(mut inner: F, x: &TritVector, rng: &mut R) -> u8
where
    F: FnMut(&TritVector) -> u8,
    R: Rng + ?Sized,
{
    let n = x.len();
    let a: u8 = rng.gen_range(1..=2);
    if n == 0 {
        return 0;
    }
    // b_i = c_{i+1} - c_i, b_n = -c_n, so |b| = -c_1 without summing b.
    let c: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let b: Vec<u8> = (0..n)
        .map(|i| {
            let next = if i + 1 < n { c[i + 1] } else { 0 };
            (next + 3 - c[i]) % 3
        })
        .collect();
    let weight_b = (3 - c[0]) % 3;
    let b = TritVector::new(b).expect("trits");
    let answer = inner(&x.affine(a, &b)) % 3;
    // a is its own inverse mod 3
    ((answer + 3 - weight_b) * a) % 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{gen_trit_input, mod3_weight};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_inner_solver_stays_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for n in 0..=8u32 {
            for code in 0..3u32.pow(n) {
                let x = TritVector::new((0..n).map(|i| (code / 3u32.pow(i) % 3) as u8).collect()).unwrap();
                let got = self_reduce_mod3(|y| mod3_weight(y), &x, &mut rng);
                assert_eq!(got, mod3_weight(&x));
            }
        }
    }

    #[test]
    fn shifted_input_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let x = TritVector::new(vec![2, 2]).unwrap();
        let mut counts = [0usize; 9];
        let trials = 90_000;
        for _ in 0..trials {
            self_reduce_mod3(
                |y| {
                    counts[(y.get(0) * 3 + y.get(1)) as usize] += 1;
                    0
                },
                &x,
                &mut rng,
            );
        }
        let sigma = (trials as f64 / 9.0 * 8.0 / 9.0).sqrt();
        for c in counts {
            assert!((c as f64 - trials as f64 / 9.0).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn constant_solver_error_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        let trials = 100_000;
        for _ in 0..3 {
            let x = gen_trit_input(6, &mut rng);
            let mut counts = [0usize; 3];
            for _ in 0..trials {
                let out = self_reduce_mod3(|_| 0, &x, &mut rng);
                counts[((out + 3 - mod3_weight(&x)) % 3) as usize] += 1;
            }
            let sigma = (trials as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
            for c in counts {
                assert!((c as f64 - trials as f64 / 3.0).abs() < 4.0 * sigma, "{counts:?}");
            }
            assert_eq!(x.len(), 6);
        }
    }
}
