use std::ops::Mul;

use rand::Rng;
use rayon::prelude::*;

use super::Exact;
use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;

/// Non-communicating players whose XOR of outputs is `a ^ <b, x>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineStrategy {
    pub a: bool,
    pub b: F2Vector,
}

impl AffineStrategy {
    pub fn new(a: bool, b: F2Vector) -> Self {
        Self { a, b }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            a: rng.gen(),
            b: F2Vector::random(n, rng),
        }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Parity of the joint output on `x`.
    pub fn output_parity(&self, x: &F2Vector) -> bool {
        self.a ^ self.b.dot(x)
    }

    /// A concrete output string realizing the strategy: player `j` outputs
    /// `b_j x_j`, and player 0 additionally XORs in `a`.
    pub fn outputs(&self, x: &F2Vector) -> F2Vector {
        let mut y = self.b.and(x);
        if self.a && !y.is_empty() {
            y.flip(0);
        }
        y
    }
}

/// `sqrt(2)^sqrt2_power * e^{i pi phase / 4}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct EighthRootTerm {
    phase: u8,
    sqrt2_power: u32,
}

impl EighthRootTerm {
    pub(crate) const ONE: Self = Self {
        phase: 0,
        sqrt2_power: 0,
    };

    /// `1 + i` or `1 - i`.
    pub(crate) fn one_plus_signed_i(minus: bool) -> Self {
        Self {
            phase: if minus { 7 } else { 1 },
            sqrt2_power: 1,
        }
    }

    /// The real part as `sign * 2^exponent`, `sign` in {-1, 0, 1}.
    pub(crate) fn real_part(self) -> (i8, u32) {
        let sign = match self.phase {
            0 | 1 | 7 => 1,
            2 | 6 => 0,
            _ => -1,
        };
        if self.phase % 2 == 0 {
            assert!(self.sqrt2_power % 2 == 0, "irrational real part");
            (sign, self.sqrt2_power / 2)
        } else {
            // cos(pi/4) = 1/sqrt(2)
            assert!(self.sqrt2_power % 2 == 1, "irrational real part");
            (sign, (self.sqrt2_power - 1) / 2)
        }
    }
}

impl Mul for EighthRootTerm {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            phase: (self.phase + rhs.phase) % 8,
            sqrt2_power: self.sqrt2_power + rhs.sqrt2_power,
        }
    }
}

fn signed_correlation(strategy: &AffineStrategy) -> (i64, u32) {
    let n = strategy.n();
    let ones = strategy.b.weight();
    let product = (0..n).fold(EighthRootTerm::ONE, |acc, j| {
        acc * EighthRootTerm::one_plus_signed_i(j < ones)
    });
    let (sign, exp) = product.real_part();
    let sign = if strategy.a { -sign } else { sign };
    // correlation = sign * 2^exp / 2^(n-1)
    (i64::from(sign), exp)
}

/// Exact success probability of `strategy` on uniform even-parity inputs.
pub fn affine_win_prob_exact(strategy: &AffineStrategy, n: usize) -> Result<Exact> {
    if n == 0 {
        return Err(Error::Argument("game needs at least one player".into()));
    }
    if strategy.n() != n {
        return Err(shape(format!("strategy has {} players, game has {n}", strategy.n())));
    }
    if n > 62 {
        return Err(Error::Capacity {
            what: "players for exact affine value",
            got: n,
            limit: 62,
        });
    }
    let (sign, exp) = signed_correlation(strategy);
    // (1 + sign 2^exp / 2^(n-1)) / 2
    let denom = 1i64 << (n - 1);
    Ok(Exact::new(denom + sign * (1i64 << exp), 2 * denom))
}

/// Largest game size [`best_affine_strategy`] enumerates.
pub const BEST_AFFINE_MAX_PLAYERS: usize = 24;

/// Exhaustive search over all `2^(n+1)` affine strategies. Ties resolve to the
/// smallest `b` (as an integer), then `a = 0`.
pub fn best_affine_strategy(n: usize) -> Result<(AffineStrategy, Exact)> {
    if n == 0 {
        return Err(Error::Argument("game needs at least one player".into()));
    }
    if n > BEST_AFFINE_MAX_PLAYERS {
        return Err(Error::Capacity {
            what: "players for exhaustive affine search",
            got: n,
            limit: BEST_AFFINE_MAX_PLAYERS,
        });
    }
    let half = Exact::new(1, 2);
    let (bm, a, value) = (0..1u64 << n)
        .into_par_iter()
        .map(|bm| {
            let s = AffineStrategy::new(false, F2Vector::from_u64(bm, n));
            let v = affine_win_prob_exact(&s, n).expect("valid strategy");
            // complementing one output bit maps success s to 1 - s
            let flipped = Exact::from_integer(1) - v;
            debug_assert_eq!(affine_win_prob_exact(&AffineStrategy::new(true, s.b.clone()), n), Ok(flipped));
            if v >= half {
                (bm, false, v)
            } else {
                (bm, true, flipped)
            }
        })
        .reduce(
            || (u64::MAX, false, Exact::from_integer(-1)),
            |x, y| {
                if y.2 > x.2 || (y.2 == x.2 && (y.0, y.1) < (x.0, x.1)) {
                    y
                } else {
                    x
                }
            },
        );
    Ok((AffineStrategy::new(a, F2Vector::from_u64(bm, n)), value))
}

/// `1/2 + 2^{-ceil(n/2)}`.
pub fn affine_optimum(n: usize) -> Exact {
    Exact::new(1, 2) + Exact::new(1, 1i64 << n.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force(strategy: &AffineStrategy, n: usize) -> Exact {
        let mut wins = 0i64;
        let mut total = 0i64;
        for xm in 0..1u64 << n {
            if xm.count_ones() % 2 == 1 {
                continue;
            }
            total += 1;
            let x = F2Vector::from_u64(xm, n);
            let target = (xm.count_ones() / 2) % 2 == 1;
            if strategy.output_parity(&x) == target {
                wins += 1;
            }
        }
        Exact::new(wins, total)
    }

    #[test]
    fn matches_enumeration_for_every_strategy() {
        for n in 1..=8 {
            for bm in 0..1u64 << n {
                for a in [false, true] {
                    let s = AffineStrategy::new(a, F2Vector::from_u64(bm, n));
                    assert_eq!(affine_win_prob_exact(&s, n).unwrap(), brute_force(&s, n), "n={n} b={bm} a={a}");
                }
            }
        }
    }

    #[test]
    fn ghz_values() {
        let zero = AffineStrategy::new(false, F2Vector::zeros(3));
        assert_eq!(affine_win_prob_exact(&zero, 3).unwrap(), Exact::new(1, 4));
        assert_eq!(best_affine_strategy(3).unwrap().1, Exact::new(3, 4));
        assert_eq!(best_affine_strategy(2).unwrap().1, Exact::from_integer(1));
    }

    #[test]
    fn optimum_formula() {
        for n in 1..=14 {
            assert_eq!(best_affine_strategy(n).unwrap().1, affine_optimum(n), "n = {n}");
        }
    }

    #[test]
    fn best_strategy_attains_its_value() {
        for n in 1..=10 {
            let (s, v) = best_affine_strategy(n).unwrap();
            assert_eq!(brute_force(&s, n), v);
        }
    }

    #[test]
    fn complementing_a_flips_success() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..200 {
            let n = rng.gen_range(1..30);
            let s = AffineStrategy::random(n, &mut rng);
            let t = AffineStrategy::new(!s.a, s.b.clone());
            let total = affine_win_prob_exact(&s, n).unwrap() + affine_win_prob_exact(&t, n).unwrap();
            assert_eq!(total, Exact::from_integer(1));
        }
    }

    #[test]
    fn outputs_realize_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..200 {
            let n = rng.gen_range(1..20);
            let s = AffineStrategy::random(n, &mut rng);
            let x = F2Vector::random(n, &mut rng);
            assert_eq!(s.outputs(&x).parity(), s.output_parity(&x));
        }
    }

    #[test]
    fn errors() {
        assert!(best_affine_strategy(25).is_err());
        assert!(best_affine_strategy(0).is_err());
        let s = AffineStrategy::new(false, F2Vector::zeros(3));
        assert!(affine_win_prob_exact(&s, 4).is_err());
    }
}
