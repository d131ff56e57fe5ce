use std::collections::BTreeMap;

use super::{AffineStrategy, Exact};
use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;

/// Players constrained to a joint parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGroup {
    pub members: Vec<usize>,
    pub parity: bool,
}

/// Extra promises layered on top of global even parity: some inputs fixed,
/// some disjoint groups with prescribed parities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameConstraints {
    fixed: BTreeMap<usize, bool>,
    groups: Vec<ParityGroup>,
}

impl GameConstraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(n: usize, fixed: BTreeMap<usize, bool>, groups: Vec<ParityGroup>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut claim = |i: usize| -> Result<()> {
            if i >= n {
                return Err(Error::Argument(format!("player {i} out of range for {n} players")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Argument(format!("player {i} constrained twice")));
            }
            Ok(())
        };
        for &i in fixed.keys() {
            claim(i)?;
        }
        for g in &groups {
            if g.members.len() < 2 {
                return Err(Error::Argument("parity groups need at least two players".into()));
            }
            for &i in &g.members {
                claim(i)?;
            }
        }
        Ok(Self { fixed, groups })
    }

    pub fn fixed(&self) -> &BTreeMap<usize, bool> {
        &self.fixed
    }
    pub fn groups(&self) -> &[ParityGroup] {
        &self.groups
    }
    pub fn fixed_count(&self) -> usize {
        self.fixed.len()
    }
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    fn masks(&self) -> (u64, u64, Vec<(u64, bool)>) {
        let fixed_mask = self.fixed.keys().fold(0u64, |m, &i| m | 1 << i);
        let fixed_val = self.fixed.iter().filter(|(_, &v)| v).fold(0u64, |m, (&i, _)| m | 1 << i);
        let groups = self
            .groups
            .iter()
            .map(|g| (g.members.iter().fold(0u64, |m, &i| m | 1 << i), g.parity))
            .collect();
        (fixed_mask, fixed_val, groups)
    }

    /// Every input (as a bit mask) with even weight that satisfies the
    /// constraints, ascending.
    pub fn promise_set(&self, n: usize) -> Result<Vec<u64>> {
        check_players(n)?;
        let highest = self
            .fixed
            .keys()
            .chain(self.groups.iter().flat_map(|g| g.members.iter()))
            .max();
        if let Some(&i) = highest.filter(|&&i| i >= n) {
            return Err(Error::Argument(format!("player {i} out of range for {n} players")));
        }
        let (fixed_mask, fixed_val, groups) = self.masks();
        Ok((0..1u64 << n)
            .filter(|&x| {
                x.count_ones() % 2 == 0
                    && x & fixed_mask == fixed_val
                    && groups.iter().all(|&(m, p)| ((x & m).count_ones() % 2 == 1) == p)
            })
            .collect())
    }
}

/// Largest game size handled by the enumerating routines.
pub const CONSTRAINED_MAX_PLAYERS: usize = 22;

fn check_players(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("game needs at least one player".into()));
    }
    if n > CONSTRAINED_MAX_PLAYERS {
        return Err(Error::Capacity {
            what: "players for promise-set enumeration",
            got: n,
            limit: CONSTRAINED_MAX_PLAYERS,
        });
    }
    Ok(())
}

fn nonempty_promise(c: &GameConstraints, n: usize) -> Result<Vec<u64>> {
    let p = c.promise_set(n)?;
    if p.is_empty() {
        return Err(Error::Domain("constraints admit no even-parity input".into()));
    }
    Ok(p)
}

fn target(x: u64) -> bool {
    (x.count_ones() / 2) % 2 == 1
}

/// Exact success probability of `strategy` over the uniform distribution on
/// the promise set.
pub fn constrained_game_value(n: usize, constraints: &GameConstraints, strategy: &AffineStrategy) -> Result<Exact> {
    if strategy.n() != n {
        return Err(shape(format!("strategy has {} players, game has {n}", strategy.n())));
    }
    let promise = nonempty_promise(constraints, n)?;
    let b = strategy.b.as_u64();
    let wins = promise
        .iter()
        .filter(|&&x| (strategy.a ^ ((b & x).count_ones() % 2 == 1)) == target(x))
        .count();
    Ok(Exact::new(wins as i64, promise.len() as i64))
}

/// In-place Walsh-Hadamard transform: `f[b] <- sum_x f[x] (-1)^{b.x}`.
pub fn walsh_hadamard(f: &mut [i64]) {
    assert!(f.len().is_power_of_two(), "transform length must be a power of two");
    let mut h = 1;
    while h < f.len() {
        for block in f.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Best affine strategy for the constrained game, via one Walsh-Hadamard
/// transform of `[x in promise] (-1)^{|x|/2}`. Ties go to the smallest `b`.
pub fn constrained_game_max(n: usize, constraints: &GameConstraints) -> Result<(AffineStrategy, Exact)> {
    let promise = nonempty_promise(constraints, n)?;
    let mut f = vec![0i64; 1 << n];
    for &x in &promise {
        f[x as usize] = if target(x) { -1 } else { 1 };
    }
    walsh_hadamard(&mut f);
    let (b, &corr) = f
        .iter()
        .enumerate()
        .max_by_key(|&(b, c)| (c.abs(), std::cmp::Reverse(b)))
        .expect("nonempty transform");
    let size = promise.len() as i64;
    let value = Exact::new(size + corr.abs(), 2 * size);
    Ok((AffineStrategy::new(corr < 0, F2Vector::from_u64(b as u64, n)), value))
}

/// Outcome of checking a game value against `1/2 + 2^{-(n - d1)/2 + d2 + shift}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// `log2(bound) - log2(value - 1/2)`; infinite when the value is exactly 1/2.
    pub slack_log2: f64,
}

/// Exact comparison of `value - 1/2` with `2^{-(n - d1)/2 + d2 + shift}`,
/// done by squaring so no square roots are needed.
pub fn check_constrained_bound(value: Exact, n: usize, d1: usize, d2: usize, shift: i32) -> BoundCheck {
    let excess = value - Exact::new(1, 2);
    let (num, den) = (*excess.numer(), *excess.denom());
    // twice the bound's log2
    let two_log_bound = -(n as i64 - d1 as i64) + 2 * (d2 as i64 + i64::from(shift));
    let holds = if num <= 0 {
        true
    } else {
        let lhs = (num as i128) * (num as i128);
        let rhs = (den as i128) * (den as i128);
        if two_log_bound >= 0 {
            lhs <= rhs << two_log_bound
        } else {
            lhs << (-two_log_bound) <= rhs
        }
    };
    let slack_log2 = if num <= 0 {
        f64::INFINITY
    } else {
        two_log_bound as f64 / 2.0 - ((num as f64) / (den as f64)).log2()
    };
    BoundCheck { holds, slack_log2 }
}
