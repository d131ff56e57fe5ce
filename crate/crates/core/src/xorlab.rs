//! Fourier-bias measurements on per-copy win indicators of parallel games.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;

use crate::classical::{walsh_hadamard, AffineStrategy, LocalStrategy};
use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;
use crate::problems::{gen_even_parity_input, gen_trit_input, half_weight_parity, mod3_weight, verify_pbp};
use crate::qsim::{sample_pbp, sample_php_cat};
use crate::report::format_float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Binary,
    Ternary,
}

impl Alphabet {
    pub fn size(self) -> u8 {
        match self {
            Alphabet::Binary => 2,
            Alphabet::Ternary => 3,
        }
    }
}

/// Outcome vectors of repeated parallel runs. Symbol 0 means the copy was
/// solved; nonzero symbols name the kind of loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorSamples {
    alphabet: Alphabet,
    k: usize,
    symbols: Vec<u8>,
}

impl IndicatorSamples {
    pub fn new(alphabet: Alphabet, k: usize) -> Self {
        Self {
            alphabet,
            k,
            symbols: Vec::new(),
        }
    }

    pub fn push(&mut self, record: &[u8]) -> Result<()> {
        if record.len() != self.k {
            return Err(shape(format!("record has {} symbols, expected {}", record.len(), self.k)));
        }
        if let Some(&s) = record.iter().find(|&&s| s >= self.alphabet.size()) {
            return Err(Error::Argument(format!("symbol {s} outside the alphabet")));
        }
        self.symbols.extend_from_slice(record);
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn len(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.symbols.len() / self.k
        }
    }
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &[u8]> {
        self.symbols.chunks(self.k.max(1))
    }

    /// Fraction of records with every copy solved.
    pub fn all_win_fraction(&self) -> f64 {
        let wins = self.records().filter(|r| r.iter().all(|&s| s == 0)).count();
        wins as f64 / self.len() as f64
    }

    /// Record counts keyed by the record read as a base-`|alphabet|` number,
    /// coordinate 0 least significant.
    pub fn histogram(&self) -> Result<Vec<u64>> {
        let base = u64::from(self.alphabet.size());
        let cells = base.checked_pow(self.k as u32).filter(|&c| c <= 1 << 24).ok_or(Error::Capacity {
            what: "histogram coordinates",
            got: self.k,
            limit: 20,
        })?;
        let mut h = vec![0u64; cells as usize];
        for r in self.records() {
            let key = r.iter().rev().fold(0u64, |acc, &s| acc * base + u64::from(s));
            h[key as usize] += 1;
        }
        Ok(h)
    }
}

/// Parallel repetition with fresh uniform promise inputs on every run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParallelGame {
    /// `k` parity-halving copies with `n` inputs and `n` outputs each.
    ParityHalving { k: usize, n: usize },
    /// `k` parity-bending copies on uniform bit inputs.
    ParityBending { k: usize, n: usize },
    /// `k` Mod-3 copies on uniform trit inputs; the symbol is
    /// `|x| - answer (mod 3)`.
    Mod3 { k: usize, n: usize },
}

impl ParallelGame {
    pub fn k(&self) -> usize {
        match *self {
            ParallelGame::ParityHalving { k, .. } | ParallelGame::ParityBending { k, .. } | ParallelGame::Mod3 { k, .. } => k,
        }
    }
    pub fn n(&self) -> usize {
        match *self {
            ParallelGame::ParityHalving { n, .. } | ParallelGame::ParityBending { n, .. } | ParallelGame::Mod3 { n, .. } => n,
        }
    }
    pub fn alphabet(&self) -> Alphabet {
        match self {
            ParallelGame::Mod3 { .. } => Alphabet::Ternary,
            _ => Alphabet::Binary,
        }
    }
}

/// Who answers each copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Player {
    /// The exact quantum sampler for the game; Mod-3 copies use parity
    /// bending with even parity read as 0 and odd as a uniform 1 or 2.
    Quantum,
    /// One affine strategy per copy.
    Affine(Vec<AffineStrategy>),
    /// One local strategy per copy.
    Local(Vec<LocalStrategy>),
    /// Every output bit (or trit) is 0.
    Zero,
}

/// Even parity reads as 0, odd parity as a uniform nonzero trit.
pub fn parity_to_mod3<R: Rng + ?Sized>(y: &F2Vector, rng: &mut R) -> u8 {
    if y.parity() {
        rng.gen_range(1..=2)
    } else {
        0
    }
}

fn classical_output(player: &Player, copy: usize, x: &F2Vector) -> Result<F2Vector> {
    Ok(match player {
        Player::Quantum => return Err(Error::Argument("quantum copies have no classical output".into())),
        Player::Affine(s) => s[copy].outputs(x),
        Player::Local(s) => s[copy].evaluate(x)?,
        Player::Zero => F2Vector::zeros(x.len()),
    })
}

fn check_player(game: &ParallelGame, player: &Player) -> Result<()> {
    let per_copy = match player {
        Player::Affine(s) => Some(s.iter().map(AffineStrategy::n).collect::<Vec<_>>()),
        Player::Local(s) => Some(s.iter().map(LocalStrategy::inputs).collect()),
        _ => None,
    };
    if let Some(sizes) = per_copy {
        if matches!(game, ParallelGame::Mod3 { .. }) {
            return Err(Error::Argument("bit strategies cannot answer Mod-3 copies".into()));
        }
        if sizes.len() != game.k() || sizes.iter().any(|&n| n != game.n()) {
            return Err(shape(format!("need {} strategies on {} inputs", game.k(), game.n())));
        }
    }
    Ok(())
}

/// One run: fresh inputs for every copy, one symbol per copy.
pub fn play_once<R: Rng + ?Sized>(game: &ParallelGame, player: &Player, rng: &mut R) -> Result<Vec<u8>> {
    let n = game.n();
    (0..game.k())
        .map(|copy| match game {
            ParallelGame::ParityHalving { .. } => {
                let x = gen_even_parity_input(n, rng)?;
                let y = match player {
                    Player::Quantum => sample_php_cat(&x, n, rng)?,
                    _ => classical_output(player, copy, &x)?,
                };
                Ok(u8::from(y.parity() != half_weight_parity(&x)))
            }
            ParallelGame::ParityBending { .. } => {
                let x = F2Vector::random(n, rng);
                let y = match player {
                    Player::Quantum => sample_pbp(&x, rng)?,
                    _ => classical_output(player, copy, &x)?,
                };
                Ok(u8::from(!verify_pbp(&x, &y)))
            }
            ParallelGame::Mod3 { .. } => {
                let x = gen_trit_input(n, rng);
                let answer = match player {
                    Player::Quantum => parity_to_mod3(&sample_pbp(&x, rng)?, rng),
                    Player::Zero => 0,
                    _ => return Err(Error::Argument("bit strategies cannot answer Mod-3 copies".into())),
                };
                Ok((mod3_weight(&x) + 3 - answer) % 3)
            }
        })
        .collect()
}

pub fn collect_win_indicators<R: Rng + ?Sized>(
    game: &ParallelGame,
    player: &Player,
    samples: usize,
    rng: &mut R,
) -> Result<IndicatorSamples> {
    if samples == 0 {
        return Err(Error::Argument("need at least one sample".into()));
    }
    check_player(game, player)?;
    let mut out = IndicatorSamples::new(game.alphabet(), game.k());
    out.symbols.reserve(samples * game.k());
    for _ in 0..samples {
        let record = play_once(game, player, rng)?;
        out.push(&record)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasEstimate {
    pub bias: f64,
    pub stderr: f64,
}

fn require_binary(samples: &IndicatorSamples) -> Result<()> {
    if samples.alphabet != Alphabet::Binary {
        return Err(Error::Argument("subset biases need binary samples".into()));
    }
    if samples.is_empty() {
        return Err(Error::Argument("no samples".into()));
    }
    Ok(())
}

fn estimate(total: i64, n: u64) -> BiasEstimate {
    let bias = total as f64 / n as f64;
    BiasEstimate {
        bias,
        stderr: ((1.0 - bias * bias).max(0.0) / n as f64).sqrt(),
    }
}

/// Empirical `E[(-1)^{XOR of w_i, i in S}]`.
pub fn subset_bias(samples: &IndicatorSamples, subset: &[usize]) -> Result<BiasEstimate> {
    require_binary(samples)?;
    if subset.is_empty() {
        return Err(Error::Argument("subset must be nonempty".into()));
    }
    if let Some(&i) = subset.iter().find(|&&i| i >= samples.k) {
        return Err(Error::Argument(format!("coordinate {i} out of range")));
    }
    let total: i64 = samples
        .records()
        .map(|r| if subset.iter().fold(0, |acc, &i| acc ^ r[i]) == 0 { 1 } else { -1 })
        .sum();
    Ok(estimate(total, samples.len() as u64))
}

/// Largest `k` for all-subset sweeps.
pub const MAX_SUBSET_SWEEP: usize = 20;

/// Biases of every subset, indexed by subset mask (entry 0 is the empty set,
/// bias 1). One Walsh-Hadamard transform of the integer histogram.
pub fn all_subset_biases(samples: &IndicatorSamples) -> Result<Vec<BiasEstimate>> {
    require_binary(samples)?;
    if samples.k > MAX_SUBSET_SWEEP {
        return Err(Error::Capacity {
            what: "coordinates for an all-subset sweep",
            got: samples.k,
            limit: MAX_SUBSET_SWEEP,
        });
    }
    let mut h: Vec<i64> = samples.histogram()?.into_iter().map(|c| c as i64).collect();
    walsh_hadamard(&mut h);
    let n = samples.len() as u64;
    Ok(h.into_iter().map(|t| estimate(t, n)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VaziraniReport {
    /// Largest `|bias_S|` over nonempty `S`.
    pub epsilon: f64,
    /// `epsilon * 2^{k/2}`: distance from uniform.
    pub tv_bound: f64,
    /// `2^{-k} + epsilon`: bound on `Pr[every copy won]`.
    pub all_win_bound: f64,
    pub empirical_all_win: f64,
    pub all_win_stderr: f64,
}

/// `biases` holds every subset mask `0..2^k` (as from [`all_subset_biases`]).
pub fn vazirani_checks(samples: &IndicatorSamples, biases: &[BiasEstimate]) -> Result<VaziraniReport> {
    require_binary(samples)?;
    let k = samples.k;
    if k > MAX_SUBSET_SWEEP || biases.len() != 1 << k {
        return Err(Error::Argument(format!("need all {} subset biases, got {}", 1u64 << k.min(63), biases.len())));
    }
    let epsilon = biases[1..].iter().map(|b| b.bias.abs()).fold(0.0, f64::max);
    let p = samples.all_win_fraction();
    Ok(VaziraniReport {
        epsilon,
        tv_bound: epsilon * 2f64.powf(k as f64 / 2.0),
        all_win_bound: 2f64.powi(-(k as i32)) + epsilon,
        empirical_all_win: p,
        all_win_stderr: (p * (1.0 - p) / samples.len() as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacterEstimate {
    pub mean: Complex64,
    pub stderr: f64,
}

/// Empirical `E[omega^{<a, record>}]`, `omega = e^{2 pi i / 3}`.
pub fn z3_character_bias(samples: &IndicatorSamples, a: &[u8]) -> Result<CharacterEstimate> {
    if samples.alphabet != Alphabet::Ternary {
        return Err(Error::Argument("characters of Z3^k need ternary samples".into()));
    }
    if a.len() != samples.k {
        return Err(shape(format!("character has {} entries, samples have {}", a.len(), samples.k)));
    }
    if a.iter().all(|&t| t % 3 == 0) {
        return Err(Error::Argument("character must be nontrivial".into()));
    }
    if samples.is_empty() {
        return Err(Error::Argument("no samples".into()));
    }
    let mut counts = [0u64; 3];
    for r in samples.records() {
        let e = r.iter().zip(a).map(|(&s, &t)| u32::from(s) * u32::from(t)).sum::<u32>() % 3;
        counts[e as usize] += 1;
    }
    let n = samples.len() as f64;
    let mean = (0..3)
        .map(|e| Complex64::from_polar(counts[e] as f64 / n, 2.0 * PI * e as f64 / 3.0))
        .sum::<Complex64>();
    Ok(CharacterEstimate {
        mean,
        stderr: ((1.0 - mean.norm_sqr()).max(0.0) / n).sqrt(),
    })
}

/// `3^{k/2} * epsilon`.
pub fn z3_distance_bound(epsilon: f64, k: usize) -> f64 {
    epsilon * 3f64.powf(k as f64 / 2.0)
}

/// `mask,bias,stderr` rows for every nonempty subset.
pub fn write_bias_csv<W: Write>(mut out: W, biases: &[BiasEstimate]) -> std::io::Result<()> {
    writeln!(out, "mask,bias,stderr")?;
    for (mask, b) in biases.iter().enumerate().skip(1) {
        writeln!(out, "{mask},{},{}", format_float(b.bias), format_float(b.stderr))?;
    }
    Ok(())
}

/// `character,re,im,abs,stderr` rows; the character is its trit string.
pub fn write_character_csv<W: Write>(mut out: W, rows: &[(Vec<u8>, CharacterEstimate)]) -> std::io::Result<()> {
    writeln!(out, "character,re,im,abs,stderr")?;
    for (a, c) in rows {
        let label: String = a.iter().map(|t| char::from(b'0' + t)).collect();
        writeln!(
            out,
            "{label},{},{},{},{}",
            format_float(c.mean.re),
            format_float(c.mean.im),
            format_float(c.mean.norm()),
            format_float(c.stderr)
        )?;
    }
    Ok(())
}

/// Every nonzero vector in `{0,1,2}^k`, in base-3 counting order.
pub fn nonzero_characters(k: usize) -> Vec<Vec<u8>> {
    (1..3usize.pow(k as u32))
        .map(|code| (0..k).map(|i| (code / 3usize.pow(i as u32) % 3) as u8).collect())
        .collect()
}
