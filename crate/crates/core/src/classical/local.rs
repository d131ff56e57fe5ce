use rand::seq::index::sample;
use rand::Rng;

use super::Exact;
use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;
use crate::problems::{gen_even_parity_input, half_weight_parity};

/// Each output bit is a truth table over a small set of inputs. Bit `t` of a
/// table index is the value of input `supports[j][t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStrategy {
    inputs: usize,
    supports: Vec<Vec<usize>>,
    tables: Vec<F2Vector>,
}

/// Largest support a truth table may have.
pub const MAX_SUPPORT: usize = 20;

impl LocalStrategy {
    pub fn new(inputs: usize, supports: Vec<Vec<usize>>, tables: Vec<F2Vector>) -> Result<Self> {
        if supports.len() != tables.len() {
            return Err(shape(format!("{} supports but {} tables", supports.len(), tables.len())));
        }
        for (j, (s, t)) in supports.iter().zip(&tables).enumerate() {
            if s.len() > MAX_SUPPORT {
                return Err(Error::Capacity {
                    what: "support size",
                    got: s.len(),
                    limit: MAX_SUPPORT,
                });
            }
            if let Some(&i) = s.iter().find(|&&i| i >= inputs) {
                return Err(Error::Argument(format!("output {j} reads input {i} of {inputs}")));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(Error::Argument(format!("output {j} lists an input twice")));
            }
            if t.len() != 1 << s.len() {
                return Err(shape(format!(
                    "output {j} has support {} but a table of {} entries",
                    s.len(),
                    t.len()
                )));
            }
        }
        Ok(Self {
            inputs,
            supports,
            tables,
        })
    }

    /// Every output constantly 0.
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            supports: vec![Vec::new(); outputs],
            tables: vec![F2Vector::zeros(1); outputs],
        }
    }

    /// One output `x_i AND x_j` for each pair `i < j`. Its output weight is
    /// `C(|x|, 2)`, whose parity is `|x|/2` for even `|x|`.
    pub fn pairwise_and(inputs: usize) -> Self {
        let and = F2Vector::from_bit_str("0001").expect("literal");
        let mut supports = Vec::new();
        for i in 0..inputs {
            for j in i + 1..inputs {
                supports.push(vec![i, j]);
            }
        }
        let tables = vec![and; supports.len()];
        Self {
            inputs,
            supports,
            tables,
        }
    }

    /// Uniform supports of size `locality` and uniform tables.
    pub fn random<R: Rng + ?Sized>(inputs: usize, outputs: usize, locality: usize, rng: &mut R) -> Result<Self> {
        if locality > inputs.min(MAX_SUPPORT) {
            return Err(Error::Argument(format!("locality {locality} exceeds {inputs} inputs")));
        }
        let supports: Vec<Vec<usize>> = (0..outputs).map(|_| sample(rng, inputs, locality).into_vec()).collect();
        let tables = supports.iter().map(|s| F2Vector::random(1 << s.len(), rng)).collect();
        Ok(Self {
            inputs,
            supports,
            tables,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }
    pub fn outputs(&self) -> usize {
        self.supports.len()
    }
    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }
    pub fn tables(&self) -> &[F2Vector] {
        &self.tables
    }
    pub fn locality(&self) -> usize {
        self.supports.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn table_mut(&mut self, j: usize) -> &mut F2Vector {
        &mut self.tables[j]
    }

    pub fn evaluate(&self, x: &F2Vector) -> Result<F2Vector> {
        if x.len() != self.inputs {
            return Err(shape(format!("input has {} bits, strategy reads {}", x.len(), self.inputs)));
        }
        Ok(F2Vector::from_bits(self.supports.iter().zip(&self.tables).map(|(s, t)| {
            let idx = s.iter().enumerate().fold(0usize, |acc, (k, &i)| acc | usize::from(x.get(i)) << k);
            t.get(idx)
        })))
    }

    fn output_parity_mask(&self, x: u64) -> bool {
        self.supports.iter().zip(&self.tables).fold(false, |acc, (s, t)| {
            let idx = s
                .iter()
                .enumerate()
                .fold(0usize, |a, (k, &i)| a | ((x >> i & 1) as usize) << k);
            acc ^ t.get(idx)
        })
    }
}

/// Which promise problem a local strategy is scored against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalProblem {
    /// Uniform even-parity inputs; output parity must be `|x|/2 mod 2`.
    ParityHalving,
    /// Uniform inputs; output parity must be odd iff `|x| != 0 mod 3`.
    ParityBending,
}

impl LocalProblem {
    fn admits(self, x: u64) -> bool {
        match self {
            LocalProblem::ParityHalving => x.count_ones() % 2 == 0,
            LocalProblem::ParityBending => true,
        }
    }

    fn target(self, weight: usize) -> bool {
        match self {
            LocalProblem::ParityHalving => (weight / 2) % 2 == 1,
            LocalProblem::ParityBending => weight % 3 != 0,
        }
    }

    fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Result<F2Vector> {
        match self {
            LocalProblem::ParityHalving => gen_even_parity_input(n, rng),
            LocalProblem::ParityBending => Ok(F2Vector::random(n, rng)),
        }
    }

    /// Whether output `y` solves the problem on input `x`.
    pub fn verify(self, x: &F2Vector, y: &F2Vector) -> bool {
        match self {
            LocalProblem::ParityHalving => y.parity() == half_weight_parity(x),
            LocalProblem::ParityBending => y.parity() == self.target(x.weight()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Exhaustive,
    MonteCarlo { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuccessEstimate {
    pub value: f64,
    /// Zero for exhaustive evaluation.
    pub stderr: f64,
    pub exact: Option<Exact>,
}

/// Largest input count for exhaustive evaluation.
pub const EXHAUSTIVE_MAX_INPUTS: usize = 22;

/// Exact success fraction over every admissible input.
pub fn exact_local_success(strategy: &LocalStrategy, problem: LocalProblem) -> Result<Exact> {
    let n = strategy.inputs;
    if n > EXHAUSTIVE_MAX_INPUTS {
        return Err(Error::Capacity {
            what: "inputs for exhaustive evaluation",
            got: n,
            limit: EXHAUSTIVE_MAX_INPUTS,
        });
    }
    let (mut wins, mut total) = (0i64, 0i64);
    for x in (0..1u64 << n).filter(|&x| problem.admits(x)) {
        total += 1;
        if strategy.output_parity_mask(x) == problem.target(x.count_ones() as usize) {
            wins += 1;
        }
    }
    if total == 0 {
        return Err(Error::Domain("no admissible inputs".into()));
    }
    Ok(Exact::new(wins, total))
}

pub fn eval_local_strategy<R: Rng + ?Sized>(
    strategy: &LocalStrategy,
    problem: LocalProblem,
    mode: EvalMode,
    rng: &mut R,
) -> Result<SuccessEstimate> {
    match mode {
        EvalMode::Exhaustive => {
            let exact = exact_local_success(strategy, problem)?;
            Ok(SuccessEstimate {
                value: *exact.numer() as f64 / *exact.denom() as f64,
                stderr: 0.0,
                exact: Some(exact),
            })
        }
        EvalMode::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(Error::Argument("Monte Carlo needs at least one sample".into()));
            }
            let mut wins = 0usize;
            for _ in 0..samples {
                let x = problem.sample(strategy.inputs, rng)?;
                if problem.verify(&x, &strategy.evaluate(&x)?) {
                    wins += 1;
                }
            }
            let p = wins as f64 / samples as f64;
            Ok(SuccessEstimate {
                value: p,
                stderr: (p * (1.0 - p) / samples as f64).sqrt(),
                exact: None,
            })
        }
    }
}

/// Random-restart hill climbing over truth tables with fixed random
/// supports, scored exactly. Only a heuristic: the result is the best
/// strategy it happened to find.
pub fn hill_climb<R: Rng + ?Sized>(
    inputs: usize,
    outputs: usize,
    locality: usize,
    problem: LocalProblem,
    restarts: usize,
    steps: usize,
    rng: &mut R,
) -> Result<(LocalStrategy, Exact)> {
    let mut best: Option<(LocalStrategy, Exact)> = None;
    for _ in 0..restarts.max(1) {
        let mut current = LocalStrategy::random(inputs, outputs, locality, rng)?;
        let mut score = exact_local_success(&current, problem)?;
        for _ in 0..steps {
            if outputs == 0 {
                break;
            }
            let j = rng.gen_range(0..outputs);
            let entry = rng.gen_range(0..current.tables[j].len());
            current.table_mut(j).flip(entry);
            let candidate = exact_local_success(&current, problem)?;
            if candidate >= score {
                score = candidate;
            } else {
                current.table_mut(j).flip(entry);
            }
        }
        if best.as_ref().is_none_or(|(_, b)| score > *b) {
            best = Some((current, score));
        }
    }
    Ok(best.expect("at least one restart"))
}
