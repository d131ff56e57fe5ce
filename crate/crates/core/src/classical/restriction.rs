use rand::Rng;

use super::LocalStrategy;
use crate::error::{shape, Error, Result};
use crate::f2lin::F2Vector;

/// Partial assignment: `None` is a free coordinate (a star).
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub values: Vec<Option<bool>>,
    pub p: f64,
}

impl Restriction {
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn stars(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Fills the stars from `free`, in order.
    pub fn complete(&self, free: &F2Vector) -> Result<F2Vector> {
        if free.len() != self.stars() {
            return Err(shape(format!("{} free bits for {} stars", free.len(), self.stars())));
        }
        let mut it = free.iter();
        Ok(F2Vector::from_bits(
            self.values.iter().map(|v| v.unwrap_or_else(|| it.next().expect("counted"))),
        ))
    }
}

/// Each coordinate is a star with probability `p`, else a uniform bit.
pub fn sample_restriction<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Restriction> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!("star probability {p} not in [0, 1]")));
    }
    let values = (0..n)
        .map(|_| if rng.gen_bool(p) { None } else { Some(rng.gen()) })
        .collect();
    Ok(Restriction { values, p })
}

/// Partially evaluates every table on the fixed coordinates. Inputs keep
/// their indices; supports only shrink.
pub fn apply_restriction(strategy: &LocalStrategy, rho: &Restriction) -> Result<LocalStrategy> {
    if rho.len() != strategy.inputs() {
        return Err(shape(format!(
            "restriction on {} inputs, strategy reads {}",
            rho.len(),
            strategy.inputs()
        )));
    }
    let mut supports = Vec::with_capacity(strategy.outputs());
    let mut tables = Vec::with_capacity(strategy.outputs());
    for (s, t) in strategy.supports().iter().zip(strategy.tables()) {
        let free: Vec<(usize, usize)> = s
            .iter()
            .enumerate()
            .filter(|(_, &i)| rho.values[i].is_none())
            .map(|(k, &i)| (k, i))
            .collect();
        let base = s.iter().enumerate().fold(0usize, |acc, (k, &i)| {
            acc | usize::from(rho.values[i].unwrap_or(false)) << k
        });
        let table = F2Vector::from_bits((0..1usize << free.len()).map(|r| {
            let idx = free
                .iter()
                .enumerate()
                .fold(base, |acc, (t, &(k, _))| acc | (r >> t & 1) << k);
            t.get(idx)
        }));
        supports.push(free.into_iter().map(|(_, i)| i).collect());
        tables.push(table);
    }
    LocalStrategy::new(strategy.inputs(), supports, tables)
}
