//! Bit-packed linear algebra over GF(2) and the small amount of Z4 arithmetic
//! needed by quadratic forms.

mod matrix;
mod vector;

pub use matrix::F2Matrix;
pub use vector::F2Vector;

use rand::Rng;

use crate::error::{Error, Result};

/// A vector with entries in Z4 = {0, 1, 2, 3}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z4Vector(Vec<u8>);

impl Z4Vector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e > 3) {
            return Err(Error::Argument(format!("Z4 entry {bad} is not in 0..=3")));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_range(0..4)).collect())
    }

    /// Lifts a GF(2) vector into {0, 1}.
    pub fn from_f2(v: &F2Vector) -> Self {
        Self(v.iter().map(u8::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Reduction mod 2.
    pub fn low_bits(&self) -> F2Vector {
        F2Vector::from_bits(self.0.iter().map(|&e| e & 1 == 1))
    }

    /// `b^T u mod 4` for binary `u`.
    pub fn dot_binary(&self, u: &F2Vector) -> u8 {
        assert_eq!(self.len(), u.len(), "length mismatch");
        (u.ones_indices().map(|i| self.0[i] as u32).sum::<u32>() % 4) as u8
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut e = self.0.clone();
        e.extend_from_slice(&other.0);
        Self(e)
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self(self.0[start..end].to_vec())
    }
}
