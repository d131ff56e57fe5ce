use std::fmt;

use rand::Rng;

use super::F2Vector;
use crate::error::{shape, Result};

/// Dense row-major matrix over GF(2); each row is a bit-packed [`F2Vector`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: Vec<F2Vector>,
    cols: usize,
}

/// Reduced row echelon form together with its pivot columns.
struct Echelon {
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![F2Vector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn from_rows(rows: Vec<F2Vector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(shape(format!("row of length {} in a {cols}-column matrix", bad.len())));
        }
        Ok(Self { rows, cols })
    }

    /// Rows given as `'0'`/`'1'` strings.
    pub fn from_bit_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| F2Vector::from_bit_str(r))
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, F2Vector::len);
        Self::from_rows(parsed, cols)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self {
            rows: (0..rows).map(|_| F2Vector::random(cols, rng)).collect(),
            cols,
        }
    }

    /// Uniformly random symmetric matrix (diagonal included).
    pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if rng.gen::<bool>() {
                    m.set(i, j, true);
                    m.set(j, i, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[F2Vector] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn column(&self, j: usize) -> F2Vector {
        F2Vector::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones_indices() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols && *self == self.transpose()
    }

    pub fn diagonal(&self) -> F2Vector {
        F2Vector::from_bits((0..self.rows().min(self.cols)).map(|i| self.get(i, i)))
    }

    pub fn mul_vec(&self, x: &F2Vector) -> Result<F2Vector> {
        if x.len() != self.cols {
            return Err(shape(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows(),
                self.cols,
                x.len()
            )));
        }
        Ok(F2Vector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows() {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols,
                other.rows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = F2Vector::zeros(other.cols);
                for k in r.ones_indices() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(Self { rows, cols: other.cols })
    }

    /// Block-diagonal composition.
    pub fn block_diagonal(blocks: &[&Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows() {
                for j in b.rows[i].ones_indices() {
                    out.set(r0 + i, c0 + j, true);
                }
            }
            r0 += b.rows();
            c0 += b.cols();
        }
        out
    }

    /// Gauss-Jordan elimination. Columns are scanned left to right; the pivot
    /// for a column is the first remaining row with that bit set.
    fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of `{x : A x = 0}`, one vector per free column (ascending),
    /// each with its free coordinate set and other free coordinates zero.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = F2Vector::unit(self.cols, free);
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `A x = b`, free variables set to zero; `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>> {
        if b.len() != self.rows() {
            return Err(shape(format!(
                "right-hand side of length {} for a matrix with {} rows",
                b.len(),
                self.rows()
            )));
        }
        // Augment with b as the last column.
        let augmented = Self {
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.concat(&F2Vector::from_bits([b.get(i)])))
                .collect(),
            cols: self.cols + 1,
        };
        let ech = augmented.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_vectors(n: usize) -> impl Iterator<Item = F2Vector> {
        (0..1u64 << n).map(move |m| F2Vector::from_u64(m, n))
    }

    #[test]
    fn solve_identity() {
        let a = F2Matrix::identity(2);
        let b = F2Vector::from_bit_str("10").unwrap();
        assert_eq!(a.solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn solve_inconsistent() {
        let a = F2Matrix::from_bit_rows(&["11", "11"]).unwrap();
        let b = F2Vector::from_bit_str("10").unwrap();
        assert_eq!(a.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_shape_error() {
        let a = F2Matrix::identity(3);
        assert!(a.solve(&F2Vector::zeros(2)).is_err());
        assert!(a.mul_vec(&F2Vector::zeros(2)).is_err());
    }

    #[test]
    fn solve_random_systems_multiply_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        for _ in 0..200 {
            let a = F2Matrix::random(16, 16, &mut rng);
            let b = F2Vector::random(16, &mut rng);
            if let Some(x) = a.solve(&b).unwrap() {
                assert_eq!(a.mul_vec(&x).unwrap(), b);
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(F2Matrix::identity(5).kernel_basis().is_empty());
        assert_eq!(F2Matrix::zeros(3, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_of_swap_matrix_is_trivial() {
        let a = F2Matrix::from_bit_rows(&["01", "10"]).unwrap();
        // Enumerate all four vectors: only 0 maps to 0.
        let kernel: Vec<_> = all_vectors(2).filter(|v| a.mul_vec(v).unwrap().is_zero()).collect();
        assert_eq!(kernel, vec![F2Vector::zeros(2)]);
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn block_diagonal_layout() {
        let a = F2Matrix::from_bit_rows(&["11", "01"]).unwrap();
        let b = F2Matrix::identity(1);
        let d = F2Matrix::block_diagonal(&[&a, &b]);
        assert_eq!(d, F2Matrix::from_bit_rows(&["110", "010", "001"]).unwrap());
    }

    fn span_contains(basis: &[F2Vector], x: &F2Vector) -> bool {
        let n = x.len();
        (0..1u64 << basis.len()).any(|m| {
            let mut acc = F2Vector::zeros(n);
            for (i, b) in basis.iter().enumerate() {
                if m >> i & 1 == 1 {
                    acc.xor_assign(b);
                }
            }
            acc == *x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kernel_basis_spans_exactly_the_kernel(rows in 1usize..8, cols in 1usize..=12, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = F2Matrix::random(rows, cols, &mut rng);
            let basis = a.kernel_basis();
            prop_assert_eq!(basis.len(), cols - a.rank());
            prop_assert!(a.rank() <= rows.min(cols));
            for x in all_vectors(cols) {
                let in_kernel = a.mul_vec(&x).unwrap().is_zero();
                prop_assert_eq!(in_kernel, span_contains(&basis, &x));
            }
        }

        #[test]
        fn solve_agrees_with_enumeration(rows in 1usize..8, cols in 1usize..=10, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = F2Matrix::random(rows, cols, &mut rng);
            let b = F2Vector::random(rows, &mut rng);
            let brute = all_vectors(cols).any(|x| a.mul_vec(&x).unwrap() == b);
            let solved = a.solve(&b).unwrap();
            prop_assert_eq!(brute, solved.is_some());
            if let Some(x) = solved {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
        }

        #[test]
        fn multiplication_is_associative(n in 1usize..10, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = F2Matrix::random(n, n + 1, &mut rng);
            let b = F2Matrix::random(n + 1, n, &mut rng);
            let c = F2Matrix::random(n, 3, &mut rng);
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
