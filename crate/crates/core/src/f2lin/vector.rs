use std::fmt;

use rand::Rng;

use crate::error::{shape, Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2), packed into `u64` words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64` (least-significant
/// first). Bits beyond `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    words: Vec<u64>,
    len: usize,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            words: vec![u64::MAX; word_count(len)],
            len,
        };
        v.mask_tail();
        v
    }

    /// Standard basis vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from the low `len` bits of `mask` (`len <= 64`).
    pub fn from_u64(mask: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.mask_tail();
        }
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self { words, len }
    }

    /// Parses a string of `'0'`/`'1'` characters, index 0 first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Format(format!("unexpected bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            words: (0..word_count(len)).map(|_| rng.gen()).collect(),
            len,
        };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The bits as a single word; panics if `len > 64`.
    pub fn as_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "vector of length {} does not fit a word", self.len);
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u32, |acc, w| acc ^ w.count_ones()) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2). Panics on length mismatch.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot product of mismatched lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Number of positions where both vectors are 1.
    pub fn and_weight(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of mismatched lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "and of mismatched lengths");
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.mask_tail();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, w)| wi * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::from_bits(self.iter().chain(other.iter()))
    }

    /// Copy of bits `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len, "slice {start}..{end} out of range");
        Self::from_bits((start..end).map(|i| self.get(i)))
    }

    /// Splits into consecutive pieces of the given sizes.
    pub fn split(&self, sizes: &[usize]) -> Result<Vec<Self>> {
        let total: usize = sizes.iter().sum();
        if total != self.len {
            return Err(shape(format!(
                "cannot split vector of length {} into parts totalling {total}",
                self.len
            )));
        }
        let mut start = 0;
        Ok(sizes
            .iter()
            .map(|&s| {
                let part = self.slice(start, start + s);
                start += s;
                part
            })
            .collect())
    }

    /// Hex encoding: character `k` holds bits `4k..4k+3`, bit `4k` being the
    /// nibble's least-significant bit.
    pub fn to_hex(&self) -> String {
        (0..self.len.div_ceil(4))
            .map(|k| {
                let nib = (0..4)
                    .filter(|&t| 4 * k + t < self.len && self.get(4 * k + t))
                    .fold(0u32, |acc, t| acc | (1 << t));
                char::from_digit(nib, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        if s.len() != len.div_ceil(4) {
            return Err(Error::Format(format!(
                "hex string of {} chars cannot hold exactly {len} bits",
                s.len()
            )));
        }
        let mut v = Self::zeros(len);
        for (k, c) in s.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Format(format!("invalid hex digit {c:?}")))?;
            for t in 0..4 {
                if nib >> t & 1 == 1 {
                    if 4 * k + t >= len {
                        return Err(Error::Format("hex string has bits set past the length".into()));
                    }
                    v.set(4 * k + t, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weight_and_parity_match_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let len = rng.gen_range(0..200);
            let v = F2Vector::random(len, &mut rng);
            let naive = (0..len).filter(|&i| v.get(i)).count();
            assert_eq!(v.weight(), naive);
            assert_eq!(v.parity(), naive % 2 == 1);
        }
    }

    #[test]
    fn hex_round_trip_and_layout() {
        let v = F2Vector::from_bit_str("10000001").unwrap();
        assert_eq!(v.to_hex(), "18");
        let w = F2Vector::from_bit_str("11001").unwrap();
        assert_eq!(w.to_hex(), "31");
        assert_eq!(F2Vector::from_hex("31", 5).unwrap(), w);
        assert!(F2Vector::from_hex("f1", 5).is_ok());
        assert!(F2Vector::from_hex("32", 5).is_err());
        assert!(F2Vector::from_hex("3", 5).is_err());
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = F2Vector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.complement().weight(), 0);
        assert_eq!(F2Vector::zeros(3).complement().as_u64(), 0b111);
    }

    #[test]
    fn split_and_concat() {
        let v = F2Vector::from_bit_str("1101001").unwrap();
        let parts = v.split(&[3, 0, 4]).unwrap();
        assert_eq!(parts[0].to_string(), "110");
        assert!(parts[1].is_empty());
        assert_eq!(parts[0].concat(&parts[2]), v);
        assert!(v.split(&[3]).is_err());
    }

    #[test]
    fn ones_indices_cross_words() {
        let mut v = F2Vector::zeros(130);
        for i in [0, 63, 64, 129] {
            v.set(i, true);
        }
        assert_eq!(v.ones_indices().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
    }
}
