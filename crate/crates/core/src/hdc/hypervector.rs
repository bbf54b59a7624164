use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};

/// Fixed-dimension binary hypervector, packed little-endian into u64 words.
/// Bits past `dim` in the last word are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    dim: usize,
    words: Vec<u64>,
}

fn words_for(dim: usize) -> usize {
    dim.div_ceil(64)
}

impl Hypervector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            words: vec![0; words_for(dim)],
        }
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut v = Self {
            dim,
            words: (0..words_for(dim)).map(|_| rng.random::<u64>()).collect(),
        };
        v.mask_tail();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim).map(move |i| self.get(i))
    }

    fn mask_tail(&mut self) {
        let rem = self.dim % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Circular rotation: bit i moves to position (i + k) mod dim.
    pub fn rotate(&self, k: usize) -> Self {
        if self.dim == 0 {
            return self.clone();
        }
        let k = k % self.dim;
        if k == 0 {
            return self.clone();
        }
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            if self.get(i) {
                out.set((i + k) % self.dim, true);
            }
        }
        out
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn not(&self) -> Self {
        let mut v = Self {
            dim: self.dim,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.mask_tail();
        v
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Popcount Hamming distance.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        if self.dim != other.dim {
            return Err(Error::Usage(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Matching bits of `self` and `other` in `start..end`.
    pub fn matches_in(&self, other: &Self, start: usize, end: usize) -> usize {
        (start..end).filter(|&i| self.get(i) == other.get(i)).count()
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(16 * self.words.len());
        for w in &self.words {
            let _ = write!(s, "{w:016x}");
        }
        s
    }

    pub fn from_hex(dim: usize, hex: &str) -> Result<Self> {
        let n = words_for(dim);
        if hex.len() != 16 * n {
            return Err(Error::Model(format!(
                "expected {} hex digits for {dim} bits, got {}",
                16 * n,
                hex.len()
            )));
        }
        let words = (0..n)
            .map(|k| {
                u64::from_str_radix(&hex[16 * k..16 * (k + 1)], 16)
                    .map_err(|e| Error::Model(format!("bad hex word {k}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let v = Self { dim, words };
        let mut masked = v.clone();
        masked.mask_tail();
        if masked != v {
            return Err(Error::Model("bits set beyond the vector dimension".into()));
        }
        Ok(v)
    }
}

/// Per-bit vote counter for majority bundling.
#[derive(Debug, Clone)]
pub struct Bundler {
    counts: Vec<u32>,
    total: u32,
}

impl Bundler {
    pub fn new(dim: usize) -> Self {
        Self {
            counts: vec![0; dim],
            total: 0,
        }
    }

    pub fn add(&mut self, v: &Hypervector) {
        debug_assert_eq!(v.dim(), self.counts.len());
        for (w_idx, &word) in v.words().iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                self.counts[w_idx * 64 + b] += 1;
                w &= w - 1;
            }
        }
        self.total += 1;
    }

    pub fn len(&self) -> u32 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Bitwise majority; exact ties take the corresponding bit of `tie_break`.
    pub fn majority(&self, tie_break: &Hypervector) -> Hypervector {
        let mut out = Hypervector::zeros(self.counts.len());
        for (i, &c) in self.counts.iter().enumerate() {
            let twice = 2 * c;
            let bit = match twice.cmp(&self.total) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => tie_break.get(i),
            };
            if bit {
                out.set(i, true);
            }
        }
        out
    }
}
