//! Fixed-length packed bitstrings with 1-based public indexing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

const WORD: usize = 64;

/// A genome of `n >= 1` bits. Position `i` (1-based) lives in word `(i-1)/64`
/// at bit `(i-1)%64`, least significant first. Bits past `n` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstring {
    len: usize,
    words: Vec<u64>,
}

impl Bitstring {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "bitstring length must be at least 1");
        Bitstring {
            len: n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut x = Self::zeros(n);
        x.words.iter_mut().for_each(|w| *w = !0);
        x.clear_tail();
        x
    }

    pub fn random(n: usize, rng: &mut RandomSource) -> Self {
        let mut x = Self::zeros(n);
        for w in x.words.iter_mut() {
            *w = rng.next_u64();
        }
        x.clear_tail();
        x
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut x = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                x.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        x
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 1-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "bit index {i} out of 1..={}", self.len);
        let k = i - 1;
        self.words[k / WORD] >> (k % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.len, "bit index {i} out of 1..={}", self.len);
        let k = i - 1;
        if value {
            self.words[k / WORD] |= 1 << (k % WORD);
        } else {
            self.words[k / WORD] &= !(1 << (k % WORD));
        }
    }

    /// Flips the bit at 0-based offset `k`.
    #[inline]
    pub(crate) fn flip_offset(&mut self, k: usize) {
        self.words[k / WORD] ^= 1 << (k % WORD);
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.len, "bit index {i} out of 1..={}", self.len);
        self.flip_offset(i - 1);
    }

    pub fn complement(&self) -> Self {
        let mut x = self.clone();
        x.invert();
        x
    }

    /// Flips every bit in place.
    pub fn invert(&mut self) {
        self.words.iter_mut().for_each(|w| *w = !*w);
        self.clear_tail();
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of 1-bits in the inclusive 1-based range `[from, to]`.
    /// Returns 0 for an empty range (`from > to`).
    pub fn count_ones_in(&self, from: usize, to: usize) -> usize {
        if from > to {
            return 0;
        }
        assert!(from >= 1 && to <= self.len, "range [{from}, {to}] out of 1..={}", self.len);
        let (lo, hi) = (from - 1, to); // half-open offsets
        let (wl, wh) = (lo / WORD, (hi - 1) / WORD);
        let mask_lo = !0u64 << (lo % WORD);
        let mask_hi = if hi % WORD == 0 { !0 } else { (1u64 << (hi % WORD)) - 1 };
        if wl == wh {
            return (self.words[wl] & mask_lo & mask_hi).count_ones() as usize;
        }
        let mut total = (self.words[wl] & mask_lo).count_ones() as usize;
        for w in &self.words[wl + 1..wh] {
            total += w.count_ones() as usize;
        }
        total + (self.words[wh] & mask_hi).count_ones() as usize
    }

    /// Length of the all-ones prefix.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for w in &self.words {
            let t = w.trailing_ones() as usize;
            total += t;
            if t < WORD {
                break;
            }
        }
        total.min(self.len)
    }

    /// Fraction of 1-bits, `‖x‖`.
    pub fn fraction_ones(&self) -> f64 {
        self.count_ones() as f64 / self.len as f64
    }

    pub fn hamming_distance(&self, other: &Bitstring) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    /// Parses `'0'`/`'1'` characters; `_` and whitespace are ignored as separators.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' | ' ' => {}
                other => return Err(Error::domain(format!("invalid bit character {other:?}"))),
            }
        }
        if bits.is_empty() {
            return Err(Error::domain("bitstring must have at least one bit"));
        }
        Ok(Bitstring::from_bits(&bits))
    }
}

impl Serialize for Bitstring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
