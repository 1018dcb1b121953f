use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A classical bitstring individual. Bit 0 is the leftmost, most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryChromosome {
    bits: Vec<bool>,
}

impl BinaryChromosome {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    /// Builds the `len`-bit big-endian encoding of `value`.
    ///
    /// Bits of `value` above position `len` are ignored.
    pub fn from_value(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| {
                let shift = len - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Big-endian unsigned value. Only meaningful for lengths up to 64.
    pub fn value(&self) -> u64 {
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Maps the chromosome onto `[lo, hi]` by natural binary coding:
    /// `lo + (hi - lo) * v / (2^m - 1)`. All zeros decode to `lo`, all ones to `hi`.
    pub fn decode(&self, lo: f64, hi: f64) -> f64 {
        let m = self.bits.len();
        if m == 0 {
            return lo;
        }
        // f64 accumulation keeps the value exact up to 53 bits and degrades gracefully past it.
        let v = self
            .bits
            .iter()
            .fold(0.0f64, |acc, &b| acc * 2.0 + if b { 1.0 } else { 0.0 });
        let max = (m as f64).exp2() - 1.0;
        lo + (hi - lo) * v / max
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl FromStr for BinaryChromosome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Empty("bitstring"));
        }
        let bits = s
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BitParse { ch, pos }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BinaryChromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Decodes with the divisor `2^m - 1`; free-function form of [`BinaryChromosome::decode`].
pub fn decode(c: &BinaryChromosome, lo: f64, hi: f64) -> f64 {
    c.decode(lo, hi)
}
