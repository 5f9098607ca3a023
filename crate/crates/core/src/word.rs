use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::CounterStream;

/// How an infinite digit sequence continues past its explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tail {
    /// `(0, 0, …)`.
    #[default]
    AllZero,
    /// Digit at absolute position `p` is word `p` of stream 0 of this seed.
    Random(u64),
}

/// An infinite word over `{0, …, b−1}`: a finite prefix plus a tail policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitWord {
    digits: Vec<u32>,
    tail: Tail,
    // absolute position of digits[0] within the random tail stream
    offset: u64,
}

impl DigitWord {
    pub fn new(digits: Vec<u32>, tail: Tail, b: u32) -> Result<Self> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= b) {
            return Err(Error::DigitOutOfRange { digit, base: b });
        }
        Ok(Self {
            digits,
            tail,
            offset: 0,
        })
    }

    pub fn zeros() -> Self {
        Self {
            digits: Vec::new(),
            tail: Tail::AllZero,
            offset: 0,
        }
    }

    /// Prefix followed by zeros.
    pub fn finite(digits: &[u32], b: u32) -> Result<Self> {
        Self::new(digits.to_vec(), Tail::AllZero, b)
    }

    /// Fully random word.
    pub fn random(seed: u64) -> Self {
        Self {
            digits: Vec::new(),
            tail: Tail::Random(seed),
            offset: 0,
        }
    }

    /// Parses a string of decimal digits (each character one digit).
    pub fn parse(s: &str, tail: Tail, b: u32) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or(Error::InvalidArgument("word must consist of decimal digits"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits, tail, b)
    }

    pub fn prefix(&self) -> &[u32] {
        &self.digits
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Digit at 0-based position `index` (`i_{index+1}` in one-based notation).
    pub fn digit(&self, index: usize, b: u32) -> u32 {
        if let Some(&d) = self.digits.get(index) {
            return d;
        }
        match self.tail {
            Tail::AllZero => 0,
            Tail::Random(seed) => CounterStream::at(seed, 0, self.offset + index as u64).next_digit(b),
        }
    }

    /// The first `n` digits.
    pub fn take(&self, n: usize, b: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self.digits.iter().copied().take(n).collect();
        if out.len() < n {
            match self.tail {
                Tail::AllZero => out.resize(n, 0),
                Tail::Random(seed) => {
                    let start = self.offset + out.len() as u64;
                    let mut stream = CounterStream::at(seed, 0, start);
                    while out.len() < n {
                        out.push(stream.next_digit(b));
                    }
                }
            }
        }
        out
    }

    /// The left shift `σⁿ`.
    pub fn shift(&self, n: usize) -> Self {
        let cut = n.min(self.digits.len());
        Self {
            digits: self.digits[cut..].to_vec(),
            tail: self.tail,
            offset: self.offset + n as u64,
        }
    }

    /// Replaces the first digits by `prefix`, keeping the rest of the word.
    pub fn with_prefix(&self, prefix: &[u32], b: u32) -> Result<Self> {
        if let Some(&digit) = prefix.iter().find(|&&d| d >= b) {
            return Err(Error::DigitOutOfRange { digit, base: b });
        }
        let mut digits = prefix.to_vec();
        digits.extend_from_slice(&self.shift(prefix.len()).digits);
        Ok(Self {
            digits,
            tail: self.tail,
            offset: self.offset,
        })
    }
}
