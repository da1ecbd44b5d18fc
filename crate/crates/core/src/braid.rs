//! Braid words on `n` strands.
//!
//! A stirring protocol's isotopy class is recorded as a word in the Artin
//! generators. Letters act left to right: the first letter is the first
//! stirrer move of the period.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sense of a half-twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// One generator `σ_index^sign`, with `index` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        Letter { index, sign }
    }

    pub fn inverse(self) -> Letter {
        Letter::new(self.index, self.sign.flip())
    }

    /// Signed integer form used by the text format (`-2` is `σ₂⁻¹`).
    pub fn to_signed(self) -> i64 {
        self.sign.as_i64() * self.index as i64
    }

    pub fn from_signed(v: i64) -> Option<Letter> {
        match v {
            0 => None,
            v if v > 0 => Some(Letter::new(v as usize, Sign::Pos)),
            v => Some(Letter::new(v.unsigned_abs() as usize, Sign::Neg)),
        }
    }
}

/// A braid word on `n ≥ 2` strands. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPunctures { required: 2, got: n });
        }
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= n) {
            return Err(Error::GeneratorOutOfRange {
                index: l.index,
                strands: n,
            });
        }
        Ok(BraidWord { n, letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        BraidWord::new(n, Vec::new())
    }

    /// Builds a word from signed generator indices, e.g. `[1, -2]`.
    pub fn from_signed(n: usize, values: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(values.len());
        for (position, &v) in values.iter().enumerate() {
            let letter = Letter::from_signed(v).ok_or_else(|| Error::BraidParse {
                position,
                token: v.to_string(),
                reason: "zero is not a generator".into(),
            })?;
            letters.push(letter);
        }
        BraidWord::new(n, letters)
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_signed()).collect()
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.n != other.n {
            return Err(Error::StrandMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self` repeated `m` times.
    pub fn pow(&self, m: usize) -> BraidWord {
        let mut letters = Vec::with_capacity(self.letters.len() * m);
        for _ in 0..m {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord { n: self.n, letters }
    }

    /// Cancels adjacent `σ_i^s σ_i^{-s}` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            n: self.n,
            letters: out,
        }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.as_i64()).sum()
    }

    /// Net permutation of strand positions, earlier letters applied first.
    pub fn strand_permutation(&self) -> Permutation {
        let mut image: Vec<usize> = (1..=self.n).collect();
        for l in &self.letters {
            let (a, b) = (l.index, l.index + 1);
            for p in image.iter_mut() {
                if *p == a {
                    *p = b;
                } else if *p == b {
                    *p = a;
                }
            }
        }
        Permutation { image }
    }
}

/// Parses the whitespace-separated signed-integer braid format.
pub fn parse_braid(text: &str, n: usize) -> Result<BraidWord> {
    if n < 2 {
        return Err(Error::TooFewPunctures { required: 2, got: n });
    }
    let mut letters = Vec::new();
    for (position, token) in text.split_ascii_whitespace().enumerate() {
        let err = |reason: String| Error::BraidParse {
            position,
            token: token.to_string(),
            reason,
        };
        let v: i64 = token
            .parse()
            .map_err(|_| err("not a signed decimal integer".into()))?;
        let letter = Letter::from_signed(v).ok_or_else(|| err("zero is not a generator".into()))?;
        if letter.index > n - 1 {
            return Err(err(format!("|{v}| exceeds n-1 = {}", n - 1)));
        }
        letters.push(letter);
    }
    BraidWord::new(n, letters)
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.to_signed())?;
        }
        Ok(())
    }
}

/// Bijection on `{1..n}`: the strand starting at position `j` ends at `image[j-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{image:?} is not a permutation of 1..{n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Where position `j` (1-based) goes.
    pub fn apply(&self, j: usize) -> usize {
        self.image[j - 1]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::StrandMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            image: self.image.iter().map(|&p| other.apply(p)).collect(),
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
