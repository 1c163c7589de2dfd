//! Shared conventions: binary words, the length-lexicographic numbering of
//! words, Cantor pairing and the tripling built on top of it.
//!
//! Word `x` of length `m` is identified with the integer `2^m - 1 + value(x)`,
//! so `ε, 0, 1, 00, 01, ...` are `0, 1, 2, 3, 4, ...`. Indices and pair codes
//! are arbitrary precision; `u64` shortcuts are provided where callers know
//! their values are small.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ModelError;

/// A finite binary string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Word(bits)
    }

    /// `0^len`.
    pub fn zeros(len: usize) -> Self {
        Word(vec![false; len])
    }

    /// The word of length `len` whose bits spell `value` (most significant first).
    pub fn from_value(len: usize, value: u64) -> Self {
        debug_assert!(len >= 64 || value >> len == 0);
        Word(
            (0..len)
                .map(|i| {
                    let shift = len - 1 - i;
                    shift < 64 && (value >> shift) & 1 == 1
                })
                .collect(),
        )
    }

    /// Shortcut for `index_to_word` on small indices.
    pub fn from_index(index: u64) -> Self {
        let plus = index as u128 + 1;
        let len = 127 - plus.leading_zeros() as usize;
        let value = (plus - (1u128 << len)) as u64;
        Word::from_value(len, value)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Word(bits)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Binary value of the word, if it fits in 64 bits.
    pub fn value_u64(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    /// Shortcut for `word_to_index` when the word is shorter than 64 bits.
    pub fn index_u64(&self) -> Option<u64> {
        if self.0.len() >= 64 {
            return None;
        }
        Some((1u64 << self.0.len()) - 1 + self.value_u64()?)
    }

    /// All words of length `len` in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "cannot enumerate words of length {len}");
        (0..1u64 << len).map(move |v| Word::from_value(len, v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ModelError::BadWordChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Length-lexicographic order: shorter words first, then by value.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The natural number identified with a binary word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WordIndex(pub BigUint);

impl WordIndex {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for WordIndex {
    fn from(v: u64) -> Self {
        WordIndex(BigUint::from(v))
    }
}

impl fmt::Display for WordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn word_to_index(x: &Word) -> WordIndex {
    let mut value = BigUint::zero();
    for &b in x.bits() {
        value <<= 1u32;
        if b {
            value += 1u32;
        }
    }
    let base = (BigUint::one() << x.len()) - 1u32;
    WordIndex(base + value)
}

pub fn index_to_word(n: &WordIndex) -> Word {
    let plus = &n.0 + 1u32;
    let len = (plus.bits() - 1) as usize;
    let value = plus - (BigUint::one() << len);
    Word((0..len).map(|i| value.bit((len - 1 - i) as u64)).collect())
}

/// Code of an ordered pair of naturals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairCode(pub BigUint);

/// Code of an ordered triple, `⟨a,b,c⟩ = ⟨a,⟨b,c⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleCode(pub BigUint);

impl PairCode {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl TripleCode {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: impl Into<BigUint>, b: impl Into<BigUint>) -> PairCode {
    let (a, b) = (a.into(), b.into());
    let w = &a + &b;
    PairCode((&w * (&w + 1u32)) / 2u32 + b)
}

pub fn unpair(p: &PairCode) -> (BigUint, BigUint) {
    let z = &p.0;
    let w = (((z * 8u32) + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

/// `unpair` for codes known to fit a machine word.
pub fn unpair_u64(p: u64) -> (u64, u64) {
    let (a, b) = unpair(&PairCode(BigUint::from(p)));
    (a.to_u64().unwrap(), b.to_u64().unwrap())
}

pub fn pair_u64(a: u64, b: u64) -> BigUint {
    pair(a, b).0
}

pub fn triple(a: impl Into<BigUint>, b: impl Into<BigUint>, c: impl Into<BigUint>) -> TripleCode {
    TripleCode(pair(a, pair(b, c).0).0)
}

/// The `i`-th projection (1-based) of a triple code.
pub fn proj3(i: u8, t: &TripleCode) -> Result<BigUint, ModelError> {
    let (a, rest) = unpair(&PairCode(t.0.clone()));
    match i {
        1 => Ok(a),
        2 | 3 => {
            let (b, c) = unpair(&PairCode(rest));
            Ok(if i == 2 { b } else { c })
        }
        _ => Err(ModelError::ProjectionOutOfRange(i)),
    }
}

/// All three projections of a small triple code.
pub fn untriple_u64(t: u64) -> (u64, u64, u64) {
    let (a, rest) = unpair_u64(t);
    let (b, c) = unpair_u64(rest);
    (a, b, c)
}
