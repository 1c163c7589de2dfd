//! The sparse set `S = {0^(2^n)}` and oracles contained in it.
//!
//! Under the word numbering, `0^(2^n)` sits at position `2^(2^n) - 1`, so
//! the only positions a sparse oracle may set are `1, 3, 15, 255, 65535,
//! 2^32 - 1` within the `u64` range. A prefix of length `t` therefore has
//! at most `⌈log2 log2 t⌉ + 1` free bits.

use num_traits::{One, ToPrimitive};

use crate::error::SparseError;
use crate::machine::{Membership, OracleView, Prefix};
use crate::model::{Word, WordIndex};

/// Position of `0^(2^n)`, if it fits in 64 bits.
pub fn sparse_position(n: u32) -> Option<u64> {
    let len = 1u64.checked_shl(n)?;
    if len >= 64 {
        return None;
    }
    Some((1u64 << len) - 1)
}

pub fn is_sparse_position(p: u64) -> bool {
    let plus = p.wrapping_add(1);
    plus != 0 && plus.is_power_of_two() && plus.trailing_zeros().is_power_of_two()
}

/// All sparse positions strictly below `t`, ascending.
pub fn sparse_positions(t: u64) -> Vec<u64> {
    (0..)
        .map_while(sparse_position)
        .take_while(|&p| p < t)
        .collect()
}

/// A prefix of some member of the sparse class, stored as its length and
/// the (sparse) positions holding a one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparsePrefix {
    len: u64,
    ones: Vec<u64>,
}

impl SparsePrefix {
    pub fn empty() -> Self {
        SparsePrefix::default()
    }

    pub fn new(len: u64, mut ones: Vec<u64>) -> Result<Self, SparseError> {
        ones.sort_unstable();
        ones.dedup();
        if ones.iter().any(|&p| p >= len || !is_sparse_position(p)) {
            return Err(SparseError::NotSparse(format!("len {len}, ones {ones:?}")));
        }
        Ok(SparsePrefix { len, ones })
    }

    pub fn from_word(w: &Word) -> Result<Self, SparseError> {
        let ones = (0..w.len())
            .filter(|&i| w.bit(i))
            .map(|i| i as u64)
            .collect();
        SparsePrefix::new(w.len() as u64, ones).map_err(|_| SparseError::NotSparse(w.to_string()))
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> &[u64] {
        &self.ones
    }

    pub fn bit(&self, i: u64) -> bool {
        self.ones.binary_search(&i).is_ok()
    }

    /// Materialize the bit string; only sensible for short prefixes.
    pub fn to_word(&self) -> Word {
        Word::from_bits((0..self.len).map(|i| self.bit(i)).collect())
    }

    pub fn is_prefix_of(&self, other: &SparsePrefix) -> bool {
        self.len <= other.len
            && other
                .ones
                .iter()
                .take_while(|&&p| p < self.len)
                .eq(self.ones.iter())
    }

    /// This prefix followed by `count` zeros.
    pub fn extend_zeros(&self, count: u64) -> SparsePrefix {
        SparsePrefix {
            len: self.len + count,
            ones: self.ones.clone(),
        }
    }

    pub fn truncate(&self, len: u64) -> SparsePrefix {
        SparsePrefix {
            len: len.min(self.len),
            ones: self.ones.iter().copied().filter(|&p| p < len).collect(),
        }
    }
}

impl Prefix for SparsePrefix {
    fn prefix_len(&self) -> u64 {
        self.len
    }

    fn prefix_bit(&self, i: u64) -> bool {
        self.bit(i)
    }
}

impl std::fmt::Display for SparsePrefix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len <= 64 {
            write!(f, "{}", self.to_word())
        } else {
            write!(f, "len={} ones={:?}", self.len, self.ones)
        }
    }
}

pub fn is_sparse_prefix(sigma: &Word) -> bool {
    (0..sigma.len()).all(|i| !sigma.bit(i) || is_sparse_position(i as u64))
}

/// Every length-`t` sparse prefix extending `base`, in lexicographic order.
pub fn enumerate_sparse_prefixes(
    t: u64,
    base: &SparsePrefix,
) -> Result<Vec<SparsePrefix>, SparseError> {
    if base.len > t {
        return Err(SparseError::BaseTooLong {
            base: base.len,
            target: t,
        });
    }
    let free: Vec<u64> = sparse_positions(t)
        .into_iter()
        .filter(|&p| p >= base.len)
        .collect();
    let k = free.len();
    Ok((0..1u64 << k)
        .map(|choice| {
            let mut ones = base.ones.clone();
            // The earliest free position is the most significant bit of `choice`.
            ones.extend(
                free.iter()
                    .enumerate()
                    .filter(|&(i, _)| (choice >> (k - 1 - i)) & 1 == 1)
                    .map(|(_, &p)| p),
            );
            SparsePrefix { len: t, ones }
        })
        .collect())
}

/// `S_G = {0^(2^n) : n ∈ G}` as a total oracle.
pub struct SparseOracleG<G> {
    members: G,
}

pub fn sparse_oracle_from_g<G: Fn(u64) -> bool>(members: G) -> SparseOracleG<G> {
    SparseOracleG { members }
}

impl<G: Fn(u64) -> bool> SparseOracleG<G> {
    pub fn view(&self) -> OracleView<'_> {
        OracleView::Generated(self)
    }
}

/// The `n` with `index = 2^(2^n) - 1`, if any.
fn sparse_exponent(index: &WordIndex) -> Option<u64> {
    let plus = &index.0 + 1u32;
    let len = plus.bits() - 1;
    if plus != (num_bigint::BigUint::one() << len) || len == 0 || !len.is_power_of_two() {
        return None;
    }
    Some(len.trailing_zeros() as u64)
}

impl<G: Fn(u64) -> bool> Membership for SparseOracleG<G> {
    fn contains(&self, index: &WordIndex) -> bool {
        sparse_exponent(index).is_some_and(|n| (self.members)(n))
    }
}

/// A sparse prefix continued by `S_G` beyond its length: a total member of
/// the sparse class extending the prefix.
pub struct SparseExtension<G> {
    pub base: SparsePrefix,
    pub tail: SparseOracleG<G>,
}

impl<G: Fn(u64) -> bool> Membership for SparseExtension<G> {
    fn contains(&self, index: &WordIndex) -> bool {
        match index.0.to_u64() {
            Some(i) if i < self.base.len() => self.base.bit(i),
            _ => self.tail.contains(index),
        }
    }
}
