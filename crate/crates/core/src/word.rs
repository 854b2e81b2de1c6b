//! Binary words, channel outputs and index sets.
//!
//! Positions are 1-based everywhere in the public API: position `1` is the
//! first transmitted symbol and the leftmost character of the text format.

use std::fmt;
use std::ops::{BitXor, RangeInclusive};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {index} outside [1..{len}]")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("indices must be strictly increasing and >= 1")]
    NotIncreasing,
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(char),
}

/// A binary channel input symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Bit {
    Zero = 0,
    One = 1,
}

impl Bit {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    pub fn is_one(self) -> bool {
        self == Bit::One
    }

    pub fn flip(self) -> Self {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }
}

impl BitXor for Bit {
    type Output = Bit;

    fn bitxor(self, rhs: Bit) -> Bit {
        Bit::from_bool(self != rhs)
    }
}

/// One output symbol of the erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelSymbol {
    Zero,
    One,
    Erased,
}

impl ChannelSymbol {
    pub fn bit(self) -> Option<Bit> {
        match self {
            ChannelSymbol::Zero => Some(Bit::Zero),
            ChannelSymbol::One => Some(Bit::One),
            ChannelSymbol::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == ChannelSymbol::Erased
    }

    pub fn as_char(self) -> char {
        match self {
            ChannelSymbol::Zero => '0',
            ChannelSymbol::One => '1',
            ChannelSymbol::Erased => 'e',
        }
    }
}

impl From<Bit> for ChannelSymbol {
    fn from(b: Bit) -> Self {
        match b {
            Bit::Zero => ChannelSymbol::Zero,
            Bit::One => ChannelSymbol::One,
        }
    }
}

/// A fixed-length binary word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Bit>);

impl Word {
    pub fn new(bits: Vec<Bit>) -> Self {
        Word(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![Bit::Zero; n])
    }

    pub fn ones(n: usize) -> Self {
        Word(vec![Bit::One; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.0
    }

    /// Symbol at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Bit {
        self.0[pos - 1]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| b.is_one()).count()
    }

    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|b| b.flip()).collect())
    }

    pub fn xor(&self, other: &Word) -> Result<Word, WordError> {
        check_len(self.len(), other.len())?;
        Ok(Word(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a ^ b).collect(),
        ))
    }

    pub fn restrict(&self, set: &IndexSet) -> Result<Word, WordError> {
        restrict(&self.0, set)
    }

    /// The received word produced when nothing is erased.
    pub fn to_received(&self) -> ReceivedWord {
        ReceivedWord(self.0.iter().map(|&b| b.into()).collect())
    }
}

impl AsRef<[Bit]> for Word {
    fn as_ref(&self) -> &[Bit] {
        &self.0
    }
}

impl From<Vec<Bit>> for Word {
    fn from(bits: Vec<Bit>) -> Self {
        Word(bits)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Bit::Zero),
                '1' => Ok(Bit::One),
                other => Err(WordError::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{}", b.as_char()))
    }
}

/// Bob's view of a transmission: each position is a bit or an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReceivedWord(Vec<ChannelSymbol>);

impl ReceivedWord {
    pub fn new(symbols: Vec<ChannelSymbol>) -> Self {
        ReceivedWord(symbols)
    }

    pub fn erased(n: usize) -> Self {
        ReceivedWord(vec![ChannelSymbol::Erased; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[ChannelSymbol] {
        &self.0
    }

    pub fn at(&self, pos: usize) -> ChannelSymbol {
        self.0[pos - 1]
    }

    pub fn erasure_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_erased()).count()
    }

    /// 1-based positions that were erased.
    pub fn erased_positions(&self) -> IndexSet {
        IndexSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_erased())
                .map(|(i, _)| i + 1)
                .collect(),
        )
    }

    /// Positions inside `range` (clamped to `[1..n]`) carrying a 0 or 1.
    pub fn unerased_positions(&self, range: RangeInclusive<usize>) -> IndexSet {
        let lo = (*range.start()).max(1);
        let hi = (*range.end()).min(self.len());
        IndexSet((lo..=hi).filter(|&i| !self.0[i - 1].is_erased()).collect())
    }

    /// True when `word` agrees with every unerased position.
    pub fn is_consistent_with(&self, word: &[Bit]) -> bool {
        self.len() == word.len()
            && self
                .0
                .iter()
                .zip(word)
                .all(|(s, &b)| s.bit().is_none_or(|y| y == b))
    }
}

impl FromStr for ReceivedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(ChannelSymbol::Zero),
                '1' => Ok(ChannelSymbol::One),
                'e' => Ok(ChannelSymbol::Erased),
                other => Err(WordError::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ReceivedWord)
    }
}

impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

/// A strictly increasing set of 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self, WordError> {
        let increasing = indices.first().is_none_or(|&i| i >= 1)
            && indices.windows(2).all(|w| w[0] < w[1]);
        if increasing {
            Ok(IndexSet(indices))
        } else {
            Err(WordError::NotIncreasing)
        }
    }

    /// Like [`IndexSet::new`], additionally requiring every index to be `<= n`.
    pub fn within(indices: Vec<usize>, n: usize) -> Result<Self, WordError> {
        let set = Self::new(indices)?;
        match set.0.last() {
            Some(&last) if last > n => Err(WordError::IndexOutOfRange { index: last, len: n }),
            _ => Ok(set),
        }
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn range(range: RangeInclusive<usize>) -> Self {
        IndexSet(range.filter(|&i| i >= 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

fn check_len(left: usize, right: usize) -> Result<(), WordError> {
    if left == right {
        Ok(())
    } else {
        Err(WordError::LengthMismatch { left, right })
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &[Bit], b: &[Bit]) -> Result<usize, WordError> {
    check_len(a.len(), b.len())?;
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Entries of `w` at the positions of `set`, in increasing position order.
pub fn restrict(w: &[Bit], set: &IndexSet) -> Result<Word, WordError> {
    if let Some(max) = set.max() {
        if max > w.len() {
            return Err(WordError::IndexOutOfRange { index: max, len: w.len() });
        }
    }
    Ok(Word(set.iter().map(|i| w[i - 1]).collect()))
}
