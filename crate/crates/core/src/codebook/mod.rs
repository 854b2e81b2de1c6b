//! Random code construction, persistence and codebook validators.
//!
//! A codebook holds, for every message `m`, a base codeword `u(m)` drawn
//! uniformly from `{0,1}^n` and a partition of `[1..n]` into `K` noise-level
//! classes `S(m,1)..S(m,K)`. Position `i` of message `m` belongs to exactly
//! one class; the stochastic encoder flips it with probability `q_k`.

mod file;
mod params;
mod validate;

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::word::{Bit, IndexSet, Word, WordError};

pub use file::{load_codebook, read_codebook, save_codebook, write_codebook};
pub use params::{
    derive_params, full_message_count, level_count, CodeParams, DEFAULT_MAX_MESSAGES,
};
pub(crate) use params::{ceil_tol, floor_tol};
pub use validate::{
    coherence_stat, validate_coherence, validate_list_decodability, CoherenceMode,
    CoherenceReport, CoherenceValidation, ListDecodability, ListDecodabilityWitness,
    DEFAULT_MAX_CHECKS,
};

#[derive(Debug, Error)]
pub enum CodebookError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("blocklength {0} is below the minimum of 16")]
    BlocklengthTooShort(usize),
    #[error("noise level q_{k} = {q} is not below 1/2; n is too small for K levels")]
    NoiseLevelTooLarge { k: usize, q: f64 },
    #[error("rate admits only {0} message(s)")]
    TooFewMessages(usize),
    #[error("message {message}: {reason}")]
    InvalidMessage { message: usize, reason: String },
    #[error("{checks} checks exceed the brute-force cap of {cap}")]
    CapExceeded { checks: u128, cap: u64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A message index in `1..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(usize);

impl Message {
    /// Wraps a 1-based message id.
    ///
    /// # Panics
    /// If `id` is zero.
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "message ids are 1-based");
        Message(id)
    }

    pub fn from_index(index: usize) -> Self {
        Message(index + 1)
    }

    pub fn id(self) -> usize {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    params: CodeParams,
    seed: u64,
    // Row-major, message by message.
    bits: Vec<Bit>,
    // 0-based noise-level class of each position, same layout as `bits`.
    classes: Vec<u8>,
}

/// Draws a codebook. The result depends only on `(params, seed)`.
///
/// Base codewords come from one stream; each message's partition comes from
/// its own sub-stream, so partitions do not shift when `M` changes.
pub fn generate_codebook(params: CodeParams, seed: u64) -> Codebook {
    let n = params.n();
    let m_count = params.num_messages();
    let k = params.levels() as u8;

    let mut word_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = Vec::with_capacity(n * m_count);
    for _ in 0..m_count {
        let mut left = n;
        while left > 0 {
            let chunk = left.min(64);
            let v = word_rng.next_u64();
            bits.extend((0..chunk).map(|i| Bit::from_bool(v >> i & 1 == 1)));
            left -= chunk;
        }
    }

    let mut classes = Vec::with_capacity(n * m_count);
    for m in 0..m_count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(m as u64 + 1);
        classes.extend((0..n).map(|_| rng.gen_range(0..k)));
    }

    Codebook { params, seed, bits, classes }
}

impl Codebook {
    /// Assembles a codebook from explicit words and partitions, checking that
    /// every word has length `n` and every partition covers `[1..n]` exactly once.
    pub fn from_parts(
        params: CodeParams,
        seed: u64,
        words: Vec<Word>,
        partitions: Vec<Vec<IndexSet>>,
    ) -> Result<Self, CodebookError> {
        let n = params.n();
        let k = params.levels();
        let invalid = |message: usize, reason: String| CodebookError::InvalidMessage { message, reason };
        if words.len() != params.num_messages() || partitions.len() != words.len() {
            return Err(CodebookError::InvalidParams(format!(
                "expected {} messages, got {} words and {} partitions",
                params.num_messages(),
                words.len(),
                partitions.len()
            )));
        }
        let mut bits = Vec::with_capacity(n * words.len());
        let mut classes = Vec::with_capacity(n * words.len());
        for (idx, (word, sets)) in words.iter().zip(&partitions).enumerate() {
            let id = idx + 1;
            if word.len() != n {
                return Err(invalid(id, format!("word length {} != n = {n}", word.len())));
            }
            if sets.len() != k {
                return Err(invalid(id, format!("{} partition sets, expected K = {k}", sets.len())));
            }
            let mut row = vec![u8::MAX; n];
            for (class, set) in sets.iter().enumerate() {
                for pos in set.iter() {
                    if pos > n {
                        return Err(invalid(id, format!("index {pos} outside [1..{n}]")));
                    }
                    if row[pos - 1] != u8::MAX {
                        return Err(invalid(id, format!("index {pos} appears in two partition sets")));
                    }
                    row[pos - 1] = class as u8;
                }
            }
            if let Some(missing) = row.iter().position(|&c| c == u8::MAX) {
                return Err(invalid(id, format!("index {} is in no partition set", missing + 1)));
            }
            bits.extend_from_slice(word.bits());
            classes.extend(row);
        }
        Ok(Codebook { params, seed, bits, classes })
    }

    /// A codebook whose only content is its base codewords: every position of
    /// every message is placed in noise class 1.
    pub fn from_words(params: CodeParams, words: Vec<Word>) -> Result<Self, CodebookError> {
        let n = params.n();
        let k = params.levels();
        let partitions = (0..words.len())
            .map(|_| {
                let mut sets = vec![IndexSet::full(n)];
                sets.resize(k, IndexSet::empty());
                sets
            })
            .collect();
        Self::from_parts(params, 0, words, partitions)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn num_messages(&self) -> usize {
        self.params.num_messages()
    }

    pub fn levels(&self) -> usize {
        self.params.levels()
    }

    pub fn messages(&self) -> impl Iterator<Item = Message> {
        (1..=self.num_messages()).map(Message::new)
    }

    pub fn contains(&self, m: Message) -> bool {
        m.id() <= self.num_messages()
    }

    /// Base codeword `u(m)`.
    pub fn codeword(&self, m: Message) -> &[Bit] {
        let n = self.n();
        &self.bits[m.index() * n..(m.index() + 1) * n]
    }

    pub fn word(&self, m: Message) -> Word {
        Word::new(self.codeword(m).to_vec())
    }

    /// 0-based noise class of each position of `m`.
    pub fn classes(&self, m: Message) -> &[u8] {
        let n = self.n();
        &self.classes[m.index() * n..(m.index() + 1) * n]
    }

    /// 1-based noise level `k` with `pos ∈ S(m,k)`.
    pub fn level_at(&self, m: Message, pos: usize) -> usize {
        self.classes(m)[pos - 1] as usize + 1
    }

    /// `S(m,k)` for 1-based `k`.
    pub fn partition(&self, m: Message, k: usize) -> IndexSet {
        let class = (k - 1) as u8;
        let indices = self
            .classes(m)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(i, _)| i + 1)
            .collect();
        IndexSet::new(indices).expect("positions are increasing")
    }

    pub fn partitions(&self, m: Message) -> Vec<IndexSet> {
        (1..=self.levels()).map(|k| self.partition(m, k)).collect()
    }
}
