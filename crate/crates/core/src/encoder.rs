//! Stochastic and deterministic encoders.
//!
//! The stochastic encoder sends `X = u(m) ⊕ Z` where `Z_i ~ Bernoulli(q_k)`
//! for `i ∈ S(m,k)`. Its randomness is private: the decoder never sees `Z`,
//! and neither does the adversary.

use rand::Rng;

use crate::codebook::{Codebook, Message};
use crate::word::{Bit, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseRealization {
    pub z: Word,
    pub weight: usize,
}

impl NoiseRealization {
    pub fn new(z: Word) -> Self {
        let weight = z.weight();
        NoiseRealization { z, weight }
    }
}

pub fn sample_noise<R: Rng + ?Sized>(cb: &Codebook, m: Message, rng: &mut R) -> NoiseRealization {
    let q = cb.params().noise_levels();
    let z: Vec<Bit> = cb
        .classes(m)
        .iter()
        .map(|&c| Bit::from_bool(rng.gen_bool(q[c as usize])))
        .collect();
    NoiseRealization::new(Word::new(z))
}

/// `u(m) ⊕ z` for an externally supplied noise vector.
pub fn encode_with_noise(cb: &Codebook, m: Message, noise: NoiseRealization) -> (Word, NoiseRealization) {
    let x = cb
        .codeword(m)
        .iter()
        .zip(noise.z.bits())
        .map(|(&u, &z)| u ^ z)
        .collect::<Vec<_>>();
    (Word::new(x), noise)
}

pub fn encode_stochastic<R: Rng + ?Sized>(cb: &Codebook, m: Message, rng: &mut R) -> (Word, NoiseRealization) {
    let noise = sample_noise(cb, m, rng);
    encode_with_noise(cb, m, noise)
}

pub fn encode_deterministic(cb: &Codebook, m: Message) -> Word {
    cb.word(m)
}
