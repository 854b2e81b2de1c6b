//! Simulator for binary erasure channels controlled by a causal adversary
//! that sees the transmitted word with a one-bit delay.
//!
//! The crate provides a stochastic code with its list-then-disambiguate
//! decoder, the wait-and-push attack against deterministic codes, baseline
//! erasers, and a Monte Carlo harness.

pub mod adversary;
pub mod codebook;
pub mod decoder;
pub mod encoder;
pub mod harness;
pub mod seed;
pub mod word;

pub use codebook::{derive_params, generate_codebook, CodeParams, Codebook, CodebookError, Message};
pub use word::{Bit, ChannelSymbol, IndexSet, ReceivedWord, Word};
