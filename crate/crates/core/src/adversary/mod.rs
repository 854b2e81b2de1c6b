//! Delayed causal erasing adversaries.
//!
//! A strategy with delay `Δ` decides whether to erase position `t` after
//! seeing only `x_1..x_{t-Δ}` and its own earlier decisions. [`apply_channel`]
//! enforces both the view and the erasure budget: an erase request made with
//! no budget left is turned into a pass and recorded in the trace.

mod baseline;
mod tree;
mod wait_push;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codebook::{Codebook, Message};
use crate::word::{hamming_distance, Bit, ChannelSymbol, ReceivedWord, Word};

pub use baseline::{strategy_null, strategy_prefix, strategy_random, NullStrategy, PrefixEraser, RandomEraser};
pub use tree::CodeTree;
pub use wait_push::{strategy_wait_push, WaitPush, WaitPushConfig, WaitPushThresholds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversaryError {
    #[error("erasure probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("a message cannot be confused with itself")]
    SameMessage,
    #[error("invalid wait-and-push parameters: {0}")]
    BadAttackParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Pass,
    Erase,
}

/// Phases of the wait-and-push attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackPhase {
    Wait1,
    Wait2,
    Push,
    Error1,
    Done,
}

impl fmt::Display for AttackPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackPhase::Wait1 => "wait1",
            AttackPhase::Wait2 => "wait2",
            AttackPhase::Push => "push",
            AttackPhase::Error1 => "error1",
            AttackPhase::Done => "done",
        })
    }
}

/// What a strategy may look at when deciding position `t`.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryContext<'a> {
    pub t: usize,
    /// `x_1..x_{t-Δ}` (empty while `t <= Δ`).
    pub observed: &'a [Bit],
    pub budget_remaining: usize,
    pub delay: usize,
    /// Effective decisions for positions `1..t`.
    pub history: &'a [Decision],
}

pub trait Strategy {
    /// Observation delay `Δ`.
    fn delay(&self) -> usize {
        1
    }

    fn decide(&mut self, ctx: &AdversaryContext<'_>) -> Decision;

    /// Called once after the last position.
    fn finish(&mut self) {}

    fn phase(&self) -> Option<AttackPhase> {
        None
    }

    /// Size of the strategy's current consistency set, if it keeps one.
    fn surviving(&self) -> Option<usize> {
        None
    }
}

/// One trace row per channel position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub t: usize,
    /// Number of transmitted bits visible to the adversary.
    pub observed: usize,
    pub decision: Decision,
    pub overridden: bool,
    pub phase: Option<AttackPhase>,
    pub surviving: Option<usize>,
    pub budget_remaining: usize,
}

/// Column names of the trace CSV, in order.
pub const TRACE_COLUMNS: [&str; 7] =
    ["t", "observed", "decision", "overridden", "phase", "surviving", "budget_remaining"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutput {
    pub received: ReceivedWord,
    pub erasures_used: usize,
    /// Erase requests turned into passes because the budget was spent.
    pub overrides: usize,
    pub decisions: Vec<Decision>,
    pub trace: Vec<TraceRow>,
}

/// Runs `strategy` over the transmission `x` with at most `budget` erasures.
pub fn apply_channel(x: &Word, strategy: &mut dyn Strategy, budget: usize) -> ChannelOutput {
    let n = x.len();
    let delay = strategy.delay();
    let mut remaining = budget;
    let mut decisions = Vec::with_capacity(n);
    let mut symbols = Vec::with_capacity(n);
    let mut trace = Vec::with_capacity(n);
    let mut overrides = 0;
    for t in 1..=n {
        let visible = t.saturating_sub(delay).min(n);
        let ctx = AdversaryContext {
            t,
            observed: &x.bits()[..visible],
            budget_remaining: remaining,
            delay,
            history: &decisions,
        };
        let requested = strategy.decide(&ctx);
        let overridden = requested == Decision::Erase && remaining == 0;
        let decision = if overridden { Decision::Pass } else { requested };
        if overridden {
            overrides += 1;
        }
        match decision {
            Decision::Erase => {
                remaining -= 1;
                symbols.push(ChannelSymbol::Erased);
            }
            Decision::Pass => symbols.push(x.at(t).into()),
        }
        trace.push(TraceRow {
            t,
            observed: visible,
            decision,
            overridden,
            phase: strategy.phase(),
            surviving: strategy.surviving(),
            budget_remaining: remaining,
        });
        decisions.push(decision);
    }
    strategy.finish();
    ChannelOutput {
        received: ReceivedWord::new(symbols),
        erasures_used: budget - remaining,
        overrides,
        decisions,
        trace,
    }
}

/// The two potential consistency sets for position `ell`, given the
/// messages still consistent with everything before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencySets {
    pub phi0: Vec<Message>,
    pub phi1: Vec<Message>,
    /// `A`: size of the larger set.
    pub larger: usize,
    /// `a`: size of the smaller set.
    pub smaller: usize,
}

pub fn consistency_split(cb: &Codebook, surviving: &[Message], ell: usize) -> ConsistencySets {
    let (phi1, phi0): (Vec<Message>, Vec<Message>) =
        surviving.iter().partition(|&&m| cb.codeword(m)[ell - 1] == Bit::One);
    ConsistencySets {
        larger: phi0.len().max(phi1.len()),
        smaller: phi0.len().min(phi1.len()),
        phi0,
        phi1,
    }
}

/// Whether an omniscient adversary with `budget` erasures can make `m` and
/// `m2` produce the same received word.
pub fn omniscient_confusable(cb: &Codebook, m: Message, m2: Message, budget: usize) -> Result<bool, AdversaryError> {
    if m == m2 {
        return Err(AdversaryError::SameMessage);
    }
    let d = hamming_distance(cb.codeword(m), cb.codeword(m2)).expect("codewords share length n");
    Ok(d <= budget)
}
