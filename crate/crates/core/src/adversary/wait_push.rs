//! The wait-and-push attack on deterministic codes under one-bit delay.
//!
//! The adversary tracks the set of codewords consistent with the bits it has
//! seen. It passes everything while that set is large. Once it drops into
//! `[c/δ, δ'n)` it picks a plausible decoy `X'` from the set and from then on
//! erases every position where the transmitted codeword could still go either
//! way, plus every position where the transmitted bit is known and differs
//! from `X'`. A set that shrinks below `c/δ` before that is a failure and the
//! rest of the word is passed.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AdversaryContext, AdversaryError, AttackPhase, CodeTree, Decision, Strategy};
use crate::codebook::{floor_tol, Message};
use crate::word::Bit;

#[derive(Debug, Clone, PartialEq)]
pub struct WaitPushConfig {
    pub p: f64,
    pub delta: f64,
    pub c: f64,
    /// Overrides the wait-1 length `⌊(1-2p+δ)n⌋ + 1`.
    pub wait1_len: Option<usize>,
    /// Overrides the upper survivor threshold `δn/4`.
    pub upper: Option<f64>,
    /// Overrides the lower survivor threshold `c/δ`.
    pub lower: Option<f64>,
    /// Uses this message as `X'` instead of a uniform draw.
    pub forced_plausible: Option<Message>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitPushThresholds {
    pub wait1_len: usize,
    pub upper: f64,
    pub lower: f64,
}

impl WaitPushConfig {
    pub fn new(p: f64, delta: f64, c: f64) -> Self {
        WaitPushConfig { p, delta, c, wait1_len: None, upper: None, lower: None, forced_plausible: None }
    }

    pub fn validate(&self) -> Result<(), AdversaryError> {
        let bad = |msg: String| Err(AdversaryError::BadAttackParams(msg));
        if !(self.p > 0.0 && self.p < 0.5) {
            return bad(format!("p = {} must lie in (0, 1/2)", self.p));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta = {} must lie in (0, 1)", self.delta));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c = {} must be positive", self.c));
        }
        Ok(())
    }

    pub fn thresholds(&self, n: usize) -> WaitPushThresholds {
        let nf = n as f64;
        let wait1 = floor_tol(((1.0 - 2.0 * self.p + self.delta) * nf).max(0.0)) + 1;
        WaitPushThresholds {
            wait1_len: self.wait1_len.unwrap_or(wait1).min(n),
            upper: self.upper.unwrap_or(self.delta / 4.0 * nf),
            lower: self.lower.unwrap_or(self.c / self.delta),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WaitPush<'a> {
    tree: &'a CodeTree<'a>,
    thresholds: WaitPushThresholds,
    forced: Option<Message>,
    rng: ChaCha8Rng,
    phase: AttackPhase,
    reached: AttackPhase,
    survivors: Range<usize>,
    seen: usize,
    transition_time: Option<usize>,
    survivors_at_transition: Option<usize>,
    plausible: Option<Message>,
    branch_erasures: usize,
    disambig_erasures: usize,
}

pub fn strategy_wait_push<'a>(
    tree: &'a CodeTree<'a>,
    config: &WaitPushConfig,
    seed: u64,
) -> Result<WaitPush<'a>, AdversaryError> {
    config.validate()?;
    let n = tree.codebook().n();
    Ok(WaitPush {
        tree,
        thresholds: config.thresholds(n),
        forced: config.forced_plausible,
        rng: ChaCha8Rng::seed_from_u64(seed),
        phase: AttackPhase::Wait1,
        reached: AttackPhase::Wait1,
        survivors: tree.root(),
        seen: 0,
        transition_time: None,
        survivors_at_transition: None,
        plausible: None,
        branch_erasures: 0,
        disambig_erasures: 0,
    })
}

impl WaitPush<'_> {
    pub fn thresholds(&self) -> WaitPushThresholds {
        self.thresholds
    }

    /// Last phase entered before the word ended.
    pub fn phase_reached(&self) -> AttackPhase {
        self.reached
    }

    /// `ℓ*`: the position at which the attack left the waiting phases.
    pub fn transition_time(&self) -> Option<usize> {
        self.transition_time
    }

    pub fn survivors_at_transition(&self) -> Option<usize> {
        self.survivors_at_transition
    }

    /// `X'`, once chosen.
    pub fn plausible(&self) -> Option<Message> {
        self.plausible
    }

    pub fn branch_erasures(&self) -> usize {
        self.branch_erasures
    }

    pub fn disambig_erasures(&self) -> usize {
        self.disambig_erasures
    }

    fn enter(&mut self, phase: AttackPhase) {
        self.phase = phase;
        self.reached = phase;
    }

    fn push(&mut self, t: usize) -> Decision {
        let (zeros, ones) = self.tree.split(self.survivors.clone(), t);
        if !zeros.is_empty() && !ones.is_empty() {
            self.branch_erasures += 1;
            return Decision::Erase;
        }
        if zeros.is_empty() && ones.is_empty() {
            return Decision::Pass;
        }
        let certain = if zeros.is_empty() { Bit::One } else { Bit::Zero };
        let decoy = self.plausible.expect("decoy chosen on entering push");
        if self.tree.codebook().codeword(decoy)[t - 1] != certain {
            self.disambig_erasures += 1;
            Decision::Erase
        } else {
            Decision::Pass
        }
    }
}

impl Strategy for WaitPush<'_> {
    fn delay(&self) -> usize {
        1
    }

    fn decide(&mut self, ctx: &AdversaryContext<'_>) -> Decision {
        for (i, &b) in ctx.observed.iter().enumerate().skip(self.seen) {
            self.survivors = self.tree.refine(self.survivors.clone(), i + 1, b);
        }
        self.seen = ctx.observed.len();
        let t = ctx.t;
        match self.phase {
            AttackPhase::Wait1 | AttackPhase::Wait2 => {
                if t <= self.thresholds.wait1_len {
                    return Decision::Pass;
                }
                let s = self.survivors.len();
                if s as f64 >= self.thresholds.upper {
                    self.enter(AttackPhase::Wait2);
                    Decision::Pass
                } else if s as f64 >= self.thresholds.lower && s > 0 {
                    self.enter(AttackPhase::Push);
                    self.transition_time = Some(t);
                    self.survivors_at_transition = Some(s);
                    let decoy = match self.forced {
                        Some(m) => m,
                        None => self.tree.message(self.rng.gen_range(self.survivors.clone())),
                    };
                    self.plausible = Some(decoy);
                    self.push(t)
                } else {
                    self.enter(AttackPhase::Error1);
                    self.transition_time = Some(t);
                    self.survivors_at_transition = Some(s);
                    Decision::Pass
                }
            }
            AttackPhase::Push => self.push(t),
            AttackPhase::Error1 | AttackPhase::Done => Decision::Pass,
        }
    }

    fn finish(&mut self) {
        self.phase = AttackPhase::Done;
    }

    fn phase(&self) -> Option<AttackPhase> {
        Some(self.phase)
    }

    fn surviving(&self) -> Option<usize> {
        Some(self.survivors.len())
    }
}
