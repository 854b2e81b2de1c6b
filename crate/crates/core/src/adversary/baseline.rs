use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AdversaryContext, AdversaryError, Decision, Strategy};

#[derive(Debug, Clone, Default)]
pub struct NullStrategy {
    delay: usize,
}

impl Strategy for NullStrategy {
    fn delay(&self) -> usize {
        self.delay
    }

    fn decide(&mut self, _: &AdversaryContext<'_>) -> Decision {
        Decision::Pass
    }
}

/// Erases positions `1..=budget`.
#[derive(Debug, Clone, Default)]
pub struct PrefixEraser {
    delay: usize,
}

impl Strategy for PrefixEraser {
    fn delay(&self) -> usize {
        self.delay
    }

    fn decide(&mut self, ctx: &AdversaryContext<'_>) -> Decision {
        if ctx.budget_remaining > 0 {
            Decision::Erase
        } else {
            Decision::Pass
        }
    }
}

/// Erases each position independently with probability `q` until the budget
/// runs out. One coin is drawn per position whether or not budget remains.
#[derive(Debug, Clone)]
pub struct RandomEraser {
    q: f64,
    delay: usize,
    rng: ChaCha8Rng,
}

impl Strategy for RandomEraser {
    fn delay(&self) -> usize {
        self.delay
    }

    fn decide(&mut self, ctx: &AdversaryContext<'_>) -> Decision {
        let coin = self.rng.gen_bool(self.q);
        if coin && ctx.budget_remaining > 0 {
            Decision::Erase
        } else {
            Decision::Pass
        }
    }
}

impl NullStrategy {
    pub fn with_delay(delay: usize) -> Self {
        NullStrategy { delay }
    }
}

impl PrefixEraser {
    pub fn with_delay(delay: usize) -> Self {
        PrefixEraser { delay }
    }
}

impl RandomEraser {
    pub fn with_delay(mut self, delay: usize) -> Self {
        self.delay = delay;
        self
    }
}

pub fn strategy_null() -> NullStrategy {
    NullStrategy::with_delay(1)
}

pub fn strategy_prefix() -> PrefixEraser {
    PrefixEraser::with_delay(1)
}

pub fn strategy_random(q: f64, seed: u64) -> Result<RandomEraser, AdversaryError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(AdversaryError::BadProbability(q));
    }
    Ok(RandomEraser { q, delay: 1, rng: ChaCha8Rng::seed_from_u64(seed) })
}
