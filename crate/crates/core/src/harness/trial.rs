use std::io::{Read, Write};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    apply_channel, strategy_null, strategy_prefix, strategy_random, strategy_wait_push, AttackPhase, CodeTree,
    Strategy, TraceRow,
};
use crate::codebook::{Codebook, Message};
use crate::decoder::{decode, DecodeOutcome};
use crate::encoder::{encode_deterministic, encode_stochastic, encode_with_noise, NoiseRealization};
use crate::seed::{derive_seed, stream, Role};
use crate::word::{ReceivedWord, Word};

use super::{EncoderKind, ExperimentConfig, HarnessError, StrategyKind};

pub const RECORDS_HEADER: &str = "# delayed-erasure trial records v1";

/// Outcome label of a deterministic-code trial with several consistent codewords.
pub const AMBIGUOUS: &str = "ambiguous";

/// One CSV row. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub message: usize,
    pub noise_weight: usize,
    pub erasures_used: usize,
    pub budget_overrides: usize,
    pub tau: Option<usize>,
    pub list_size: usize,
    /// Decoded message id, or an error label.
    pub outcome: String,
    pub attack_phase_reached: Option<AttackPhase>,
    /// At least two base codewords are consistent with the received word
    /// and the adversary never asked for more erasures than it had.
    pub attack_success: bool,
    pub wall_time_us: Option<u64>,
}

impl TrialRecord {
    pub fn decoded_correctly(&self) -> bool {
        self.outcome == self.message.to_string()
    }
}

/// A trial with the intermediate values the record summarises.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub record: TrialRecord,
    pub transmitted: Word,
    pub received: ReceivedWord,
    pub decoded: Option<DecodeOutcome>,
    pub consistent: Vec<Message>,
    pub plausible: Option<Message>,
    pub transition_time: Option<usize>,
    pub trace: Vec<TraceRow>,
}

/// A codebook prepared for running trials.
#[derive(Debug)]
pub struct TrialContext<'a> {
    pub cb: &'a Codebook,
    pub tree: CodeTree<'a>,
    pub config: &'a ExperimentConfig,
}

impl<'a> TrialContext<'a> {
    pub fn new(cb: &'a Codebook, config: &'a ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        Ok(TrialContext { cb, tree: CodeTree::new(cb), config })
    }

    pub fn budget(&self) -> usize {
        self.cb.params().budget()
    }

    pub fn run(&self, trial_id: u64) -> Result<TrialRun, HarnessError> {
        let start = Instant::now();
        let (cb, config) = (self.cb, self.config);
        let message = Message::new(stream(config.seed, Role::Message, trial_id).gen_range(1..=cb.num_messages()));
        let (x, noise_weight) = match config.encoder {
            EncoderKind::Deterministic => (encode_deterministic(cb, message), 0),
            EncoderKind::Stochastic if config.zero_noise => {
                let (x, _) = encode_with_noise(cb, message, NoiseRealization::new(Word::zeros(cb.n())));
                (x, 0)
            }
            EncoderKind::Stochastic => {
                let (x, noise) = encode_stochastic(cb, message, &mut stream(config.seed, Role::Encoder, trial_id));
                (x, noise.weight)
            }
        };

        let adv_seed = derive_seed(config.seed, Role::Adversary, trial_id);
        let budget = self.budget();
        let (channel, phase, plausible, transition_time) = match config.strategy {
            StrategyKind::WaitPush => {
                let mut adv = strategy_wait_push(&self.tree, &config.wait_push(), adv_seed)?;
                let out = apply_channel(&x, &mut adv, budget);
                (out, Some(adv.phase_reached()), adv.plausible(), adv.transition_time())
            }
            other => {
                let mut adv: Box<dyn Strategy> = match other {
                    StrategyKind::Null => Box::new(strategy_null()),
                    StrategyKind::Prefix => Box::new(strategy_prefix()),
                    _ => Box::new(strategy_random(config.random_q(), adv_seed)?),
                };
                (apply_channel(&x, adv.as_mut(), budget), None, None, None)
            }
        };

        let y = channel.received;
        let consistent = self.tree.consistent_messages(&y, usize::MAX);
        let (decoded, tau, list_size, outcome) = match config.encoder {
            EncoderKind::Stochastic => {
                let d = decode(cb, &y);
                let outcome = match d.result {
                    Ok(m) => m.id().to_string(),
                    Err(e) => e.label().to_string(),
                };
                let (tau, size) = (d.tau, d.list.len());
                (Some(d), tau, size, outcome)
            }
            EncoderKind::Deterministic => {
                let outcome = match consistent.as_slice() {
                    [only] => only.id().to_string(),
                    _ => AMBIGUOUS.to_string(),
                };
                (None, None, consistent.len(), outcome)
            }
        };
        let record = TrialRecord {
            trial_id,
            message: message.id(),
            noise_weight,
            erasures_used: channel.erasures_used,
            budget_overrides: channel.overrides,
            tau,
            list_size,
            outcome,
            attack_phase_reached: phase,
            attack_success: channel.overrides == 0 && consistent.len() >= 2,
            wall_time_us: config.record_timing.then(|| start.elapsed().as_micros() as u64),
        };
        Ok(TrialRun {
            record,
            transmitted: x,
            received: y,
            decoded,
            consistent,
            plausible,
            transition_time,
            trace: channel.trace,
        })
    }
}

pub fn run_trial(cb: &Codebook, config: &ExperimentConfig, trial_id: u64) -> Result<TrialRecord, HarnessError> {
    Ok(TrialContext::new(cb, config)?.run(trial_id)?.record)
}

/// Runs trials `0..config.trials` on a pool of `config.workers` threads.
/// Records come back in trial order.
pub fn run_trials(cb: &Codebook, config: &ExperimentConfig) -> Result<Vec<TrialRecord>, HarnessError> {
    let ctx = TrialContext::new(cb, config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    pool.install(|| {
        (0..config.trials as u64)
            .into_par_iter()
            .map(|id| ctx.run(id).map(|r| r.record))
            .collect()
    })
}

pub fn write_records<W: Write>(records: &[TrialRecord], mut out: W) -> Result<(), HarnessError> {
    writeln!(out, "{RECORDS_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<_>, _>>()?)
}

pub fn write_trace<W: Write>(trace: &[TraceRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for row in trace {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
