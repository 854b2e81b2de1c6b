use std::collections::BTreeMap;

use crate::adversary::AttackPhase;
use crate::decoder::DecodeError;

use super::{HarnessError, TrialRecord, AMBIGUOUS};

const ERROR_LABELS: [&str; 5] = [
    DecodeError::NoTau.label(),
    DecodeError::EmptyList.label(),
    DecodeError::NoDisambigPair.label(),
    DecodeError::NoCondorcet.label(),
    AMBIGUOUS,
];

const PHASES: [AttackPhase; 4] = [AttackPhase::Wait1, AttackPhase::Wait2, AttackPhase::Push, AttackPhase::Error1];

/// Aggregate statistics of a run, all recomputable from its records.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Decoded to a message other than the one sent.
    pub wrong: usize,
    pub errors: BTreeMap<String, usize>,
    pub mean_list_size: f64,
    pub max_list_size: usize,
    pub mean_erasures: f64,
    pub max_erasures: usize,
    pub budget_overrides: usize,
    pub attack_successes: usize,
    pub attack_success_rate: f64,
    pub phases: BTreeMap<String, usize>,
}

impl Summary {
    pub fn from_records(records: &[TrialRecord]) -> Summary {
        let trials = records.len();
        let t = trials.max(1) as f64;
        let successes = records.iter().filter(|r| r.decoded_correctly()).count();
        let mut errors: BTreeMap<String, usize> = ERROR_LABELS.iter().map(|l| (l.to_string(), 0)).collect();
        let mut wrong = 0;
        for r in records.iter().filter(|r| !r.decoded_correctly()) {
            match errors.get_mut(r.outcome.as_str()) {
                Some(count) => *count += 1,
                None => wrong += 1,
            }
        }
        let mut phases: BTreeMap<String, usize> = PHASES.iter().map(|p| (p.to_string(), 0)).collect();
        for phase in records.iter().filter_map(|r| r.attack_phase_reached) {
            *phases.entry(phase.to_string()).or_default() += 1;
        }
        let attack_successes = records.iter().filter(|r| r.attack_success).count();
        Summary {
            trials,
            successes,
            success_rate: successes as f64 / t,
            wrong,
            errors,
            mean_list_size: records.iter().map(|r| r.list_size as f64).sum::<f64>() / t,
            max_list_size: records.iter().map(|r| r.list_size).max().unwrap_or(0),
            mean_erasures: records.iter().map(|r| r.erasures_used as f64).sum::<f64>() / t,
            max_erasures: records.iter().map(|r| r.erasures_used).max().unwrap_or(0),
            budget_overrides: records.iter().map(|r| r.budget_overrides).sum(),
            attack_successes,
            attack_success_rate: attack_successes as f64 / t,
            phases,
        }
    }

    /// Key-value pairs in a fixed order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("trials".to_string(), self.trials.to_string()),
            ("successes".to_string(), self.successes.to_string()),
            ("success_rate".to_string(), self.success_rate.to_string()),
            ("wrong".to_string(), self.wrong.to_string()),
        ];
        out.extend(self.errors.iter().map(|(k, v)| (k.clone(), v.to_string())));
        out.extend([
            ("mean_list_size".to_string(), self.mean_list_size.to_string()),
            ("max_list_size".to_string(), self.max_list_size.to_string()),
            ("mean_erasures".to_string(), self.mean_erasures.to_string()),
            ("max_erasures".to_string(), self.max_erasures.to_string()),
            ("budget_overrides".to_string(), self.budget_overrides.to_string()),
            ("attack_successes".to_string(), self.attack_successes.to_string()),
            ("attack_success_rate".to_string(), self.attack_success_rate.to_string()),
        ]);
        out.extend(self.phases.iter().map(|(k, v)| (format!("phase_{k}"), v.to_string())));
        out
    }

    /// Binomial standard error of the decode success rate.
    pub fn success_se(&self) -> f64 {
        binomial_se(self.successes, self.trials)
    }

    pub fn attack_se(&self) -> f64 {
        binomial_se(self.attack_successes, self.trials)
    }
}

/// `sqrt(p(1-p)/N)` with the Laplace-smoothed `p = (s+1)/(N+2)`, which stays
/// positive when every trial succeeds or fails.
pub fn binomial_se(successes: usize, trials: usize) -> f64 {
    let n = trials.max(1) as f64;
    let p = (successes as f64 + 1.0) / (n + 2.0);
    (p * (1.0 - p) / n).sqrt()
}

/// Summary file: a header, optional context lines, then the statistics.
pub fn summary_text(summary: &Summary, context: &[(String, String)]) -> String {
    let mut s = String::from("# delayed-erasure summary v1\n");
    for (k, v) in context.iter().chain(summary.entries().iter()) {
        s.push_str(&format!("{k}={v}\n"));
    }
    s
}

pub fn parse_summary(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Verify(format!("summary line {}: expected key=value", no + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Checks every statistic in `summary` against a recomputation from `records`,
/// and that no row exceeds the recorded budget.
pub fn verify_summary(records: &[TrialRecord], summary: &str) -> Result<(), HarnessError> {
    let stated = parse_summary(summary)?;
    let mut problems = Vec::new();
    for (key, value) in Summary::from_records(records).entries() {
        match stated.get(&key) {
            None => problems.push(format!("{key}: missing from summary")),
            Some(s) if *s != value => problems.push(format!("{key}: summary says {s}, records give {value}")),
            _ => {}
        }
    }
    if let Some(b) = stated.get("budget") {
        let budget: usize = b.parse().map_err(|_| HarnessError::Verify(format!("bad budget {b:?}")))?;
        if let Some(r) = records.iter().find(|r| r.erasures_used > budget) {
            problems.push(format!("trial {} uses {} erasures, budget {budget}", r.trial_id, r.erasures_used));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Verify(problems.join("; ")))
    }
}
