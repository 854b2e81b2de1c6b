use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::adversary::WaitPushConfig;
use crate::codebook::{derive_params, CodeParams};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderKind {
    Stochastic,
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Null,
    Random,
    Prefix,
    WaitPush,
}

/// Rate of the code under attack, relative to the attack's `p` and `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodeRate {
    /// `1 - 2p + δ`
    High,
    /// `1 - 2p - δ`
    Low,
    Value(f64),
}

impl FromStr for EncoderKind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stochastic" => Ok(EncoderKind::Stochastic),
            "deterministic" => Ok(EncoderKind::Deterministic),
            _ => Err(HarnessError::Config(format!("unknown encoder `{s}`"))),
        }
    }
}

impl fmt::Display for EncoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncoderKind::Stochastic => "stochastic",
            EncoderKind::Deterministic => "deterministic",
        })
    }
}

impl FromStr for StrategyKind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "null" => Ok(StrategyKind::Null),
            "random" => Ok(StrategyKind::Random),
            "prefix" => Ok(StrategyKind::Prefix),
            "wait-push" | "wait_push" => Ok(StrategyKind::WaitPush),
            _ => Err(HarnessError::Config(format!(
                "unknown strategy `{s}` (expected null, random, prefix or wait-push)"
            ))),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Null => "null",
            StrategyKind::Random => "random",
            StrategyKind::Prefix => "prefix",
            StrategyKind::WaitPush => "wait-push",
        })
    }
}

impl FromStr for CodeRate {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "high" => Ok(CodeRate::High),
            "low" => Ok(CodeRate::Low),
            _ => s
                .parse()
                .map(CodeRate::Value)
                .map_err(|_| HarnessError::Config(format!("bad code rate `{s}` (expected high, low or a number)"))),
        }
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeRate::High => f.write_str("high"),
            CodeRate::Low => f.write_str("low"),
            CodeRate::Value(r) => write!(f, "{r}"),
        }
    }
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    /// `None` uses the default cap, `Some(usize::MAX)` the full `2^(nR)`.
    pub messages: Option<usize>,
    /// When set, the code rate is derived from `p` and `δ` and `epsilon` is
    /// ignored.
    pub code_rate: Option<CodeRate>,
    pub trials: usize,
    pub seed: u64,
    pub code_seed: u64,
    pub strategy: StrategyKind,
    /// Per-position erasure probability of the random eraser; defaults to `p`.
    pub random_q: Option<f64>,
    pub encoder: EncoderKind,
    pub workers: usize,
    pub record_timing: bool,
    /// Sends base codewords through the stochastic pipeline (`Z = 0`).
    pub zero_noise: bool,
    pub wait1_len: Option<usize>,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl ExperimentConfig {
    /// `n = 1024, p = 0.25, ε = 0.15, M = 64` against the prefix eraser.
    pub fn stochastic_preset() -> Self {
        ExperimentConfig {
            n: 1024,
            p: 0.25,
            epsilon: 0.15,
            delta: 0.1,
            c: 4.0,
            messages: Some(64),
            code_rate: None,
            trials: 500,
            seed: 1,
            code_seed: 1,
            strategy: StrategyKind::Prefix,
            random_q: None,
            encoder: EncoderKind::Stochastic,
            workers: default_workers(),
            record_timing: false,
            zero_noise: false,
            wait1_len: None,
            upper: None,
            lower: None,
        }
    }

    /// Wait-and-push against a full-size deterministic code of rate
    /// `1 - 2p + δ` at `n = 64, p = 27/64, δ = 9/64, c = 9/32`.
    ///
    /// These values put the push window `[c/δ, δn/4)` at `[2, 2.25)`, the
    /// only nonempty window available at `n = 64`.
    pub fn attack_preset() -> Self {
        ExperimentConfig {
            n: 64,
            p: 27.0 / 64.0,
            epsilon: 18.0 / 64.0,
            delta: 9.0 / 64.0,
            c: 9.0 / 32.0,
            messages: Some(usize::MAX),
            code_rate: Some(CodeRate::High),
            trials: 1000,
            strategy: StrategyKind::WaitPush,
            encoder: EncoderKind::Deterministic,
            ..Self::stochastic_preset()
        }
    }

    pub fn preset(name: &str) -> Result<Self, HarnessError> {
        match name {
            "stochastic" => Ok(Self::stochastic_preset()),
            "attack" => Ok(Self::attack_preset()),
            _ => Err(HarnessError::Config(format!("unknown preset `{name}`"))),
        }
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
            value.parse().map_err(|_| HarnessError::Config(format!("bad value for `{key}`: {value:?}")))
        }
        fn flag(key: &str, value: &str) -> Result<bool, HarnessError> {
            match value {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(HarnessError::Config(format!("bad value for `{key}`: {value:?}"))),
            }
        }
        let value = value.trim();
        match key.trim() {
            "n" => self.n = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "c" => self.c = num(key, value)?,
            "messages" | "num_messages" => {
                self.messages = match value {
                    "all" => Some(usize::MAX),
                    "default" => None,
                    _ => Some(num(key, value)?),
                }
            }
            "code_rate" => {
                self.code_rate = match value {
                    "none" => None,
                    _ => Some(value.parse()?),
                }
            }
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "code_seed" => self.code_seed = num(key, value)?,
            "strategy" => self.strategy = value.parse()?,
            "random_q" => self.random_q = Some(num(key, value)?),
            "encoder" => self.encoder = value.parse()?,
            "workers" => self.workers = num(key, value)?,
            "timing" => self.record_timing = flag(key, value)?,
            "zero_noise" => self.zero_noise = flag(key, value)?,
            "wait1_len" => self.wait1_len = Some(num(key, value)?),
            "upper" => self.upper = Some(num(key, value)?),
            "lower" => self.lower = Some(num(key, value)?),
            other => return Err(HarnessError::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` text; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", no + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text)
    }

    /// Rate slack used to build the code.
    pub fn code_epsilon(&self) -> f64 {
        match self.code_rate {
            None => self.epsilon,
            Some(rate) => {
                let r = match rate {
                    CodeRate::High => 1.0 - 2.0 * self.p + self.delta,
                    CodeRate::Low => 1.0 - 2.0 * self.p - self.delta,
                    CodeRate::Value(r) => r,
                };
                1.0 - self.p - r
            }
        }
    }

    pub fn code_params(&self) -> Result<CodeParams, HarnessError> {
        Ok(derive_params(self.n, self.p, self.code_epsilon(), self.messages)?)
    }

    pub fn random_q(&self) -> f64 {
        self.random_q.unwrap_or(self.p)
    }

    pub fn wait_push(&self) -> WaitPushConfig {
        WaitPushConfig {
            wait1_len: self.wait1_len,
            upper: self.upper,
            lower: self.lower,
            ..WaitPushConfig::new(self.p, self.delta, self.c)
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return bad("p must lie in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.random_q()) {
            return bad("random_q must lie in [0, 1]");
        }
        if self.strategy == StrategyKind::WaitPush {
            self.wait_push().validate()?;
        }
        self.code_params()?;
        Ok(())
    }

    /// The settings as `key=value` lines, readable by [`apply_text`](Self::apply_text).
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("n={}", self.n),
            format!("p={}", self.p),
            format!("epsilon={}", self.epsilon),
            format!("delta={}", self.delta),
            format!("c={}", self.c),
        ];
        lines.push(match self.messages {
            None => "messages=default".into(),
            Some(usize::MAX) => "messages=all".into(),
            Some(m) => format!("messages={m}"),
        });
        lines.push(match self.code_rate {
            None => "code_rate=none".into(),
            Some(r) => format!("code_rate={r}"),
        });
        lines.push(format!("trials={}", self.trials));
        lines.push(format!("seed={}", self.seed));
        lines.push(format!("code_seed={}", self.code_seed));
        lines.push(format!("strategy={}", self.strategy));
        if let Some(q) = self.random_q {
            lines.push(format!("random_q={q}"));
        }
        lines.push(format!("encoder={}", self.encoder));
        lines.push(format!("zero_noise={}", self.zero_noise));
        if let Some(v) = self.wait1_len {
            lines.push(format!("wait1_len={v}"));
        }
        if let Some(v) = self.upper {
            lines.push(format!("upper={v}"));
        }
        if let Some(v) = self.lower {
            lines.push(format!("lower={v}"));
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attack_preset_codes() {
        let cfg = ExperimentConfig::attack_preset();
        assert_eq!(cfg.code_params().unwrap().num_messages(), 1 << 19);
        assert_eq!(cfg.code_params().unwrap().budget(), 27);
        let low = ExperimentConfig { code_rate: Some(CodeRate::Low), ..cfg.clone() };
        assert_eq!(low.code_params().unwrap().num_messages(), 2);
        let th = cfg.wait_push().thresholds(64);
        assert!((th.lower - 2.0).abs() < 1e-12 && (th.upper - 2.25).abs() < 1e-12);
        assert_eq!(th.wait1_len, 20);
    }

    #[test]
    fn text_roundtrip_and_overrides() {
        let mut cfg = ExperimentConfig::stochastic_preset();
        cfg.random_q = Some(0.3);
        cfg.strategy = StrategyKind::Random;
        let mut back = ExperimentConfig::attack_preset();
        back.apply_text(&cfg.to_text()).unwrap();
        back.workers = cfg.workers;
        assert_eq!(back, cfg);
        let mut c = ExperimentConfig::stochastic_preset();
        c.apply_text("# comment\n\nn = 512\nstrategy=wait-push\n").unwrap();
        assert_eq!((c.n, c.strategy), (512, StrategyKind::WaitPush));
        assert!(c.apply_text("bogus=1").is_err());
        assert!(c.apply_text("n=abc").is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = ExperimentConfig::stochastic_preset();
        cfg.p = 1.0;
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { trials: 0, ..ExperimentConfig::stochastic_preset() };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { random_q: Some(2.0), ..ExperimentConfig::stochastic_preset() };
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::stochastic_preset().validate().is_ok());
        assert!(ExperimentConfig::attack_preset().validate().is_ok());
    }
}
