use super::CodebookError;

/// Largest message count used when no explicit count is requested.
pub const DEFAULT_MAX_MESSAGES: usize = 1 << 12;

const ROUNDING_SLACK: f64 = 1e-9;

/// `floor(x)` that absorbs floating-point error just below an integer.
pub(crate) fn floor_tol(x: f64) -> usize {
    (x + ROUNDING_SLACK).floor().max(0.0) as usize
}

/// `ceil(x)` that absorbs floating-point error just above an integer.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - ROUNDING_SLACK).ceil().max(0.0) as usize
}

/// Parameters of the random stochastic code and its decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeParams {
    n: usize,
    p: f64,
    epsilon: f64,
    num_messages: usize,
    noise_levels: Vec<f64>,
    list_threshold: usize,
    disambig_threshold: usize,
}

impl CodeParams {
    /// Parameters with explicitly chosen noise levels and thresholds.
    ///
    /// Only structural checks are made, so small or degenerate instances
    /// (zero noise, hand-built fixtures) can be expressed.
    pub fn custom(
        n: usize,
        p: f64,
        epsilon: f64,
        num_messages: usize,
        noise_levels: Vec<f64>,
        list_threshold: usize,
        disambig_threshold: usize,
    ) -> Result<Self, CodebookError> {
        let invalid = |msg: &str| Err(CodebookError::InvalidParams(msg.to_string()));
        if n == 0 {
            return invalid("n must be positive");
        }
        if !(0.0..1.0).contains(&p) {
            return invalid("p must lie in [0, 1)");
        }
        if !(epsilon > 0.0 && 1.0 - p - epsilon > 0.0) {
            return invalid("epsilon must satisfy 0 < epsilon < 1 - p");
        }
        if num_messages == 0 {
            return invalid("at least one message is required");
        }
        if noise_levels.len() < 2 || noise_levels.len() > u8::MAX as usize {
            return invalid("need between 2 and 255 noise levels");
        }
        if noise_levels.iter().any(|q| !(0.0..1.0).contains(q)) {
            return invalid("noise levels must lie in [0, 1)");
        }
        if disambig_threshold == 0 {
            return invalid("disambiguation threshold must be at least 1");
        }
        Ok(CodeParams {
            n,
            p,
            epsilon,
            num_messages,
            noise_levels,
            list_threshold,
            disambig_threshold,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `R = 1 - p - epsilon`.
    pub fn rate(&self) -> f64 {
        1.0 - self.p - self.epsilon
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    /// Number of noise levels `K`.
    pub fn levels(&self) -> usize {
        self.noise_levels.len()
    }

    /// `q_k` for 1-based level `k`.
    pub fn noise_level(&self, k: usize) -> f64 {
        self.noise_levels[k - 1]
    }

    pub fn noise_levels(&self) -> &[f64] {
        &self.noise_levels
    }

    /// Mismatch count a message must stay strictly below to enter the list.
    pub fn list_threshold(&self) -> usize {
        self.list_threshold
    }

    /// Minimum size of a usable disambiguation set.
    pub fn disambig_threshold(&self) -> usize {
        self.disambig_threshold
    }

    /// Erasure budget `floor(p n)`.
    pub fn budget(&self) -> usize {
        floor_tol(self.p * self.n as f64)
    }

    /// Unerased-symbol count that ends the decoder's prefix.
    pub fn tau_target(&self) -> usize {
        floor_tol((self.rate() + self.epsilon / 2.0) * self.n as f64).max(1)
    }

    pub fn with_num_messages(mut self, num_messages: usize) -> Result<Self, CodebookError> {
        if num_messages == 0 {
            return Err(CodebookError::InvalidParams(
                "at least one message is required".into(),
            ));
        }
        self.num_messages = num_messages;
        Ok(self)
    }
}

/// Number of noise levels for blocklength `n`: a quarter of `log2 n`, at least 2.
pub fn level_count(n: usize) -> usize {
    (n.max(1).ilog2() as usize / 4).max(2)
}

/// `floor(2^(nR))`, saturating at `usize::MAX`.
pub fn full_message_count(n: usize, rate: f64) -> usize {
    let exponent = n as f64 * rate + ROUNDING_SLACK;
    if exponent >= usize::BITS as f64 {
        usize::MAX
    } else {
        exponent.exp2().floor() as usize
    }
}

/// Code parameters for blocklength `n`, erasure fraction `p` and rate slack
/// `epsilon`.
///
/// The message count is `floor(2^(nR))`, capped by `num_messages` when given
/// and by [`DEFAULT_MAX_MESSAGES`] otherwise.
pub fn derive_params(
    n: usize,
    p: f64,
    epsilon: f64,
    num_messages: Option<usize>,
) -> Result<CodeParams, CodebookError> {
    if n < 16 {
        return Err(CodebookError::BlocklengthTooShort(n));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(CodebookError::InvalidParams("p must lie in (0, 1)".into()));
    }
    let rate = 1.0 - p - epsilon;
    if !(epsilon > 0.0) || rate <= 0.0 {
        return Err(CodebookError::InvalidParams(
            "epsilon must satisfy 0 < epsilon < 1 - p".into(),
        ));
    }
    let k = level_count(n);
    let root_n = (n as f64).sqrt();
    let noise_levels: Vec<f64> = (1..=k).map(|j| (j as f64 - 1.0).exp2() / root_n).collect();
    let q_top = noise_levels[k - 1];
    if q_top >= 0.5 {
        return Err(CodebookError::NoiseLevelTooLarge { k, q: q_top });
    }
    let full = full_message_count(n, rate);
    let num_messages = full.min(num_messages.unwrap_or(DEFAULT_MAX_MESSAGES));
    if num_messages < 2 {
        return Err(CodebookError::TooFewMessages(num_messages));
    }
    let nf = n as f64;
    let list_threshold = ceil_tol(nf.powf(0.75));
    let pairs = (k * k - k) as f64;
    let disambig_threshold = ceil_tol(epsilon * nf / (4.0 * pairs)).max(1);
    CodeParams::custom(
        n,
        p,
        epsilon,
        num_messages,
        noise_levels,
        list_threshold,
        disambig_threshold,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n16_top_level_too_noisy() {
        let err = derive_params(16, 0.25, 0.25, None).unwrap_err();
        assert!(matches!(err, CodebookError::NoiseLevelTooLarge { k: 2, q } if q == 0.5));
    }

    #[test]
    fn n256_levels_and_thresholds() {
        let params = derive_params(256, 0.25, 0.15, None).unwrap();
        assert_eq!(params.levels(), 2);
        assert_eq!(params.noise_levels(), &[0.0625, 0.125]);
        assert_eq!(params.list_threshold(), 64);
        // 0.15 * 256 / (4 * 2) = 4.8
        assert_eq!(params.disambig_threshold(), 5);
        assert_eq!(params.num_messages(), DEFAULT_MAX_MESSAGES);
        assert_eq!(params.budget(), 64);
    }

    #[test]
    fn n4096_has_three_levels() {
        let params = derive_params(4096, 0.25, 0.15, Some(8)).unwrap();
        assert_eq!(params.noise_levels(), &[1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0]);
        assert_eq!(params.num_messages(), 8);
        assert_eq!(params.list_threshold(), 512);
    }

    #[test]
    fn message_count_respects_rate() {
        // nR = 64 * 0.296875 = 19
        let params = derive_params(64, 0.421875, 0.28125, Some(1 << 24)).unwrap();
        assert_eq!(params.num_messages(), 1 << 19);
        let params = derive_params(64, 0.421875, 0.5625, Some(1 << 24)).unwrap();
        assert_eq!(params.num_messages(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            derive_params(8, 0.25, 0.1, None),
            Err(CodebookError::BlocklengthTooShort(8))
        ));
        assert!(derive_params(256, 0.0, 0.1, None).is_err());
        assert!(derive_params(256, 0.5, 0.5, None).is_err());
        assert!(derive_params(256, 0.5, 0.0, None).is_err());
        // 2^(16 * 0.05) < 2
        assert!(matches!(
            derive_params(16, 0.9, 0.05, None),
            Err(CodebookError::TooFewMessages(1)) | Err(CodebookError::NoiseLevelTooLarge { .. })
        ));
    }

    #[test]
    fn tau_target_floors_real_value() {
        let params = derive_params(1024, 0.25, 0.15, Some(64)).unwrap();
        // (0.6 + 0.075) * 1024 = 691.2
        assert_eq!(params.tau_target(), 691);
        let params = derive_params(1024, 0.25, 0.125, Some(64)).unwrap();
        assert_eq!(params.tau_target(), 704);
    }

    #[test]
    fn level_count_floors() {
        assert_eq!(level_count(16), 2);
        assert_eq!(level_count(1024), 2);
        assert_eq!(level_count(4095), 2);
        assert_eq!(level_count(4096), 3);
        assert_eq!(level_count(65536), 4);
    }
}
