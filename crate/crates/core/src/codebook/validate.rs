//! Coherence and list-decodability checks.
//!
//! Both properties quantify over exponentially many position sets, so the
//! exhaustive modes are only available for small instances under an explicit
//! cap on the number of elementary checks.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{ceil_tol, Codebook, CodebookError, Message};
use crate::word::{Bit, IndexSet, Word};

/// Default cap on elementary checks for exhaustive validation.
pub const DEFAULT_MAX_CHECKS: u64 = 1 << 26;

/// `Σ_k |S(m,k) ∩ S(m2,k) ∩ t|`: positions of `t` where both messages use
/// the same noise level.
pub fn coherence_stat(cb: &Codebook, m: Message, m2: Message, t: &IndexSet) -> usize {
    let a = cb.classes(m);
    let b = cb.classes(m2);
    t.iter().filter(|&i| a[i - 1] == b[i - 1]).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub pair: (Message, Message),
    pub set: IndexSet,
    pub stat: usize,
    /// `(|T| / K)(1 + eta1)`.
    pub bound: f64,
    pub coherent: bool,
}

impl CoherenceReport {
    fn new(cb: &Codebook, pair: (Message, Message), set: IndexSet, stat: usize, eta1: f64) -> Self {
        let bound = set.len() as f64 / cb.levels() as f64 * (1.0 + eta1);
        CoherenceReport { pair, set, stat, bound, coherent: stat as f64 <= bound }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoherenceMode {
    /// Every pair of messages and every `T` with `|T| >= ceil(eta2 n)`.
    Exhaustive { max_checks: u64 },
    /// `samples` random pairs, each with a random `T` of size `ceil(eta2 n)`.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceValidation {
    /// Number of (pair, T) combinations examined.
    pub checks: u64,
    /// Every examined combination that was not coherent.
    pub violations: Vec<CoherenceReport>,
}

impl CoherenceValidation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn mask_to_set(mask: u64, n: usize) -> IndexSet {
    IndexSet::new((0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .expect("increasing")
}

/// Checks whether the codebook is `(eta1, eta2)`-coherent.
pub fn validate_coherence(
    cb: &Codebook,
    eta1: f64,
    eta2: f64,
    mode: CoherenceMode,
) -> Result<CoherenceValidation, CodebookError> {
    let n = cb.n();
    let m_count = cb.num_messages();
    let min_size = ceil_tol(eta2 * n as f64).min(n);
    let mut result = CoherenceValidation { checks: 0, violations: Vec::new() };
    if m_count < 2 {
        return Ok(result);
    }
    match mode {
        CoherenceMode::Exhaustive { max_checks } => {
            let sets: u128 = (min_size..=n).map(|s| binomial(n, s)).sum();
            let pairs = (m_count * (m_count - 1) / 2) as u128;
            let checks = sets * pairs;
            if n >= 64 || checks > max_checks as u128 {
                return Err(CodebookError::CapExceeded { checks, cap: max_checks });
            }
            for a in 0..m_count {
                for b in a + 1..m_count {
                    let (ma, mb) = (Message::from_index(a), Message::from_index(b));
                    let agree = cb
                        .classes(ma)
                        .iter()
                        .zip(cb.classes(mb))
                        .enumerate()
                        .filter(|(_, (x, y))| x == y)
                        .fold(0u64, |acc, (i, _)| acc | 1 << i);
                    for t in 0..1u64 << n {
                        let size = t.count_ones() as usize;
                        if size < min_size {
                            continue;
                        }
                        result.checks += 1;
                        let stat = (t & agree).count_ones() as usize;
                        let bound = size as f64 / cb.levels() as f64 * (1.0 + eta1);
                        if stat as f64 > bound {
                            result.violations.push(CoherenceReport::new(
                                cb,
                                (ma, mb),
                                mask_to_set(t, n),
                                stat,
                                eta1,
                            ));
                        }
                    }
                }
            }
        }
        CoherenceMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let a = rng.gen_range(0..m_count);
                let mut b = rng.gen_range(0..m_count - 1);
                if b >= a {
                    b += 1;
                }
                let (ma, mb) = if a < b { (a, b) } else { (b, a) };
                let pair = (Message::from_index(ma), Message::from_index(mb));
                let mut picked: Vec<usize> = sample(&mut rng, n, min_size).into_iter().map(|i| i + 1).collect();
                picked.sort_unstable();
                let set = IndexSet::new(picked).expect("distinct sorted indices");
                let stat = coherence_stat(cb, pair.0, pair.1, &set);
                let report = CoherenceReport::new(cb, pair, set, stat, eta1);
                result.checks += 1;
                if !report.coherent {
                    result.violations.push(report);
                }
            }
        }
    }
    Ok(result)
}

/// A Hamming ball that holds too many restricted codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListDecodabilityWitness {
    pub set: IndexSet,
    pub center: Word,
    pub messages: Vec<Message>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListDecodability {
    Pass { checks: u64 },
    Fail(ListDecodabilityWitness),
}

impl ListDecodability {
    pub fn passed(&self) -> bool {
        matches!(self, ListDecodability::Pass { .. })
    }
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

/// Brute-force `(w_u, w_e, s)`-list-decodability: for every `T'` of `w_u`
/// positions and every centre in `{0,1}^{w_u}`, the radius-`w_e` ball must hold
/// fewer than `s` restricted codewords.
///
/// Sets are visited in lexicographic order and centres in counting order with
/// the first position of `T'` as the most significant bit; the first failing
/// ball is returned as the witness.
pub fn validate_list_decodability(
    cb: &Codebook,
    w_u: usize,
    w_e: usize,
    s: usize,
    max_checks: u64,
) -> Result<ListDecodability, CodebookError> {
    let n = cb.n();
    if w_u > n || w_u >= 64 {
        return Err(CodebookError::InvalidParams(format!(
            "w_u = {w_u} must not exceed n = {n} (and must be below 64)"
        )));
    }
    let checks = binomial(n, w_u) * (1u128 << w_u) * cb.num_messages() as u128;
    if checks > max_checks as u128 {
        return Err(CodebookError::CapExceeded { checks, cap: max_checks });
    }

    let mut combo: Vec<usize> = (0..w_u).collect();
    let mut packed = vec![0u64; cb.num_messages()];
    loop {
        for (m, slot) in packed.iter_mut().enumerate() {
            let word = cb.codeword(Message::from_index(m));
            *slot = combo.iter().fold(0u64, |acc, &i| acc << 1 | (word[i] == Bit::One) as u64);
        }
        for center in 0..1u64 << w_u {
            let inside = packed.iter().filter(|&&u| ((u ^ center).count_ones() as usize) <= w_e).count();
            if inside >= s {
                let messages = packed
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| ((u ^ center).count_ones() as usize) <= w_e)
                    .map(|(m, _)| Message::from_index(m))
                    .collect();
                let center_word = Word::new(
                    (0..w_u).map(|j| Bit::from_bool(center >> (w_u - 1 - j) & 1 == 1)).collect(),
                );
                let set = IndexSet::new(combo.iter().map(|&i| i + 1).collect()).expect("increasing");
                return Ok(ListDecodability::Fail(ListDecodabilityWitness { set, center: center_word, messages }));
            }
        }
        if w_u == 0 || !next_combination(&mut combo, n) {
            break;
        }
    }
    Ok(ListDecodability::Pass { checks: checks as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::CodeParams;

    fn fixed(words: &[&str], classes: &[&[u8]]) -> Codebook {
        let n = words[0].len();
        let params = CodeParams::custom(n, 0.25, 0.25, words.len(), vec![0.1, 0.2], 2, 1).unwrap();
        let partitions = classes
            .iter()
            .map(|row| {
                (0..2u8)
                    .map(|c| IndexSet::new((0..n).filter(|&i| row[i] == c).map(|i| i + 1).collect()).unwrap())
                    .collect()
            })
            .collect();
        Codebook::from_parts(params, 0, words.iter().map(|w| w.parse().unwrap()).collect(), partitions).unwrap()
    }

    #[test]
    fn stat_full_and_zero_overlap() {
        let same = fixed(&["0000", "1111"], &[&[0, 1, 0, 1], &[0, 1, 0, 1]]);
        let t = IndexSet::full(4);
        assert_eq!(coherence_stat(&same, Message::new(1), Message::new(2), &t), 4);
        let opposite = fixed(&["0000", "1111"], &[&[0, 1, 0, 1], &[1, 0, 1, 0]]);
        assert_eq!(coherence_stat(&opposite, Message::new(1), Message::new(2), &t), 0);
    }

    #[test]
    fn identical_partitions_violate_everywhere() {
        let cb = fixed(&["0000", "1111", "0101"], &[&[0u8, 1, 0, 1][..]; 3]);
        let v = validate_coherence(&cb, 0.5, 0.25, CoherenceMode::Exhaustive { max_checks: 1 << 20 }).unwrap();
        // |T| in {1..4}: 15 sets per pair, 3 pairs.
        assert_eq!(v.checks, 45);
        assert_eq!(v.violations.len(), 45);
    }

    #[test]
    fn single_message_has_no_pairs() {
        let cb = fixed(&["0101"], &[&[0, 1, 0, 1]]);
        let v = validate_coherence(&cb, 0.0, 0.5, CoherenceMode::Exhaustive { max_checks: 10 }).unwrap();
        assert!(v.passed());
        assert_eq!(v.checks, 0);
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let cb = fixed(&["00000000", "11111111"], &[&[0; 8], &[1; 8]]);
        assert!(matches!(
            validate_coherence(&cb, 0.0, 0.0, CoherenceMode::Exhaustive { max_checks: 100 }),
            Err(CodebookError::CapExceeded { checks: 256, cap: 100 })
        ));
    }

    #[test]
    fn sampled_mode_counts_checks() {
        let cb = fixed(&["00000000", "11111111"], &[&[0, 1, 0, 1, 0, 1, 0, 1], &[1, 0, 1, 0, 1, 0, 1, 0]]);
        let v = validate_coherence(&cb, 0.0, 0.5, CoherenceMode::Sampled { samples: 50, seed: 1 }).unwrap();
        assert_eq!(v.checks, 50);
        assert!(v.passed());
    }

    #[test]
    fn duplicates_fail_list_decodability() {
        let cb = fixed(&["0110", "0110"], &[&[0; 4], &[0; 4]]);
        for w_u in 0..=4 {
            let verdict = validate_list_decodability(&cb, w_u, 0, 2, 1 << 20).unwrap();
            assert!(!verdict.passed(), "w_u = {w_u}");
        }
    }

    #[test]
    fn complementary_pair_passes_radius_zero() {
        let cb = fixed(&["0110", "1001"], &[&[0; 4], &[0; 4]]);
        assert!(validate_list_decodability(&cb, 4, 0, 2, 1 << 20).unwrap().passed());
        // Radius 2 at length 4 covers both.
        match validate_list_decodability(&cb, 4, 2, 2, 1 << 20).unwrap() {
            ListDecodability::Fail(w) => {
                assert_eq!(w.set, IndexSet::full(4));
                assert_eq!(w.center.to_string(), "0000");
                assert_eq!(w.messages, vec![Message::new(1), Message::new(2)]);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
