//! Decoder for the stochastic code.
//!
//! 1. Cut the received word at the first position `τ` where the prefix holds
//!    `⌊(R+ε/2)n⌋` unerased symbols.
//! 2. List every message whose base codeword disagrees with fewer than
//!    `list_threshold` unerased prefix symbols.
//! 3. For each pair in the list, find the first level pair `(k1,k2)` with
//!    `k1 ≠ k2` that covers enough unerased suffix positions, and keep the
//!    larger of its agreement and disagreement halves.
//! 4. Compare the two noise-level likelihoods on that set. The message that
//!    beats every other list member is the output.

use thiserror::Error;

use crate::codebook::{Codebook, Message};
use crate::word::{ChannelSymbol, IndexSet, ReceivedWord};

/// Log-likelihood margin below which two hypotheses count as tied.
pub const LOG_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
pub enum DecodeError {
    #[error("too few unerased symbols to place the prefix cut")]
    NoTau,
    #[error("no message is close to the received prefix")]
    EmptyList,
    #[error("a listed pair has no usable disambiguation set")]
    NoDisambigPair,
    #[error("no listed message beats all the others")]
    NoCondorcet,
}

impl DecodeError {
    pub const fn label(self) -> &'static str {
        match self {
            DecodeError::NoTau => "error_no_tau",
            DecodeError::EmptyList => "error_empty_list",
            DecodeError::NoDisambigPair => "error_no_disambig_pair",
            DecodeError::NoCondorcet => "error_no_condorcet",
        }
    }
}

/// One evaluated tournament match, always with `m1 < m2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub m1: Message,
    pub m2: Message,
    pub k1: usize,
    pub k2: usize,
    /// Size of the disambiguation set before splitting.
    pub full_size: usize,
    /// Size of the half that was kept.
    pub size: usize,
    pub agree: bool,
    pub winner: Message,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub result: Result<Message, DecodeError>,
    pub tau: Option<usize>,
    pub list: Vec<Message>,
    pub pairwise: Vec<PairRecord>,
}

/// Smallest `t` whose prefix `y_1..y_t` holds at least `target` unerased symbols.
pub fn compute_tau(y: &ReceivedWord, target: usize) -> Result<usize, DecodeError> {
    assert!(target >= 1, "prefix target must be positive");
    let mut seen = 0;
    for (i, s) in y.symbols().iter().enumerate() {
        if !s.is_erased() {
            seen += 1;
            if seen == target {
                return Ok(i + 1);
            }
        }
    }
    Err(DecodeError::NoTau)
}

fn mismatches(cb: &Codebook, m: Message, y: &[ChannelSymbol], stop_at: usize) -> usize {
    let mut count = 0;
    for (&u, s) in cb.codeword(m).iter().zip(y) {
        if s.bit().is_some_and(|b| b != u) {
            count += 1;
            if count >= stop_at {
                break;
            }
        }
    }
    count
}

pub fn build_list(cb: &Codebook, y: &ReceivedWord, tau: usize) -> Vec<Message> {
    let threshold = cb.params().list_threshold();
    let prefix = &y.symbols()[..tau];
    cb.messages().filter(|&m| mismatches(cb, m, prefix, threshold) < threshold).collect()
}

/// First `(k1, k2)` with `k1 ≠ k2`, in lexicographic order, whose set of
/// unerased suffix positions in `S(m1,k1) ∩ S(m2,k2)` reaches the
/// disambiguation threshold.
pub fn disambiguation_set(
    cb: &Codebook,
    y: &ReceivedWord,
    tau: usize,
    m1: Message,
    m2: Message,
) -> Result<(usize, usize, IndexSet), DecodeError> {
    assert_ne!(m1, m2, "disambiguation needs two distinct messages");
    let k = cb.levels();
    let (c1, c2) = (cb.classes(m1), cb.classes(m2));
    let mut counts = vec![0usize; k * k];
    for i in tau..cb.n() {
        if !y.symbols()[i].is_erased() {
            counts[c1[i] as usize * k + c2[i] as usize] += 1;
        }
    }
    let threshold = cb.params().disambig_threshold();
    let (a, b) = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && counts[a * k + b] >= threshold)
        .ok_or(DecodeError::NoDisambigPair)?;
    let v = (tau..cb.n())
        .filter(|&i| !y.symbols()[i].is_erased() && c1[i] as usize == a && c2[i] as usize == b)
        .map(|i| i + 1)
        .collect();
    Ok((a + 1, b + 1, IndexSet::new(v).expect("ascending")))
}

/// Splits `v` into the positions where `u(m1)` and `u(m2)` agree and where
/// they differ, returning the larger half (the agreement half on ties).
pub fn split_and_pick(cb: &Codebook, m1: Message, m2: Message, v: &IndexSet) -> (IndexSet, bool) {
    let (u1, u2) = (cb.codeword(m1), cb.codeword(m2));
    let (same, diff): (Vec<usize>, Vec<usize>) = v.iter().partition(|&i| u1[i - 1] == u2[i - 1]);
    if same.len() >= diff.len() {
        (IndexSet::new(same).expect("subset of a set"), true)
    } else {
        (IndexSet::new(diff).expect("subset of a set"), false)
    }
}

fn log_likelihood(q: f64, alpha: usize, size: usize) -> f64 {
    let term = |count: usize, prob: f64| if count == 0 { 0.0 } else { count as f64 * prob.ln() };
    term(alpha, q) + term(size - alpha, 1.0 - q)
}

/// Whether `m1` (noise level `k1` on `v`) is strictly more likely than `m2`
/// (noise level `k2` on `v`) to have produced `y` on `v`.
pub fn beats(
    cb: &Codebook,
    y: &ReceivedWord,
    m1: Message,
    m2: Message,
    k1: usize,
    k2: usize,
    v: &IndexSet,
) -> bool {
    let alpha = |m: Message| {
        let u = cb.codeword(m);
        v.iter().filter(|&i| y.symbols()[i - 1].bit().is_some_and(|b| b != u[i - 1])).count()
    };
    let (q1, q2) = (cb.params().noise_level(k1), cb.params().noise_level(k2));
    let l1 = log_likelihood(q1, alpha(m1), v.len());
    let l2 = log_likelihood(q2, alpha(m2), v.len());
    l1 > l2 + LOG_TIE_TOLERANCE
}

pub fn decode(cb: &Codebook, y: &ReceivedWord) -> DecodeOutcome {
    assert_eq!(y.len(), cb.n(), "received word has the wrong length");
    let mut outcome = DecodeOutcome { result: Err(DecodeError::NoTau), tau: None, list: Vec::new(), pairwise: Vec::new() };
    let tau = match compute_tau(y, cb.params().tau_target()) {
        Ok(t) => t,
        Err(e) => {
            outcome.result = Err(e);
            return outcome;
        }
    };
    outcome.tau = Some(tau);
    outcome.list = build_list(cb, y, tau);
    let list = &outcome.list;
    if list.is_empty() {
        outcome.result = Err(DecodeError::EmptyList);
        return outcome;
    }
    let mut wins = vec![0usize; list.len()];
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            let (m1, m2) = (list[i], list[j]);
            let (k1, k2, v) = match disambiguation_set(cb, y, tau, m1, m2) {
                Ok(found) => found,
                Err(e) => {
                    outcome.result = Err(e);
                    return outcome;
                }
            };
            let (chosen, agree) = split_and_pick(cb, m1, m2, &v);
            let first_wins = beats(cb, y, m1, m2, k1, k2, &chosen);
            wins[if first_wins { i } else { j }] += 1;
            outcome.pairwise.push(PairRecord {
                m1,
                m2,
                k1,
                k2,
                full_size: v.len(),
                size: chosen.len(),
                agree,
                winner: if first_wins { m1 } else { m2 },
            });
        }
    }
    outcome.result = wins
        .iter()
        .position(|&w| w + 1 == list.len())
        .map(|i| list[i])
        .ok_or(DecodeError::NoCondorcet);
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::CodeParams;
    use crate::word::Word;

    fn rw(s: &str) -> ReceivedWord {
        s.parse().unwrap()
    }

    fn code(words: &[&str], partitions: Vec<Vec<Vec<usize>>>, q: Vec<f64>, list: usize, dis: usize) -> Codebook {
        let n = words[0].len();
        let params = CodeParams::custom(n, 0.25, 0.25, words.len(), q, list, dis).unwrap();
        let words = words.iter().map(|w| w.parse::<Word>().unwrap()).collect();
        let parts = partitions
            .into_iter()
            .map(|sets| sets.into_iter().map(|s| IndexSet::new(s).unwrap()).collect())
            .collect();
        Codebook::from_parts(params, 0, words, parts).unwrap()
    }

    #[test]
    fn tau_examples() {
        assert_eq!(compute_tau(&rw("0101"), 3), Ok(3));
        assert_eq!(compute_tau(&rw("e1e01"), 2), Ok(4));
        assert_eq!(compute_tau(&rw("eeee"), 1), Err(DecodeError::NoTau));
    }

    #[test]
    fn list_examples() {
        let all = vec![vec![1, 2, 3, 4], vec![]];
        let cb = code(&["0000", "1111"], vec![all.clone(), all], vec![0.1, 0.2], 2, 1);
        let y = rw("00e0");
        assert_eq!(build_list(&cb, &y, 4), vec![Message::new(1)]);
        assert_eq!(build_list(&cb, &rw("eeee"), 4).len(), 2);
    }

    #[test]
    fn disambiguation_examples() {
        let cb = code(
            &["000000", "000000"],
            vec![
                vec![vec![1, 2, 3, 4, 5, 6], vec![]],
                vec![vec![1, 2], vec![3, 4, 5, 6]],
            ],
            vec![0.1, 0.2],
            2,
            3,
        );
        let y = rw("00e000");
        let (m1, m2) = (Message::new(1), Message::new(2));
        let (k1, k2, v) = disambiguation_set(&cb, &y, 2, m1, m2).unwrap();
        assert_eq!((k1, k2), (1, 2));
        assert_eq!(v.as_slice(), &[4, 5, 6]);
        assert_eq!(disambiguation_set(&cb, &y, 4, m1, m2), Err(DecodeError::NoDisambigPair));
        let same = vec![vec![1, 2, 3], vec![4, 5, 6]];
        let cb = code(&["000000", "000000"], vec![same.clone(), same], vec![0.1, 0.2], 2, 1);
        assert_eq!(disambiguation_set(&cb, &y, 0, m1, m2), Err(DecodeError::NoDisambigPair));
    }

    #[test]
    fn split_examples() {
        let all = vec![vec![1, 2, 3, 4], vec![]];
        let cb = code(&["0011", "0101"], vec![all.clone(), all], vec![0.1, 0.2], 2, 1);
        let (m1, m2) = (Message::new(1), Message::new(2));
        let v = IndexSet::new(vec![1, 4]).unwrap();
        assert_eq!(split_and_pick(&cb, m1, m2, &v), (v.clone(), true));
        let v = IndexSet::new(vec![2, 3]).unwrap();
        assert_eq!(split_and_pick(&cb, m1, m2, &v), (v.clone(), false));
        let v = IndexSet::full(4);
        assert_eq!(split_and_pick(&cb, m1, m2, &v).0.as_slice(), &[1, 4]);
    }

    #[test]
    fn beats_examples() {
        let all = vec![(1..=8).collect::<Vec<_>>(), vec![]];
        let cb = code(&["00000000", "11111111"], vec![all.clone(), all], vec![0.25, 0.5], 2, 1);
        let (m1, m2) = (Message::new(1), Message::new(2));
        let v = IndexSet::full(8);
        // alpha = 2 for u(m1) = 0^8 and alpha = 6 for u(m2) = 1^8; compare a
        // balanced q2 = 1/2, where alpha does not matter.
        let y = rw("11000000");
        let ratio = 0.25f64.powi(2) * 0.75f64.powi(6) / 0.5f64.powi(8);
        assert!((ratio - 2.8477).abs() < 1e-3);
        assert!(beats(&cb, &y, m1, m2, 1, 2, &v));
        assert!(!beats(&cb, &y, m2, m1, 2, 1, &v));
        // extreme likelihoods
        assert!(beats(&cb, &rw("00000000"), m1, m2, 1, 2, &v));
        // an exact tie: identical codewords and levels
        assert!(!beats(&cb, &y, m1, m1, 1, 1, &v));
    }

    #[test]
    fn singleton_and_noiseless_decode() {
        let a = vec![vec![1, 2, 3, 4, 5, 6, 7, 8], vec![]];
        let cb = code(&["00001111", "11110000"], vec![a.clone(), a], vec![0.1, 0.2], 2, 1);
        let out = decode(&cb, &rw("00001111"));
        assert_eq!(out.list, vec![Message::new(1)]);
        assert_eq!(out.result, Ok(Message::new(1)));
        assert!(out.pairwise.is_empty());
        assert_eq!(decode(&cb, &rw("eeeeeeee")).result, Err(DecodeError::NoTau));
    }
}
