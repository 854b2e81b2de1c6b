//! Straight-line reference implementations used as test oracles, plus
//! generators for small random instances. They use only public accessors
//! (`codeword`, `partition`, `noise_level`) and direct enumeration.
#![allow(dead_code)]

use std::path::PathBuf;

use delayed_erasure::codebook::{load_codebook, CodeParams, Codebook, Message};
use delayed_erasure::word::{Bit, ChannelSymbol, IndexSet, ReceivedWord, Word};
use rand::Rng;

pub fn fixture(name: &str) -> Codebook {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    load_codebook(path).expect("fixture loads")
}

pub fn pilot_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/pilot").join(name)
}

/// Outcome of the reference decoder, labelled like the trial records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaiveOutcome {
    Decoded(usize),
    NoTau,
    EmptyList,
    NoPair,
    NoWinner,
}

/// Linear scan for the prefix cut.
pub fn naive_tau(y: &ReceivedWord, target: usize) -> Option<usize> {
    let mut count = 0;
    for t in 1..=y.len() {
        if y.at(t) != ChannelSymbol::Erased {
            count += 1;
        }
        if count >= target {
            return Some(t);
        }
    }
    None
}

fn likelihood(q: f64, alpha: usize, size: usize) -> f64 {
    q.powi(alpha as i32) * (1.0 - q).powi((size - alpha) as i32)
}

/// Reference decoder following the four steps by direct enumeration, with
/// likelihoods compared as plain products.
pub fn naive_decode(cb: &Codebook, y: &ReceivedWord) -> (NaiveOutcome, Option<usize>, Vec<usize>) {
    let params = cb.params();
    let n = cb.n();
    let rate = 1.0 - params.p() - params.epsilon();
    let target = (((rate + params.epsilon() / 2.0) * n as f64) + 1e-9).floor().max(1.0) as usize;
    let Some(tau) = naive_tau(y, target) else {
        return (NaiveOutcome::NoTau, None, vec![]);
    };

    let mut list = Vec::new();
    for m in 1..=cb.num_messages() {
        let u = cb.codeword(Message::new(m));
        let mut mismatches = 0;
        for i in 1..=tau {
            if let Some(b) = y.at(i).bit() {
                if b != u[i - 1] {
                    mismatches += 1;
                }
            }
        }
        if mismatches < params.list_threshold() {
            list.push(m);
        }
    }
    if list.is_empty() {
        return (NaiveOutcome::EmptyList, Some(tau), list);
    }

    let k_count = cb.levels();
    let mut beaten_all = vec![true; list.len()];
    for a in 0..list.len() {
        for b in a + 1..list.len() {
            let (m1, m2) = (Message::new(list[a]), Message::new(list[b]));
            let mut found = None;
            'search: for k1 in 1..=k_count {
                for k2 in 1..=k_count {
                    if k1 == k2 {
                        continue;
                    }
                    let s1 = cb.partition(m1, k1);
                    let s2 = cb.partition(m2, k2);
                    let v: Vec<usize> = (tau + 1..=n)
                        .filter(|&i| y.at(i) != ChannelSymbol::Erased && s1.contains(i) && s2.contains(i))
                        .collect();
                    if v.len() >= params.disambig_threshold() {
                        found = Some((k1, k2, v));
                        break 'search;
                    }
                }
            }
            let Some((k1, k2, v)) = found else {
                return (NaiveOutcome::NoPair, Some(tau), list);
            };
            let (u1, u2) = (cb.codeword(m1), cb.codeword(m2));
            let v0: Vec<usize> = v.iter().copied().filter(|&i| u1[i - 1] == u2[i - 1]).collect();
            let v1: Vec<usize> = v.iter().copied().filter(|&i| u1[i - 1] != u2[i - 1]).collect();
            let chosen = if v0.len() >= v1.len() { v0 } else { v1 };
            let alpha = |u: &[Bit]| chosen.iter().filter(|&&i| y.at(i).bit() != Some(u[i - 1])).count();
            let l1 = likelihood(params.noise_level(k1), alpha(u1), chosen.len());
            let l2 = likelihood(params.noise_level(k2), alpha(u2), chosen.len());
            if l1 > l2 * (1e-12f64).exp() {
                beaten_all[b] = false;
            } else {
                beaten_all[a] = false;
            }
        }
    }
    let winners: Vec<usize> = (0..list.len()).filter(|&i| beaten_all[i]).map(|i| list[i]).collect();
    let outcome = match winners.as_slice() {
        [w] => NaiveOutcome::Decoded(*w),
        _ => NaiveOutcome::NoWinner,
    };
    (outcome, Some(tau), list)
}

/// Every (pair, T) combination that violates coherence, found by a triple
/// loop over pairs, subsets and levels.
pub fn naive_coherence_violations(cb: &Codebook, eta1: f64, eta2: f64) -> (u64, Vec<(usize, usize, Vec<usize>, usize)>) {
    let n = cb.n();
    let min_size = ((eta2 * n as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut checks = 0;
    let mut out = Vec::new();
    for a in 1..=cb.num_messages() {
        for b in a + 1..=cb.num_messages() {
            for mask in 0u64..(1 << n) {
                let t: Vec<usize> = (1..=n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
                if t.len() < min_size {
                    continue;
                }
                checks += 1;
                let mut stat = 0;
                for k in 1..=cb.levels() {
                    let sa = cb.partition(Message::new(a), k);
                    let sb = cb.partition(Message::new(b), k);
                    stat += t.iter().filter(|&&i| sa.contains(i) && sb.contains(i)).count();
                }
                let bound = t.len() as f64 / cb.levels() as f64 * (1.0 + eta1);
                if stat as f64 > bound {
                    out.push((a, b, t, stat));
                }
            }
        }
    }
    (checks, out)
}

/// Messages inside the radius-`w_e` ball around `center` after restricting to `t`.
pub fn ball_members(cb: &Codebook, t: &[usize], center: &[Bit], w_e: usize) -> Vec<usize> {
    (1..=cb.num_messages())
        .filter(|&m| {
            let u = cb.codeword(Message::new(m));
            t.iter().zip(center).filter(|(&i, &c)| u[i - 1] != c).count() <= w_e
        })
        .collect()
}

/// Brute-force verdict: true iff no ball is overfull.
pub fn naive_list_decodable(cb: &Codebook, w_u: usize, w_e: usize, s: usize) -> bool {
    let n = cb.n();
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize != w_u {
            continue;
        }
        let t: Vec<usize> = (1..=n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
        for c in 0u64..(1 << w_u) {
            let center: Vec<Bit> = (0..w_u).map(|j| Bit::from_bool(c >> j & 1 == 1)).collect();
            if ball_members(cb, &t, &center, w_e).len() >= s {
                return false;
            }
        }
    }
    true
}

/// A random codebook with `n <= 12`, `M <= 4`, 2 or 3 levels.
pub fn small_codebook<R: Rng>(rng: &mut R) -> Codebook {
    let n = rng.gen_range(4..=12);
    let m = rng.gen_range(1..=4);
    let k = rng.gen_range(2..=3);
    let levels = [vec![0.1, 0.3], vec![0.05, 0.15, 0.35]][k - 2].clone();
    let p = rng.gen_range(0.05..0.45);
    let epsilon = rng.gen_range(0.05..(0.95 - p));
    let params = CodeParams::custom(n, p, epsilon, m, levels, rng.gen_range(1..=4), rng.gen_range(1..=2)).unwrap();
    let words = (0..m).map(|_| Word::new((0..n).map(|_| Bit::from_bool(rng.gen())).collect())).collect();
    let partitions = (0..m)
        .map(|_| {
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
            (1..=k)
                .map(|level| IndexSet::new((1..=n).filter(|&i| labels[i - 1] == level).collect()).unwrap())
                .collect()
        })
        .collect();
    Codebook::from_parts(params, 0, words, partitions).unwrap()
}

/// A noisy, partly erased version of a random codeword.
pub fn small_received<R: Rng>(cb: &Codebook, rng: &mut R) -> ReceivedWord {
    let m = Message::new(rng.gen_range(1..=cb.num_messages()));
    let flip = rng.gen_range(0.0..0.3);
    let erase = rng.gen_range(0.0..0.5);
    ReceivedWord::new(
        cb.codeword(m)
            .iter()
            .map(|&b| {
                if rng.gen_bool(erase) {
                    ChannelSymbol::Erased
                } else if rng.gen_bool(flip) {
                    b.flip().into()
                } else {
                    b.into()
                }
            })
            .collect(),
    )
}
