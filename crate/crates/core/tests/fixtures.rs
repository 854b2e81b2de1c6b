mod common;

use common::fixture;
use delayed_erasure::adversary::{
    apply_channel, consistency_split, strategy_wait_push, AttackPhase, CodeTree, WaitPushConfig,
};
use delayed_erasure::codebook::{coherence_stat, CodeParams, Codebook, Message};
use delayed_erasure::decoder::disambiguation_set;
use delayed_erasure::word::{IndexSet, ReceivedWord};

fn five_word_config() -> WaitPushConfig {
    WaitPushConfig {
        upper: Some(4.0),
        lower: Some(2.0),
        forced_plausible: Some(Message::new(2)),
        ..WaitPushConfig::new(4.0 / 9.0, 1.0 / 9.0, 2.0 / 9.0)
    }
}

#[test]
fn wait_push_on_five_words() {
    let cb = fixture("wait_push_five_words.code");
    assert_eq!(cb.params().budget(), 4);
    let tree = CodeTree::new(&cb);
    let cfg = five_word_config();
    assert_eq!(cfg.thresholds(9).wait1_len, 3);
    let mut adv = strategy_wait_push(&tree, &cfg, 0).unwrap();
    let x = cb.word(Message::new(1));
    let out = apply_channel(&x, &mut adv, cb.params().budget());
    assert_eq!(out.received.erased_positions(), IndexSet::new(vec![5, 8, 9]).unwrap());
    assert_eq!(out.overrides, 0);
    assert_eq!(adv.transition_time(), Some(5));
    assert_eq!(adv.phase_reached(), AttackPhase::Push);
    for m in [1, 2] {
        assert!(out.received.is_consistent_with(cb.codeword(Message::new(m))));
    }
    let phases: Vec<_> = out.trace.iter().map(|r| r.phase.unwrap()).collect();
    assert_eq!(&phases[..3], &[AttackPhase::Wait1; 3]);
    assert_eq!(phases[3], AttackPhase::Wait2);
    assert!(phases[4..].iter().all(|&p| p == AttackPhase::Push));
    let surviving: Vec<_> = out.trace.iter().map(|r| r.surviving.unwrap()).collect();
    assert_eq!(surviving, vec![5, 5, 4, 4, 3, 2, 2, 2, 1]);
}

#[test]
fn second_position_isolates_the_last_word() {
    let cb = fixture("wait_push_five_words.code");
    let all: Vec<Message> = cb.messages().collect();
    let split = consistency_split(&cb, &all, 2);
    assert_eq!(split.phi1, vec![Message::new(5)]);
    assert_eq!((split.larger, split.smaller), (4, 1));
}

#[test]
fn single_codeword_is_never_erased() {
    let params = CodeParams::custom(9, 4.0 / 9.0, 0.05, 1, vec![0.1, 0.2], 1, 1).unwrap();
    let cb = Codebook::from_words(params, vec!["100101011".parse().unwrap()]).unwrap();
    let tree = CodeTree::new(&cb);
    let cfg = WaitPushConfig { upper: Some(2.0), lower: Some(1.0), ..five_word_config() };
    let cfg = WaitPushConfig { forced_plausible: None, ..cfg };
    let mut adv = strategy_wait_push(&tree, &cfg, 3).unwrap();
    let x = cb.word(Message::new(1));
    let out = apply_channel(&x, &mut adv, 4);
    assert_eq!(adv.phase_reached(), AttackPhase::Push);
    assert_eq!(adv.plausible(), Some(Message::new(1)));
    assert_eq!(out.received, x.to_received());
}

#[test]
fn five_level_pair() {
    let cb = fixture("two_messages_five_levels.code");
    let (m, m2) = (Message::new(1), Message::new(2));
    assert_eq!(coherence_stat(&cb, m, m2, &IndexSet::full(25)), 4);
    let y: ReceivedWord = cb.word(m).to_received();
    let (k1, k2, v) = disambiguation_set(&cb, &y, 0, m, m2).unwrap();
    assert_eq!((k1, k2), (1, 2));
    assert_eq!(v.as_slice(), &[1, 20]);
    let coherent: Vec<usize> = (1..=25).filter(|&i| cb.level_at(m, i) == cb.level_at(m2, i)).collect();
    assert_eq!(coherent, vec![8, 12, 16, 18]);
    let largest = (1..=5)
        .flat_map(|a| (1..=5).map(move |b| (a, b)))
        .map(|(a, b)| {
            let s = cb.partition(m, a);
            cb.partition(m2, b).iter().filter(|&i| s.contains(i)).count()
        })
        .max()
        .unwrap();
    assert_eq!(largest, 2);
    let erased_first: ReceivedWord = format!("e{}", &cb.word(m).to_string()[1..]).parse().unwrap();
    let (k1, k2, v) = disambiguation_set(&cb, &erased_first, 0, m, m2).unwrap();
    assert_ne!((k1, k2, v.as_slice().to_vec()), (1, 2, vec![1, 20]));
}
