use std::ops::Range;

use crate::codebook::{Codebook, Message};
use crate::word::{Bit, ReceivedWord};

/// Base codewords sorted lexicographically (position 1 most significant).
///
/// The messages sharing any prefix occupy one contiguous slot range, so a
/// consistency set is a `Range<usize>` and refining it by one observed bit
/// is a binary search.
#[derive(Debug, Clone)]
pub struct CodeTree<'a> {
    cb: &'a Codebook,
    order: Vec<u32>,
}

impl<'a> CodeTree<'a> {
    pub fn new(cb: &'a Codebook) -> Self {
        assert!(cb.num_messages() <= u32::MAX as usize);
        let mut order: Vec<u32> = (0..cb.num_messages() as u32).collect();
        // Stable, so duplicate codewords stay in message order.
        order.sort_by(|&a, &b| {
            cb.codeword(Message::from_index(a as usize))
                .cmp(cb.codeword(Message::from_index(b as usize)))
        });
        CodeTree { cb, order }
    }

    pub fn codebook(&self) -> &'a Codebook {
        self.cb
    }

    pub fn root(&self) -> Range<usize> {
        0..self.order.len()
    }

    pub fn message(&self, slot: usize) -> Message {
        Message::from_index(self.order[slot] as usize)
    }

    pub fn messages(&self, range: Range<usize>) -> impl Iterator<Item = Message> + '_ {
        range.map(|s| self.message(s))
    }

    /// Splits `range` by the bit at 1-based `pos` into the slots with a 0 and
    /// the slots with a 1. Every codeword in `range` must share positions
    /// `1..pos`.
    pub fn split(&self, range: Range<usize>, pos: usize) -> (Range<usize>, Range<usize>) {
        let offset = self.order[range.clone()].partition_point(|&m| {
            self.cb.codeword(Message::from_index(m as usize))[pos - 1] == Bit::Zero
        });
        let mid = range.start + offset;
        (range.start..mid, mid..range.end)
    }

    /// Narrows `range` to the codewords whose bit at `pos` equals `bit`.
    pub fn refine(&self, range: Range<usize>, pos: usize, bit: Bit) -> Range<usize> {
        let (zeros, ones) = self.split(range, pos);
        match bit {
            Bit::Zero => zeros,
            Bit::One => ones,
        }
    }

    /// Range of codewords equal to `prefix` on positions `1..=prefix.len()`.
    pub fn prefix_range(&self, prefix: &[Bit]) -> Range<usize> {
        prefix
            .iter()
            .enumerate()
            .fold(self.root(), |r, (i, &b)| self.refine(r, i + 1, b))
    }

    /// Messages whose base codeword agrees with every unerased symbol of `y`,
    /// stopping once `limit` have been found.
    pub fn consistent_messages(&self, y: &ReceivedWord, limit: usize) -> Vec<Message> {
        let n = self.cb.n();
        let mut found = Vec::new();
        if y.len() != n || limit == 0 {
            return found;
        }
        let mut stack = vec![(self.root(), 1usize)];
        while let Some((range, pos)) = stack.pop() {
            if range.is_empty() {
                continue;
            }
            if pos > n {
                for m in self.messages(range) {
                    found.push(m);
                    if found.len() == limit {
                        found.sort_unstable();
                        return found;
                    }
                }
                continue;
            }
            match y.at(pos).bit() {
                Some(b) => stack.push((self.refine(range, pos, b), pos + 1)),
                None => {
                    let (zeros, ones) = self.split(range, pos);
                    stack.push((ones, pos + 1));
                    stack.push((zeros, pos + 1));
                }
            }
        }
        found.sort_unstable();
        found
    }

    pub fn count_consistent(&self, y: &ReceivedWord) -> usize {
        self.consistent_messages(y, usize::MAX).len()
    }
}
