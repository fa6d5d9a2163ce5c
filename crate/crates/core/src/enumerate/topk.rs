//! Bounded collection of the smallest extremal records seen so far.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::{ExactRatio, GraphCode};

/// One candidate for the extremal list, ordered by `(delta, ratio, code)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtremalRecord {
    pub code: GraphCode,
    pub delta: i32,
    pub ratio: ExactRatio,
}

impl Ord for ExtremalRecord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta
            .cmp(&other.delta)
            .then_with(|| self.ratio.cmp(&other.ratio))
            .then_with(|| self.code.cmp(&other.code))
    }
}

impl PartialOrd for ExtremalRecord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Keeps the `capacity` smallest records. The heap top is the current
/// worst kept record, so rejection is a single comparison.
#[derive(Debug, Clone)]
pub struct TopK {
    capacity: usize,
    heap: BinaryHeap<ExtremalRecord>,
}

impl TopK {
    pub fn new(capacity: usize) -> Self {
        TopK { capacity, heap: BinaryHeap::with_capacity(capacity.min(1 << 16) + 1) }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// `false` when no record with this delta could be kept.
    #[inline]
    pub fn admits_delta(&self, delta: i32) -> bool {
        if self.capacity == 0 {
            return false;
        }
        match self.heap.peek() {
            Some(worst) if self.heap.len() == self.capacity => delta <= worst.delta,
            _ => true,
        }
    }

    pub fn offer(&mut self, record: ExtremalRecord) {
        if self.capacity == 0 {
            return;
        }
        if self.heap.len() < self.capacity {
            self.heap.push(record);
        } else if let Some(mut worst) = self.heap.peek_mut() {
            if record < *worst {
                *worst = record;
            }
        }
    }

    pub fn extend<I: IntoIterator<Item = ExtremalRecord>>(&mut self, records: I) {
        for r in records {
            self.offer(r);
        }
    }

    /// Kept records, ascending.
    pub fn into_sorted_vec(self) -> Vec<ExtremalRecord> {
        self.heap.into_sorted_vec()
    }
}
