//! Indexed min-priority queue over vertices, ordered by lexicographic keys.
//!
//! A binary heap plus a vertex-to-slot map gives `O(log n)` insert, update
//! and remove, and `O(1)` membership tests and `find_min`.

use alloc::vec::Vec;

use crate::nngraph::VertexId;

/// Two-component priority `(min(g, lmc) + h, min(g, lmc))`.
///
/// The derived `PartialOrd` is lexicographic: `a <= b` iff `a.k1 < b.k1` or
/// `a.k1 == b.k1 && a.k2 <= b.k2`. Keys are compared exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Key {
    pub k1: f64,
    pub k2: f64,
}

impl Key {
    pub const INFINITE: Key = Key {
        k1: f64::INFINITY,
        k2: f64::INFINITY,
    };

    pub fn new(k1: f64, k2: f64) -> Self {
        Key { k1, k2 }
    }

    pub fn is_infinite(&self) -> bool {
        self.k1 == f64::INFINITY
    }
}

/// `a ≼ b`.
pub fn key_leq(a: Key, b: Key) -> bool {
    a.k1 < b.k1 || (a.k1 == b.k1 && a.k2 <= b.k2)
}

/// `a ≺ b`.
pub fn key_lt(a: Key, b: Key) -> bool {
    a.k1 < b.k1 || (a.k1 == b.k1 && a.k2 < b.k2)
}

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone, Default)]
pub struct IndexedQueue {
    heap: Vec<(VertexId, Key)>,
    slots: Vec<usize>,
}

impl IndexedQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slots.get(v.0).is_some_and(|&s| s != ABSENT)
    }

    pub fn key_of(&self, v: VertexId) -> Option<Key> {
        match self.slots.get(v.0) {
            Some(&slot) if slot != ABSENT => Some(self.heap[slot].1),
            _ => None,
        }
    }

    /// Member with the least key; ties are resolved arbitrarily.
    pub fn find_min(&self) -> Option<(VertexId, Key)> {
        self.heap.first().copied()
    }

    /// Least key in the queue, or [`Key::INFINITE`] when empty.
    pub fn top_key(&self) -> Key {
        self.heap.first().map_or(Key::INFINITE, |&(_, k)| k)
    }

    /// # Panics
    /// If `v` is already queued.
    pub fn insert(&mut self, v: VertexId, key: Key) {
        assert!(!self.contains(v), "vertex {v} is already queued");
        if self.slots.len() <= v.0 {
            self.slots.resize(v.0 + 1, ABSENT);
        }
        let slot = self.heap.len();
        self.heap.push((v, key));
        self.slots[v.0] = slot;
        self.sift_up(slot);
    }

    /// # Panics
    /// If `v` is not queued.
    pub fn update(&mut self, v: VertexId, key: Key) {
        let slot = self.slot(v);
        let old = self.heap[slot].1;
        self.heap[slot].1 = key;
        if key_lt(key, old) {
            self.sift_up(slot);
        } else {
            self.sift_down(slot);
        }
    }

    /// # Panics
    /// If `v` is not queued.
    pub fn remove(&mut self, v: VertexId) {
        let slot = self.slot(v);
        self.remove_slot(slot);
    }

    pub fn pop_min(&mut self) -> Option<(VertexId, Key)> {
        let min = self.find_min()?;
        self.remove_slot(0);
        Some(min)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Key)> + '_ {
        self.heap.iter().copied()
    }

    fn slot(&self, v: VertexId) -> usize {
        match self.slots.get(v.0) {
            Some(&slot) if slot != ABSENT => slot,
            _ => panic!("vertex {v} is not queued"),
        }
    }

    fn remove_slot(&mut self, slot: usize) {
        let last = self.heap.len() - 1;
        self.swap(slot, last);
        let (removed, _) = self.heap.pop().expect("non-empty heap");
        self.slots[removed.0] = ABSENT;
        if slot < self.heap.len() {
            self.sift_down(slot);
            self.sift_up(slot);
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.slots[self.heap[a].0 .0] = a;
        self.slots[self.heap[b].0 .0] = b;
    }

    fn sift_up(&mut self, mut slot: usize) {
        while slot > 0 {
            let parent = (slot - 1) / 2;
            if !key_lt(self.heap[slot].1, self.heap[parent].1) {
                break;
            }
            self.swap(slot, parent);
            slot = parent;
        }
    }

    fn sift_down(&mut self, mut slot: usize) {
        let len = self.heap.len();
        loop {
            let left = 2 * slot + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && key_lt(self.heap[right].1, self.heap[left].1) {
                right
            } else {
                left
            };
            if !key_lt(self.heap[child].1, self.heap[slot].1) {
                break;
            }
            self.swap(slot, child);
            slot = child;
        }
    }
}
