//! Stack over key-increasing elements with range reporting by canonical sets.
//!
//! The content is kept as a forest of perfect trees (ranks non-increasing, at
//! most two trees per rank). Every tree ever created is a canonical set living
//! in an append-only arena, so answers stay valid after later operations. Each
//! operation records a snapshot of the forest roots; earlier states can be
//! queried by version.
//!
//! The buffered variant keeps the top elements as loose singletons in a FIFO of
//! capacity `3 * ceil(log2 n)` and flushes the oldest `ceil(log2 n)` of them
//! as one block when it fills up.

use std::ops::RangeBounds;

use thiserror::Error;

use crate::chains::{Keyed, NodeArena, NodeRef, Piece, NIL};

pub type Version = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StackError {
    #[error("pushed key is not larger than the current top key")]
    NonMonotoneKey,
    #[error("cannot pop {k} elements from a stack of size {size}")]
    Underflow { k: usize, size: usize },
    #[error("unknown version {0}")]
    UnknownVersion(Version),
}

/// One part of a report: a registered canonical set or explicit elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part<E> {
    Canonical(NodeRef),
    Loose(Vec<E>),
}

#[derive(Debug, Clone, Copy)]
struct Snap {
    roots_start: u32,
    roots_len: u32,
    buf_top: u32,
    buf_len: u32,
    size: u32,
}

/// `(capacity, flush size)` of the buffer for a strip holding `n` elements.
pub fn buffer_params(n: usize) -> (usize, usize) {
    let lg = (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize;
    (3 * lg, lg)
}

#[derive(Debug, Clone)]
pub struct RangeStack<E> {
    arena: NodeArena<E>,
    forest: Vec<NodeRef>,
    size: usize,
    buffer: Option<(usize, usize)>,
    cells: Vec<(E, u32)>,
    buf_top: u32,
    buf_len: u32,
    snap_roots: Vec<NodeRef>,
    snaps: Vec<Snap>,
}

impl<E: Keyed> Default for RangeStack<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E: Keyed> RangeStack<E> {
    pub fn new() -> Self {
        let mut s = RangeStack {
            arena: NodeArena::new(),
            forest: Vec::new(),
            size: 0,
            buffer: None,
            cells: Vec::new(),
            buf_top: NIL,
            buf_len: 0,
            snap_roots: Vec::new(),
            snaps: Vec::new(),
        };
        s.record();
        s
    }

    /// Buffered stack sized for a strip that will hold at most `n` elements.
    pub fn buffered(n: usize) -> Self {
        Self::with_buffer(buffer_params(n))
    }

    pub fn with_buffer((cap, flush): (usize, usize)) -> Self {
        assert!(flush >= 1 && flush <= cap);
        let mut s = Self::new();
        s.buffer = Some((cap, flush));
        s
    }

    pub fn arena(&self) -> &NodeArena<E> {
        &self.arena
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn version(&self) -> Version {
        (self.snaps.len() - 1) as Version
    }

    pub fn canonical_count(&self) -> usize {
        self.arena.node_count()
    }

    pub fn canonical_weight(&self) -> usize {
        self.arena.weight()
    }

    pub fn nonsingleton_count(&self) -> usize {
        (0..self.arena.node_count() as NodeRef).filter(|&r| self.arena.node(r).len > 1).count()
    }

    /// Ranks of the current forest, bottom to top.
    pub fn ranks(&self) -> Vec<u8> {
        self.forest.iter().map(|&r| self.arena.node(r).rank).collect()
    }

    /// Sizes of the current forest's trees, bottom to top.
    pub fn tree_sizes(&self) -> Vec<usize> {
        self.forest.iter().map(|&r| self.arena.node(r).len as usize).collect()
    }

    pub fn buffer_len(&self) -> usize {
        self.buf_len as usize
    }

    pub fn top(&self) -> Option<E> {
        if self.buf_len > 0 {
            Some(self.cells[self.buf_top as usize].0)
        } else {
            self.forest.last().map(|&r| *self.arena.run(r).last().expect("non-empty run"))
        }
    }

    pub fn push(&mut self, e: E) -> Result<Version, StackError> {
        if self.top().is_some_and(|t| t.key() >= e.key()) {
            return Err(StackError::NonMonotoneKey);
        }
        match self.buffer {
            None => {
                let leaf = self.arena.leaf(&[e]);
                self.add_tree(leaf);
            }
            Some((cap, flush)) => {
                if self.buf_len as usize == cap {
                    let mut newest_first = self.buffer_elems(self.buf_top, self.buf_len);
                    newest_first.reverse();
                    let block = self.arena.leaf(&newest_first[..flush]);
                    self.add_tree(block);
                    self.buf_len -= flush as u32;
                }
                self.cells.push((e, self.buf_top));
                self.buf_top = (self.cells.len() - 1) as u32;
                self.buf_len += 1;
            }
        }
        self.size += 1;
        Ok(self.record())
    }

    pub fn pop(&mut self, k: usize) -> Result<Version, StackError> {
        if k > self.size {
            return Err(StackError::Underflow { k, size: self.size });
        }
        self.size -= k;
        let from_buf = k.min(self.buf_len as usize);
        for _ in 0..from_buf {
            self.buf_top = self.cells[self.buf_top as usize].1;
        }
        self.buf_len -= from_buf as u32;
        let mut k = k - from_buf;
        while k > 0 {
            let t = self.forest.pop().expect("size accounting");
            let len = self.arena.node(t).len as usize;
            if len <= k {
                k -= len;
                continue;
            }
            self.split_into_forest(t, len - k);
            break;
        }
        Ok(self.record())
    }

    /// Replace tree `t` (already removed) by its first `keep` elements.
    fn split_into_forest(&mut self, t: NodeRef, mut keep: usize) {
        let mut node = t;
        while keep > 0 {
            let n = *self.arena.node(node);
            if keep == n.len as usize {
                self.forest.push(node);
                break;
            }
            if n.is_leaf() {
                let kept: Vec<E> = self.arena.run(node)[..keep].to_vec();
                debug_assert_eq!(self.buf_len, 0);
                self.buf_top = NIL;
                for e in kept {
                    self.cells.push((e, self.buf_top));
                    self.buf_top = (self.cells.len() - 1) as u32;
                    self.buf_len += 1;
                }
                break;
            }
            let left_len = self.arena.node(n.left).len as usize;
            if keep >= left_len {
                self.forest.push(n.left);
                keep -= left_len;
                node = n.right;
            } else {
                node = n.left;
            }
        }
    }

    fn add_tree(&mut self, t: NodeRef) {
        self.forest.push(t);
        let mut pos = self.forest.len() - 1;
        while pos >= 2 {
            let r = |i: usize| self.arena.node(self.forest[i]).rank;
            if !(r(pos - 2) == r(pos - 1) && r(pos - 1) == r(pos)) {
                break;
            }
            let merged = self.arena.join(self.forest[pos - 2], self.forest[pos - 1]);
            self.forest[pos - 2] = merged;
            self.forest.remove(pos - 1);
            pos -= 2;
        }
    }

    fn record(&mut self) -> Version {
        debug_assert!(self.forest_ok(), "forest ranks {:?}", self.ranks());
        let roots_start = self.snap_roots.len() as u32;
        self.snap_roots.extend_from_slice(&self.forest);
        self.snaps.push(Snap {
            roots_start,
            roots_len: self.forest.len() as u32,
            buf_top: self.buf_top,
            buf_len: self.buf_len,
            size: self.size as u32,
        });
        self.version()
    }

    fn forest_ok(&self) -> bool {
        let ranks = self.ranks();
        ranks.windows(2).all(|w| w[0] >= w[1]) && ranks.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2]))
    }

    /// Buffer content from the top down.
    fn buffer_elems(&self, mut top: u32, len: u32) -> Vec<E> {
        let mut out = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let (e, prev) = self.cells[top as usize];
            out.push(e);
            top = prev;
        }
        out
    }

    /// Number of elements, counted from the top, satisfying `pred` before the
    /// first one that does not.
    pub fn count_top_while(&self, mut pred: impl FnMut(&E) -> bool) -> usize {
        let mut count = 0;
        let mut top = self.buf_top;
        for _ in 0..self.buf_len {
            let (e, prev) = &self.cells[top as usize];
            if !pred(e) {
                return count;
            }
            count += 1;
            top = *prev;
        }
        for &t in self.forest.iter().rev() {
            for e in self.arena.run(t).iter().rev() {
                if !pred(e) {
                    return count;
                }
                count += 1;
            }
        }
        count
    }

    /// Top `k` elements in bottom-to-top order.
    pub fn top_elements(&self, k: usize) -> Vec<E> {
        let mut out = Vec::with_capacity(k);
        let mut top = self.buf_top;
        for _ in 0..self.buf_len.min(k as u32) {
            let (e, prev) = self.cells[top as usize];
            out.push(e);
            top = prev;
        }
        'trees: for &t in self.forest.iter().rev() {
            for e in self.arena.run(t).iter().rev() {
                if out.len() == k {
                    break 'trees;
                }
                out.push(*e);
            }
        }
        out.reverse();
        out
    }

    pub fn size_at(&self, v: Version) -> Result<usize, StackError> {
        Ok(self.snap(v)?.size as usize)
    }

    fn snap(&self, v: Version) -> Result<&Snap, StackError> {
        self.snaps.get(v as usize).ok_or(StackError::UnknownVersion(v))
    }

    /// Full logical content at version `v`, bottom to top.
    pub fn content_at(&self, v: Version) -> Result<Vec<E>, StackError> {
        let s = *self.snap(v)?;
        let roots = &self.snap_roots[s.roots_start as usize..(s.roots_start + s.roots_len) as usize];
        let mut out: Vec<E> = roots.iter().flat_map(|&r| self.arena.run(r).iter().copied()).collect();
        let mut buf = self.buffer_elems(s.buf_top, s.buf_len);
        buf.reverse();
        out.extend(buf);
        Ok(out)
    }

    pub fn report(&self, lo: E::Key, hi: E::Key) -> Vec<Part<E>> {
        self.report_at(self.version(), lo, hi).expect("current version")
    }

    /// Elements with key in `[lo, hi]` at version `t`.
    pub fn report_at(&self, t: Version, lo: E::Key, hi: E::Key) -> Result<Vec<Part<E>>, StackError> {
        if lo > hi {
            self.snap(t)?;
            return Ok(Vec::new());
        }
        self.report_range(t, &(lo..=hi))
    }

    pub fn report_range<R: RangeBounds<E::Key>>(&self, t: Version, range: &R) -> Result<Vec<Part<E>>, StackError> {
        let s = *self.snap(t)?;
        let roots = &self.snap_roots[s.roots_start as usize..(s.roots_start + s.roots_len) as usize];
        let mut pieces = Vec::new();
        let mut probe = 0;
        for &r in roots {
            self.arena.decompose(r, range, &mut pieces, &mut probe);
        }
        let mut parts: Vec<Part<E>> = Vec::with_capacity(pieces.len());
        let loose = |parts: &mut Vec<Part<E>>, es: &[E]| {
            if es.is_empty() {
                return;
            }
            if let Some(Part::Loose(v)) = parts.last_mut() {
                v.extend_from_slice(es);
            } else {
                parts.push(Part::Loose(es.to_vec()));
            }
        };
        for p in pieces {
            match p {
                Piece::Whole(r) => parts.push(Part::Canonical(r)),
                Piece::Partial { node, from, to } => {
                    loose(&mut parts, &self.arena.run(node)[from as usize..to as usize]);
                }
            }
        }
        if s.buf_len > 0 {
            let mut buf = self.buffer_elems(s.buf_top, s.buf_len);
            buf.reverse();
            let inside: Vec<E> = buf.into_iter().filter(|e| range.contains(&e.key())).collect();
            loose(&mut parts, &inside);
        }
        Ok(parts)
    }

    /// Alias of [`RangeStack::report_at`] named after the history lookup.
    pub fn report_at_time(&self, t: Version, lo: E::Key, hi: E::Key) -> Result<Vec<Part<E>>, StackError> {
        self.report_at(t, lo, hi)
    }

    pub fn expand(&self, parts: &[Part<E>]) -> Vec<E> {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Part::Canonical(r) => out.extend_from_slice(self.arena.run(*r)),
                Part::Loose(v) => out.extend_from_slice(v),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    struct K(u32);
    impl Keyed for K {
        type Key = u32;
        fn key(&self) -> u32 {
            self.0
        }
    }

    fn keys(v: &[K]) -> Vec<u32> {
        v.iter().map(|k| k.0).collect()
    }

    #[test]
    fn push_four_then_pop_one() {
        let mut s = RangeStack::new();
        s.push(K(1)).unwrap();
        assert_eq!(s.tree_sizes(), vec![1]);
        for k in 2..=4 {
            s.push(K(k)).unwrap();
        }
        assert_eq!(s.tree_sizes(), vec![2, 1, 1]);
        s.pop(1).unwrap();
        assert_eq!(s.tree_sizes(), vec![2, 1]);
        assert_eq!(s.push(K(3)), Err(StackError::NonMonotoneKey));
        s.pop(3).unwrap();
        assert!(s.tree_sizes().is_empty());
        let v = s.version();
        assert_eq!(s.pop(0).unwrap(), v + 1);
        assert!(matches!(s.pop(1), Err(StackError::Underflow { .. })));
    }

    #[test]
    fn report_on_one_full_tree() {
        let mut s = RangeStack::new();
        for k in 1..=8 {
            s.push(K(k)).unwrap();
        }
        assert_eq!(s.tree_sizes(), vec![4, 2, 1, 1]);
        let parts = s.report(3, 6);
        assert_eq!(keys(&s.expand(&parts)), vec![3, 4, 5, 6]);
        assert!(parts.len() <= 5);
        let full = s.report(0, 100);
        assert_eq!(full.len(), 4);
        assert!(full.iter().all(|p| matches!(p, Part::Canonical(_))));
    }

    #[test]
    fn persistence_sees_popped_element() {
        let mut s = RangeStack::new();
        s.push(K(1)).unwrap();
        let t = s.push(K(2)).unwrap();
        s.pop(1).unwrap();
        assert_eq!(keys(&s.expand(&s.report_at_time(t, 0, 9).unwrap())), vec![1, 2]);
        assert_eq!(keys(&s.expand(&s.report(0, 9))), vec![1]);
    }

    #[test]
    fn buffer_flushes_oldest_block() {
        assert_eq!(buffer_params(256), (24, 8));
        let mut s = RangeStack::buffered(256);
        for k in 1..=24 {
            s.push(K(k)).unwrap();
        }
        assert_eq!(s.buffer_len(), 24);
        assert_eq!(s.nonsingleton_count(), 0);
        s.push(K(25)).unwrap();
        assert_eq!(s.nonsingleton_count(), 1);
        assert_eq!(s.tree_sizes(), vec![8]);
        assert_eq!(keys(s.arena().run(0)), (1..=8).collect::<Vec<_>>());
        assert_eq!(s.buffer_len(), 17);
        s.pop(20).unwrap();
        assert_eq!(keys(&s.content_at(s.version()).unwrap()), vec![1, 2, 3, 4, 5]);
        assert_eq!(s.buffer_len(), 5);
    }
}
