//! Extremal staircases, canonical interval decomposition over balanced trees,
//! and stitching of two maxima representations.

use std::ops::{Bound, RangeBounds};

use crate::geom::{Coord, Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    /// Points not dominated by any other point (y decreasing in x).
    MaxDominance,
    /// Points dominating no other point (y decreasing in x).
    MinDominance,
    /// Points with nothing strictly up-left of them (y increasing in x).
    MaxAnti,
    /// Points with nothing strictly down-right of them (y increasing in x).
    MinAnti,
}

/// Point ids ordered by increasing x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub ids: Vec<usize>,
    pub kind: ChainKind,
}

pub fn maxima<T: Coord>(ps: &PointSet<T>, kind: ChainKind) -> Chain {
    let y = |i: usize| ps.points[i].y;
    let mut ids = Vec::new();
    let mut best: Option<T> = None;
    let mut take = |i: usize, better: &dyn Fn(T, T) -> bool| {
        if best.is_none_or(|b| better(y(i), b)) {
            best = Some(y(i));
            ids.push(i);
        }
    };
    match kind {
        ChainKind::MaxDominance => ps.by_x.iter().rev().for_each(|&i| take(i, &|a, b| a > b)),
        ChainKind::MinAnti => ps.by_x.iter().rev().for_each(|&i| take(i, &|a, b| a < b)),
        ChainKind::MinDominance => ps.by_x.iter().for_each(|&i| take(i, &|a, b| a < b)),
        ChainKind::MaxAnti => ps.by_x.iter().for_each(|&i| take(i, &|a, b| a > b)),
    }
    if matches!(kind, ChainKind::MaxDominance | ChainKind::MinAnti) {
        ids.reverse();
    }
    Chain { ids, kind }
}

/// Elements stored in tree runs, ordered by key.
pub trait Keyed: Copy {
    type Key: Ord + Copy;
    fn key(&self) -> Self::Key;
}

impl<T: Coord> Keyed for Point<T> {
    type Key = T;
    fn key(&self) -> T {
        self.x
    }
}

macro_rules! keyed_int {
    ($($t:ty),*) => {$(
        impl Keyed for $t {
            type Key = $t;
            fn key(&self) -> $t {
                *self
            }
        }
    )*};
}

keyed_int!(u32, u64, i32, i64, usize);

pub type NodeRef = u32;
pub const NIL: NodeRef = NodeRef::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub start: u32,
    pub len: u32,
    pub rank: u8,
    pub left: NodeRef,
    pub right: NodeRef,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.left == NIL
    }
}

/// A piece of a decomposition: a whole node, or a slice of a multi-element leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Whole(NodeRef),
    Partial { node: NodeRef, from: u32, to: u32 },
}

/// Append-only store of tree nodes; every node owns a materialized run.
#[derive(Debug, Clone)]
pub struct NodeArena<E> {
    nodes: Vec<Node>,
    elems: Vec<E>,
}

impl<E> Default for NodeArena<E> {
    fn default() -> Self {
        NodeArena { nodes: Vec::new(), elems: Vec::new() }
    }
}

/// Node list whose runs concatenate to a key-sorted sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalRep {
    pub nodes: Vec<NodeRef>,
}

/// Result of [`NodeArena::stitch`] with the number of elements it looked at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stitched {
    pub rep: CanonicalRep,
    pub inspected: u64,
}

impl<E: Keyed> NodeArena<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, r: NodeRef) -> &Node {
        &self.nodes[r as usize]
    }

    pub fn run(&self, r: NodeRef) -> &[E] {
        let n = &self.nodes[r as usize];
        &self.elems[n.start as usize..(n.start + n.len) as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Sum of run lengths over all nodes ever created.
    pub fn weight(&self) -> usize {
        self.elems.len()
    }

    pub fn first_key(&self, r: NodeRef) -> E::Key {
        self.elems[self.nodes[r as usize].start as usize].key()
    }

    pub fn last_key(&self, r: NodeRef) -> E::Key {
        let n = &self.nodes[r as usize];
        self.elems[(n.start + n.len - 1) as usize].key()
    }

    pub fn leaf(&mut self, run: &[E]) -> NodeRef {
        assert!(!run.is_empty());
        let start = self.elems.len() as u32;
        self.elems.extend_from_slice(run);
        self.nodes.push(Node { start, len: run.len() as u32, rank: 0, left: NIL, right: NIL });
        (self.nodes.len() - 1) as NodeRef
    }

    /// New node over `a` followed by `b`, copying both runs.
    pub fn join(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let start = self.elems.len() as u32;
        self.elems.extend_from_within(na.start as usize..(na.start + na.len) as usize);
        self.elems.extend_from_within(nb.start as usize..(nb.start + nb.len) as usize);
        let rank = na.rank.max(nb.rank) + 1;
        self.nodes.push(Node { start, len: na.len + nb.len, rank, left: a, right: b });
        (self.nodes.len() - 1) as NodeRef
    }

    /// Balanced tree with singleton leaves over a key-sorted slice.
    pub fn build_balanced(&mut self, run: &[E]) -> Option<NodeRef> {
        match run.len() {
            0 => None,
            1 => Some(self.leaf(run)),
            n => {
                let l = self.build_balanced(&run[..n / 2])?;
                let r = self.build_balanced(&run[n / 2..])?;
                Some(self.join(l, r))
            }
        }
    }

    pub fn height(&self, r: NodeRef) -> usize {
        let n = self.node(r);
        if n.is_leaf() {
            0
        } else {
            1 + self.height(n.left).max(self.height(n.right))
        }
    }

    /// Decompose the part of `root` with keys in `range` into pieces, left to right.
    pub fn decompose<R: RangeBounds<E::Key>>(&self, root: NodeRef, range: &R, out: &mut Vec<Piece>, probe: &mut u64) {
        *probe += 2;
        let (first, last) = (self.first_key(root), self.last_key(root));
        if before_start(range, last) || after_end(range, first) {
            return;
        }
        if range.contains(&first) && range.contains(&last) {
            out.push(Piece::Whole(root));
            return;
        }
        let n = *self.node(root);
        if n.is_leaf() {
            let run = self.run(root);
            let from = run.partition_point(|e| before_start(range, e.key()));
            let to = run.partition_point(|e| !after_end(range, e.key()));
            *probe += (run.len() as f64).log2().ceil() as u64 * 2;
            if from < to {
                out.push(Piece::Partial { node: root, from: from as u32, to: to as u32 });
            }
            return;
        }
        self.decompose(n.left, range, out, probe);
        self.decompose(n.right, range, out, probe);
    }

    /// Canonical nodes of `root` covering exactly the keys in `[lo, hi]`.
    pub fn interval_nodes(&self, root: NodeRef, lo: E::Key, hi: E::Key) -> CanonicalRep {
        let mut pieces = Vec::new();
        if lo <= hi {
            self.decompose(root, &(lo..=hi), &mut pieces, &mut 0);
        }
        let nodes = pieces
            .into_iter()
            .map(|p| match p {
                Piece::Whole(r) => r,
                Piece::Partial { .. } => panic!("interval_nodes needs singleton leaves"),
            })
            .collect();
        CanonicalRep { nodes }
    }

    pub fn expand(&self, rep: &CanonicalRep) -> Vec<E> {
        rep.nodes.iter().flat_map(|&r| self.run(r).iter().copied()).collect()
    }

    /// Maxima of the union of an upper set (`left`) and a lower set (`right`):
    /// all of `left`, then the part of `right` strictly right of left's last key.
    pub fn stitch(&self, left: &CanonicalRep, right: &CanonicalRep) -> Stitched {
        let Some(&tail) = left.nodes.last() else {
            return Stitched { rep: right.clone(), inspected: 0 };
        };
        let mut inspected = 1;
        let cut = self.last_key(tail);
        let mut nodes = left.nodes.clone();
        for (i, &r) in right.nodes.iter().enumerate() {
            inspected += 1;
            if self.last_key(r) <= cut {
                continue;
            }
            inspected += 1;
            if self.first_key(r) > cut {
                nodes.extend_from_slice(&right.nodes[i..]);
                break;
            }
            let mut pieces = Vec::new();
            self.decompose(r, &(Bound::Excluded(cut), Bound::Unbounded), &mut pieces, &mut inspected);
            for p in pieces {
                match p {
                    Piece::Whole(x) => nodes.push(x),
                    Piece::Partial { .. } => panic!("stitch needs singleton leaves"),
                }
            }
            nodes.extend_from_slice(&right.nodes[i + 1..]);
            break;
        }
        Stitched { rep: CanonicalRep { nodes }, inspected }
    }
}

fn before_start<K: Ord, R: RangeBounds<K>>(range: &R, k: K) -> bool {
    match range.start_bound() {
        Bound::Included(s) => k < *s,
        Bound::Excluded(s) => k <= *s,
        Bound::Unbounded => false,
    }
}

fn after_end<K: Ord, R: RangeBounds<K>>(range: &R, k: K) -> bool {
    match range.end_bound() {
        Bound::Included(e) => k > *e,
        Bound::Excluded(e) => k >= *e,
        Bound::Unbounded => false,
    }
}
