//! Closed walks from the root of a growing tree, in canonical form.
//!
//! Children of every vertex are numbered in order of first visit, so a walk
//! is determined by its move sequence and each unlabeled history appears
//! exactly once.

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    /// Step towards the root.
    Up,
    /// Step to the already created child with this index.
    Down(u8),
    /// Step to a fresh child, which gets the next index.
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopType {
    Zero,
    One,
    Two,
    OneOne,
    Higher,
}

impl LoopType {
    pub const ALL: [LoopType; 5] =
        [LoopType::Zero, LoopType::One, LoopType::Two, LoopType::OneOne, LoopType::Higher];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Classify from the multiset of edge multiplicities.
    pub fn classify<I: IntoIterator<Item = u32>>(mults: I) -> LoopType {
        let (mut fours, mut sixes, mut other) = (0, 0, 0);
        for m in mults {
            match m {
                0 | 2 => {}
                4 => fours += 1,
                6 => sixes += 1,
                _ => other += 1,
            }
        }
        match (fours, sixes, other) {
            (0, 0, 0) => LoopType::Zero,
            (1, 0, 0) => LoopType::One,
            (0, 1, 0) => LoopType::Two,
            (2, 0, 0) => LoopType::OneOne,
            _ => LoopType::Higher,
        }
    }
}

/// A closed walk together with the tree it has explored so far.
///
/// Vertex 0 is the root; every other vertex `v` is identified with the edge
/// to its parent. The structure is mutable so the enumerator can extend and
/// retract it in place.
#[derive(Debug, Clone)]
pub struct WalkHistory {
    moves: Vec<Move>,
    parent: Vec<u8>,
    depth: Vec<u8>,
    children: Vec<Vec<u8>>,
    mult: Vec<u32>,
    edges: Vec<u8>,
    heights: Vec<u8>,
    cur: u8,
}

impl Default for WalkHistory {
    fn default() -> Self {
        WalkHistory::new()
    }
}

impl WalkHistory {
    pub fn new() -> Self {
        WalkHistory {
            moves: Vec::new(),
            parent: vec![0],
            depth: vec![0],
            children: vec![Vec::new()],
            mult: vec![0],
            edges: Vec::new(),
            heights: Vec::new(),
            cur: 0,
        }
    }

    /// Replay a move sequence, validating every step.
    pub fn from_moves(moves: &[Move]) -> Result<Self> {
        let mut h = WalkHistory::new();
        for (i, &m) in moves.iter().enumerate() {
            if !h.can_push(m) {
                return Err(usage(format!("invalid move {m:?} at step {i}")));
            }
            h.push(m);
        }
        Ok(h)
    }

    pub fn can_push(&self, m: Move) -> bool {
        let v = self.cur as usize;
        match m {
            Move::Up => v != 0,
            Move::Down(i) => (i as usize) < self.children[v].len(),
            Move::New => self.parent.len() < u8::MAX as usize,
        }
    }

    pub(crate) fn push(&mut self, m: Move) {
        let v = self.cur as usize;
        let next = match m {
            Move::New => {
                let w = self.parent.len() as u8;
                self.parent.push(v as u8);
                self.depth.push(self.depth[v] + 1);
                self.children[v].push(w);
                self.children.push(Vec::new());
                self.mult.push(0);
                w
            }
            Move::Down(i) => self.children[v][i as usize],
            Move::Up => self.parent[v],
        };
        let edge = if matches!(m, Move::Up) { v as u8 } else { next };
        self.mult[edge as usize] += 1;
        self.edges.push(edge);
        self.cur = next;
        self.heights.push(self.depth[next as usize]);
        self.moves.push(m);
    }

    pub(crate) fn pop(&mut self) {
        let m = self.moves.pop().expect("pop on empty walk");
        let edge = self.edges.pop().expect("edge stack out of sync") as usize;
        self.heights.pop();
        self.mult[edge] -= 1;
        match m {
            Move::New => {
                let w = self.parent.len() - 1;
                let p = self.parent[w] as usize;
                self.children[p].pop();
                self.parent.pop();
                self.depth.pop();
                self.children.pop();
                self.mult.pop();
                self.cur = p as u8;
            }
            Move::Down(_) => self.cur = self.parent[self.cur as usize],
            Move::Up => self.cur = edge as u8,
        }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn k(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn current(&self) -> usize {
        self.cur as usize
    }

    pub fn current_depth(&self) -> usize {
        self.depth[self.cur as usize] as usize
    }

    pub fn num_children(&self, v: usize) -> usize {
        self.children[v].len()
    }

    /// Number of distinct edges visited.
    pub fn alpha(&self) -> usize {
        self.parent.len() - 1
    }

    /// Multiplicity of every edge, indexed by the child endpoint minus one.
    pub fn edge_multiplicities(&self) -> &[u32] {
        &self.mult[1..]
    }

    /// Distinct children visited, per vertex in first-visit order.
    pub fn child_counts(&self) -> Vec<usize> {
        self.children.iter().map(Vec::len).collect()
    }

    pub fn loop_type(&self) -> LoopType {
        LoopType::classify(self.edge_multiplicities().iter().copied())
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v] as usize
    }

    /// Edge traversed at each step, named by its child endpoint.
    pub fn edge_sequence(&self) -> &[u8] {
        &self.edges
    }

    /// Height after each step.
    pub fn heights(&self) -> &[u8] {
        &self.heights
    }

    /// Step indices at which the walk sits at the root: 0, every return,
    /// and the final position.
    pub fn root_positions(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(
            self.heights
                .iter()
                .enumerate()
                .filter(|(_, &h)| h == 0)
                .map(|(i, _)| i + 1),
        );
        out
    }

    /// Child of the root whose subtree contains `v` (`v` itself for a child).
    pub fn top_ancestor(&self, mut v: usize) -> usize {
        while self.parent[v] != 0 {
            v = self.parent[v] as usize;
        }
        v
    }

    pub fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        loop {
            if v == a {
                return true;
            }
            if v == 0 {
                return false;
            }
            v = self.parent[v] as usize;
        }
    }
}
