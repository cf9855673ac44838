//! Stephen's procedure: finite approximants of Schützenberger graphs of a
//! special inverse monoid presentation, built by sewing relator loops and
//! folding.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::graph::FoldedGraph;
use crate::word::{Letter, Word};

/// Default number of sew-and-fold rounds.
pub const DEFAULT_ROUNDS: usize = 4;
/// Approximants stop growing past this many vertices.
pub const VERTEX_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproximantStatus {
    /// A full round added nothing: the graph is the Schützenberger graph.
    Closed,
    /// All requested rounds ran.
    RoundsSpent,
    /// Growth stopped at the vertex cap.
    VertexCap,
}

/// A deterministic inverse graph under construction, with union-find folding.
#[derive(Debug, Clone, Default)]
struct InverseGraph {
    parent: Vec<usize>,
    adj: Vec<HashMap<Letter, usize>>,
    live: usize,
}

impl InverseGraph {
    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(HashMap::new());
        self.live += 1;
        self.parent.len() - 1
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn find_compress(&mut self, v: usize) -> usize {
        let root = self.find(v);
        let mut v = v;
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn step(&self, v: usize, l: &Letter) -> Option<usize> {
        self.adj[self.find(v)].get(l).map(|&t| self.find(t))
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let mut pending = VecDeque::new();
        self.insert(u, l, v, &mut pending);
        self.settle(pending);
    }

    fn insert(&mut self, u: usize, l: Letter, v: usize, pending: &mut VecDeque<(usize, usize)>) {
        let (u, v) = (self.find_compress(u), self.find_compress(v));
        match self.adj[u].get(&l).copied() {
            Some(t) => pending.push_back((t, v)),
            None => {
                self.adj[u].insert(l.clone(), v);
            }
        }
        let li = l.inverse();
        match self.adj[v].get(&li).copied() {
            Some(t) => pending.push_back((t, u)),
            None => {
                self.adj[v].insert(li, u);
            }
        }
    }

    fn settle(&mut self, mut pending: VecDeque<(usize, usize)>) {
        while let Some((a, b)) = pending.pop_front() {
            let (a, b) = (self.find_compress(a), self.find_compress(b));
            if a == b {
                continue;
            }
            // Keep the lower index so start vertices stay representatives when possible.
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            self.live -= 1;
            let moved = std::mem::take(&mut self.adj[gone]);
            for (l, t) in moved {
                match self.adj[keep].get(&l).copied() {
                    Some(t2) => pending.push_back((t, t2)),
                    None => {
                        self.adj[keep].insert(l, t);
                    }
                }
            }
        }
    }

    fn add_path(&mut self, from: usize, w: &[Letter], to: usize) {
        if w.is_empty() {
            let mut q = VecDeque::new();
            q.push_back((from, to));
            self.settle(q);
            return;
        }
        let mut cur = from;
        for (i, l) in w.iter().enumerate() {
            let next = if i + 1 == w.len() { to } else { self.add_vertex() };
            self.add_edge(cur, l.clone(), next);
            cur = next;
        }
    }

    fn read(&self, from: usize, w: &[Letter]) -> Option<usize> {
        let mut v = self.find(from);
        for l in w {
            v = self.step(v, l)?;
        }
        Some(v)
    }

    fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v] == v).collect()
    }

    /// Ensures relator `r` labels a loop at `v`; true if anything was added.
    fn sew(&mut self, v: usize, r: &[Letter]) -> bool {
        let v = self.find(v);
        // Read forward as far as possible, then backward from v.
        let mut x = v;
        let mut i = 0;
        while i < r.len() {
            match self.step(x, &r[i]) {
                Some(t) => {
                    x = t;
                    i += 1;
                }
                None => break,
            }
        }
        if i == r.len() {
            if x == v {
                return false;
            }
            let mut q = VecDeque::new();
            q.push_back((x, v));
            self.settle(q);
            return true;
        }
        let mut y = v;
        let mut j = r.len();
        while j > i {
            match self.step(y, &r[j - 1].inverse()) {
                Some(t) => {
                    y = t;
                    j -= 1;
                }
                None => break,
            }
        }
        self.add_path(x, &r[i..j], y);
        true
    }
}

/// A Stephen approximant of the Schützenberger graph of a word.
#[derive(Debug, Clone)]
pub struct Approximant {
    graph: InverseGraph,
    start: usize,
    end: usize,
    pub rounds: usize,
    pub status: ApproximantStatus,
}

/// Builds the approximant of `w` over relators `relators` using up to
/// `rounds` sew-and-fold rounds.
pub fn approximant(relators: &[Word], w: &Word, rounds: usize) -> Approximant {
    approximant_capped(relators, w, rounds, VERTEX_CAP)
}

pub fn approximant_capped(relators: &[Word], w: &Word, rounds: usize, cap: usize) -> Approximant {
    let mut g = InverseGraph::default();
    let start = g.add_vertex();
    let end = if w.is_empty() { start } else { g.add_vertex() };
    g.add_path(start, w.letters(), end);
    let relators: Vec<&[Letter]> = relators.iter().filter(|r| !r.is_empty()).map(|r| r.letters()).collect();
    let mut status = ApproximantStatus::RoundsSpent;
    let mut done = 0;
    'rounds: for _ in 0..rounds {
        let mut changed = false;
        for v in g.roots() {
            for r in &relators {
                changed |= g.sew(v, r);
                if g.live > cap {
                    status = ApproximantStatus::VertexCap;
                    done += 1;
                    break 'rounds;
                }
            }
        }
        done += 1;
        if !changed {
            status = ApproximantStatus::Closed;
            break;
        }
    }
    Approximant { graph: g, start, end, rounds: done, status }
}

impl Approximant {
    pub fn vertex_count(&self) -> usize {
        self.graph.live
    }

    pub fn start(&self) -> usize {
        self.graph.find(self.start)
    }

    pub fn end(&self) -> usize {
        self.graph.find(self.end)
    }

    /// The endpoint of `w` read from `from`, if it is readable.
    pub fn read_from(&self, from: usize, w: &Word) -> Option<usize> {
        self.graph.read(from, w.letters())
    }

    /// Whether `w` labels a start-to-end path.
    pub fn accepts(&self, w: &Word) -> bool {
        self.read_from(self.start(), w) == Some(self.end())
    }

    /// Snapshot with dense vertex numbers; returns the graph and the
    /// positions of start and end.
    pub fn graph(&self) -> (FoldedGraph, usize, usize) {
        let roots = self.graph.roots();
        let index: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut edges = Vec::new();
        for &r in &roots {
            let mut out: Vec<(&Letter, &usize)> = self.graph.adj[r].iter().filter(|(l, _)| !l.inverse).collect();
            out.sort();
            for (l, t) in out {
                edges.push((index[&r], l.clone(), index[&self.graph.find(*t)]));
            }
        }
        let (s, e) = (index[&self.start()], index[&self.end()]);
        (FoldedGraph { vertices: roots.len(), base: s, edges, epsilon: Vec::new() }, s, e)
    }

    pub fn to_dot(&self) -> String {
        let (g, s, e) = self.graph();
        g.to_dot("approximant", &[s, e])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiDecision {
    Equal,
    Unknown,
}

/// `Equal` when each word labels a start-to-end path in the other's
/// approximant. Never answers "unequal".
pub fn equal_semidecide(relators: &[Word], u: &Word, v: &Word, rounds: usize) -> SemiDecision {
    if u == v {
        return SemiDecision::Equal;
    }
    let au = approximant(relators, u, rounds);
    if !au.accepts(v) {
        return SemiDecision::Unknown;
    }
    let av = approximant(relators, v, rounds);
    if av.accepts(u) {
        SemiDecision::Equal
    } else {
        SemiDecision::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn empty_word_without_relators() {
        let a = approximant(&[], &Word::empty(), 3);
        assert_eq!(a.vertex_count(), 1);
        assert_eq!(a.status, ApproximantStatus::Closed);
    }

    #[test]
    fn bicyclic_shape() {
        let rel = [w("a a'")];
        // One round at the start of `a` sews a a' there.
        let a = approximant(&rel, &w("a"), 1);
        assert!(a.accepts(&w("a a' a")));
        assert_eq!(equal_semidecide(&rel, &w("a a'"), &Word::empty(), 4), SemiDecision::Equal);
        assert_eq!(equal_semidecide(&rel, &w("a' a"), &Word::empty(), 4), SemiDecision::Unknown);
    }

    #[test]
    fn relators_collapse() {
        let rel = [w("z x x y x x y z")];
        assert_eq!(equal_semidecide(&rel, &rel[0], &Word::empty(), 2), SemiDecision::Equal);
    }

    #[test]
    fn the_word_is_always_readable() {
        let rel = [w("a b a' b'")];
        for rounds in 0..4 {
            assert!(approximant(&rel, &w("a b b a'"), rounds).accepts(&w("a b b a'")));
        }
    }

    #[test]
    fn dot_highlights_ends() {
        let a = approximant(&[w("a a'")], &w("a"), 1);
        let dot = a.to_dot();
        assert!(dot.contains("doublecircle"));
    }
}
