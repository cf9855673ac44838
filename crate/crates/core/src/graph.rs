//! Labelled directed graphs shared by the Stallings, Benois and Stephen
//! engines, plus DOT export.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::word::Letter;

/// A base-pointed labelled graph. In subgroup and Stephen mode each stored
/// edge also stands for its inverse companion; in Benois mode edges are one
/// way and `epsilon` may be non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldedGraph {
    pub vertices: usize,
    pub base: usize,
    pub edges: Vec<(usize, Letter, usize)>,
    pub epsilon: Vec<(usize, usize)>,
}

impl FoldedGraph {
    pub fn single_vertex() -> Self {
        FoldedGraph { vertices: 1, base: 0, edges: Vec::new(), epsilon: Vec::new() }
    }

    /// DOT text; `marked` vertices are drawn doubled, edges labelled `x`/`x'`,
    /// epsilon edges dashed.
    pub fn to_dot(&self, name: &str, marked: &[usize]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        for v in 0..self.vertices {
            let shape = if marked.contains(&v) || v == self.base { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  v{v} [shape={shape}, label=\"{v}\"];");
        }
        for (s, l, t) in &self.edges {
            let _ = writeln!(out, "  v{s} -> v{t} [label=\"{l}\"];");
        }
        for (s, t) in &self.epsilon {
            let _ = writeln!(out, "  v{s} -> v{t} [style=dashed, label=\"\"];");
        }
        out.push_str("}\n");
        out
    }

    /// Renumbers vertices by breadth-first search from `start`, following
    /// edges (both directions, inverse companions included) in letter order.
    /// Two deterministic inverse graphs are base-pointed isomorphic iff their
    /// canonical forms are equal. Unreachable vertices are dropped.
    pub fn canonical(&self, start: usize) -> FoldedGraph {
        let mut adj: Vec<BTreeMap<Letter, Vec<usize>>> = vec![BTreeMap::new(); self.vertices];
        for (s, l, t) in &self.edges {
            adj[*s].entry(l.clone()).or_default().push(*t);
            adj[*t].entry(l.inverse()).or_default().push(*s);
        }
        let mut order = vec![usize::MAX; self.vertices];
        let mut queue = VecDeque::new();
        order[start] = 0;
        let mut next = 1;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for targets in adj[v].values() {
                let mut ts = targets.clone();
                ts.sort_unstable();
                for t in ts {
                    if order[t] == usize::MAX {
                        order[t] = next;
                        next += 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        for (s, l, t) in &self.edges {
            if order[*s] == usize::MAX {
                continue;
            }
            let (s, t) = (order[*s], order[*t]);
            // Store each undirected edge once, oriented towards the positive letter.
            let e = if l.inverse { (t, l.inverse(), s) } else { (s, l.clone(), t) };
            edges.push(e);
        }
        edges.sort();
        edges.dedup();
        FoldedGraph { vertices: next, base: 0, edges, epsilon: Vec::new() }
    }
}
