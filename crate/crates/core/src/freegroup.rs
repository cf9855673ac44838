//! Membership in free groups: Stallings graphs for finitely generated
//! subgroups and Benois automata for finitely generated submonoids.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::graph::FoldedGraph;
use crate::word::{Letter, Word};

/// A product of subgroup generators: `(index, exponent sign)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MembershipWitness {
    pub expression: Vec<(usize, i8)>,
}

impl MembershipWitness {
    pub fn evaluate(&self, generators: &[Word]) -> Word {
        let mut out = Word::empty();
        for &(i, s) in &self.expression {
            if s > 0 {
                out.extend_from(&generators[i]);
            } else {
                out.extend_from(&generators[i].inverse());
            }
        }
        out
    }
}

type Label = Vec<(usize, i8)>;

fn label_reduce(mut l: Label) -> Label {
    let mut out: Label = Vec::with_capacity(l.len());
    for x in l.drain(..) {
        match out.last() {
            Some(&(i, s)) if i == x.0 && s == -x.1 => {
                out.pop();
            }
            _ => out.push(x),
        }
    }
    out
}

fn label_inverse(l: &Label) -> Label {
    l.iter().rev().map(|&(i, s)| (i, -s)).collect()
}

fn label_mul(a: &Label, b: &Label) -> Label {
    let mut v = a.clone();
    v.extend_from_slice(b);
    label_reduce(v)
}

#[derive(Debug, Clone)]
struct Edge {
    src: usize,
    letter: Letter, // always a positive letter
    dst: usize,
    label: Label,
}

/// A folded, base-pointed, inverse-closed graph whose base loops spell the
/// reduced words of a subgroup of a free group. Edges carry generator
/// expressions so accepted words come with a witness.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    generators: Vec<Word>,
    vertices: usize,
    base: usize,
    edges: Vec<Edge>,
    out: HashMap<(usize, Letter), usize>,
}

/// Folds the flower graph of `generators` (reduced first) into its Stallings graph.
pub fn stallings_graph(generators: &[Word]) -> SubgroupGraph {
    SubgroupGraph::build(generators, None)
}

impl SubgroupGraph {
    /// Builds the graph, inserting flower edges in `order` when given
    /// (a permutation of edge positions); used to test fold confluence.
    pub fn build(generators: &[Word], order: Option<&[usize]>) -> SubgroupGraph {
        let gens: Vec<Word> = generators.iter().map(|g| g.reduce()).collect();
        let mut vertices = 1;
        let mut raw: Vec<Edge> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let n = g.len();
            if n == 0 {
                continue;
            }
            let mut prev = 0;
            for (k, l) in g.letters().iter().enumerate() {
                let next = if k + 1 == n {
                    0
                } else {
                    vertices += 1;
                    vertices - 1
                };
                let label = if k + 1 == n { vec![(i, 1)] } else { Vec::new() };
                raw.push(orient(prev, l, next, label));
                prev = next;
            }
        }
        let edges: Vec<Edge> = match order {
            Some(perm) => perm.iter().map(|&i| raw[i].clone()).collect(),
            None => raw,
        };
        let mut g = Folder::new(vertices, edges);
        g.fold_all();
        g.finish(gens)
    }

    /// Number of flower edges `build` would create for these generators.
    pub fn flower_edge_count(generators: &[Word]) -> usize {
        generators.iter().map(|g| g.reduce().len()).sum()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn graph(&self) -> FoldedGraph {
        FoldedGraph {
            vertices: self.vertices,
            base: self.base,
            edges: self.edges.iter().map(|e| (e.src, e.letter.clone(), e.dst)).collect(),
            epsilon: Vec::new(),
        }
    }

    fn step(&self, v: usize, l: &Letter) -> Option<(usize, Label)> {
        if l.inverse {
            let e = &self.edges[*self.out.get(&(v, l.clone()))?];
            Some((e.src, label_inverse(&e.label)))
        } else {
            let e = &self.edges[*self.out.get(&(v, l.clone()))?];
            Some((e.dst, e.label.clone()))
        }
    }

    /// Decides membership of `w`; on success returns a witness over the
    /// generators.
    pub fn contains(&self, w: &Word) -> Option<MembershipWitness> {
        let mut v = self.base;
        let mut acc: Label = Vec::new();
        for l in w.reduce().letters() {
            let (next, label) = self.step(v, l)?;
            acc.extend(label);
            v = next;
        }
        if v == self.base {
            Some(MembershipWitness { expression: label_reduce(acc) })
        } else {
            None
        }
    }

    /// Membership without a witness.
    pub fn accepts(&self, w: &Word) -> bool {
        let mut v = self.base;
        for l in w.reduce().letters() {
            match self.step(v, l) {
                Some((n, _)) => v = n,
                None => return false,
            }
        }
        v == self.base
    }

    /// True if the subgroup equals the whole free group on `alphabet`.
    pub fn is_full(&self, alphabet: &[crate::word::Symbol]) -> bool {
        self.vertices == 1 && alphabet.iter().all(|s| self.out.contains_key(&(0, Letter::pos(s.clone()))))
    }
}

fn orient(src: usize, l: &Letter, dst: usize, label: Label) -> Edge {
    if l.inverse {
        Edge { src: dst, letter: l.inverse(), dst: src, label: label_inverse(&label) }
    } else {
        Edge { src, letter: l.clone(), dst, label }
    }
}

struct Folder {
    alive: Vec<bool>,
    edges: Vec<Option<Edge>>,
    incident: Vec<Vec<usize>>,
}

impl Folder {
    fn new(vertices: usize, edges: Vec<Edge>) -> Self {
        let mut f = Folder { alive: vec![true; vertices], edges: Vec::new(), incident: vec![Vec::new(); vertices] };
        for e in edges {
            f.add(e);
        }
        f
    }

    fn add(&mut self, e: Edge) {
        let id = self.edges.len();
        self.incident[e.src].push(id);
        if e.dst != e.src {
            self.incident[e.dst].push(id);
        }
        self.edges.push(Some(e));
    }

    /// Reading direction key of edge `id` from vertex `v`.
    fn keys(&self, id: usize, v: usize) -> Vec<(Letter, usize, bool)> {
        let e = self.edges[id].as_ref().unwrap();
        let mut ks = Vec::new();
        if e.src == v {
            ks.push((e.letter.clone(), e.dst, false));
        }
        if e.dst == v {
            ks.push((e.letter.inverse(), e.src, true));
        }
        ks
    }

    fn find_conflict(&self, v: usize) -> Option<(usize, usize, bool)> {
        let mut seen: HashMap<Letter, usize> = HashMap::new();
        for &id in &self.incident[v] {
            if self.edges[id].is_none() {
                continue;
            }
            for (letter, _, backwards) in self.keys(id, v) {
                if let Some(&other) = seen.get(&letter) {
                    if other != id {
                        return Some((other, id, backwards));
                    }
                }
                seen.insert(letter, id);
            }
        }
        None
    }

    fn fold_all(&mut self) {
        let mut work: VecDeque<usize> = (0..self.alive.len()).collect();
        while let Some(v) = work.pop_front() {
            if !self.alive[v] {
                continue;
            }
            while let Some((e1, e2, backwards)) = self.find_conflict(v) {
                let (a, b) = (self.edges[e1].clone().unwrap(), self.edges[e2].clone().unwrap());
                // Far endpoints and the labels read from v.
                let (t1, l1) = if backwards { (a.src, label_inverse(&a.label)) } else { (a.dst, a.label.clone()) };
                let (t2, l2) = if backwards { (b.src, label_inverse(&b.label)) } else { (b.dst, b.label.clone()) };
                if t1 == t2 {
                    self.remove(e2);
                    continue;
                }
                // Merge m into keep; the base vertex 0 always survives.
                let (keep, m, d) = if t2 == 0 {
                    (t2, t1, label_mul(&label_inverse(&l2), &l1))
                } else {
                    (t1, t2, label_mul(&label_inverse(&l1), &l2))
                };
                self.gauge(m, &d);
                self.merge(m, keep);
                work.push_back(keep);
                work.push_back(v);
            }
        }
    }

    fn gauge(&mut self, m: usize, d: &Label) {
        let dinv = label_inverse(d);
        for &id in &self.incident[m] {
            if let Some(e) = self.edges[id].as_mut() {
                if e.src == m {
                    e.label = label_mul(d, &e.label);
                }
                if e.dst == m {
                    e.label = label_mul(&e.label, &dinv);
                }
            }
        }
    }

    fn merge(&mut self, m: usize, keep: usize) {
        let moved = std::mem::take(&mut self.incident[m]);
        for id in moved {
            let Some(e) = self.edges[id].as_mut() else { continue };
            let was_incident = e.src == keep || e.dst == keep;
            if e.src == m {
                e.src = keep;
            }
            if e.dst == m {
                e.dst = keep;
            }
            if !was_incident {
                self.incident[keep].push(id);
            }
        }
        self.alive[m] = false;
    }

    fn remove(&mut self, id: usize) {
        if let Some(e) = self.edges[id].take() {
            self.incident[e.src].retain(|&x| x != id);
            self.incident[e.dst].retain(|&x| x != id);
        }
    }

    fn finish(self, generators: Vec<Word>) -> SubgroupGraph {
        // Keep only the component of the base and renumber densely.
        let n = self.alive.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in self.edges.iter().flatten() {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut num = vec![usize::MAX; n];
        num[0] = 0;
        let mut count = 1;
        let mut q = VecDeque::from([0usize]);
        while let Some(v) = q.pop_front() {
            for &t in &adj[v] {
                if num[t] == usize::MAX {
                    num[t] = count;
                    count += 1;
                    q.push_back(t);
                }
            }
        }
        let mut edges = Vec::new();
        let mut out = HashMap::new();
        for e in self.edges.into_iter().flatten() {
            if num[e.src] == usize::MAX {
                continue;
            }
            let e = Edge { src: num[e.src], dst: num[e.dst], ..e };
            out.insert((e.src, e.letter.clone()), edges.len());
            out.insert((e.dst, e.letter.inverse()), edges.len());
            edges.push(e);
        }
        SubgroupGraph { generators, vertices: count, base: 0, edges, out }
    }
}

/// Flower automaton of a finite generating set, saturated with epsilon edges
/// so that it accepts the reduced form of every element of the generated
/// submonoid of the free group.
#[derive(Debug, Clone)]
pub struct BenoisAutomaton {
    generators: Vec<Word>,
    states: usize,
    // (from, letter, to, generator index)
    edges: Vec<(usize, Letter, usize, usize)>,
    out: Vec<Vec<usize>>,
    // reflexive-transitive epsilon closure
    closure: Vec<BTreeSet<usize>>,
    epsilon: BTreeMap<(usize, usize), Cancellation>,
}

/// Why an epsilon edge `p → q` exists: `p -x-> r ε* s -x⁻¹-> q`, with the
/// epsilon path using only edges from earlier rounds.
#[derive(Debug, Clone, Copy)]
struct Cancellation {
    round: usize,
    first: usize,
    s: usize,
    second: usize,
}

/// Longest letter path `witness` will expand before giving up.
pub const WITNESS_LIMIT: usize = 1 << 20;

pub fn benois_automaton(generators: &[Word]) -> BenoisAutomaton {
    let mut states = 1;
    let mut edges = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let g = g.reduce();
        let n = g.len();
        let mut prev = 0;
        for (k, l) in g.letters().iter().enumerate() {
            let next = if k + 1 == n {
                0
            } else {
                states += 1;
                states - 1
            };
            edges.push((prev, l.clone(), next, i));
            prev = next;
        }
    }
    let mut out = vec![Vec::new(); states];
    for (id, e) in edges.iter().enumerate() {
        out[e.0].push(id);
    }
    let mut a = BenoisAutomaton {
        generators: generators.to_vec(),
        states,
        edges,
        out,
        closure: (0..states).map(|s| BTreeSet::from([s])).collect(),
        epsilon: BTreeMap::new(),
    };
    a.saturate();
    a
}

impl BenoisAutomaton {
    fn saturate(&mut self) {
        for round in 0.. {
            let mut added = BTreeMap::new();
            for (first, (p, x, r, _)) in self.edges.iter().enumerate() {
                let xi = x.inverse();
                for &s in &self.closure[*r] {
                    for &second in &self.out[s] {
                        let (_, y, q, _) = &self.edges[second];
                        if *y == xi && !self.closure[*p].contains(q) {
                            added.entry((*p, *q)).or_insert(Cancellation { round, first, s, second });
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            self.epsilon.extend(added);
            self.recompute_closure();
        }
    }

    fn recompute_closure(&mut self) {
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.states];
        for &(p, q) in self.epsilon.keys() {
            succ[p].push(q);
        }
        for s in 0..self.states {
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &t in &succ[v] {
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
            self.closure[s] = seen;
        }
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    fn close(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().flat_map(|&s| self.closure[s].iter().copied()).collect()
    }

    /// Decides whether `w` lies in the submonoid.
    pub fn contains(&self, w: &Word) -> bool {
        let mut cur = self.close(&BTreeSet::from([0]));
        for l in w.reduce().letters() {
            let next: BTreeSet<usize> = cur
                .iter()
                .flat_map(|&s| self.out[s].iter().filter(|&&e| self.edges[e].1 == *l).map(|&e| self.edges[e].2))
                .collect();
            if next.is_empty() {
                return false;
            }
            cur = self.close(&next);
        }
        cur.contains(&0)
    }

    /// For a member `w`, a sequence of generator indices whose product
    /// freely reduces to `w`. `None` for non-members, or when the expanded
    /// path would exceed [`WITNESS_LIMIT`] letters.
    pub fn witness(&self, w: &Word) -> Option<Vec<usize>> {
        let w = w.reduce();
        let n = w.len();
        // Breadth-first search over (position, state) with direct epsilon edges.
        let mut eps_out: Vec<Vec<usize>> = vec![Vec::new(); self.states];
        for &(p, q) in self.epsilon.keys() {
            eps_out[p].push(q);
        }
        #[derive(Clone, Copy)]
        enum Step {
            Letter(usize),
            Eps(usize, usize),
        }
        let mut prev: HashMap<(usize, usize), ((usize, usize), Step)> = HashMap::new();
        let start = (0usize, 0usize);
        let goal = (n, 0usize);
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        while let Some((i, p)) = queue.pop_front() {
            if (i, p) == goal {
                break;
            }
            let mut next = Vec::new();
            for &q in &eps_out[p] {
                next.push(((i, q), Step::Eps(p, q)));
            }
            if i < n {
                for &e in &self.out[p] {
                    if self.edges[e].1 == w.letters()[i] {
                        next.push(((i + 1, self.edges[e].2), Step::Letter(e)));
                    }
                }
            }
            for (node, step) in next {
                if seen.insert(node) {
                    prev.insert(node, ((i, p), step));
                    queue.push_back(node);
                }
            }
        }
        if !seen.contains(&goal) {
            return None;
        }
        let mut steps = Vec::new();
        let mut cur = goal;
        while cur != start {
            let (before, step) = prev[&cur];
            steps.push(step);
            cur = before;
        }
        steps.reverse();
        let mut path = Vec::new();
        for step in steps {
            match step {
                Step::Letter(e) => path.push(e),
                Step::Eps(p, q) => self.expand(p, q, usize::MAX, &mut path)?,
            }
            if path.len() > WITNESS_LIMIT {
                return None;
            }
        }
        // Each petal starts at the base, so petal starts delimit generators.
        let mut gens = Vec::new();
        let mut at = 0;
        for e in path {
            if self.edges[e].0 == 0 && at == 0 {
                gens.push(self.edges[e].3);
            }
            at = self.edges[e].2;
        }
        Some(gens)
    }

    /// Appends a letter path realising an epsilon path `p →ε* q` that uses
    /// only edges from rounds before `bound`.
    fn expand(&self, p: usize, q: usize, bound: usize, path: &mut Vec<usize>) -> Option<()> {
        if p == q {
            return Some(());
        }
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([p]);
        while let Some(v) = queue.pop_front() {
            if v == q {
                break;
            }
            for (&(a, b), c) in self.epsilon.range((v, 0)..(v + 1, 0)) {
                debug_assert_eq!(a, v);
                if c.round < bound && b != p && !prev.contains_key(&b) {
                    prev.insert(b, v);
                    queue.push_back(b);
                }
            }
        }
        let mut hops = vec![q];
        let mut cur = q;
        while cur != p {
            cur = *prev.get(&cur)?;
            hops.push(cur);
        }
        hops.reverse();
        for pair in hops.windows(2) {
            let c = self.epsilon[&(pair[0], pair[1])];
            path.push(c.first);
            let r = self.edges[c.first].2;
            self.expand(r, c.s, c.round, path)?;
            path.push(c.second);
            if path.len() > WITNESS_LIMIT {
                return None;
            }
        }
        Some(())
    }

    pub fn graph(&self) -> FoldedGraph {
        FoldedGraph {
            vertices: self.states,
            base: 0,
            edges: self.edges.iter().map(|(s, l, t, _)| (*s, l.clone(), *t)).collect(),
            epsilon: self.epsilon.keys().copied().collect(),
        }
    }

    /// Epsilon-free transitions: p -x-> q iff p ε* p' -x-> q' ε* q.
    fn epsilon_free(&self) -> Vec<BTreeSet<(Letter, usize)>> {
        let mut out = vec![BTreeSet::new(); self.states];
        for p in 0..self.states {
            for &p2 in &self.closure[p] {
                for &e in &self.out[p2] {
                    let (_, x, q2, _) = &self.edges[e];
                    for &q in &self.closure[*q2] {
                        out[p].insert((x.clone(), q));
                    }
                }
            }
        }
        out
    }
}

/// Stallings graph of the group of units `{g : g, g⁻¹ ∈ M}` of the submonoid
/// recognised by `a`, via the product of `a` with its inverse automaton.
pub fn submonoid_units(a: &BenoisAutomaton) -> SubgroupGraph {
    let fwd = a.epsilon_free();
    // Inverse automaton: q -x⁻¹-> p for every p -x-> q. Base is initial and final in both.
    let mut rev: Vec<BTreeSet<(Letter, usize)>> = vec![BTreeSet::new(); a.states];
    for (p, out) in fwd.iter().enumerate() {
        for (x, q) in out {
            rev[*q].insert((x.inverse(), p));
        }
    }
    // Product accepting 0 -> 0 in both components (base is 0 in both).
    let accepting_base = 0usize;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states = vec![(0usize, 0usize)];
    index.insert((0, 0), 0);
    let mut trans: Vec<(usize, Letter, usize)> = Vec::new();
    let mut q = VecDeque::from([0usize]);
    while let Some(i) = q.pop_front() {
        let (p1, p2) = states[i];
        for (x, t1) in &fwd[p1] {
            for (y, t2) in &rev[p2] {
                if x == y {
                    let key = (*t1, *t2);
                    let j = *index.entry(key).or_insert_with(|| {
                        states.push(key);
                        q.push_back(states.len() - 1);
                        states.len() - 1
                    });
                    trans.push((i, x.clone(), j));
                }
            }
        }
    }
    // Trim to states co-reachable to the base.
    let n = states.len();
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, _, t) in &trans {
        back[*t].push(*s);
    }
    let mut coreach = vec![false; n];
    coreach[accepting_base] = true;
    let mut stack = vec![accepting_base];
    while let Some(v) = stack.pop() {
        for &s in &back[v] {
            if !coreach[s] {
                coreach[s] = true;
                stack.push(s);
            }
        }
    }
    let edges: Vec<Edge> = trans
        .into_iter()
        .filter(|(s, _, t)| coreach[*s] && coreach[*t])
        .map(|(s, l, t)| orient(s, &l, t, Vec::new()))
        .collect();
    let mut f = Folder::new(n, edges);
    f.fold_all();
    f.finish(Vec::new())
}

/// Canonical base-pointed form of a subgroup graph; equal iff isomorphic.
pub fn canonical_form(g: &SubgroupGraph) -> FoldedGraph {
    g.graph().canonical(0)
}

/// All reduced words over `alphabet` of length at most `n`.
pub fn reduced_words(alphabet: &[crate::word::Symbol], n: usize) -> Vec<Word> {
    let letters: Vec<Letter> =
        alphabet.iter().flat_map(|s| [Letter::pos(s.clone()), Letter::neg(s.clone())]).collect();
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.letters().last().is_some_and(|x| x.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Reduced forms of all products of at most `max_len` generators (with
/// inverses when `group` is set). Reference enumeration for tests.
pub fn enumerate_products(generators: &[Word], max_len: usize, group: bool) -> HashSet<Word> {
    let mut gens: Vec<Word> = generators.iter().map(|g| g.reduce()).collect();
    if group {
        let inv: Vec<Word> = gens.iter().map(|g| g.inverse()).collect();
        gens.extend(inv);
    }
    let gens: Vec<Word> = gens.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = w.concat(g).reduce();
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Words of the free group counted by letter; used by DOT labels and reports.
pub fn letter_histogram(w: &Word) -> BTreeMap<String, i64> {
    let mut h = BTreeMap::new();
    for l in w.letters() {
        *h.entry(l.symbol.to_string()).or_insert(0) += l.sign();
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{w, Symbol};

    fn syms(s: &str) -> Vec<Symbol> {
        s.split_whitespace().map(Symbol::new).collect()
    }

    #[test]
    fn single_loop() {
        let g = stallings_graph(&[w("a")]);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.accepts(&w("a a")));
        let wit = g.contains(&w("a a a")).unwrap();
        assert_eq!(wit.expression, vec![(0, 1), (0, 1), (0, 1)]);
        assert!(g.contains(&w("b")).is_none());
    }

    #[test]
    fn conjugates_of_b() {
        let gens = [w("a b a'"), w("a b b a'")];
        let g = stallings_graph(&gens);
        // aba⁻¹·(ab²a⁻¹)⁻¹ reduces to a b' a'
        assert_eq!(w("a b a' a b' b' a'").reduce(), w("a b' a'"));
        let wit = g.contains(&w("a b' a'")).unwrap();
        assert_eq!(wit.evaluate(&gens).reduce(), w("a b' a'"));
        let wit = g.contains(&w("a b b b a'")).unwrap();
        assert_eq!(wit.evaluate(&gens).reduce(), w("a b b b a'"));
        assert!(!g.accepts(&w("b")));
    }

    #[test]
    fn empty_generating_set() {
        let g = stallings_graph(&[]);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.accepts(&Word::empty()));
        assert!(!g.accepts(&w("a")));
    }

    #[test]
    fn witnesses_survive_heavy_folding() {
        let gens = [w("a b a' b'"), w("a a b"), w("b a b' a b"), w("a' b' a")];
        let g = stallings_graph(&gens);
        for x in enumerate_products(&gens, 3, true) {
            let wit = g.contains(&x).expect("product must be a member");
            assert_eq!(wit.evaluate(&gens).reduce(), x);
        }
    }

    #[test]
    fn benois_reaches_long_products() {
        // b³ needs twelve generator factors.
        let gens = [w("a b'"), w("b a b"), w("a'")];
        let a = benois_automaton(&gens);
        assert!(a.contains(&w("b b b")));
        let wit = a.witness(&w("b b b")).unwrap();
        let product: Word = wit.iter().flat_map(|&i| gens[i].letters().to_vec()).collect();
        assert_eq!(product.reduce(), w("b b b"));
        assert!(a.witness(&w("b'")).is_some() == a.contains(&w("b'")));
    }

    #[test]
    fn benois_witnesses_check_out() {
        let gens = [w("a b a'"), w("a b' b' a'"), w("b a")];
        let a = benois_automaton(&gens);
        for x in reduced_words(&syms("a b"), 5) {
            match a.witness(&x) {
                Some(wit) => {
                    let product: Word = wit.iter().flat_map(|&i| gens[i].letters().to_vec()).collect();
                    assert_eq!(product.reduce(), x);
                }
                None => assert!(!a.contains(&x), "{x}"),
            }
        }
    }

    #[test]
    fn benois_examples() {
        let a = benois_automaton(&[w("a"), w("a' b")]);
        assert!(a.contains(&w("b")));
        let a = benois_automaton(&[w("a"), w("b")]);
        assert!(!a.contains(&w("a'")));
        let a = benois_automaton(&[]);
        assert!(a.contains(&Word::empty()));
        assert!(!a.contains(&w("a")));
        let p = benois_automaton(&[w("a"), w("a a"), w("a a b")]);
        assert!(p.contains(&w("a a b")));
        assert!(!p.contains(&w("b")));
        assert!(p.contains(&Word::empty()));
    }

    #[test]
    fn benois_matches_enumeration_on_a_fixed_instance() {
        // Every generator has a-exponent 1, so a member of length at most 6
        // is a product of at most 6 generators.
        let gens = [w("a b'"), w("b a b"), w("a b")];
        let a = benois_automaton(&gens);
        let members = enumerate_products(&gens, 6, false);
        for x in reduced_words(&syms("a b"), 6) {
            assert_eq!(a.contains(&x), members.contains(&x), "{x}");
        }
    }

    #[test]
    fn units_of_submonoids() {
        let u = submonoid_units(&benois_automaton(&[w("a")]));
        assert!(!u.accepts(&w("a")));
        let u = submonoid_units(&benois_automaton(&[w("a"), w("a'")]));
        assert!(u.accepts(&w("a")) && u.accepts(&w("a' a'")));
        let u = submonoid_units(&benois_automaton(&[w("a b"), w("b' a'")]));
        assert!(u.accepts(&w("a b")));
        assert!(!u.accepts(&w("a")));
        for x in reduced_words(&syms("a b"), 6) {
            let expect = ((-3)..=3).any(|k| w("a b").pow(k).reduce() == x);
            assert_eq!(u.accepts(&x), expect, "{x}");
        }
    }

    #[test]
    fn fold_order_does_not_matter() {
        let gens = [w("a b a'"), w("a b b a'"), w("b a")];
        let n = SubgroupGraph::flower_edge_count(&gens);
        let base = canonical_form(&stallings_graph(&gens));
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(canonical_form(&SubgroupGraph::build(&gens, Some(&rev))), base);
    }
}
