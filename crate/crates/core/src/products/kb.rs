//! Knuth–Bendix completion for group presentations.
//!
//! Letters are encoded as `2 * i` for generator `i` and `2 * i + 1` for its
//! inverse, so the numeric order of codes is the declaration order
//! `a < a' < b < b' < ...` used by the shortlex ordering.

use std::cmp::{Ordering as CmpOrdering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::word::{Letter, Symbol, Word};

type Code = u32;

/// Reduction ordering used to orient rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RuleOrdering {
    /// Length first, then lexicographic in declaration order.
    #[default]
    Shortlex,
    /// Recursive path ordering reading words from the right; generators
    /// declared later are larger.
    Recursive,
}

impl RuleOrdering {
    fn greater(self, u: &[Code], v: &[Code]) -> bool {
        match self {
            RuleOrdering::Shortlex => shortlex_cmp(u, v) == CmpOrdering::Greater,
            RuleOrdering::Recursive => rpo_greater(u, v),
        }
    }
}

fn shortlex_cmp(u: &[Code], v: &[Code]) -> CmpOrdering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

fn rpo_greater(u: &[Code], v: &[Code]) -> bool {
    // memo[i][j] answers rpo(u[..i], v[..j]); filled bottom-up.
    let (n, m) = (u.len(), v.len());
    let mut memo = vec![vec![false; m + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=m {
            memo[i][j] = if j == 0 {
                i > 0
            } else if i == 0 {
                false
            } else {
                let (a, b) = (u[i - 1], v[j - 1]);
                if (i - 1 == j && u[..i - 1] == v[..j]) || memo[i - 1][j] {
                    true
                } else {
                    match a.cmp(&b) {
                        CmpOrdering::Greater => memo[i][j - 1],
                        CmpOrdering::Equal => memo[i - 1][j - 1],
                        CmpOrdering::Less => false,
                    }
                }
            };
        }
    }
    memo[n][m]
}

/// Limits on a completion run.
#[derive(Debug, Clone, Copy)]
pub struct KbBudget {
    pub max_rules: usize,
    pub max_rule_len: usize,
}

impl KbBudget {
    pub fn rules(max_rules: usize) -> Self {
        KbBudget { max_rules, max_rule_len: 64 }
    }
}

impl Default for KbBudget {
    fn default() -> Self {
        KbBudget { max_rules: 400, max_rule_len: 64 }
    }
}

#[derive(Debug, Clone)]
struct Rule {
    lhs: Vec<Code>,
    rhs: Vec<Code>,
    live: bool,
}

/// A string rewriting system over the doubled alphabet of a group
/// presentation, complete or partial.
#[derive(Debug, Clone)]
pub struct RewritingSystem {
    generators: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
    rules: Vec<Rule>,
    // last letter of lhs -> rule indices
    by_last: HashMap<Code, Vec<usize>>,
    ordering: RuleOrdering,
    complete: bool,
}

impl RewritingSystem {
    fn new(generators: &[Symbol], ordering: RuleOrdering) -> Self {
        let index = generators.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        RewritingSystem {
            generators: generators.to_vec(),
            index,
            rules: Vec::new(),
            by_last: HashMap::new(),
            ordering,
            complete: false,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn ordering(&self) -> RuleOrdering {
        self.ordering
    }

    pub fn generators(&self) -> &[Symbol] {
        &self.generators
    }

    pub fn rule_count(&self) -> usize {
        self.rules.iter().filter(|r| r.live).count()
    }

    /// Live rules as words, in insertion order.
    pub fn rules(&self) -> Vec<(Word, Word)> {
        self.rules
            .iter()
            .filter(|r| r.live)
            .map(|r| (self.decode(&r.lhs), self.decode(&r.rhs)))
            .collect()
    }

    pub fn encode(&self, w: &Word) -> Option<Vec<Code>> {
        w.letters()
            .iter()
            .map(|l| self.index.get(&l.symbol).map(|&i| (2 * i + l.inverse as usize) as Code))
            .collect()
    }

    pub fn decode(&self, codes: &[Code]) -> Word {
        codes
            .iter()
            .map(|&c| Letter {
                symbol: self.generators[(c / 2) as usize].clone(),
                inverse: c % 2 == 1,
            })
            .collect()
    }

    fn add_rule(&mut self, lhs: Vec<Code>, rhs: Vec<Code>) -> usize {
        let id = self.rules.len();
        self.by_last.entry(*lhs.last().expect("empty lhs")).or_default().push(id);
        self.rules.push(Rule { lhs, rhs, live: true });
        id
    }

    fn kill(&mut self, id: usize) {
        self.rules[id].live = false;
        let last = *self.rules[id].lhs.last().unwrap();
        if let Some(v) = self.by_last.get_mut(&last) {
            v.retain(|&x| x != id);
        }
    }

    /// Rewrites to an irreducible word. Stack-based: every suffix of the
    /// output stack is irreducible after each step.
    pub fn reduce_codes(&self, input: &[Code]) -> Vec<Code> {
        let mut out: Vec<Code> = Vec::with_capacity(input.len());
        let mut pending: Vec<Code> = input.iter().rev().copied().collect();
        while let Some(c) = pending.pop() {
            out.push(c);
            if let Some(ids) = self.by_last.get(&c) {
                for &id in ids {
                    let r = &self.rules[id];
                    if out.ends_with(&r.lhs) {
                        out.truncate(out.len() - r.lhs.len());
                        pending.extend(r.rhs.iter().rev());
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn reduce_word(&self, w: &Word) -> Option<Word> {
        self.encode(w).map(|c| self.decode(&self.reduce_codes(&c)))
    }

    fn inverse_codes(codes: &[Code]) -> Vec<Code> {
        codes.iter().rev().map(|c| c ^ 1).collect()
    }
}

type PairQueue = BinaryHeap<Reverse<(usize, u64, Vec<Code>, Vec<Code>)>>;

/// Runs completion on `⟨generators | relators⟩`. The returned system is
/// always sound (every rule holds in the group); it is complete only when
/// the run reached a fixpoint within budget.
pub fn complete(
    generators: &[Symbol],
    relators: &[Word],
    ordering: RuleOrdering,
    budget: KbBudget,
) -> RewritingSystem {
    let mut sys = RewritingSystem::new(generators, ordering);
    let mut queue: PairQueue = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |q: &mut PairQueue,
                    a: Vec<Code>,
                    b: Vec<Code>| {
        seq += 1;
        q.push(Reverse((a.len().max(b.len()), seq, a, b)));
    };

    for i in 0..generators.len() as Code {
        push(&mut queue, vec![2 * i, 2 * i + 1], vec![]);
        push(&mut queue, vec![2 * i + 1, 2 * i], vec![]);
    }
    for r in relators {
        let Some(codes) = sys.encode(r) else { continue };
        let inv = RewritingSystem::inverse_codes(&codes);
        for base in [codes, inv] {
            let n = base.len();
            for k in 0..n.max(1) {
                let mut c = base[k.min(n)..].to_vec();
                c.extend_from_slice(&base[..k.min(n)]);
                let h = c.len().div_ceil(2);
                push(&mut queue, c[..h].to_vec(), RewritingSystem::inverse_codes(&c[h..]));
            }
        }
    }

    let mut seen_pairs: HashSet<(Vec<Code>, Vec<Code>)> = HashSet::new();
    while let Some(Reverse((_, _, a, b))) = queue.pop() {
        let a = sys.reduce_codes(&a);
        let b = sys.reduce_codes(&b);
        if a == b {
            continue;
        }
        let (lhs, rhs) = if ordering.greater(&a, &b) { (a, b) } else { (b, a) };
        if lhs.len() > budget.max_rule_len || sys.rule_count() >= budget.max_rules {
            return sys;
        }
        if !seen_pairs.insert((lhs.clone(), rhs.clone())) {
            continue;
        }
        let new_id = sys.add_rule(lhs.clone(), rhs);

        // Interreduce: rules whose lhs contains the new lhs become equations
        // again; right-hand sides get normalised.
        for id in 0..sys.rules.len() {
            if id == new_id || !sys.rules[id].live {
                continue;
            }
            if contains(&sys.rules[id].lhs, &lhs) {
                let old = sys.rules[id].clone();
                sys.kill(id);
                push(&mut queue, old.lhs, old.rhs);
            }
        }
        for id in 0..sys.rules.len() {
            if sys.rules[id].live && contains(&sys.rules[id].rhs, &lhs) {
                let rhs = sys.rules[id].rhs.clone();
                let red = sys.reduce_codes(&rhs);
                sys.rules[id].rhs = red;
            }
        }

        // Critical pairs between the new rule and every live rule.
        let live: Vec<usize> = (0..sys.rules.len()).filter(|&i| sys.rules[i].live).collect();
        for id in live {
            for (x, y) in [(new_id, id), (id, new_id)] {
                if !sys.rules[x].live || !sys.rules[y].live {
                    continue;
                }
                let (l1, r1) = (&sys.rules[x].lhs, &sys.rules[x].rhs);
                let (l2, r2) = (&sys.rules[y].lhs, &sys.rules[y].rhs);
                let max_k = l1.len().min(l2.len());
                for k in 1..max_k {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut p = r1.clone();
                        p.extend_from_slice(&l2[k..]);
                        let mut q = l1[..l1.len() - k].to_vec();
                        q.extend_from_slice(r2);
                        push(&mut queue, p, q);
                    }
                }
            }
        }
    }
    sys.complete = true;
    sys
}

fn contains(hay: &[Code], needle: &[Code]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}
