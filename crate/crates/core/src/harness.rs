//! Brute-force reference for submonoid membership and engine comparison.
//!
//! Membership is searched from both ends: a ball of generator products
//! around the identity (computed once per generator set) and, per query,
//! the elements `w·p⁻¹` for products `p` of the remaining length. Elements
//! are identified by the group oracle's canonical keys. Negative answers
//! only ever mean "not found within the budget".

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::answer::Answer;
use crate::products::{GroupOracle, Inconclusive};
use crate::word::{Letter, Symbol, Word};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnumerationBudget {
    pub max_product_len: usize,
    pub max_word_len: usize,
    pub samples: usize,
    pub seed: u64,
    /// Distinct elements kept in the ball around the identity.
    pub forward_states: usize,
    /// Distinct elements kept per query on the query side.
    pub backward_states: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_product_len: 10, max_word_len: 8, samples: 50, seed: 2024, forward_states: 200_000, backward_states: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum BruteAnswer {
    /// Generator indices whose product equals the query.
    Member { product: Vec<usize> },
    /// No product found; `truncated` when a state cap cut the search short.
    NotFound { truncated: bool },
}

impl BruteAnswer {
    pub fn is_member(&self) -> bool {
        matches!(self, BruteAnswer::Member { .. })
    }
}

struct Layer {
    /// canonical key → (parent key, generator index)
    parents: HashMap<String, Option<(String, usize)>>,
    frontier: Vec<(String, Word)>,
    depth: usize,
    truncated: bool,
}

impl Layer {
    fn new(key: String, w: Word) -> Self {
        let mut parents = HashMap::new();
        parents.insert(key.clone(), None);
        Layer { parents, frontier: vec![(key, w)], depth: 0, truncated: false }
    }

    /// Extends every frontier element by one generator, on the right
    /// (`forward`) or by an inverse generator (`!forward`).
    fn grow(&mut self, gens: &[Word], g: &dyn GroupOracle, cap: usize, forward: bool) -> Result<(), Inconclusive> {
        let mut next = Vec::new();
        'outer: for (key, w) in std::mem::take(&mut self.frontier) {
            for (i, x) in gens.iter().enumerate() {
                if self.parents.len() >= cap {
                    self.truncated = true;
                    break 'outer;
                }
                let y = if forward { w.concat(x) } else { w.concat(&x.inverse()) }.reduce();
                let k = g.canonical_key(&y)?;
                if !self.parents.contains_key(&k) {
                    self.parents.insert(k.clone(), Some((key.clone(), i)));
                    next.push((k, y));
                }
            }
        }
        self.frontier = next;
        self.depth += 1;
        Ok(())
    }

    fn path<'s>(&'s self, mut key: &'s str) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(Some((parent, i))) = self.parents.get(key) {
            out.push(*i);
            key = parent;
        }
        out
    }
}

/// Products of up to `max_product_len` generators, searched from both ends.
pub struct BruteForce<'a> {
    gens: Vec<Word>,
    group: &'a dyn GroupOracle,
    budget: EnumerationBudget,
    forward: Layer,
}

impl<'a> BruteForce<'a> {
    pub fn new(generators: &[Word], group: &'a dyn GroupOracle, budget: EnumerationBudget) -> Result<Self, Inconclusive> {
        let mut gens: Vec<Word> = Vec::new();
        let mut keys = Vec::new();
        let identity = group.canonical_key(&Word::empty())?;
        for x in generators {
            let k = group.canonical_key(x)?;
            if k != identity && !keys.contains(&k) {
                keys.push(k);
                gens.push(x.clone());
            }
        }
        let mut forward = Layer::new(identity, Word::empty());
        let half = budget.max_product_len.div_ceil(2);
        while forward.depth < half && !forward.frontier.is_empty() {
            forward.grow(&gens, group, budget.forward_states, true)?;
        }
        Ok(BruteForce { gens, group, budget, forward })
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn query(&self, w: &Word) -> Result<BruteAnswer, Inconclusive> {
        let key = self.group.canonical_key(w)?;
        let mut back = Layer::new(key.clone(), w.clone());
        let back_depth = self.budget.max_product_len - self.forward.depth;
        loop {
            if let Some(k) = back.parents.keys().find(|k| self.forward.parents.contains_key(*k)) {
                let mut product = self.forward.path(k);
                product.reverse();
                product.extend(back.path(k));
                return Ok(BruteAnswer::Member { product });
            }
            if back.depth >= back_depth || back.frontier.is_empty() {
                break;
            }
            back.grow(&self.gens, self.group, self.budget.backward_states, false)?;
        }
        // A side that ran dry without hitting its cap has seen everything.
        let exhausted = |l: &Layer| !l.truncated && l.frontier.is_empty();
        let complete = exhausted(&self.forward) || exhausted(&back);
        Ok(BruteAnswer::NotFound { truncated: (self.forward.truncated || back.truncated) && !complete })
    }

    pub fn product(&self, indices: &[usize]) -> Word {
        indices.iter().fold(Word::empty(), |acc, &i| acc.concat(&self.gens[i]))
    }
}

pub fn brute_submonoid_membership(
    generators: &[Word],
    group: &dyn GroupOracle,
    w: &Word,
    budget: EnumerationBudget,
) -> Result<BruteAnswer, Inconclusive> {
    BruteForce::new(generators, group, budget)?.query(w)
}

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &[Symbol], len: usize) -> Word {
    (0..len)
        .map(|_| {
            let s = alphabet.choose(rng).unwrap().clone();
            if rng.gen_bool(0.5) {
                Letter::pos(s)
            } else {
                Letter::neg(s)
            }
        })
        .collect()
}

/// Half uniformly random words of length at most `max_word_len`, half
/// reduced products of one to three generators that fit the same bound.
pub fn query_batch(alphabet: &[Symbol], generators: &[Word], budget: &EnumerationBudget) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let n = budget.samples;
    let mut out: Vec<Word> = (0..n / 2)
        .map(|_| {
            let len = rng.gen_range(0..=budget.max_word_len);
            random_word(&mut rng, alphabet, len)
        })
        .collect();
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        let k = rng.gen_range(1..=3);
        let w = (0..k).fold(Word::empty(), |acc, _| acc.concat(generators.choose(&mut rng).unwrap())).reduce();
        if w.len() <= budget.max_word_len || attempts > 100 * n {
            out.push(w);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryRow {
    pub word: Word,
    pub engine: Answer,
    pub brute: BruteAnswer,
    /// For positive engine answers: the engine's witness product equals the word.
    pub witness_checked: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub seed: u64,
    pub budget: EnumerationBudget,
    pub rows: Vec<QueryRow>,
    /// Brute force found a product but the engine said false, or the engine
    /// said true with a witness that does not check.
    pub disagreements: Vec<Word>,
    /// Engine said true; brute force found no product within the budget.
    pub unconfirmed: Vec<Word>,
}

impl CompareReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// One engine decision: the answer and, for positive answers, whether the
/// engine's witness checks out.
pub type EngineDecision = (Answer, Option<bool>);

pub fn compare_engines(
    brute: &BruteForce,
    queries: &[Word],
    engine: &dyn Fn(&Word) -> EngineDecision,
) -> Result<CompareReport, Inconclusive> {
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    let mut unconfirmed = Vec::new();
    for q in queries {
        let (answer, witness_checked) = engine(q);
        let b = brute.query(q)?;
        let bad = (b.is_member() && answer == Answer::False)
            || (answer == Answer::True && witness_checked != Some(true))
            || answer == Answer::Inconclusive;
        if bad {
            disagreements.push(q.clone());
        } else if answer == Answer::True && !b.is_member() {
            unconfirmed.push(q.clone());
        }
        rows.push(QueryRow { word: q.clone(), engine: answer, brute: b, witness_checked });
    }
    Ok(CompareReport { seed: brute.budget.seed, budget: brute.budget, rows, disagreements, unconfirmed })
}
