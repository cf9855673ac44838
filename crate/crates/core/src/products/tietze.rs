//! Presentation simplification by length-reducing Nielsen moves and
//! elimination of generators that occur once in a relator.

use std::collections::BTreeMap;

use crate::word::{Letter, Symbol, Word};

/// A simplified presentation together with the isomorphism from the
/// original group: `map` sends each original generator to a word over
/// `generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TietzeReduction {
    pub generators: Vec<Symbol>,
    pub relators: Vec<Word>,
    pub map: BTreeMap<Symbol, Word>,
}

impl TietzeReduction {
    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn translate(&self, w: &Word) -> Word {
        w.substitute_partial(&self.map).reduce()
    }
}

fn total_len(rels: &[Word]) -> usize {
    rels.iter().map(Word::len).sum()
}

fn normalise(rels: Vec<Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in rels {
        let (_, core) = r.cyclically_reduce();
        if !core.is_empty() && !out.contains(&core) && !out.contains(&core.inverse()) {
            out.push(core);
        }
    }
    out
}

fn apply(rels: &[Word], sub: &BTreeMap<Symbol, Word>) -> Vec<Word> {
    normalise(rels.iter().map(|r| r.substitute_partial(sub)).collect())
}

/// Finds a relator in which some generator occurs exactly once and solves
/// for it: returns the generator and its value over the others.
fn solvable(gens: &[Symbol], rels: &[Word]) -> Option<(usize, Symbol, Word)> {
    for (i, r) in rels.iter().enumerate() {
        for g in gens {
            if r.count_symbol(g) != 1 {
                continue;
            }
            let pos = r.letters().iter().position(|l| &l.symbol == g).unwrap();
            let n = r.len();
            // Rotate so the occurrence comes first: t^e W = 1.
            let rest = r.slice(pos + 1, n).concat(&r.slice(0, pos));
            let value = if r.letters()[pos].inverse { rest } else { rest.inverse() };
            return Some((i, g.clone(), value.reduce()));
        }
    }
    None
}

fn best_nielsen_move(gens: &[Symbol], rels: &[Word]) -> Option<BTreeMap<Symbol, Word>> {
    let current = total_len(rels);
    let mut best: Option<(usize, BTreeMap<Symbol, Word>)> = None;
    for xi in gens {
        for xj in gens {
            if xi == xj {
                continue;
            }
            let a = Letter::pos(xi.clone());
            let b = Letter::pos(xj.clone());
            for image in [
                Word::from_letters(vec![a.clone(), b.clone()]),
                Word::from_letters(vec![a.clone(), b.inverse()]),
                Word::from_letters(vec![b.clone(), a.clone()]),
                Word::from_letters(vec![b.inverse(), a.clone()]),
            ] {
                let sub = BTreeMap::from([(xi.clone(), image)]);
                let len = total_len(&apply(rels, &sub));
                if len < current && best.as_ref().is_none_or(|(l, _)| len < *l) {
                    best = Some((len, sub));
                }
            }
        }
    }
    best.map(|(_, s)| s)
}

pub fn tietze_simplify(generators: &[Symbol], relators: &[Word]) -> TietzeReduction {
    let mut gens = generators.to_vec();
    let mut rels = normalise(relators.to_vec());
    let mut map: BTreeMap<Symbol, Word> =
        gens.iter().map(|g| (g.clone(), Word::letter(Letter::pos(g.clone())))).collect();
    loop {
        if let Some((i, t, value)) = solvable(&gens, &rels) {
            rels.remove(i);
            let sub = BTreeMap::from([(t.clone(), value)]);
            rels = apply(&rels, &sub);
            for v in map.values_mut() {
                *v = v.substitute_partial(&sub).reduce();
            }
            gens.retain(|g| g != &t);
            continue;
        }
        match best_nielsen_move(&gens, &rels) {
            Some(sub) => {
                rels = apply(&rels, &sub);
                for v in map.values_mut() {
                    *v = v.substitute_partial(&sub).reduce();
                }
            }
            None => break,
        }
    }
    TietzeReduction { generators: gens, relators: rels, map }
}
