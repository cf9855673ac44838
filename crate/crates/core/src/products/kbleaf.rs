//! Word-problem leaf backed by Knuth–Bendix completion.
//!
//! `Auto` mode searches a little for a presentation that completes: it first
//! eliminates generators occurring once in a relator, then tries the
//! recursive ordering both ways, and finally tries elementary Nielsen moves
//! `y ↦ x^±1 y`, `y ↦ y x^±1` ranked by resulting relator length. Queries are
//! translated into the chosen presentation through the accumulated
//! substitution, which is an isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use super::kb::{complete, KbBudget, RewritingSystem, RuleOrdering};
use super::oracle::{Decision, GroupOracle, Inconclusive};
use crate::word::{Letter, Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KbMode {
    #[default]
    Shortlex,
    Recursive,
    Auto,
}

impl std::str::FromStr for KbMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shortlex" => Ok(KbMode::Shortlex),
            "recursive" => Ok(KbMode::Recursive),
            "auto" => Ok(KbMode::Auto),
            other => Err(format!("unknown rewriting mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KbOracle {
    alphabet: Vec<Symbol>,
    map: BTreeMap<Symbol, Word>,
    system: RewritingSystem,
    route: String,
}

#[derive(Debug, Clone)]
struct Candidate {
    generators: Vec<Symbol>,
    relators: Vec<Word>,
    map: BTreeMap<Symbol, Word>,
    route: Vec<String>,
}

fn tidy(relators: &[Word]) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in relators {
        let core = r.cyclically_reduce().1;
        if !core.is_empty() && seen.insert(core.clone()) {
            out.push(core);
        }
    }
    out
}

impl Candidate {
    fn new(generators: &[Symbol], relators: &[Word]) -> Self {
        let map = generators.iter().map(|g| (g.clone(), Word::letter(Letter::pos(g.clone())))).collect();
        Candidate { generators: generators.to_vec(), relators: tidy(relators), map, route: Vec::new() }
    }

    fn substitute(&mut self, g: &Symbol, image: &Word) {
        let sub = BTreeMap::from([(g.clone(), image.clone())]);
        self.relators = tidy(&self.relators.iter().map(|r| r.substitute_partial(&sub)).collect::<Vec<_>>());
        for v in self.map.values_mut() {
            *v = v.substitute_partial(&sub).reduce();
        }
    }

    /// Removes generators that occur exactly once in some relator.
    fn eliminate(&mut self) {
        'outer: loop {
            for (ri, r) in self.relators.iter().enumerate() {
                for g in &self.generators {
                    if r.count_symbol(g) != 1 {
                        continue;
                    }
                    let pos = r.letters().iter().position(|l| &l.symbol == g).unwrap();
                    // Rotate so g^ε is last: α g^ε = 1.
                    let rotated = r.slice(pos + 1, r.len()).concat(&r.slice(0, pos));
                    let image = if r.letters()[pos].inverse { rotated.clone() } else { rotated.inverse() };
                    let g = g.clone();
                    self.relators.remove(ri);
                    self.generators.retain(|x| x != &g);
                    self.substitute(&g, &image.reduce());
                    self.route.push(format!("eliminate {g}"));
                    continue 'outer;
                }
            }
            break;
        }
    }

    fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    fn fresh(&self) -> Symbol {
        let used: BTreeSet<&str> =
            self.generators.iter().map(|s| s.as_str()).chain(self.map.keys().map(|s| s.as_str())).collect();
        (0..).map(|i| format!("_n{i}")).find(|n| !used.contains(n.as_str())).map(|n| Symbol::new(&n)).unwrap()
    }

    /// Replaces generator `y` by `t = x^ε y` (left) or `t = y x^ε` (right).
    fn nielsen(&self, x: &Symbol, y: &Symbol, eps: bool, left: bool) -> Candidate {
        let t = self.fresh();
        let tx = if eps { Letter::pos(x.clone()) } else { Letter::neg(x.clone()) };
        let xw = Word::letter(tx);
        let tw = Word::letter(Letter::pos(t.clone()));
        // y = x^-ε t  or  y = t x^-ε
        let image = if left { xw.inverse().concat(&tw) } else { tw.concat(&xw.inverse()) };
        let mut c = self.clone();
        c.substitute(y, &image);
        let slot = c.generators.iter().position(|g| g == y).unwrap();
        c.generators[slot] = t.clone();
        let sign = if eps { "" } else { "'" };
        c.route.push(if left { format!("{t} = {x}{sign} {y}") } else { format!("{t} = {y} {x}{sign}") });
        c
    }

    fn try_orderings(&self, budget: KbBudget) -> Option<(RewritingSystem, String)> {
        let mut reversed = self.generators.clone();
        reversed.reverse();
        let attempts = [
            (self.generators.clone(), RuleOrdering::Shortlex, "shortlex"),
            (self.generators.clone(), RuleOrdering::Recursive, "recursive"),
            (reversed, RuleOrdering::Recursive, "recursive reversed"),
        ];
        for (gens, ord, name) in attempts {
            let sys = complete(&gens, &self.relators, ord, budget);
            if sys.is_complete() {
                return Some((sys, name.to_string()));
            }
        }
        None
    }
}

const AUTO_BUDGET: KbBudget = KbBudget { max_rules: 200, max_rule_len: 24 };
const AUTO_MOVES: usize = 16;

pub fn kb_oracle(generators: &[Symbol], relators: &[Word], mode: KbMode, budget: KbBudget) -> KbOracle {
    let identity = Candidate::new(generators, relators);
    let wrap = |c: &Candidate, system: RewritingSystem, how: &str| {
        let mut route = c.route.clone();
        route.push(how.to_string());
        KbOracle { alphabet: generators.to_vec(), map: c.map.clone(), system, route: route.join("; ") }
    };
    let plain = |ord| complete(generators, relators, ord, budget);
    match mode {
        KbMode::Shortlex => return wrap(&identity, plain(RuleOrdering::Shortlex), "shortlex"),
        KbMode::Recursive => return wrap(&identity, plain(RuleOrdering::Recursive), "recursive"),
        KbMode::Auto => {}
    }
    let budget = KbBudget {
        max_rules: budget.max_rules.min(AUTO_BUDGET.max_rules),
        max_rule_len: budget.max_rule_len.min(AUTO_BUDGET.max_rule_len),
    };
    let first = complete(generators, relators, RuleOrdering::Shortlex, budget);
    if first.is_complete() {
        return wrap(&identity, first, "shortlex");
    }
    let mut base = identity.clone();
    base.eliminate();
    if let Some((sys, how)) = base.try_orderings(budget) {
        return wrap(&base, sys, &how);
    }
    let mut moves = Vec::new();
    for x in &base.generators {
        for y in &base.generators {
            if x == y {
                continue;
            }
            for eps in [true, false] {
                for left in [true, false] {
                    let mut c = base.nielsen(x, y, eps, left);
                    c.eliminate();
                    moves.push(c);
                }
            }
        }
    }
    moves.sort_by_key(|c| (c.total_length(), c.generators.len()));
    for c in moves.iter().take(AUTO_MOVES) {
        if let Some((sys, how)) = c.try_orderings(budget) {
            return wrap(c, sys, &how);
        }
    }
    wrap(&identity, first, "shortlex (incomplete)")
}

impl KbOracle {
    pub fn is_complete(&self) -> bool {
        self.system.is_complete()
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }

    /// How the completed presentation was reached.
    pub fn route(&self) -> &str {
        &self.route
    }

    fn normal_form(&self, w: &Word) -> Result<Vec<u32>, Inconclusive> {
        if let Some(l) = w.letters().iter().find(|l| !self.alphabet.contains(&l.symbol)) {
            return Err(Inconclusive(format!("letter `{}` is outside the alphabet", l.symbol)));
        }
        let t = w.substitute_partial(&self.map).reduce();
        let codes = self.system.encode(&t).ok_or_else(|| Inconclusive::new("translation left the alphabet"))?;
        Ok(self.system.reduce_codes(&codes))
    }
}

impl GroupOracle for KbOracle {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Decision {
        let nf = self.normal_form(w)?;
        if nf.is_empty() {
            Ok(true)
        } else if self.is_complete() {
            Ok(false)
        } else {
            Err(Inconclusive::new("rewriting system is incomplete"))
        }
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        if !self.is_complete() {
            return Err(Inconclusive::new("rewriting system is incomplete"));
        }
        let nf = self.normal_form(w)?;
        Ok(self.system.decode(&nf).to_string())
    }

    fn describe(&self) -> String {
        let state = if self.is_complete() { "complete" } else { "partial" };
        format!("kb({state}, {} rules, {})", self.system.rule_count(), self.route)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn syms(s: &str) -> Vec<Symbol> {
        s.split_whitespace().map(Symbol::new).collect()
    }

    #[test]
    fn free_abelian_lattice() {
        let k = kb_oracle(&syms("a b"), &[w("a b a' b'")], KbMode::Shortlex, KbBudget::default());
        assert_eq!(k.is_identity(&w("a b a' b'")), Ok(true));
        assert_eq!(k.is_identity(&w("a b b a' b' b'")), Ok(true));
        assert_eq!(k.is_identity(&w("a b a'")), Ok(false));
    }

    #[test]
    fn order_five() {
        let k = kb_oracle(&syms("a"), &[w("a a a a a")], KbMode::Shortlex, KbBudget::default());
        assert_eq!(k.is_identity(&w("a a a a a a a a' a'")), Ok(true));
    }

    #[test]
    fn auto_handles_a_baumslag_solitar_relator() {
        let rel = w("p q q p q p");
        assert!(!complete(&syms("p q"), std::slice::from_ref(&rel), RuleOrdering::Shortlex, KbBudget::default()).is_complete());
        let k = kb_oracle(&syms("p q"), std::slice::from_ref(&rel), KbMode::Auto, KbBudget::default());
        assert!(k.is_complete(), "{}", k.describe());
        assert_eq!(k.is_identity(&rel), Ok(true));
        assert_eq!(k.is_identity(&w("q p q q p q p q'")), Ok(true));
        assert_eq!(k.is_identity(&w("p q")), Ok(false));
        assert_eq!(k.canonical_key(&w("p q q p q")).unwrap(), k.canonical_key(&w("p'")).unwrap());
    }

    #[test]
    fn auto_spots_a_free_group() {
        let rel = w("z1 z2 z3 z2 z3 z3 z1 z1 z2 z3 z2 z3");
        let k = kb_oracle(&syms("z1 z2 z3"), std::slice::from_ref(&rel), KbMode::Auto, KbBudget::default());
        assert!(k.is_complete(), "{}", k.describe());
        assert_eq!(k.is_identity(&rel), Ok(true));
        assert_eq!(k.is_identity(&w("z1 z2")), Ok(false));
    }

    #[test]
    fn partial_systems_only_confirm() {
        let k = kb_oracle(&syms("p q"), &[w("p q q p q p")], KbMode::Shortlex, KbBudget::rules(20));
        assert!(!k.is_complete());
        assert_eq!(k.is_identity(&w("p q q p q p")), Ok(true));
        assert!(k.is_identity(&w("p")).is_err());
    }
}
