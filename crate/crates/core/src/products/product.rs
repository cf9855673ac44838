//! Free products and amalgamated free products of two oracle groups.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::oracle::{CachedOracle, Decision, GroupOracle, Inconclusive, SharedOracle};
use super::subgroup::SharedSubgroup;
use crate::freegroup::MembershipWitness;
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// Alternating syllables; empty for the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SyllableForm {
    pub syllables: Vec<(Side, Word)>,
}

impl SyllableForm {
    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("symbol `{0}` belongs to both factors")]
    AlphabetClash(Symbol),
    #[error("amalgamation needs the same number of generators on both sides")]
    PairCount,
}

/// Identification `u_i = v_i` with membership oracles for `⟨u_i⟩` on the
/// left and `⟨v_i⟩` on the right.
#[derive(Debug, Clone)]
pub struct Amalgamation {
    pub pairs: Vec<(Word, Word)>,
    pub left: SharedSubgroup,
    pub right: SharedSubgroup,
}

#[derive(Debug, Clone)]
pub struct Product {
    left: SharedOracle,
    right: SharedOracle,
    alphabet: Vec<Symbol>,
    left_symbols: HashSet<Symbol>,
    amalgam: Option<Amalgamation>,
}

fn build(left: SharedOracle, right: SharedOracle, amalgam: Option<Amalgamation>) -> Result<Product, ProductError> {
    let left_symbols: HashSet<Symbol> = left.alphabet().iter().cloned().collect();
    if let Some(s) = right.alphabet().iter().find(|s| left_symbols.contains(*s)) {
        return Err(ProductError::AlphabetClash(s.clone()));
    }
    let alphabet = left.alphabet().iter().chain(right.alphabet()).cloned().collect();
    let left: SharedOracle = Arc::new(CachedOracle::new(left));
    let right: SharedOracle = Arc::new(CachedOracle::new(right));
    Ok(Product { left, right, alphabet, left_symbols, amalgam })
}

pub fn free_product_oracle(left: SharedOracle, right: SharedOracle) -> Result<Product, ProductError> {
    build(left, right, None)
}

pub fn amalgam_oracle(
    left: SharedOracle,
    right: SharedOracle,
    amalgam: Amalgamation,
) -> Result<Product, ProductError> {
    if amalgam.left.generators().len() != amalgam.pairs.len()
        || amalgam.right.generators().len() != amalgam.pairs.len()
    {
        return Err(ProductError::PairCount);
    }
    build(left, right, Some(amalgam))
}

impl Product {
    pub fn factor(&self, side: Side) -> &SharedOracle {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn amalgamation(&self) -> Option<&Amalgamation> {
        self.amalgam.as_ref()
    }

    pub fn side_of(&self, s: &Symbol) -> Option<Side> {
        if self.left_symbols.contains(s) {
            Some(Side::Left)
        } else if self.right.alphabet().contains(s) {
            Some(Side::Right)
        } else {
            None
        }
    }

    fn subgroup(&self, side: Side) -> Option<&SharedSubgroup> {
        self.amalgam.as_ref().map(|a| match side {
            Side::Left => &a.left,
            Side::Right => &a.right,
        })
    }

    /// Evaluates an amalgamated-subgroup witness on the given side.
    pub fn evaluate(&self, witness: &MembershipWitness, side: Side) -> Word {
        let Some(a) = &self.amalgam else { return Word::empty() };
        let gens: Vec<Word> = a.pairs.iter().map(|(u, v)| if side == Side::Left { u.clone() } else { v.clone() }).collect();
        witness.evaluate(&gens)
    }

    fn split(&self, w: &Word) -> Result<Vec<(Side, Word)>, Inconclusive> {
        let mut out: Vec<(Side, Word)> = Vec::new();
        for l in w.letters() {
            let side = self
                .side_of(&l.symbol)
                .ok_or_else(|| Inconclusive(format!("letter `{}` is outside the alphabet", l.symbol)))?;
            match out.last_mut() {
                Some((s, word)) if *s == side => word.push(l.clone()),
                _ => out.push((side, Word::letter(l.clone()))),
            }
        }
        Ok(out)
    }

    /// Reduced syllable form: adjacent syllables alternate sides, no syllable
    /// is trivial, and (when amalgamated) no syllable of a form with two or
    /// more syllables lies in the amalgamated subgroup.
    pub fn normal_form(&self, w: &Word) -> Result<SyllableForm, Inconclusive> {
        let mut stack: Vec<(Side, Word)> = Vec::new();
        for (side, word) in self.split(w)? {
            self.push(&mut stack, side, word)?;
        }
        Ok(SyllableForm { syllables: stack })
    }

    fn push(&self, stack: &mut Vec<(Side, Word)>, side: Side, word: Word) -> Result<(), Inconclusive> {
        match stack.last_mut() {
            Some((s, top)) if *s == side => *top = top.concat(&word).reduce(),
            _ => stack.push((side, word.reduce())),
        }
        loop {
            let Some((side, top)) = stack.last().cloned() else { return Ok(()) };
            if self.factor(side).is_identity(&top)? {
                stack.pop();
                return Ok(());
            }
            if stack.len() < 2 {
                return Ok(());
            }
            let Some(sub) = self.subgroup(side) else { return Ok(()) };
            let Some(witness) = sub.contains(&top)? else { return Ok(()) };
            stack.pop();
            let moved = self.evaluate(&witness, side.other());
            let below = stack.last_mut().expect("stack has a syllable below");
            below.1 = below.1.concat(&moved).reduce();
        }
    }
}

impl GroupOracle for Product {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Decision {
        Ok(self.normal_form(w)?.is_identity())
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        let nf = self.normal_form(w)?;
        let mut parts: Vec<String> = Vec::new();
        let Some(_) = &self.amalgam else {
            for (side, word) in &nf.syllables {
                parts.push(format!("{}:{}", side.tag(), self.factor(*side).canonical_key(word)?));
            }
            return Ok(format!("[{}]", parts.join("|")));
        };
        let mut carry = MembershipWitness::default();
        let mut syllables = nf.syllables.as_slice();
        if let [(side, word)] = syllables {
            if let Some(wit) = self.subgroup(*side).unwrap().contains(word)? {
                carry = wit;
                syllables = &[];
            }
        }
        for (side, word) in syllables {
            let x = self.evaluate(&carry, *side).concat(word);
            let (rep, a) = self.subgroup(*side).unwrap().coset_split(&x)?;
            parts.push(format!("{}:{}", side.tag(), self.factor(*side).canonical_key(&rep)?));
            carry = a;
        }
        parts.push(format!("A:{}", self.left.canonical_key(&self.evaluate(&carry, Side::Left))?));
        Ok(format!("[{}]", parts.join("|")))
    }

    fn describe(&self) -> String {
        match &self.amalgam {
            None => format!("({} * {})", self.left.describe(), self.right.describe()),
            Some(a) => {
                let pairs: Vec<String> = a.pairs.iter().map(|(u, v)| format!("{u} = {v}")).collect();
                format!("({} *[{}] {})", self.left.describe(), pairs.join(", "), self.right.describe())
            }
        }
    }
}
