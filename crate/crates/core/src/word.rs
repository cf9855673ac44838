//! Signed words over an alphabet of identifiers.
//!
//! A [`Word`] is a plain sequence of [`Letter`]s. Comparison is always
//! letter-for-letter; equality in a group or monoid is an explicit oracle
//! call elsewhere in the crate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An alphabet symbol. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// A generator or its formal inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: Symbol,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(symbol: Symbol) -> Self {
        Letter { symbol, inverse: false }
    }

    pub fn neg(symbol: Symbol) -> Self {
        Letter { symbol, inverse: true }
    }

    pub fn inverse(&self) -> Letter {
        Letter { symbol: self.symbol.clone(), inverse: !self.inverse }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }

    /// +1 or -1.
    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}'", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("placeholder `{0}` has no assigned word")]
    Unassigned(Symbol),
    #[error("cannot parse word atom `{0}`")]
    BadAtom(String),
}

/// A finite sequence of letters; the empty sequence is the word 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Parses whitespace separated atoms `x` / `x'`. The literal `1` is the
    /// empty word.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for atom in text.split_whitespace() {
            if atom == "1" {
                continue;
            }
            let (name, inverse) = match atom.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (atom, false),
            };
            if name.is_empty() || !name.chars().all(is_ident_char) {
                return Err(WordError::BadAtom(atom.to_string()));
            }
            letters.push(Letter { symbol: Symbol::new(name), inverse });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Formal inverse: reversed, every sign flipped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    /// `self^n` as a literal word; negative powers use the formal inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word(out)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Free reduction.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for l in &self.0 {
            match out.last() {
                Some(top) if top.is_inverse_of(l) => {
                    out.pop();
                }
                _ => out.push(l.clone()),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].is_inverse_of(&p[1]))
    }

    /// Returns `(conjugator, core)` with `core` cyclically reduced and
    /// `conjugator · core · conjugator⁻¹` freely equal to `self`.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let r = self.reduce().0;
        let mut i = 0;
        let mut j = r.len();
        while j >= i + 2 && r[i].is_inverse_of(&r[j - 1]) {
            i += 1;
            j -= 1;
        }
        (Word(r[..i].to_vec()), Word(r[i..j].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(a), Some(b)) if self.len() > 1 => !a.is_inverse_of(b),
                _ => true,
            }
    }

    /// All `len + 1` literal prefixes, shortest first.
    pub fn prefixes(&self) -> Vec<Word> {
        (0..=self.len()).map(|k| Word(self.0[..k].to_vec())).collect()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// Homomorphic replacement of every symbol by its assigned word. No
    /// free reduction is applied.
    pub fn substitute(&self, assignment: &BTreeMap<Symbol, Word>) -> Result<Word, WordError> {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = assignment
                .get(&l.symbol)
                .ok_or_else(|| WordError::Unassigned(l.symbol.clone()))?;
            if l.inverse {
                out.extend(img.0.iter().rev().map(Letter::inverse));
            } else {
                out.extend_from_slice(&img.0);
            }
        }
        Ok(Word(out))
    }

    /// Like [`Word::substitute`] but symbols without an assignment are kept.
    pub fn substitute_partial(&self, assignment: &BTreeMap<Symbol, Word>) -> Word {
        let mut out = Vec::with_capacity(2 * self.len());
        for l in &self.0 {
            match assignment.get(&l.symbol) {
                Some(img) if l.inverse => out.extend(img.0.iter().rev().map(Letter::inverse)),
                Some(img) => out.extend_from_slice(&img.0),
                None => out.push(l.clone()),
            }
        }
        Word(out)
    }

    /// Symbols occurring in either sign.
    pub fn support(&self) -> BTreeSet<Symbol> {
        self.0.iter().map(|l| l.symbol.clone()).collect()
    }

    /// Occurrences of `sym` counting both signs.
    pub fn count_symbol(&self, sym: &Symbol) -> usize {
        self.0.iter().filter(|l| &l.symbol == sym).count()
    }

    /// Exponent sum of `sym`.
    pub fn exponent_sum(&self, sym: &Symbol) -> i64 {
        self.0.iter().filter(|l| &l.symbol == sym).map(Letter::sign).sum()
    }

    pub fn is_over(&self, alphabet: &BTreeSet<Symbol>) -> bool {
        self.0.iter().all(|l| alphabet.contains(&l.symbol))
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

/// Test and example shorthand: panics on malformed input.
pub fn w(text: &str) -> Word {
    Word::parse(text).expect("malformed word literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(w("a a' b").reduce(), w("b"));
        assert_eq!(Word::empty().reduce(), Word::empty());
        // red(bbc · (bc)⁻¹)
        assert_eq!(w("b b c c' b'").reduce(), w("b"));
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w("a b a'").cyclically_reduce(), (w("a"), w("b")));
        let r = w("z x x y x x y z");
        assert_eq!(r.cyclically_reduce(), (Word::empty(), r.clone()));
        assert_eq!(Word::empty().cyclically_reduce(), (Word::empty(), Word::empty()));
        assert_eq!(w("a b b' a'").cyclically_reduce(), (Word::empty(), Word::empty()));
        assert_eq!(w("a").cyclically_reduce(), (Word::empty(), w("a")));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(w("a b").inverse(), w("b' a'"));
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(w("a b c d").inverse(), w("d' c' b' a'"));
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(w("a a b").prefixes(), vec![Word::empty(), w("a"), w("a a"), w("a a b")]);
        assert_eq!(Word::empty().prefixes(), vec![Word::empty()]);
        assert_eq!(w("a b a").prefixes(), vec![Word::empty(), w("a"), w("a b"), w("a b a")]);
    }

    #[test]
    fn substitution_examples() {
        let map: BTreeMap<Symbol, Word> =
            [("x".into(), w("u")), ("y".into(), w("v"))].into_iter().collect();
        assert_eq!(w("x y x'").substitute(&map).unwrap(), w("u v u'"));

        let map: BTreeMap<Symbol, Word> = [("x".into(), Word::empty())].into_iter().collect();
        assert_eq!(w("x").substitute(&map).unwrap(), Word::empty());

        let map: BTreeMap<Symbol, Word> =
            [("z1".into(), w("z")), ("z2".into(), w("x x y"))].into_iter().collect();
        assert_eq!(w("z1 z2 z2 z1").substitute(&map).unwrap(), w("z x x y x x y z"));

        assert_eq!(w("q").substitute(&map), Err(WordError::Unassigned("q".into())));
    }

    #[test]
    fn parse_display_roundtrip() {
        let x = w("ab a' c_1");
        assert_eq!(x.to_string(), "ab a' c_1");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(w("1"), Word::empty());
        assert!(Word::parse("a''").is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0..3usize, any::<bool>()), 0..12).prop_map(|v| {
            v.into_iter()
                .map(|(s, inv)| Letter { symbol: Symbol::new(["a", "b", "c"][s]), inverse: inv })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(x in arb_word()) {
            prop_assert_eq!(x.reduce().reduce(), x.reduce());
            prop_assert!(x.reduce().is_reduced());
        }

        #[test]
        fn word_times_inverse_reduces_to_empty(x in arb_word()) {
            prop_assert!(x.concat(&x.inverse()).reduce().is_empty());
        }

        #[test]
        fn prefixes_are_nested(x in arb_word()) {
            let ps = x.prefixes();
            prop_assert_eq!(ps.len(), x.len() + 1);
            for pair in ps.windows(2) {
                prop_assert!(pair[0].is_prefix_of(&pair[1]));
            }
        }

        #[test]
        fn substitute_is_homomorphic(p in arb_word(), q in arb_word(), img in prop::collection::vec(arb_word(), 3)) {
            let map: BTreeMap<Symbol, Word> = ["a", "b", "c"].iter().map(|s| Symbol::new(s)).zip(img).collect();
            let lhs = p.concat(&q).substitute(&map).unwrap();
            let rhs = p.substitute(&map).unwrap().concat(&q.substitute(&map).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cyclic_core_has_no_wraparound_cancellation(x in arb_word()) {
            let (c, core) = x.cyclically_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(c.concat(&core).concat(&c.inverse()).reduce(), x.reduce());
        }
    }
}
