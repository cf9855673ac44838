//! E-unitarity certificates: single cyclically reduced relators, and
//! amalgams of certified monoids over unit-generated submonoids.
//!
//! Certificates are plain data. [`replay`] re-verifies every premise from
//! the stored presentations, so a deserialized certificate can be trusted
//! without rerunning the search that produced it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assemble::{descriptor_of, detect_amalgam, Descriptor};
use crate::factorise::{adjan_unit_closure, replay_units, ClosureBudget, Derivation, UnitCertificate, UnitClosure};
use crate::presentation::{Factorisation, Kind, Occurrence, Presentation};
use crate::products::subgroup::infinite_order_character;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EUnitaryError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("relator {0} is not reduced")]
    NotReduced(Word),
    #[error("relator {0} is not cyclically reduced")]
    NotCyclicallyReduced(Word),
    #[error("generators {0:?} occur in both factors")]
    AlphabetClash(Vec<String>),
    #[error("{word} is not a word over the {side} factor")]
    WrongSide { word: Word, side: &'static str },
    #[error("no unit certificate for {word} in the {side} factor")]
    MissingUnitCertificate { word: Word, side: &'static str },
    #[error("{word} has no certified infinite order in the {side} group")]
    OrderUnknown { word: Word, side: &'static str },
    #[error("only single-pair amalgams are supported, got {0} pairs")]
    TooManyPairs(usize),
    #[error("replay failed: {0}")]
    Replay(String),
}

/// A unit together with a self-contained derivation: `chain` replays
/// against the factor presentation and `pieces` index the chain entries
/// whose concatenation is `word`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedUnit {
    pub word: Word,
    pub chain: Vec<UnitCertificate>,
    pub pieces: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedPair {
    pub left: CertifiedUnit,
    pub right: CertifiedUnit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "kebab-case")]
pub enum EUnitaryCertificate {
    SingleCyclicallyReduced {
        presentation: String,
    },
    AmalgamOverUnits {
        presentation: String,
        left: Box<EUnitaryCertificate>,
        right: Box<EUnitaryCertificate>,
        pairs: Vec<CertifiedPair>,
    },
}

impl EUnitaryCertificate {
    pub fn presentation_text(&self) -> &str {
        match self {
            EUnitaryCertificate::SingleCyclicallyReduced { presentation }
            | EUnitaryCertificate::AmalgamOverUnits { presentation, .. } => presentation,
        }
    }

    pub fn presentation(&self) -> Result<Presentation, EUnitaryError> {
        Presentation::parse(self.presentation_text()).map_err(|e| EUnitaryError::Replay(e.to_string()))
    }

    pub fn route(&self) -> &'static str {
        match self {
            EUnitaryCertificate::SingleCyclicallyReduced { .. } => "single-cyclically-reduced",
            EUnitaryCertificate::AmalgamOverUnits { .. } => "amalgam-over-units",
        }
    }
}

fn check_single(p: &Presentation) -> Result<(), EUnitaryError> {
    let [r] = p.relators.as_slice() else {
        return Err(EUnitaryError::NotApplicable(format!("{} relators, need exactly one", p.relators.len())));
    };
    if !r.is_reduced() {
        return Err(EUnitaryError::NotReduced(r.clone()));
    }
    let (conj, core) = r.cyclically_reduce();
    if !conj.is_empty() || &core != r {
        return Err(EUnitaryError::NotCyclicallyReduced(r.clone()));
    }
    Ok(())
}

pub fn certify_single_relator(p: &Presentation) -> Result<EUnitaryCertificate, EUnitaryError> {
    check_single(p)?;
    Ok(EUnitaryCertificate::SingleCyclicallyReduced { presentation: p.to_string() })
}

/// Splits `w` into a concatenation of the given words, shortest split first.
fn split_into(w: &Word, parts: &[&Word]) -> Option<Vec<usize>> {
    let n = w.len();
    let mut back: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    let mut reached = vec![false; n + 1];
    reached[0] = true;
    for i in 0..n {
        if !reached[i] {
            continue;
        }
        let rest = w.slice(i, n);
        for (k, part) in parts.iter().enumerate() {
            let j = i + part.len();
            if !part.is_empty() && part.is_prefix_of(&rest) && !reached[j] {
                reached[j] = true;
                back[j] = Some((i, k));
            }
        }
    }
    if !reached[n] {
        return None;
    }
    let mut out = Vec::new();
    let mut j = n;
    while j > 0 {
        let (i, k) = back[j].unwrap();
        out.push(k);
        j = i;
    }
    out.reverse();
    Some(out)
}

fn dependencies(d: &Derivation) -> Vec<usize> {
    match d {
        Derivation::Relator { .. } | Derivation::Readable { .. } => vec![],
        Derivation::Border { prefix_of, suffix_of } => vec![*prefix_of, *suffix_of],
        Derivation::Quotient { unit, removed, .. } => vec![*unit, *removed],
    }
}

/// Extracts the certificates needed for the given closure entries,
/// renumbered so that the result replays on its own.
fn cone(closure: &UnitClosure, roots: &[usize]) -> (Vec<UnitCertificate>, BTreeMap<usize, usize>) {
    let mut needed = BTreeSet::new();
    let mut stack: Vec<usize> = roots.to_vec();
    while let Some(i) = stack.pop() {
        if needed.insert(i) {
            stack.extend(dependencies(&closure.certificates[i].derivation));
        }
    }
    let renumber: BTreeMap<usize, usize> = needed.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let chain = needed
        .iter()
        .map(|&i| {
            let c = &closure.certificates[i];
            let derivation = match c.derivation.clone() {
                Derivation::Border { prefix_of, suffix_of } => {
                    Derivation::Border { prefix_of: renumber[&prefix_of], suffix_of: renumber[&suffix_of] }
                }
                Derivation::Quotient { unit, removed, side } => {
                    Derivation::Quotient { unit: renumber[&unit], removed: renumber[&removed], side }
                }
                d => d,
            };
            UnitCertificate { word: c.word.clone(), derivation }
        })
        .collect();
    (chain, renumber)
}

/// Certifies `w` as a product of units from the closure.
pub fn certify_unit(closure: &UnitClosure, w: &Word) -> Option<CertifiedUnit> {
    let words: Vec<&Word> = closure.certificates.iter().map(|c| &c.word).collect();
    let split = split_into(w, &words)?;
    let (chain, renumber) = cone(closure, &split);
    Some(CertifiedUnit { word: w.clone(), chain, pieces: split.iter().map(|i| renumber[i]).collect() })
}

fn replay_unit(p: &Presentation, u: &CertifiedUnit) -> Result<(), String> {
    replay_units(p, &u.chain)?;
    let mut product = Word::empty();
    for &i in &u.pieces {
        product = product.concat(&u.chain.get(i).ok_or(format!("piece index {i} out of range"))?.word);
    }
    if product != u.word {
        return Err(format!("pieces of {} concatenate to {product}", u.word));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubmonoidKind {
    Units,
    Idempotents,
    RightUnitCyclic,
    LeftUnitCyclic,
}

/// Checks a syntactic sufficient condition for the submonoid generated by
/// `generators` to be upward directed into the monoid of `p`. On failure
/// the first uncertified generator is returned.
pub fn check_upward_directed(p: &Presentation, kind: SubmonoidKind, generators: &[Word]) -> Result<(), Word> {
    match kind {
        SubmonoidKind::Units => {
            let closure = adjan_unit_closure(p, ClosureBudget::default());
            match generators.iter().find(|g| certify_unit(&closure, g).is_none()) {
                Some(g) => Err(g.clone()),
                None => Ok(()),
            }
        }
        SubmonoidKind::Idempotents => match generators.iter().find(|g| !g.reduce().is_empty()) {
            Some(g) => Err(g.clone()),
            None => Ok(()),
        },
        SubmonoidKind::RightUnitCyclic | SubmonoidKind::LeftUnitCyclic => {
            let [g] = generators else {
                return Err(generators.get(1).cloned().unwrap_or_default());
            };
            let mut parts: Vec<Word> = Vec::new();
            for r in &p.relators {
                let n = r.len();
                for k in 1..=n {
                    let piece = if kind == SubmonoidKind::RightUnitCyclic { r.slice(0, k) } else { r.slice(n - k, n) };
                    if !parts.contains(&piece) {
                        parts.push(piece);
                    }
                }
            }
            let refs: Vec<&Word> = parts.iter().collect();
            match split_into(g, &refs) {
                Some(_) => Ok(()),
                None => Err(g.clone()),
            }
        }
    }
}

fn check_disjoint(m1: &Presentation, m2: &Presentation) -> Result<(), EUnitaryError> {
    let clash: Vec<String> = m1.alphabet().intersection(&m2.alphabet()).map(|s| s.as_str().to_string()).collect();
    if clash.is_empty() {
        Ok(())
    } else {
        Err(EUnitaryError::AlphabetClash(clash))
    }
}

fn check_infinite(p: &Presentation, w: &Word, side: &'static str) -> Result<(), EUnitaryError> {
    match infinite_order_character(&p.generators, &p.relators, w) {
        Some(_) => Ok(()),
        None => Err(EUnitaryError::OrderUnknown { word: w.clone(), side }),
    }
}

/// The special presentation of the amalgam: both relator lists followed by
/// one relator `u v⁻¹` per pair, with the factorisations merged.
pub fn amalgam_presentation(m1: &Presentation, m2: &Presentation, pairs: &[(Word, Word)]) -> Presentation {
    let mut factors: Vec<Word> = Vec::new();
    let mut implicit: Vec<bool> = Vec::new();
    let mut occurrences: Vec<Vec<Occurrence>> = Vec::new();
    let index_of = |w: &Word, imp: bool, factors: &mut Vec<Word>, implicit: &mut Vec<bool>| -> usize {
        match factors.iter().position(|f| f == w) {
            Some(i) => {
                implicit[i] &= imp;
                i
            }
            None => {
                factors.push(w.clone());
                implicit.push(imp);
                factors.len() - 1
            }
        }
    };
    for m in [m1, m2] {
        let f = m.factorisation_or_trivial();
        for occs in &f.occurrences {
            let row = occs
                .iter()
                .map(|o| Occurrence {
                    factor: index_of(&f.factors[o.factor], f.implicit[o.factor], &mut factors, &mut implicit),
                    inverse: o.inverse,
                })
                .collect();
            occurrences.push(row);
        }
    }
    for (u, v) in pairs {
        let a = index_of(u, false, &mut factors, &mut implicit);
        let b = index_of(v, false, &mut factors, &mut implicit);
        implicit[a] = false;
        implicit[b] = false;
        occurrences.push(vec![Occurrence { factor: a, inverse: false }, Occurrence { factor: b, inverse: true }]);
    }
    let mut relators: Vec<Word> = m1.relators.iter().chain(&m2.relators).cloned().collect();
    relators.extend(pairs.iter().map(|(u, v)| u.concat(&v.inverse())));
    let mut generators = m1.generators.clone();
    generators.extend(m2.generators.iter().cloned());
    let f = Factorisation { factors, occurrences, implicit };
    let mut p = Presentation::new(Kind::InverseMonoid, generators, relators).with_factorisation(f);
    p.hidden_blocks = m1.hidden_blocks.iter().chain(&m2.hidden_blocks).cloned().collect();
    p.orders = m1.orders.iter().chain(&m2.orders).cloned().collect();
    if let (Ok(d1), Ok(d2)) = (descriptor_of(m1), descriptor_of(m2)) {
        let d = Descriptor::AmalgamOf(Box::new([(m1.generators.clone(), d1), (m2.generators.clone(), d2)]));
        p.oracle = Some(d.to_string());
    }
    p
}

fn same_presentation(cert: &EUnitaryCertificate, m: &Presentation) -> Result<(), EUnitaryError> {
    let stored = cert.presentation()?;
    if stored.generators != m.generators || stored.relators != m.relators {
        return Err(EUnitaryError::Replay("certificate belongs to a different presentation".into()));
    }
    Ok(())
}

pub fn certify_amalgam(
    m1: &Presentation,
    c1: &EUnitaryCertificate,
    m2: &Presentation,
    c2: &EUnitaryCertificate,
    pairs: &[(Word, Word)],
) -> Result<(EUnitaryCertificate, Presentation), EUnitaryError> {
    check_disjoint(m1, m2)?;
    same_presentation(c1, m1)?;
    same_presentation(c2, m2)?;
    replay(c1)?;
    replay(c2)?;
    if pairs.len() != 1 {
        return Err(EUnitaryError::TooManyPairs(pairs.len()));
    }
    let k1 = adjan_unit_closure(m1, ClosureBudget::default());
    let k2 = adjan_unit_closure(m2, ClosureBudget::default());
    let mut certified = Vec::new();
    for (u, v) in pairs {
        if !u.is_over(&m1.alphabet()) {
            return Err(EUnitaryError::WrongSide { word: u.clone(), side: "left" });
        }
        if !v.is_over(&m2.alphabet()) {
            return Err(EUnitaryError::WrongSide { word: v.clone(), side: "right" });
        }
        let left = certify_unit(&k1, u).ok_or(EUnitaryError::MissingUnitCertificate { word: u.clone(), side: "left" })?;
        let right = certify_unit(&k2, v).ok_or(EUnitaryError::MissingUnitCertificate { word: v.clone(), side: "right" })?;
        check_infinite(m1, u, "left")?;
        check_infinite(m2, v, "right")?;
        certified.push(CertifiedPair { left, right });
    }
    let p = amalgam_presentation(m1, m2, pairs);
    let cert = EUnitaryCertificate::AmalgamOverUnits {
        presentation: p.to_string(),
        left: Box::new(c1.clone()),
        right: Box::new(c2.clone()),
        pairs: certified,
    };
    Ok((cert, p))
}

/// Re-verifies every premise of a certificate from its stored data.
pub fn replay(cert: &EUnitaryCertificate) -> Result<(), EUnitaryError> {
    let p = cert.presentation()?;
    match cert {
        EUnitaryCertificate::SingleCyclicallyReduced { .. } => check_single(&p),
        EUnitaryCertificate::AmalgamOverUnits { left, right, pairs, .. } => {
            replay(left)?;
            replay(right)?;
            let m1 = left.presentation()?;
            let m2 = right.presentation()?;
            check_disjoint(&m1, &m2)?;
            if pairs.len() != 1 {
                return Err(EUnitaryError::TooManyPairs(pairs.len()));
            }
            let words: Vec<(Word, Word)> = pairs.iter().map(|c| (c.left.word.clone(), c.right.word.clone())).collect();
            for c in pairs {
                replay_unit(&m1, &c.left).map_err(EUnitaryError::Replay)?;
                replay_unit(&m2, &c.right).map_err(EUnitaryError::Replay)?;
                check_infinite(&m1, &c.left.word, "left")?;
                check_infinite(&m2, &c.right.word, "right")?;
            }
            let expected = amalgam_presentation(&m1, &m2, &words);
            if expected.generators != p.generators || expected.relators != p.relators {
                return Err(EUnitaryError::Replay("stored presentation differs from the factors and pairs".into()));
            }
            Ok(())
        }
    }
}

/// Tries the single-relator route, then splits along a detected amalgam
/// and certifies both sides recursively.
pub fn certify(p: &Presentation) -> Result<EUnitaryCertificate, EUnitaryError> {
    if p.relators.len() == 1 {
        return certify_single_relator(p);
    }
    let split = detect_amalgam(p).ok_or_else(|| {
        EUnitaryError::NotApplicable(format!("{} relators and no amalgam decomposition", p.relators.len()))
    })?;
    let c1 = certify(&split.left)?;
    let c2 = certify(&split.right)?;
    Ok(certify_amalgam(&split.left, &c1, &split.right, &c2, &split.pairs)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn parse(t: &str) -> Presentation {
        Presentation::parse(t).unwrap()
    }

    #[test]
    fn single_relator_route() {
        assert!(certify_single_relator(&parse("inverse_monoid\ngenerators: x y z\nrelator: (z) (x x y) (x x y) (z)\n")).is_ok());
        assert_eq!(
            certify_single_relator(&parse("inverse_monoid\ngenerators: a b\nrelator: a b b'\n")),
            Err(EUnitaryError::NotReduced(w("a b b'")))
        );
        assert_eq!(
            certify_single_relator(&parse("inverse_monoid\ngenerators: a b\nrelator: a b a'\n")),
            Err(EUnitaryError::NotCyclicallyReduced(w("a b a'")))
        );
        assert!(matches!(
            certify_single_relator(&parse("inverse_monoid\ngenerators: a b\nrelator: a b\nrelator: b a\n")),
            Err(EUnitaryError::NotApplicable(_))
        ));
    }

    #[test]
    fn upward_directed_cases() {
        let p = parse("inverse_monoid\ngenerators: x y z\nrelator: (z) (x x y) (x x y) (z)\n");
        assert_eq!(check_upward_directed(&p, SubmonoidKind::Units, &[w("z")]), Ok(()));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::Units, &[w("x")]), Err(w("x")));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::Idempotents, &[w("x x'")]), Ok(()));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::Idempotents, &[w("x")]), Err(w("x")));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::RightUnitCyclic, &[w("z x")]), Ok(()));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::LeftUnitCyclic, &[w("y z")]), Ok(()));
        assert_eq!(check_upward_directed(&p, SubmonoidKind::LeftUnitCyclic, &[w("x")]), Err(w("x")));
    }

    #[test]
    fn amalgam_of_two_copies() {
        let m1 = parse("inverse_monoid\ngenerators: x1 y1 z1\nrelator: (z1) (x1 x1 y1) (x1 x1 y1) (z1)\n");
        let m2 = parse("inverse_monoid\ngenerators: x2 y2 z2\nrelator: (z2) (x2 x2 y2) (x2 x2 y2) (z2)\n");
        let c1 = certify_single_relator(&m1).unwrap();
        let c2 = certify_single_relator(&m2).unwrap();
        let (cert, p) = certify_amalgam(&m1, &c1, &m2, &c2, &[(w("z1"), w("z2"))]).unwrap();
        assert_eq!(p.render_relation(2), "(z_1)(z_2)^{-1}=1");
        assert_eq!(replay(&cert), Ok(()));
        let json = serde_json::to_string(&cert).unwrap();
        let back: EUnitaryCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert_eq!(replay(&back), Ok(()));
        assert_eq!(
            certify_amalgam(&m1, &c1, &m2, &c2, &[(w("x1"), w("z2"))]),
            Err(EUnitaryError::MissingUnitCertificate { word: w("x1"), side: "left" })
        );
        assert!(matches!(certify_amalgam(&m1, &c1, &m1, &c1, &[(w("z1"), w("z1"))]), Err(EUnitaryError::AlphabetClash(_))));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let m1 = parse("inverse_monoid\ngenerators: x1 y1 z1\nrelator: (z1) (x1 x1 y1) (x1 x1 y1) (z1)\n");
        let m2 = parse("inverse_monoid\ngenerators: x2 y2 z2\nrelator: (z2) (x2 x2 y2) (x2 x2 y2) (z2)\n");
        let c1 = certify_single_relator(&m1).unwrap();
        let c2 = certify_single_relator(&m2).unwrap();
        let (cert, _) = certify_amalgam(&m1, &c1, &m2, &c2, &[(w("z1"), w("z2"))]).unwrap();
        let EUnitaryCertificate::AmalgamOverUnits { presentation, left, right, mut pairs } = cert else { unreachable!() };
        pairs[0].left.word = w("x1");
        let bad = EUnitaryCertificate::AmalgamOverUnits { presentation, left, right, pairs };
        assert!(replay(&bad).is_err());
    }
}
