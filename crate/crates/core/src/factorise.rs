//! Factorisation classes: validity, unique marking, disjoint alphabets,
//! unit certificates and conservativity.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::presentation::{Factorisation, FactorisationError, Presentation};
use crate::products::{Decision, Inconclusive};
use crate::stephen::{approximant_capped, Approximant};
use crate::word::{Symbol, Word};

pub fn validate_factorisation(p: &Presentation, f: &Factorisation) -> Result<(), FactorisationError> {
    f.validate(&p.relators)
}

/// One marker symbol per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkerAssignment {
    pub markers: Vec<Symbol>,
}

/// For each factor, the first symbol occurring exactly once in it and in no
/// other factor (either sign). `None` if some factor has no such symbol.
pub fn detect_uniquely_marked(f: &Factorisation) -> Option<MarkerAssignment> {
    let mut markers = Vec::new();
    for (i, u) in f.factors.iter().enumerate() {
        let m = u.letters().iter().map(|l| &l.symbol).find(|s| {
            u.count_symbol(s) == 1
                && f.factors.iter().enumerate().all(|(j, v)| j == i || v.count_symbol(s) == 0)
        })?;
        markers.push(m.clone());
    }
    Some(MarkerAssignment { markers })
}

/// At least two factors with pairwise disjoint supports.
pub fn detect_alphabetically_disjoint(f: &Factorisation) -> bool {
    if f.factors.len() < 2 {
        return false;
    }
    let mut seen: BTreeSet<Symbol> = BTreeSet::new();
    for u in &f.factors {
        let s = u.support();
        if s.iter().any(|x| seen.contains(x)) {
            return false;
        }
        seen.extend(s);
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Prefix,
    Suffix,
}

/// How a unit was obtained. Indices refer to earlier certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Derivation {
    /// The relator with this index.
    Relator { index: usize },
    /// A prefix of one unit that is also a suffix of another.
    Border { prefix_of: usize, suffix_of: usize },
    /// A unit with a unit prefix (or suffix) removed.
    Quotient { unit: usize, removed: usize, side: Side },
    /// Readable into and out of the root of the Stephen approximant of 1
    /// over the single relator `relator`.
    Readable { relator: usize, rounds: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCertificate {
    pub word: Word,
    pub derivation: Derivation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStatus {
    Fixpoint,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy)]
pub struct ClosureBudget {
    pub steps: usize,
    /// Rounds for the readability rule; 0 disables it.
    pub stephen_rounds: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget { steps: 10_000, stephen_rounds: crate::stephen::DEFAULT_ROUNDS }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitClosure {
    pub certificates: Vec<UnitCertificate>,
    pub status: ClosureStatus,
    pub steps: usize,
}

impl UnitClosure {
    pub fn contains(&self, w: &Word) -> bool {
        self.certificates.iter().any(|c| &c.word == w)
    }

    pub fn words(&self) -> Vec<&Word> {
        self.certificates.iter().map(|c| &c.word).collect()
    }
}

struct Closure {
    certs: Vec<UnitCertificate>,
    index: HashMap<Word, usize>,
    steps: usize,
    limit: usize,
}

impl Closure {
    /// Adds a certificate; false once the budget is spent.
    fn add(&mut self, word: Word, derivation: Derivation) -> bool {
        if word.is_empty() || self.index.contains_key(&word) {
            return true;
        }
        if self.steps >= self.limit {
            return false;
        }
        self.steps += 1;
        self.index.insert(word.clone(), self.certs.len());
        self.certs.push(UnitCertificate { word, derivation });
        true
    }

    /// One pass of the literal rules; returns (changed, within budget).
    fn literal_pass(&mut self) -> (bool, bool) {
        let before = self.certs.len();
        let n = self.certs.len();
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (self.certs[i].word.clone(), self.certs[j].word.clone());
                for k in 1..=u.len().min(v.len()) {
                    let piece = u.slice(0, k);
                    if v.slice(v.len() - k, v.len()) == piece
                        && !self.add(piece, Derivation::Border { prefix_of: i, suffix_of: j })
                    {
                        return (true, false);
                    }
                }
                if i != j && v.len() < u.len() {
                    if v.is_prefix_of(&u)
                        && !self.add(
                            u.slice(v.len(), u.len()),
                            Derivation::Quotient { unit: i, removed: j, side: Side::Prefix },
                        )
                    {
                        return (true, false);
                    }
                    if v.is_suffix_of(&u)
                        && !self.add(
                            u.slice(0, u.len() - v.len()),
                            Derivation::Quotient { unit: i, removed: j, side: Side::Suffix },
                        )
                    {
                        return (true, false);
                    }
                }
            }
        }
        (self.certs.len() > before, true)
    }
}

/// Vertex cap for the readability rule's approximants.
pub const READABILITY_CAP: usize = 100_000;

fn readability_graph(r: &Word, rounds: usize) -> Approximant {
    approximant_capped(std::slice::from_ref(r), &Word::empty(), rounds, READABILITY_CAP)
}

fn readable_both_ways(a: &Approximant, w: &Word) -> bool {
    let root = a.start();
    a.read_from(root, w).is_some() && a.read_from(root, &w.inverse()).is_some()
}

/// Least set of unit words closed under the rules of [`Derivation`],
/// starting from the relators. Sound: every certified word is a unit of the
/// inverse monoid (a unit modulo one relator stays a unit modulo all).
pub fn adjan_unit_closure(p: &Presentation, budget: ClosureBudget) -> UnitClosure {
    let mut c = Closure { certs: Vec::new(), index: HashMap::new(), steps: 0, limit: budget.steps };
    let exhausted = |c: Closure| UnitClosure { certificates: c.certs, status: ClosureStatus::BudgetExhausted, steps: c.steps };
    for (i, r) in p.relators.iter().enumerate() {
        if !c.add(r.clone(), Derivation::Relator { index: i }) {
            return exhausted(c);
        }
    }
    let mut stephen_done = budget.stephen_rounds == 0;
    loop {
        let (changed, ok) = c.literal_pass();
        if !ok {
            return exhausted(c);
        }
        if changed {
            continue;
        }
        if stephen_done {
            break;
        }
        stephen_done = true;
        let mut found = false;
        for (index, r) in p.relators.iter().enumerate() {
            let a = readability_graph(r, budget.stephen_rounds);
            for i in 0..r.len() {
                for j in i + 1..=r.len() {
                    let piece = r.slice(i, j);
                    if !c.index.contains_key(&piece) && readable_both_ways(&a, &piece) {
                        found = true;
                        if !c.add(piece, Derivation::Readable { relator: index, rounds: budget.stephen_rounds }) {
                            return exhausted(c);
                        }
                    }
                }
            }
        }
        if !found {
            break;
        }
    }
    UnitClosure { certificates: c.certs, status: ClosureStatus::Fixpoint, steps: c.steps }
}

/// Re-checks every derivation against the presentation.
pub fn replay_units(p: &Presentation, certs: &[UnitCertificate]) -> Result<(), String> {
    let mut approximants: BTreeMap<(usize, usize), Approximant> = BTreeMap::new();
    for (n, cert) in certs.iter().enumerate() {
        let earlier = |i: usize| -> Result<&Word, String> {
            if i < n {
                Ok(&certs[i].word)
            } else {
                Err(format!("certificate {n} refers forward to {i}"))
            }
        };
        let w = &cert.word;
        let ok = match &cert.derivation {
            Derivation::Relator { index } => p.relators.get(*index) == Some(w),
            Derivation::Border { prefix_of, suffix_of } => {
                w.is_prefix_of(earlier(*prefix_of)?) && w.is_suffix_of(earlier(*suffix_of)?)
            }
            Derivation::Quotient { unit, removed, side } => {
                let (u, r) = (earlier(*unit)?, earlier(*removed)?);
                match side {
                    Side::Prefix => r.concat(w) == *u,
                    Side::Suffix => w.concat(r) == *u,
                }
            }
            Derivation::Readable { relator, rounds } => {
                let Some(r) = p.relators.get(*relator) else {
                    return Err(format!("certificate {n} names a missing relator"));
                };
                let a = approximants.entry((*relator, *rounds)).or_insert_with(|| readability_graph(r, *rounds));
                readable_both_ways(a, w)
            }
        };
        if !ok || w.is_empty() {
            return Err(format!("certificate {n} ({w}) does not replay"));
        }
    }
    Ok(())
}

/// True when every factor is a certified unit.
pub fn is_unital(f: &Factorisation, units: &UnitClosure) -> bool {
    f.factors.iter().all(|u| units.contains(u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConservativeRoute {
    /// Both generating sets coincide.
    Literal,
    /// The factorisation is unital, hence conservative.
    Unital,
    /// Each generator was checked against the other submonoid.
    Oracle,
}

/// Prefix generators of the relators (the prefix monoid), nonempty only.
pub fn relator_prefixes(p: &Presentation) -> BTreeSet<Word> {
    p.relators.iter().flat_map(|r| r.prefixes()).filter(|w| !w.is_empty()).collect()
}

/// Prefixes of every factor and of every factor inverse, nonempty only.
pub fn factor_prefixes(f: &Factorisation) -> BTreeSet<Word> {
    f.factors
        .iter()
        .flat_map(|u| u.prefixes().into_iter().chain(u.inverse().prefixes()))
        .filter(|w| !w.is_empty())
        .collect()
}

/// Decides whether the factor prefixes generate the prefix monoid.
/// `in_prefix_monoid` and `in_factor_monoid` decide membership in the two
/// submonoids of the group.
pub fn check_conservative(
    p: &Presentation,
    f: &Factorisation,
    units: Option<&UnitClosure>,
    in_prefix_monoid: Option<&dyn Fn(&Word) -> Decision>,
    in_factor_monoid: Option<&dyn Fn(&Word) -> Decision>,
) -> Result<Option<ConservativeRoute>, Inconclusive> {
    let rel = relator_prefixes(p);
    let fac = factor_prefixes(f);
    // Inverse prefixes of a relator factor lie in the prefix monoid when that
    // factor is the whole relator: r = 1 makes r⁻¹'s prefixes suffix-complements.
    if f.factors.iter().all(|u| p.relators.contains(u)) && fac.iter().all(|w| rel.contains(w) || f.factors.iter().any(|u| w.is_prefix_of(&u.inverse()))) && rel.iter().all(|w| fac.contains(w)) {
        return Ok(Some(ConservativeRoute::Literal));
    }
    if let Some(u) = units {
        if is_unital(f, u) {
            return Ok(Some(ConservativeRoute::Unital));
        }
    }
    let (Some(pm), Some(fm)) = (in_prefix_monoid, in_factor_monoid) else { return Ok(None) };
    for w in &fac {
        if !pm(w)? {
            return Ok(None);
        }
    }
    for w in &rel {
        if !fm(w)? {
            return Ok(None);
        }
    }
    Ok(Some(ConservativeRoute::Oracle))
}

/// Summary of the factorisation classes of a presentation.
#[derive(Debug, Clone, Serialize)]
pub struct FactorisationReport {
    pub valid: Result<(), String>,
    pub uniquely_marked: Option<MarkerAssignment>,
    pub alphabetically_disjoint: bool,
    pub unital: bool,
    pub units: UnitClosure,
}

pub fn analyse(p: &Presentation, budget: ClosureBudget) -> FactorisationReport {
    let f = p.factorisation_or_trivial();
    let valid = validate_factorisation(p, &f).map_err(|e| e.to_string());
    let units = adjan_unit_closure(p, budget);
    FactorisationReport {
        uniquely_marked: detect_uniquely_marked(&f),
        alphabetically_disjoint: detect_alphabetically_disjoint(&f),
        unital: is_unital(&f, &units),
        valid,
        units,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Kind, Occurrence};
    use crate::word::w;

    fn monoid(gens: &str, rels: &[&str]) -> Presentation {
        Presentation::new(
            Kind::InverseMonoid,
            gens.split_whitespace().map(Symbol::new).collect(),
            rels.iter().map(|r| w(r)).collect(),
        )
    }

    fn occ(factor: usize, inverse: bool) -> Occurrence {
        Occurrence { factor, inverse }
    }

    #[test]
    fn validation() {
        let p = monoid("a b x y", &["a x b a y b b' x' a'"]);
        let f = Factorisation::new(
            vec![w("a x b"), w("a y b")],
            vec![vec![occ(0, false), occ(1, false), occ(0, true)]],
        );
        assert!(validate_factorisation(&p, &f).is_ok());
        let bad = Factorisation::new(vec![w("a x b"), w("a y b")], vec![vec![occ(0, false), occ(1, false)]]);
        assert!(matches!(validate_factorisation(&p, &bad), Err(FactorisationError::Mismatch { .. })));
        let unused = Factorisation::new(
            vec![w("a x b"), w("a y b"), w("b")],
            vec![vec![occ(0, false), occ(1, false), occ(0, true)]],
        );
        assert_eq!(validate_factorisation(&p, &unused), Err(FactorisationError::Unused(2)));
    }

    #[test]
    fn unique_marking() {
        let f = Factorisation::new(vec![w("a x b"), w("a y b")], vec![vec![occ(0, false), occ(1, false)]]);
        let m = detect_uniquely_marked(&f).unwrap();
        assert_eq!(m.markers, vec![Symbol::new("x"), Symbol::new("y")]);
        let f = Factorisation::new(vec![w("z"), w("x x y")], vec![vec![occ(0, false), occ(1, false)]]);
        assert_eq!(detect_uniquely_marked(&f).unwrap().markers, vec![Symbol::new("z"), Symbol::new("y")]);
        let f = Factorisation::new(vec![w("a b"), w("b a")], vec![vec![occ(0, false), occ(1, false)]]);
        assert!(detect_uniquely_marked(&f).is_none());
    }

    #[test]
    fn disjoint_alphabets() {
        let f = |fs: &[&str]| Factorisation::new(fs.iter().map(|x| w(x)).collect(), vec![]);
        assert!(detect_alphabetically_disjoint(&f(&["a a b b b", "c c c c c"])));
        assert!(!detect_alphabetically_disjoint(&f(&["a b c"])));
        assert!(!detect_alphabetically_disjoint(&f(&["a b", "b' c"])));
    }

    #[test]
    fn ohare_units() {
        let p = monoid("a b c d", &["a b c d a c d a d a b b c d a c d"]);
        let closure = adjan_unit_closure(&p, ClosureBudget::default());
        assert_eq!(closure.status, ClosureStatus::Fixpoint);
        for piece in ["a b c d", "a c d", "a d", "a b b c d"] {
            assert!(closure.contains(&w(piece)), "{piece}");
        }
        assert!(!closure.contains(&w("a")));
        replay_units(&p, &closure.certificates).unwrap();
    }

    #[test]
    fn disjoint_alphabet_units_by_borders() {
        let u = "a a b b b";
        let v = "c c c c c";
        let r = format!("{u} {v} {v} {u} {v} {u}");
        let p = monoid("a b c", &[&r]);
        let closure = adjan_unit_closure(&p, ClosureBudget { steps: 10_000, stephen_rounds: 0 });
        assert!(closure.contains(&w(u)) && closure.contains(&w(v)));
        replay_units(&p, &closure.certificates).unwrap();
    }

    #[test]
    fn single_letter_relator() {
        let p = monoid("a", &["a"]);
        let closure = adjan_unit_closure(&p, ClosureBudget::default());
        assert_eq!(closure.words(), vec![&w("a")]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = monoid("a b c", &["a a b b b c c c c c c c c c c a a b b b c c c c c a a b b b"]);
        let closure = adjan_unit_closure(&p, ClosureBudget { steps: 3, stephen_rounds: 0 });
        assert_eq!(closure.status, ClosureStatus::BudgetExhausted);
    }

    #[test]
    fn fixpoint_is_closed() {
        let p = monoid("a b c", &["a a b b b c c c c c c c c c c a a b b b c c c c c a a b b b"]);
        let budget = ClosureBudget { steps: 10_000, stephen_rounds: 0 };
        let closure = adjan_unit_closure(&p, budget);
        let mut c = Closure { certs: closure.certificates.clone(), index: HashMap::new(), steps: 0, limit: usize::MAX };
        for (i, cert) in c.certs.iter().enumerate() {
            c.index.insert(cert.word.clone(), i);
        }
        assert_eq!(c.literal_pass(), (false, true));
    }

    #[test]
    fn trivial_factorisation_is_conservative() {
        let p = monoid("a b", &["a a b"]);
        let f = Factorisation::trivial(&p.relators);
        assert_eq!(check_conservative(&p, &f, None, None, None), Ok(Some(ConservativeRoute::Literal)));
    }
}
