//! Prefix membership: the uniquely marked pipeline (free product with a
//! free group, Benois on the free side) and the disjoint-alphabet pipeline
//! (descent through the amalgam chain).
//!
//! Every positive answer carries a witness: a list of prefix words whose
//! product equals the query in the group.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::answer::Answer;
use crate::assemble::{factor_group_oracle, AssemblyError};
use crate::factorise::{adjan_unit_closure, check_conservative, ClosureBudget, ConservativeRoute, MarkerAssignment};
use crate::freegroup::{benois_automaton, BenoisAutomaton};
use crate::presentation::{Factorisation, Presentation};
use crate::products::{
    amalgam_oracle, free_oracle, free_product_oracle, subgroup_oracle, Amalgamation, Decision, GroupOracle,
    Inconclusive, MappedOracle, Product, SharedOracle, Side,
};
use crate::structure::{da_chain, hidden_uml_rewrite, uml_decompose, DaChain, StructureError, UmlDecomposition};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    RelatorPrefixes,
    FactorPrefixes,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixGeneratorSet {
    pub words: Vec<Word>,
    pub provenance: Provenance,
}

fn push_unique(out: &mut Vec<Word>, w: Word) {
    if !out.contains(&w) {
        out.push(w);
    }
}

/// Nonempty prefixes of the relators, or of every factor and factor
/// inverse when a conservative factorisation is given. With nothing to
/// list, the result is the single empty word.
pub fn prefix_generators(p: &Presentation, f: Option<&Factorisation>) -> PrefixGeneratorSet {
    let mut words = Vec::new();
    let provenance = match f {
        None => {
            for r in &p.relators {
                r.prefixes().into_iter().filter(|w| !w.is_empty()).for_each(|w| push_unique(&mut words, w));
            }
            Provenance::RelatorPrefixes
        }
        Some(f) => {
            for u in &f.factors {
                for v in [u.clone(), u.inverse()] {
                    v.prefixes().into_iter().filter(|w| !w.is_empty()).for_each(|w| push_unique(&mut words, w));
                }
            }
            Provenance::FactorPrefixes
        }
    };
    if words.is_empty() {
        words.push(Word::empty());
    }
    PrefixGeneratorSet { words, provenance }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Free,
    Uml,
    Da,
    HiddenUml,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PmpError {
    #[error("no prefix-membership pipeline applies: {0}")]
    NotApplicable(String),
    #[error("factorisation is not certified conservative")]
    NotConservative,
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Assembly(#[from] AssemblyError),
    #[error("level {0} has finite order and more than one letter; a prefix oracle is required")]
    MissingOracle(usize),
    #[error("{0}")]
    Inconclusive(#[from] Inconclusive),
}

/// One syllable test of a decision.
#[derive(Debug, Clone, Serialize)]
pub struct SyllableCheck {
    pub level: usize,
    pub side: &'static str,
    pub word: Word,
    pub member: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Outcome {
    pub member: bool,
    pub trace: Vec<SyllableCheck>,
    /// Prefix words whose product equals the query (positive answers only).
    pub witness: Vec<Word>,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome) -> bool {
        self.trace.extend(other.trace);
        self.witness.extend(other.witness);
        other.member
    }
}

/// Accepts `w` iff every syllable on `free_side` of its normal form lies in
/// the submonoid of `automaton`; syllables on the other side are
/// unconstrained. `other_witness` turns an unconstrained syllable into
/// prefix words.
pub fn submonoid_in_free_product_decide(
    product: &Product,
    free_side: Side,
    automaton: &BenoisAutomaton,
    witness_words: &[Vec<Word>],
    other_witness: &dyn Fn(&Word) -> Vec<Word>,
    w: &Word,
) -> Result<Outcome, Inconclusive> {
    let nf = product.normal_form(w)?;
    let mut out = Outcome { member: true, ..Outcome::default() };
    for (side, s) in nf.syllables {
        if side == free_side {
            match automaton.witness(&s) {
                Some(idx) => {
                    out.witness.extend(idx.iter().flat_map(|&i| witness_words[i].iter().cloned()));
                    out.trace.push(SyllableCheck { level: 0, side: "free", word: s, member: true });
                }
                None => {
                    out.member = false;
                    out.trace.push(SyllableCheck { level: 0, side: "free", word: s, member: false });
                }
            }
        } else {
            out.witness.extend(other_witness(&s));
            out.trace.push(SyllableCheck { level: 0, side: "units", word: s, member: true });
        }
    }
    if !out.member {
        out.witness.clear();
    }
    Ok(out)
}

/// Accepts `w` iff every syllable of its amalgam normal form lies in the
/// submonoid for its side.
pub fn submonoid_in_amalgam_decide(
    product: &Product,
    left: &dyn Fn(&Word) -> Result<Outcome, Inconclusive>,
    right: &dyn Fn(&Word) -> Result<Outcome, Inconclusive>,
    w: &Word,
) -> Result<Outcome, Inconclusive> {
    let nf = product.normal_form(w)?;
    let mut out = Outcome { member: true, ..Outcome::default() };
    for (side, s) in nf.syllables {
        let o = match side {
            Side::Left => left(&s)?,
            Side::Right => right(&s)?,
        };
        out.member &= out.absorb(o);
    }
    if !out.member {
        out.witness.clear();
    }
    Ok(out)
}

/// Prefix membership through `G ≅ H ∗ FG(X′)`.
#[derive(Debug, Clone)]
pub struct UmlPrefixOracle {
    decomposition: UmlDecomposition,
    product: Product,
    automaton: BenoisAutomaton,
    witness_words: Vec<Vec<Word>>,
}

impl UmlPrefixOracle {
    pub fn new(d: UmlDecomposition, g: SharedOracle) -> Result<Self, PmpError> {
        // H embeds in G via z_j ↦ u_j.
        let h: SharedOracle = Arc::new(MappedOracle::new(&d.z, d.backward.clone(), g, "units"));
        let product = free_product_oracle(h, Arc::new(free_oracle(&d.free_part)))
            .map_err(|e| AssemblyError::Unsupported(e.to_string()))?;
        let mut q = Vec::new();
        for piece in &d.pieces {
            for w in piece.prefix.prefixes().into_iter().chain(piece.suffix.inverse().prefixes()) {
                if !w.is_empty() {
                    push_unique(&mut q, w);
                }
            }
        }
        let automaton = benois_automaton(&q);
        // Each generator of Q is literally a prefix of some u_j or u_j⁻¹.
        let witness_words = q.iter().map(|w| vec![w.clone()]).collect();
        Ok(UmlPrefixOracle { decomposition: d, product, automaton, witness_words })
    }

    pub fn decomposition(&self) -> &UmlDecomposition {
        &self.decomposition
    }

    pub fn q_generators(&self) -> &[Word] {
        self.automaton.generators()
    }

    pub fn decide(&self, w: &Word) -> Result<Outcome, Inconclusive> {
        let d = &self.decomposition;
        let units = |h: &Word| -> Vec<Word> {
            h.letters()
                .iter()
                .map(|l| {
                    let u = &d.backward[&l.symbol];
                    if l.inverse {
                        u.inverse()
                    } else {
                        u.clone()
                    }
                })
                .collect()
        };
        submonoid_in_free_product_decide(
            &self.product,
            Side::Right,
            &self.automaton,
            &self.witness_words,
            &units,
            &d.to_product(w),
        )
    }
}

enum FactorMembers {
    Free(BenoisAutomaton),
    /// `B_j` is finite cyclic on `letter` of order `order`; everything is a member.
    Whole { letter: Letter, order: u64 },
}

struct DaLevelOracle {
    product: Product,
    members: FactorMembers,
}

/// Prefix membership through the disjoint-alphabet amalgam chain.
pub struct DaPrefixOracle {
    chain: DaChain,
    levels: Vec<DaLevelOracle>,
    /// `G_k = H ∗ FG(X_0)` when `X_0` is nonempty.
    top: Option<Product>,
}

impl std::fmt::Debug for DaPrefixOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DaPrefixOracle").field("levels", &self.levels.len()).finish()
    }
}

impl DaPrefixOracle {
    pub fn new(chain: DaChain, g: SharedOracle) -> Result<Self, PmpError> {
        let k = chain.levels.len();
        let unsupported = |e: Inconclusive| PmpError::Assembly(AssemblyError::Unsupported(e.0));
        let group_oracle = |j: usize| -> SharedOracle {
            Arc::new(MappedOracle::new(&chain.group(j).generators, chain.embedding(j), g.clone(), "chain"))
        };
        let mut levels = Vec::new();
        for j in 0..k {
            let level = &chain.levels[j];
            let upper = group_oracle(j + 1);
            let b = factor_group_oracle(&level.factor_group)?;
            let z = Word::letter(Letter::pos(level.z.clone()));
            let am = Amalgamation {
                pairs: vec![(z.clone(), level.factor.clone())],
                left: subgroup_oracle(upper.clone(), &chain.group(j + 1).relators, &[z]).map_err(unsupported)?,
                right: subgroup_oracle(b.clone(), &level.factor_group.relators, std::slice::from_ref(&level.factor))
                    .map_err(unsupported)?,
            };
            let product = amalgam_oracle(upper, b, am).map_err(|e| AssemblyError::Unsupported(e.to_string()))?;
            let members = if level.order == 0 {
                let mut gens = Vec::new();
                for v in [level.factor.clone(), level.factor.inverse()] {
                    v.prefixes().into_iter().filter(|w| !w.is_empty()).for_each(|w| push_unique(&mut gens, w));
                }
                FactorMembers::Free(benois_automaton(&gens))
            } else if let [x] = level.letters.as_slice() {
                let first = level.factor.letters()[0].clone();
                let order = level.factor.exponent_sum(x).unsigned_abs() * level.order;
                FactorMembers::Whole { letter: first, order }
            } else {
                return Err(PmpError::MissingOracle(j + 1));
            };
            levels.push(DaLevelOracle { product, members });
        }
        let top = if chain.leftover.is_empty() {
            None
        } else {
            let h = group_oracle(k);
            let hz: SharedOracle = Arc::new(MappedOracle::new(
                &chain.levels.iter().map(|l| l.z.clone()).collect::<Vec<_>>(),
                BTreeMap::new(),
                h,
                "top",
            ));
            Some(free_product_oracle(hz, Arc::new(free_oracle(&chain.leftover))).map_err(|e| AssemblyError::Unsupported(e.to_string()))?)
        };
        Ok(DaPrefixOracle { chain, levels, top })
    }

    pub fn chain(&self) -> &DaChain {
        &self.chain
    }

    fn unit_words(&self, h: &Word) -> Vec<Word> {
        let map = self.chain.embedding(self.chain.levels.len());
        h.letters()
            .iter()
            .map(|l| {
                let u = &map[&l.symbol];
                if l.inverse {
                    u.inverse()
                } else {
                    u.clone()
                }
            })
            .collect()
    }

    fn decide_top(&self, w: &Word) -> Result<Outcome, Inconclusive> {
        let level = self.chain.levels.len();
        let Some(top) = &self.top else {
            return Ok(Outcome {
                member: true,
                trace: vec![SyllableCheck { level, side: "units", word: w.clone(), member: true }],
                witness: self.unit_words(w),
            });
        };
        let nf = top.normal_form(w)?;
        let mut out = Outcome { member: true, ..Outcome::default() };
        for (side, s) in nf.syllables {
            let member = side == Side::Left;
            out.member &= member;
            if member {
                out.witness.extend(self.unit_words(&s));
            }
            out.trace.push(SyllableCheck { level, side: if member { "units" } else { "free" }, word: s, member });
        }
        if !out.member {
            out.witness.clear();
        }
        Ok(out)
    }

    fn decide_factor(&self, j: usize, s: &Word) -> Outcome {
        let level = &self.levels[j];
        let (member, witness) = match &level.members {
            FactorMembers::Free(a) => match a.witness(s) {
                Some(idx) => (true, idx.into_iter().map(|i| a.generators()[i].clone()).collect()),
                None => (false, vec![]),
            },
            FactorMembers::Whole { letter, order } => {
                let e = s.exponent_sum(&letter.symbol) * letter.sign();
                let n = e.rem_euclid(*order as i64) as usize;
                (true, vec![Word::letter(letter.clone()); n])
            }
        };
        Outcome { member, trace: vec![SyllableCheck { level: j + 1, side: "factor", word: s.clone(), member }], witness }
    }

    /// Membership of `w` (over `G_j`'s alphabet) in `M_j`.
    fn decide_level(&self, j: usize, w: &Word) -> Result<Outcome, Inconclusive> {
        if j == self.levels.len() {
            return self.decide_top(w);
        }
        submonoid_in_amalgam_decide(
            &self.levels[j].product,
            &|s| self.decide_level(j + 1, s),
            &|s| Ok(self.decide_factor(j, s)),
            w,
        )
    }

    pub fn decide(&self, w: &Word) -> Result<Outcome, Inconclusive> {
        self.decide_level(0, w)
    }
}

/// Prefix membership when every relator is freely trivial, so `G` is free
/// and the prefix monoid is a finitely generated submonoid of it.
#[derive(Debug, Clone)]
pub struct FreePrefixOracle {
    automaton: BenoisAutomaton,
}

impl FreePrefixOracle {
    pub fn new(p: &Presentation) -> Self {
        let gens: Vec<Word> = prefix_generators(p, None).words.into_iter().filter(|w| !w.reduce().is_empty()).collect();
        FreePrefixOracle { automaton: benois_automaton(&gens) }
    }

    pub fn decide(&self, w: &Word) -> Outcome {
        let r = w.reduce();
        match self.automaton.witness(&r) {
            Some(idx) => Outcome {
                member: true,
                trace: vec![SyllableCheck { level: 0, side: "free", word: r, member: true }],
                witness: idx.into_iter().map(|i| self.automaton.generators()[i].clone()).collect(),
            },
            None => Outcome {
                member: false,
                trace: vec![SyllableCheck { level: 0, side: "free", word: r, member: false }],
                witness: vec![],
            },
        }
    }
}

#[derive(Debug)]
pub enum PrefixOracle {
    Free(FreePrefixOracle),
    Uml(UmlPrefixOracle),
    Da(DaPrefixOracle),
    HiddenUml(UmlPrefixOracle),
}

impl PrefixOracle {
    pub fn pipeline(&self) -> Pipeline {
        match self {
            PrefixOracle::Free(_) => Pipeline::Free,
            PrefixOracle::Uml(_) => Pipeline::Uml,
            PrefixOracle::Da(_) => Pipeline::Da,
            PrefixOracle::HiddenUml(_) => Pipeline::HiddenUml,
        }
    }

    pub fn decide(&self, w: &Word) -> Result<Outcome, Inconclusive> {
        match self {
            PrefixOracle::Free(o) => Ok(o.decide(w)),
            PrefixOracle::Uml(o) | PrefixOracle::HiddenUml(o) => o.decide(w),
            PrefixOracle::Da(o) => o.decide(w),
        }
    }

    pub fn contains(&self, w: &Word) -> Decision {
        Ok(self.decide(w)?.member)
    }
}

fn certify_conservative(p: &Presentation, f: &Factorisation) -> Result<ConservativeRoute, PmpError> {
    let closure = adjan_unit_closure(p, ClosureBudget::default());
    check_conservative(p, f, Some(&closure), None, None)?.ok_or(PmpError::NotConservative)
}

pub fn pmp_uml_oracle(p: &Presentation, f: &Factorisation, m: &MarkerAssignment, g: SharedOracle) -> Result<UmlPrefixOracle, PmpError> {
    certify_conservative(p, f)?;
    UmlPrefixOracle::new(uml_decompose(p, f, m)?, g)
}

pub fn pmp_da_oracle(p: &Presentation, f: &Factorisation, chain: DaChain, g: SharedOracle) -> Result<DaPrefixOracle, PmpError> {
    certify_conservative(p, f)?;
    DaPrefixOracle::new(chain, g)
}

pub fn pmp_uml_decide(p: &Presentation, f: &Factorisation, m: &MarkerAssignment, g: SharedOracle, w: &Word) -> Result<Outcome, PmpError> {
    Ok(pmp_uml_oracle(p, f, m, g)?.decide(w)?)
}

pub fn pmp_da_decide(p: &Presentation, f: &Factorisation, chain: DaChain, g: SharedOracle, w: &Word) -> Result<Outcome, PmpError> {
    Ok(pmp_da_oracle(p, f, chain, g)?.decide(w)?)
}

/// Chooses the pipeline from the presentation's structure: freely trivial
/// relators, hidden blocks, unique marking, then disjoint alphabets.
pub fn prefix_oracle(p: &Presentation, g: SharedOracle) -> Result<PrefixOracle, PmpError> {
    if p.relators.iter().all(|r| r.reduce().is_empty()) {
        return Ok(PrefixOracle::Free(FreePrefixOracle::new(p)));
    }
    let f = p.factorisation_or_trivial();
    if !p.hidden_blocks.is_empty() {
        certify_conservative(p, &f)?;
        // The rewritten factorisation is unital, hence conservative, for the
        // same monoid.
        let r = hidden_uml_rewrite(p, &f, &p.hidden_blocks)?;
        let d = uml_decompose(&r.presentation, &r.factorisation, &r.markers)?;
        return Ok(PrefixOracle::HiddenUml(UmlPrefixOracle::new(d, g)?));
    }
    if let Some(m) = crate::factorise::detect_uniquely_marked(&f) {
        return Ok(PrefixOracle::Uml(pmp_uml_oracle(p, &f, &m, g)?));
    }
    if crate::factorise::detect_alphabetically_disjoint(&f) {
        let chain = da_chain(p, &f, &p.orders)?;
        return Ok(PrefixOracle::Da(pmp_da_oracle(p, &f, chain, g)?));
    }
    Err(PmpError::NotApplicable("factorisation is neither uniquely marked nor alphabetically disjoint".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct PmpVerdict {
    pub word: Word,
    pub member: Answer,
    pub pipeline: Pipeline,
    pub trace: Vec<SyllableCheck>,
    pub witness: Vec<Word>,
    /// The witness product was checked equal to the word by the group oracle.
    pub witness_checked: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Decides `w` and, for positive answers, checks the witness product
/// against the group oracle.
pub fn verdict(oracle: &PrefixOracle, g: &dyn GroupOracle, w: &Word) -> PmpVerdict {
    match oracle.decide(w) {
        Ok(o) => {
            let witness_checked = if o.member {
                let product = o.witness.iter().fold(Word::empty(), |acc, x| acc.concat(x));
                Some(g.equal(&product, w).unwrap_or(false))
            } else {
                None
            };
            PmpVerdict {
                word: w.clone(),
                member: o.member.into(),
                pipeline: oracle.pipeline(),
                trace: o.trace,
                witness: o.witness,
                witness_checked,
                reason: None,
            }
        }
        Err(e) => PmpVerdict {
            word: w.clone(),
            member: Answer::Inconclusive,
            pipeline: oracle.pipeline(),
            trace: vec![],
            witness: vec![],
            witness_checked: None,
            reason: Some(e.0),
        },
    }
}
