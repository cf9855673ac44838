//! Structural rewrites of factorised presentations: the uniquely marked
//! decomposition, the disjoint-alphabet amalgam chain, re-presentation over
//! a new set of units and the hidden uniquely-marked rewrite.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::factorise::{detect_alphabetically_disjoint, detect_uniquely_marked, MarkerAssignment};
use crate::freegroup::{stallings_graph, MembershipWitness};
use crate::presentation::{Factorisation, HiddenBlock, Kind, Occurrence, Presentation};
use crate::products::subgroup::infinite_order_character;
use crate::word::{Letter, Symbol, Word};

/// Prefix reserved for generated symbols.
pub const FRESH_PREFIX: &str = "_z";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("marker `{marker}` does not occur exactly once in factor {factor} and nowhere else")]
    BadMarker { factor: usize, marker: Symbol },
    #[error("factorisation is not alphabetically disjoint")]
    NotDisjoint,
    #[error("factorisation is neither uniquely marked nor alphabetically disjoint")]
    NoStructure,
    #[error("no certifiable order for factor {0}; supply an `order:` line")]
    UnknownOrder(Word),
    #[error("factor {0} is not freely reduced")]
    NotReduced(Word),
    #[error("{word} is not in the subgroup generated by the {side} words")]
    NotGenerated { word: Word, side: &'static str },
    #[error("condition {number} fails: {detail}")]
    Condition { number: u8, detail: String },
}

/// `k` fresh symbols `_z1.._zk`, skipping names already in `taken`.
pub fn fresh_symbols(k: usize, taken: &BTreeSet<Symbol>) -> Vec<Symbol> {
    let mut out = Vec::new();
    let mut n = 1;
    while out.len() < k {
        let s = Symbol::new(&format!("{FRESH_PREFIX}{n}"));
        if !taken.contains(&s) {
            out.push(s);
        }
        n += 1;
    }
    out
}

fn taken_symbols(p: &Presentation) -> BTreeSet<Symbol> {
    let mut t = p.alphabet();
    for r in &p.relators {
        t.extend(r.support());
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UmlPiece {
    pub prefix: Word,
    pub marker: Letter,
    pub suffix: Word,
}

/// `G ≅ H ∗ FG(X′)` for a uniquely marked factorisation.
#[derive(Debug, Clone, Serialize)]
pub struct UmlDecomposition {
    pub h: Presentation,
    pub free_part: Vec<Symbol>,
    pub z: Vec<Symbol>,
    pub pieces: Vec<UmlPiece>,
    /// Marker `y_j ↦ p_j⁻¹ z_j q_j⁻¹` (adjusted for the marker's sign).
    pub forward: BTreeMap<Symbol, Word>,
    /// `z_j ↦ u_j`.
    pub backward: BTreeMap<Symbol, Word>,
}

impl UmlDecomposition {
    pub fn to_product(&self, w: &Word) -> Word {
        w.substitute_partial(&self.forward)
    }

    pub fn to_original(&self, w: &Word) -> Word {
        w.substitute_partial(&self.backward)
    }

    /// Alphabet of `H ∗ FG(X′)`.
    pub fn product_alphabet(&self) -> Vec<Symbol> {
        self.z.iter().chain(&self.free_part).cloned().collect()
    }
}

pub fn uml_decompose(
    p: &Presentation,
    f: &Factorisation,
    m: &MarkerAssignment,
) -> Result<UmlDecomposition, StructureError> {
    let z = fresh_symbols(f.factors.len(), &taken_symbols(p));
    let mut pieces = Vec::new();
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for (j, (u, y)) in f.factors.iter().zip(&m.markers).enumerate() {
        let bad = || StructureError::BadMarker { factor: j, marker: y.clone() };
        if u.count_symbol(y) != 1 || f.factors.iter().enumerate().any(|(i, v)| i != j && v.count_symbol(y) > 0) {
            return Err(bad());
        }
        let at = u.letters().iter().position(|l| &l.symbol == y).ok_or_else(bad)?;
        let (prefix, marker, suffix) = (u.slice(0, at), u.letters()[at].clone(), u.slice(at + 1, u.len()));
        // p y^e q = z  ⇒  y^e = p⁻¹ z q⁻¹
        let image = prefix.inverse().concat(&Word::letter(Letter::pos(z[j].clone()))).concat(&suffix.inverse());
        forward.insert(y.clone(), if marker.inverse { image.inverse() } else { image });
        backward.insert(z[j].clone(), u.clone());
        pieces.push(UmlPiece { prefix, marker, suffix });
    }
    let free_part: Vec<Symbol> = p.generators.iter().filter(|s| !forward.contains_key(*s)).cloned().collect();
    let relators = (0..f.occurrences.len()).map(|i| f.pattern(i, &z)).collect();
    let h = Presentation::new(Kind::Group, z.clone(), relators);
    Ok(UmlDecomposition { h, free_part, z, pieces, forward, backward })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderSource {
    /// From an `order:` line.
    Supplied,
    /// A character of `G_{j-1}` is nonzero on the factor.
    Character,
}

#[derive(Debug, Clone, Serialize)]
pub struct DaLevel {
    pub factor: Word,
    pub z: Symbol,
    pub letters: Vec<Symbol>,
    /// 0 for infinite order.
    pub order: u64,
    pub order_source: OrderSource,
    /// `G_j`.
    pub group: Presentation,
    /// `B_j = ⟨X_j | u_j^m⟩`, free when `m = 0`.
    pub factor_group: Presentation,
}

/// `G_{j-1} = G_j ∗_{z_j = u_j} B_j` for `j = 1..k`.
#[derive(Debug, Clone, Serialize)]
pub struct DaChain {
    pub base: Presentation,
    pub leftover: Vec<Symbol>,
    pub levels: Vec<DaLevel>,
}

impl DaChain {
    /// `H`, the top of the chain with every factor replaced.
    pub fn top(&self) -> &Presentation {
        self.levels.last().map(|l| &l.group).unwrap_or(&self.base)
    }

    /// Presentation `G_j` (`G_0` is the input).
    pub fn group(&self, j: usize) -> &Presentation {
        if j == 0 {
            &self.base
        } else {
            &self.levels[j - 1].group
        }
    }

    /// `z_i ↦ u_i` for `i ≤ j`: embeds `G_j` in `G_0`.
    pub fn embedding(&self, j: usize) -> BTreeMap<Symbol, Word> {
        self.levels[..j].iter().map(|l| (l.z.clone(), l.factor.clone())).collect()
    }
}

fn occurrence_relators(f: &Factorisation, images: &[Word]) -> Vec<Word> {
    f.occurrences
        .iter()
        .map(|occ| {
            let mut out = Word::empty();
            for o in occ {
                let w = &images[o.factor];
                out.extend_from(&if o.inverse { w.inverse() } else { w.clone() });
            }
            out
        })
        .collect()
}

pub fn da_chain(p: &Presentation, f: &Factorisation, orders: &[(Word, u64)]) -> Result<DaChain, StructureError> {
    if !detect_alphabetically_disjoint(f) {
        return Err(StructureError::NotDisjoint);
    }
    let k = f.factors.len();
    let z = fresh_symbols(k, &taken_symbols(p));
    let supports: Vec<BTreeSet<Symbol>> = f.factors.iter().map(|u| u.support()).collect();
    let used: BTreeSet<Symbol> = supports.iter().flatten().cloned().collect();
    let leftover: Vec<Symbol> = p.generators.iter().filter(|s| !used.contains(*s)).cloned().collect();
    let mut levels: Vec<DaLevel> = Vec::new();
    let mut previous = Presentation::new(Kind::Group, p.generators.clone(), p.relators.clone());
    for j in 0..k {
        let u = &f.factors[j];
        let (order, order_source) = match orders.iter().find(|(w, _)| w == u) {
            Some(&(_, m)) => (m, OrderSource::Supplied),
            None => {
                infinite_order_character(&previous.generators, &previous.relators, u)
                    .ok_or_else(|| StructureError::UnknownOrder(u.clone()))?;
                (0, OrderSource::Character)
            }
        };
        let images: Vec<Word> = (0..k)
            .map(|i| if i <= j { Word::letter(Letter::pos(z[i].clone())) } else { f.factors[i].clone() })
            .collect();
        let mut generators = leftover.clone();
        generators.extend(z[..=j].iter().cloned());
        generators.extend(p.generators.iter().filter(|s| supports[j + 1..].iter().any(|x| x.contains(*s))).cloned());
        let group = Presentation::new(Kind::Group, generators, occurrence_relators(f, &images));
        let letters: Vec<Symbol> = p.generators.iter().filter(|s| supports[j].contains(*s)).cloned().collect();
        let factor_relators = if order == 0 { vec![] } else { vec![u.pow(order as i64)] };
        let factor_group = Presentation::new(Kind::Group, letters.clone(), factor_relators);
        previous = group.clone();
        levels.push(DaLevel { factor: u.clone(), z: z[j].clone(), letters, order, order_source, group, factor_group });
    }
    let base = Presentation::new(Kind::Group, p.generators.clone(), p.relators.clone());
    Ok(DaChain { base, leftover, levels })
}

fn expression_word(wit: &MembershipWitness) -> Vec<Occurrence> {
    wit.expression.iter().map(|&(i, s)| Occurrence { factor: i, inverse: s < 0 }).collect()
}

/// Re-presents `p` over the units `v` when `⟨U⟩ = ⟨V⟩` in the free group.
/// Each relator is rebuilt from the `V`-expressions of its factors, so it
/// freely reduces to the original.
pub fn change_units(
    p: &Presentation,
    f: &Factorisation,
    v: &[Word],
) -> Result<(Presentation, Factorisation), StructureError> {
    if let Some(u) = f.factors.iter().find(|u| !u.is_reduced()) {
        return Err(StructureError::NotReduced(u.clone()));
    }
    let gv = stallings_graph(v);
    let gu = stallings_graph(&f.factors);
    if let Some(x) = v.iter().find(|x| gu.contains(x).is_none()) {
        return Err(StructureError::NotGenerated { word: x.clone(), side: "U" });
    }
    let mut expressions = Vec::new();
    for u in &f.factors {
        let wit = gv.contains(u).ok_or_else(|| StructureError::NotGenerated { word: u.clone(), side: "V" })?;
        expressions.push(expression_word(&wit));
    }
    let mut occurrences: Vec<Vec<Occurrence>> = Vec::new();
    for occ in &f.occurrences {
        let mut out = Vec::new();
        for o in occ {
            let e = &expressions[o.factor];
            if o.inverse {
                out.extend(e.iter().rev().map(|x| Occurrence { factor: x.factor, inverse: !x.inverse }));
            } else {
                out.extend(e.iter().copied());
            }
        }
        occurrences.push(out);
    }
    // Drop unused V words and renumber.
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut factors = Vec::new();
    for occ in occurrences.iter_mut() {
        for o in occ.iter_mut() {
            let n = *index.entry(o.factor).or_insert_with(|| {
                factors.push(v[o.factor].clone());
                factors.len() - 1
            });
            o.factor = n;
        }
    }
    let nf = Factorisation::new(factors, occurrences);
    let relators = (0..nf.occurrences.len()).map(|i| nf.expand(i)).collect();
    let mut np = Presentation::new(p.kind, p.generators.clone(), relators);
    np.factorisation = Some(nf.clone());
    np.oracle = p.oracle.clone();
    np.orders = p.orders.clone();
    Ok((np, nf))
}

/// Indices into a block's `W` with exponents.
pub type WExpression = Vec<(usize, i8)>;

#[derive(Debug, Clone, Serialize)]
pub struct HiddenRewrite {
    pub presentation: Presentation,
    pub factorisation: Factorisation,
    pub markers: MarkerAssignment,
    pub units: Vec<Word>,
    /// Per block, per `y`: the `W`-expression reducing to `y`.
    pub witnesses: Vec<Vec<(Symbol, WExpression)>>,
}

/// Verifies the four block conditions and rewrites over
/// `V = {x y x⁻¹ : y ∈ Y} ∪ {x z}` per block.
pub fn hidden_uml_rewrite(
    p: &Presentation,
    f: &Factorisation,
    blocks: &[HiddenBlock],
) -> Result<HiddenRewrite, StructureError> {
    let fail = |number: u8, detail: String| StructureError::Condition { number, detail };
    // 1: the blocks' alphabets are disjoint.
    let mut seen: BTreeSet<Symbol> = BTreeSet::new();
    for b in blocks {
        let mut xs: Vec<Symbol> = vec![b.x.clone(), b.z.clone()];
        xs.extend(b.ys.iter().cloned());
        let distinct: BTreeSet<Symbol> = xs.iter().cloned().collect();
        if distinct.len() != xs.len() {
            return Err(fail(1, format!("block on {} repeats a letter", b.x)));
        }
        if let Some(s) = distinct.iter().find(|s| seen.contains(*s)) {
            return Err(fail(1, format!("letter {s} is in two blocks")));
        }
        seen.extend(distinct);
        if let Some(w) = b.words.iter().find(|w| w.letters().iter().any(|l| l.inverse || !b.ys.contains(&l.symbol))) {
            return Err(fail(1, format!("{w} is not a positive word over the block's y letters")));
        }
    }
    // 2: the factors are exactly the words x w z.
    let expected: BTreeSet<Word> = blocks
        .iter()
        .flat_map(|b| {
            b.words.iter().map(move |w| Word::letter(Letter::pos(b.x.clone())).concat(w).concat(&Word::letter(Letter::pos(b.z.clone()))))
        })
        .collect();
    let actual: BTreeSet<Word> = f.factors.iter().cloned().collect();
    if expected != actual {
        let diff: Vec<String> = expected.symmetric_difference(&actual).map(|w| w.to_string()).collect();
        return Err(fail(2, format!("factor set differs from the x·w·z words at {}", diff.join(", "))));
    }
    // 3: every W contains the empty word.
    if let Some(b) = blocks.iter().find(|b| !b.words.iter().any(|w| w.is_empty())) {
        return Err(fail(3, format!("W for the block on {} lacks the empty word", b.x)));
    }
    // 4: each y is the reduction of a product of W words.
    let mut witnesses = Vec::new();
    for b in blocks {
        let g = stallings_graph(&b.words);
        let mut per = Vec::new();
        for y in &b.ys {
            let yw = Word::letter(Letter::pos(y.clone()));
            let wit = g.contains(&yw).ok_or_else(|| fail(4, format!("{y} is not a product of W words")))?;
            debug_assert_eq!(wit.evaluate(&b.words).reduce(), yw);
            per.push((y.clone(), wit.expression));
        }
        witnesses.push(per);
    }
    let mut units = Vec::new();
    let mut markers = Vec::new();
    for b in blocks {
        let x = Word::letter(Letter::pos(b.x.clone()));
        for y in &b.ys {
            units.push(x.concat(&Word::letter(Letter::pos(y.clone()))).concat(&x.inverse()));
            markers.push(y.clone());
        }
        units.push(x.concat(&Word::letter(Letter::pos(b.z.clone()))));
        markers.push(b.z.clone());
    }
    let (presentation, factorisation) = change_units(p, f, &units)?;
    let found = detect_uniquely_marked(&factorisation)
        .ok_or_else(|| fail(2, "rewritten factorisation is not uniquely marked".into()))?;
    // Keep the block markers, in the rewritten factor order.
    let markers = MarkerAssignment {
        markers: factorisation.factors.iter().map(|u| markers[units.iter().position(|v| v == u).unwrap()].clone()).collect(),
    };
    debug_assert_eq!(found.markers.len(), markers.markers.len());
    Ok(HiddenRewrite { presentation, factorisation, markers, units, witnesses })
}

/// `⟨z_1..z_k | r_i(z)⟩`, the group of units when the factors are minimal
/// invertible pieces.
pub fn units_group_presentation(p: &Presentation, f: &Factorisation) -> Result<Presentation, StructureError> {
    if detect_uniquely_marked(f).is_none() && !detect_alphabetically_disjoint(f) {
        return Err(StructureError::NoStructure);
    }
    let z = fresh_symbols(f.factors.len(), &taken_symbols(p));
    let relators = (0..f.occurrences.len()).map(|i| f.pattern(i, &z)).collect();
    Ok(Presentation::new(Kind::Group, z, relators))
}
