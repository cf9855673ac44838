//! Oracle descriptors (the `oracle:` line of a presentation file) and the
//! construction of word-problem oracles from them.
//!
//! ```text
//! free
//! cyclic 5
//! kb [max-rules] [shortlex|recursive|auto]
//! tietze <inner>      simplify, then <inner> on what is left (free if nothing)
//! uml <inner>          H by <inner>, then H ∗ FG(X′)
//! hidden-uml <inner>   rewrite over the hidden units, then as uml
//! da <inner>           H by <inner>, then the amalgam chain
//! amalgam-of [gens : <desc>] [gens : <desc>]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::factorise::detect_uniquely_marked;
use crate::presentation::{Factorisation, Kind, Occurrence, Presentation};
use crate::products::{
    amalgam_oracle, cyclic_oracle, free_oracle, free_product_oracle, kb_oracle, subgroup_oracle, Amalgamation,
    KbBudget, KbMode, MappedOracle, SharedOracle,
    tietze_simplify,
};
use crate::structure::{da_chain, hidden_uml_rewrite, uml_decompose, DaChain, StructureError, UmlDecomposition};
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Free,
    Cyclic(u64),
    Kb { max_rules: Option<usize>, mode: KbMode },
    Tietze(Box<Descriptor>),
    Uml(Box<Descriptor>),
    HiddenUml(Box<Descriptor>),
    Da(Box<Descriptor>),
    AmalgamOf(Box<[(Vec<Symbol>, Descriptor); 2]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("bad oracle descriptor: {0}")]
    Syntax(String),
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Unsupported(String),
}

fn tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        if c.is_whitespace() || matches!(c, '[' | ']' | ':') {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

struct DescParser {
    toks: Vec<String>,
    pos: usize,
}

impl DescParser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|s| s.as_str())
    }

    fn next(&mut self) -> Result<String, AssemblyError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| AssemblyError::Syntax("unexpected end".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, t: &str) -> Result<(), AssemblyError> {
        let got = self.next()?;
        if got == t {
            Ok(())
        } else {
            Err(AssemblyError::Syntax(format!("expected `{t}`, found `{got}`")))
        }
    }

    fn descriptor(&mut self) -> Result<Descriptor, AssemblyError> {
        let head = self.next()?;
        match head.as_str() {
            "free" => Ok(Descriptor::Free),
            "cyclic" => {
                let m = self.next()?;
                let m: u64 = m.parse().map_err(|_| AssemblyError::Syntax(format!("bad order `{m}`")))?;
                if m == 0 {
                    return Err(AssemblyError::Syntax("cyclic order must be positive".into()));
                }
                Ok(Descriptor::Cyclic(m))
            }
            "kb" => {
                let mut max_rules = None;
                let mut mode = KbMode::default();
                while let Some(t) = self.peek() {
                    if let Ok(n) = t.parse::<usize>() {
                        max_rules = Some(n);
                    } else if let Ok(m) = t.parse::<KbMode>() {
                        mode = m;
                    } else {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(Descriptor::Kb { max_rules, mode })
            }
            "tietze" => Ok(Descriptor::Tietze(Box::new(self.descriptor()?))),
            "uml" => Ok(Descriptor::Uml(Box::new(self.descriptor()?))),
            "hidden-uml" => Ok(Descriptor::HiddenUml(Box::new(self.descriptor()?))),
            "da" => Ok(Descriptor::Da(Box::new(self.descriptor()?))),
            "amalgam-of" => {
                let a = self.side()?;
                let b = self.side()?;
                Ok(Descriptor::AmalgamOf(Box::new([a, b])))
            }
            other => Err(AssemblyError::Syntax(format!("unknown oracle `{other}`"))),
        }
    }

    fn side(&mut self) -> Result<(Vec<Symbol>, Descriptor), AssemblyError> {
        self.expect("[")?;
        let mut gens = Vec::new();
        loop {
            let t = self.next()?;
            if t == ":" {
                break;
            }
            gens.push(Symbol::new(&t));
        }
        let d = self.descriptor()?;
        self.expect("]")?;
        Ok((gens, d))
    }
}

impl FromStr for Descriptor {
    type Err = AssemblyError;
    fn from_str(s: &str) -> Result<Self, AssemblyError> {
        let mut p = DescParser { toks: tokens(s), pos: 0 };
        let d = p.descriptor()?;
        if let Some(t) = p.peek() {
            return Err(AssemblyError::Syntax(format!("trailing `{t}`")));
        }
        Ok(d)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Free => write!(f, "free"),
            Descriptor::Cyclic(m) => write!(f, "cyclic {m}"),
            Descriptor::Kb { max_rules, mode } => {
                write!(f, "kb")?;
                if let Some(n) = max_rules {
                    write!(f, " {n}")?;
                }
                match mode {
                    KbMode::Shortlex => Ok(()),
                    KbMode::Recursive => write!(f, " recursive"),
                    KbMode::Auto => write!(f, " auto"),
                }
            }
            Descriptor::Tietze(d) => write!(f, "tietze {d}"),
            Descriptor::Uml(d) => write!(f, "uml {d}"),
            Descriptor::HiddenUml(d) => write!(f, "hidden-uml {d}"),
            Descriptor::Da(d) => write!(f, "da {d}"),
            Descriptor::AmalgamOf(sides) => {
                write!(f, "amalgam-of")?;
                for (gens, d) in sides.iter() {
                    let g: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
                    write!(f, " [{} : {d}]", g.join(" "))?;
                }
                Ok(())
            }
        }
    }
}

/// The descriptor used when a file declares none.
pub fn default_descriptor() -> Descriptor {
    Descriptor::Tietze(Box::new(Descriptor::Kb { max_rules: None, mode: KbMode::Auto }))
}

pub fn descriptor_of(p: &Presentation) -> Result<Descriptor, AssemblyError> {
    match &p.oracle {
        Some(text) => text.parse(),
        None => Ok(default_descriptor()),
    }
}

/// The word-problem oracle for the maximal group image of `p`.
pub fn group_oracle(p: &Presentation) -> Result<SharedOracle, AssemblyError> {
    build_oracle(p, &descriptor_of(p)?)
}

/// The part of `p` over `gens`: relators, factorisation, hidden blocks and
/// order tags whose letters all lie in `gens`.
pub fn restrict(p: &Presentation, gens: &[Symbol]) -> Presentation {
    let set: BTreeSet<Symbol> = gens.iter().cloned().collect();
    let keep: Vec<usize> = (0..p.relators.len()).filter(|&i| p.relators[i].is_over(&set)).collect();
    let mut q = Presentation::new(p.kind, gens.to_vec(), keep.iter().map(|&i| p.relators[i].clone()).collect());
    q.factorisation = p.factorisation.as_ref().map(|f| restrict_factorisation(f, &keep));
    q.hidden_blocks = p
        .hidden_blocks
        .iter()
        .filter(|b| set.contains(&b.x) && set.contains(&b.z) && b.ys.iter().all(|y| set.contains(y)))
        .cloned()
        .collect();
    q.orders = p.orders.iter().filter(|(w, _)| w.is_over(&set)).cloned().collect();
    q
}

fn restrict_factorisation(f: &Factorisation, keep: &[usize]) -> Factorisation {
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut factors = Vec::new();
    let mut implicit = Vec::new();
    let mut occurrences = Vec::new();
    for &i in keep {
        let occ: Vec<Occurrence> = f.occurrences[i]
            .iter()
            .map(|o| {
                let n = *index.entry(o.factor).or_insert_with(|| {
                    factors.push(f.factors[o.factor].clone());
                    implicit.push(f.implicit.get(o.factor).copied().unwrap_or(false));
                    factors.len() - 1
                });
                Occurrence { factor: n, inverse: o.inverse }
            })
            .collect();
        occurrences.push(occ);
    }
    let mut out = Factorisation::new(factors, occurrences);
    out.implicit = implicit;
    out
}

/// A two-sided amalgam split of a presentation.
#[derive(Debug, Clone)]
pub struct AmalgamSplit {
    pub left: Presentation,
    pub right: Presentation,
    /// `(u, v)` with `u` over the left letters, `v` over the right, from
    /// relators `u v⁻¹` (or a cyclic rotation of it).
    pub pairs: Vec<(Word, Word)>,
}

/// Splits `p` along `left`/`right`. Relators over both alphabets must be
/// a left word followed by a right word, or the reverse.
pub fn split_amalgam(p: &Presentation, left: &[Symbol], right: &[Symbol]) -> Result<AmalgamSplit, AssemblyError> {
    let ls: BTreeSet<Symbol> = left.iter().cloned().collect();
    let rs: BTreeSet<Symbol> = right.iter().cloned().collect();
    if let Some(s) = ls.intersection(&rs).next() {
        return Err(AssemblyError::Unsupported(format!("letter `{s}` is on both sides")));
    }
    if let Some(s) = p.generators.iter().find(|s| !ls.contains(*s) && !rs.contains(*s)) {
        return Err(AssemblyError::Unsupported(format!("letter `{s}` is on neither side")));
    }
    let mut pairs = Vec::new();
    for r in &p.relators {
        if r.is_over(&ls) || r.is_over(&rs) {
            continue;
        }
        let first_left = ls.contains(&r.letters()[0].symbol);
        let cut = r.letters().iter().position(|l| ls.contains(&l.symbol) != first_left).unwrap_or(r.len());
        let (a, b) = (r.slice(0, cut), r.slice(cut, r.len()));
        let (u, v) = if first_left { (a, b.inverse()) } else { (b, a.inverse()) };
        if !u.is_over(&ls) || !v.is_over(&rs) {
            return Err(AssemblyError::Unsupported(format!("relator {r} is not of the form u v⁻¹ across the sides")));
        }
        pairs.push((u, v));
    }
    Ok(AmalgamSplit { left: restrict(p, left), right: restrict(p, right), pairs })
}

/// True when `r = a b` with `a`, `b` nonempty and of disjoint support.
fn splits_in_two(r: &Word) -> bool {
    (1..r.len()).any(|k| r.slice(0, k).support().is_disjoint(&r.slice(k, r.len()).support()))
}

/// Finds a two-sided amalgam structure: the generators fall into exactly
/// two classes linked by relators that do not split into two
/// disjoint-support halves.
pub fn detect_amalgam(p: &Presentation) -> Option<AmalgamSplit> {
    let n = p.generators.len();
    let index: BTreeMap<&Symbol, usize> = p.generators.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for r in p.relators.iter().filter(|r| !splits_in_two(r)) {
        let syms: Vec<usize> = r.support().iter().filter_map(|s| index.get(s).copied()).collect();
        for w in syms.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut classes: BTreeMap<usize, Vec<Symbol>> = BTreeMap::new();
    for (i, s) in p.generators.iter().enumerate() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(s.clone());
    }
    let mut classes: Vec<Vec<Symbol>> = classes.into_values().collect();
    if classes.len() != 2 {
        return None;
    }
    classes.sort_by_key(|c| p.generators.iter().position(|s| s == &c[0]));
    let split = split_amalgam(p, &classes[0], &classes[1]).ok()?;
    if split.pairs.is_empty() {
        return None;
    }
    Some(split)
}

fn ensure_free(p: &Presentation) -> Result<(), AssemblyError> {
    match p.relators.iter().find(|r| !r.reduce().is_empty()) {
        Some(r) => Err(AssemblyError::Unsupported(format!("`free` oracle, but relator {r} is nontrivial"))),
        None => Ok(()),
    }
}

pub fn uml_structure(p: &Presentation) -> Result<(Presentation, UmlDecomposition), AssemblyError> {
    let f = p.factorisation_or_trivial();
    let m = detect_uniquely_marked(&f)
        .ok_or_else(|| AssemblyError::Unsupported("factorisation is not uniquely marked".into()))?;
    Ok((p.clone(), uml_decompose(p, &f, &m)?))
}

pub fn hidden_uml_structure(p: &Presentation) -> Result<(Presentation, UmlDecomposition), AssemblyError> {
    let f = p.factorisation_or_trivial();
    let r = hidden_uml_rewrite(p, &f, &p.hidden_blocks)?;
    let d = uml_decompose(&r.presentation, &r.factorisation, &r.markers)?;
    Ok((r.presentation, d))
}

fn uml_oracle(p: &Presentation, d: &UmlDecomposition, inner: &Descriptor, label: &str) -> Result<SharedOracle, AssemblyError> {
    let h = build_oracle(&d.h, inner)?;
    let product: SharedOracle = if d.free_part.is_empty() {
        h
    } else {
        Arc::new(free_product_oracle(h, Arc::new(free_oracle(&d.free_part))).map_err(|e| AssemblyError::Unsupported(e.to_string()))?)
    };
    Ok(Arc::new(MappedOracle::new(&p.generators, d.forward.clone(), product, label)))
}

/// Oracle for `B_j`.
pub fn factor_group_oracle(b: &Presentation) -> Result<SharedOracle, AssemblyError> {
    if b.relators.is_empty() {
        return Ok(Arc::new(free_oracle(&b.generators)));
    }
    if let [x] = b.generators.as_slice() {
        let e = b.relators[0].exponent_sum(x).unsigned_abs();
        return Ok(Arc::new(cyclic_oracle(x.clone(), e)));
    }
    Ok(Arc::new(kb_oracle(&b.generators, &b.relators, KbMode::Shortlex, KbBudget::default())))
}

/// Oracles for every `G_j`, top first is index `k`; `result[j]` decides `G_j`.
pub fn chain_oracles(chain: &DaChain, top: SharedOracle) -> Result<Vec<SharedOracle>, AssemblyError> {
    let k = chain.levels.len();
    let mut oracles: Vec<SharedOracle> = vec![top];
    for j in (1..=k).rev() {
        let level = &chain.levels[j - 1];
        let upper = oracles.last().unwrap().clone();
        let b = factor_group_oracle(&level.factor_group)?;
        let z = Word::letter(crate::word::Letter::pos(level.z.clone()));
        let unsupported = |e: crate::products::Inconclusive| AssemblyError::Unsupported(e.0);
        let am = Amalgamation {
            pairs: vec![(z.clone(), level.factor.clone())],
            left: subgroup_oracle(upper.clone(), &chain.group(j).relators, &[z]).map_err(unsupported)?,
            right: subgroup_oracle(b.clone(), &level.factor_group.relators, std::slice::from_ref(&level.factor)).map_err(unsupported)?,
        };
        let product = amalgam_oracle(upper, b, am).map_err(|e| AssemblyError::Unsupported(e.to_string()))?;
        oracles.push(Arc::new(product));
    }
    oracles.reverse();
    Ok(oracles)
}

fn da_oracle(p: &Presentation, inner: &Descriptor) -> Result<SharedOracle, AssemblyError> {
    let f = p.factorisation_or_trivial();
    let chain = da_chain(p, &f, &p.orders)?;
    let top = chain.top();
    let z: Vec<Symbol> = chain.levels.iter().map(|l| l.z.clone()).collect();
    let h = build_oracle(&Presentation::new(Kind::Group, z, top.relators.clone()), inner)?;
    let top_oracle: SharedOracle = if chain.leftover.is_empty() {
        h
    } else {
        Arc::new(free_product_oracle(h, Arc::new(free_oracle(&chain.leftover))).map_err(|e| AssemblyError::Unsupported(e.to_string()))?)
    };
    let oracles = chain_oracles(&chain, top_oracle)?;
    Ok(Arc::new(MappedOracle::new(&p.generators, BTreeMap::new(), oracles[0].clone(), "da")))
}

pub fn build_oracle(p: &Presentation, d: &Descriptor) -> Result<SharedOracle, AssemblyError> {
    match d {
        Descriptor::Free => {
            ensure_free(p)?;
            Ok(Arc::new(free_oracle(&p.generators)))
        }
        Descriptor::Cyclic(m) => {
            let [x] = p.generators.as_slice() else {
                return Err(AssemblyError::Unsupported("`cyclic` needs exactly one generator".into()));
            };
            Ok(Arc::new(cyclic_oracle(x.clone(), *m)))
        }
        Descriptor::Kb { max_rules, mode } => {
            let budget = max_rules.map(KbBudget::rules).unwrap_or_default();
            Ok(Arc::new(kb_oracle(&p.generators, &p.relators, *mode, budget)))
        }
        Descriptor::Tietze(inner) => {
            let t = tietze_simplify(&p.generators, &p.relators);
            let reduced: SharedOracle = if t.is_free() {
                Arc::new(free_oracle(&t.generators))
            } else {
                build_oracle(&Presentation::new(Kind::Group, t.generators.clone(), t.relators.clone()), inner)?
            };
            Ok(Arc::new(MappedOracle::new(&p.generators, t.map, reduced, "tietze")))
        }
        Descriptor::Uml(inner) => {
            let (q, dec) = uml_structure(p)?;
            uml_oracle(&q, &dec, inner, "uml")
        }
        Descriptor::HiddenUml(inner) => {
            let (q, dec) = hidden_uml_structure(p)?;
            uml_oracle(&q, &dec, inner, "hidden-uml")
        }
        Descriptor::Da(inner) => da_oracle(p, inner),
        Descriptor::AmalgamOf(sides) => {
            let [(lg, ld), (rg, rd)] = sides.as_ref();
            let split = split_amalgam(p, lg, rg)?;
            let l = build_oracle(&split.left, ld)?;
            let r = build_oracle(&split.right, rd)?;
            if split.pairs.is_empty() {
                return Ok(Arc::new(free_product_oracle(l, r).map_err(|e| AssemblyError::Unsupported(e.to_string()))?));
            }
            let us: Vec<Word> = split.pairs.iter().map(|(u, _)| u.clone()).collect();
            let vs: Vec<Word> = split.pairs.iter().map(|(_, v)| v.clone()).collect();
            let unsupported = |e: crate::products::Inconclusive| AssemblyError::Unsupported(e.0);
            let am = Amalgamation {
                pairs: split.pairs.clone(),
                left: subgroup_oracle(l.clone(), &split.left.relators, &us).map_err(unsupported)?,
                right: subgroup_oracle(r.clone(), &split.right.relators, &vs).map_err(unsupported)?,
            };
            Ok(Arc::new(amalgam_oracle(l, r, am).map_err(|e| AssemblyError::Unsupported(e.to_string()))?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn descriptors_round_trip() {
        for text in [
            "free",
            "cyclic 5",
            "kb",
            "kb 300 auto",
            "uml kb",
            "hidden-uml kb auto",
            "hidden-uml tietze kb",
            "tietze kb auto",
            "da kb recursive",
            "amalgam-of [x1 y1 z1 : uml kb] [x2 y2 z2 : uml kb]",
        ] {
            let d: Descriptor = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
        assert!("amalgam-of [a : free]".parse::<Descriptor>().is_err());
        assert!("kb nonsense".parse::<Descriptor>().is_err());
    }

    #[test]
    fn uml_leaf() {
        let p = Presentation::parse("inverse_monoid\ngenerators: x y z\nrelator: (z) (x x y) (x x y) (z)\noracle: uml kb\n").unwrap();
        let g = group_oracle(&p).unwrap();
        assert_eq!(g.is_identity(&p.relators[0]), Ok(true));
        assert_eq!(g.is_identity(&w("x y")), Ok(false));
        // z x x y = (x x y z)^-1 up to the relator: z (x x y)^2 z = 1
        assert_eq!(g.equal(&w("z x x y x x y"), &w("z'")), Ok(true));
    }

    #[test]
    fn amalgam_detection() {
        let p = Presentation::parse(
            "inverse_monoid\ngenerators: x1 y1 z1 x2 y2 z2\n\
             relator: (z1) (x1 x1 y1) (x1 x1 y1) (z1)\n\
             relator: (z2) (x2 x2 y2) (x2 x2 y2) (z2)\n\
             relator: (z1) (z2)'\n",
        )
        .unwrap();
        let s = detect_amalgam(&p).unwrap();
        assert_eq!(s.pairs, vec![(w("z1"), w("z2"))]);
        assert_eq!(s.left.relators.len(), 1);
        assert_eq!(s.right.generators, vec![Symbol::new("x2"), Symbol::new("y2"), Symbol::new("z2")]);
    }

    #[test]
    fn da_leaf() {
        let p = Presentation::parse(
            "inverse_monoid\ngenerators: a b c\nrelator: (a a b b b) (c c c c c) (c c c c c) (a a b b b) (c c c c c) (a a b b b)\noracle: da kb auto\n",
        )
        .unwrap();
        let g = group_oracle(&p).unwrap();
        assert_eq!(g.is_identity(&p.relators[0]), Ok(true));
        assert_eq!(g.is_identity(&w("a a b b b c c c c c")), Ok(false));
        assert_eq!(g.is_identity(&w("c c c c c c c c c c a a b b b c c c c c a a b b b a a b b b")), Ok(true));
    }
}
