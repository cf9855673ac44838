//! Constructive membership in finitely generated subgroups of an oracle
//! group, with canonical left-coset representatives where available.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::oracle::{GroupOracle, Inconclusive, SharedOracle};
use crate::freegroup::{stallings_graph, MembershipWitness, SubgroupGraph};
use crate::word::{Symbol, Word};

pub trait SubgroupOracle: Send + Sync + fmt::Debug {
    fn generators(&self) -> &[Word];

    /// `Some(witness)` iff `w` lies in the subgroup.
    fn contains(&self, w: &Word) -> Result<Option<MembershipWitness>, Inconclusive>;

    /// Splits `w = rep · a` with `a` in the subgroup, where `rep` depends only
    /// on the left coset `wA`.
    fn coset_split(&self, w: &Word) -> Result<(Word, MembershipWitness), Inconclusive>;

    fn describe(&self) -> String;
}

pub type SharedSubgroup = Arc<dyn SubgroupOracle>;

fn power_witness(e: i64) -> MembershipWitness {
    let s = if e >= 0 { 1 } else { -1 };
    MembershipWitness { expression: vec![(0, s); e.unsigned_abs() as usize] }
}

/// `⟨u⟩` where a homomorphism `φ: G → ℤ` with `φ(u) ≠ 0` certifies that
/// `u` has infinite order. Membership: `e = φ(w)/φ(u)` must be an integer and
/// `w u^-e = 1`. Coset representative: the unique `w u^k` with
/// `0 ≤ φ < |φ(u)|`.
#[derive(Debug, Clone)]
pub struct CharacterSubgroup {
    ambient: SharedOracle,
    generators: Vec<Word>,
    character: BTreeMap<Symbol, i64>,
}

impl CharacterSubgroup {
    pub fn value(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| self.character.get(&l.symbol).copied().unwrap_or(0) * l.sign()).sum()
    }

    pub fn character(&self) -> &BTreeMap<Symbol, i64> {
        &self.character
    }
}

impl SubgroupOracle for CharacterSubgroup {
    fn generators(&self) -> &[Word] {
        &self.generators
    }

    fn contains(&self, w: &Word) -> Result<Option<MembershipWitness>, Inconclusive> {
        let u = &self.generators[0];
        let (s, d) = (self.value(w), self.value(u));
        if s % d != 0 {
            return Ok(None);
        }
        let e = s / d;
        if self.ambient.is_identity(&w.concat(&u.pow(-e)))? {
            Ok(Some(power_witness(e)))
        } else {
            Ok(None)
        }
    }

    fn coset_split(&self, w: &Word) -> Result<(Word, MembershipWitness), Inconclusive> {
        let u = &self.generators[0];
        let (s, d) = (self.value(w), self.value(u));
        let e = s.div_euclid(d.abs()) * d.signum();
        Ok((w.concat(&u.pow(-e)).reduce(), power_witness(e)))
    }

    fn describe(&self) -> String {
        format!("⟨{}⟩ via character", self.generators[0])
    }
}

/// `⟨u⟩` for `u` of known finite order.
#[derive(Debug, Clone)]
pub struct FiniteCyclicSubgroup {
    ambient: SharedOracle,
    generators: Vec<Word>,
    order: u64,
}

impl FiniteCyclicSubgroup {
    pub fn order(&self) -> u64 {
        self.order
    }
}

impl SubgroupOracle for FiniteCyclicSubgroup {
    fn generators(&self) -> &[Word] {
        &self.generators
    }

    fn contains(&self, w: &Word) -> Result<Option<MembershipWitness>, Inconclusive> {
        let u = &self.generators[0];
        for k in 0..self.order as i64 {
            if self.ambient.equal(w, &u.pow(k))? {
                return Ok(Some(power_witness(k)));
            }
        }
        Ok(None)
    }

    fn coset_split(&self, w: &Word) -> Result<(Word, MembershipWitness), Inconclusive> {
        let u = &self.generators[0];
        let mut best: Option<(String, i64)> = None;
        for k in 0..self.order as i64 {
            let key = self.ambient.canonical_key(&w.concat(&u.pow(-k)))?;
            if best.as_ref().is_none_or(|(b, _)| (key.len(), &key) < (b.len(), b)) {
                best = Some((key, k));
            }
        }
        let k = best.map(|b| b.1).unwrap_or(0);
        Ok((w.concat(&u.pow(-k)).reduce(), power_witness(k)))
    }

    fn describe(&self) -> String {
        format!("⟨{}⟩ of order {}", self.generators[0], self.order)
    }
}

/// A subgroup of a free group, decided by its Stallings graph.
#[derive(Debug, Clone)]
pub struct FreeSubgroup {
    graph: SubgroupGraph,
}

impl SubgroupOracle for FreeSubgroup {
    fn generators(&self) -> &[Word] {
        self.graph.generators()
    }

    fn contains(&self, w: &Word) -> Result<Option<MembershipWitness>, Inconclusive> {
        Ok(self.graph.contains(w))
    }

    fn coset_split(&self, _w: &Word) -> Result<(Word, MembershipWitness), Inconclusive> {
        Err(Inconclusive::new("no coset transversal for this free subgroup"))
    }

    fn describe(&self) -> String {
        let gens: Vec<String> = self.graph.generators().iter().map(|g| g.to_string()).collect();
        format!("⟨{}⟩ via Stallings graph", gens.join(", "))
    }
}

/// Largest order tried when looking for a finite order by enumeration.
pub const ORDER_SEARCH_LIMIT: u64 = 256;

/// Builds a membership oracle for `⟨generators⟩` inside the group presented
/// by `relators` over the ambient oracle's alphabet.
pub fn subgroup_oracle(
    ambient: SharedOracle,
    relators: &[Word],
    generators: &[Word],
) -> Result<SharedSubgroup, Inconclusive> {
    if relators.iter().all(|r| r.reduce().is_empty()) {
        if let [u] = generators {
            if let Some(sub) = character_subgroup(ambient.clone(), relators, u) {
                return Ok(Arc::new(sub));
            }
        }
        return Ok(Arc::new(FreeSubgroup { graph: stallings_graph(generators) }));
    }
    let [u] = generators else {
        return Err(Inconclusive::new("multi-generator subgroup of a non-free group"));
    };
    if let Some(sub) = character_subgroup(ambient.clone(), relators, u) {
        return Ok(Arc::new(sub));
    }
    if let Some(order) = element_order(ambient.as_ref(), u, ORDER_SEARCH_LIMIT)? {
        return Ok(Arc::new(FiniteCyclicSubgroup { ambient, generators: vec![u.clone()], order }));
    }
    Err(Inconclusive(format!("cannot certify the order of {u}")))
}

/// Smallest `k ≤ limit` with `u^k = 1`, if any.
pub fn element_order(ambient: &dyn GroupOracle, u: &Word, limit: u64) -> Result<Option<u64>, Inconclusive> {
    let mut p = Word::empty();
    for k in 1..=limit {
        p = p.concat(u);
        if ambient.is_identity(&p)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn character_subgroup(ambient: SharedOracle, relators: &[Word], u: &Word) -> Option<CharacterSubgroup> {
    let alphabet = ambient.alphabet().to_vec();
    let character = infinite_order_character(&alphabet, relators, u)?;
    Some(CharacterSubgroup { ambient, generators: vec![u.clone()], character })
}

/// An integer character vanishing on every relator and nonzero on `u`.
pub fn infinite_order_character(alphabet: &[Symbol], relators: &[Word], u: &Word) -> Option<BTreeMap<Symbol, i64>> {
    let row = |w: &Word| -> Vec<i128> { alphabet.iter().map(|s| w.exponent_sum(s) as i128).collect() };
    let rows: Vec<Vec<i128>> = relators.iter().map(row).collect();
    let target = row(u);
    for v in integer_nullspace(&rows, alphabet.len()) {
        let dot: i128 = v.iter().zip(&target).map(|(a, b)| a * b).sum();
        if dot != 0 {
            return Some(alphabet.iter().cloned().zip(v.into_iter().map(|x| x as i64)).collect());
        }
    }
    None
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn normalise(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Integer basis of the rational nullspace of `rows` (each of length `n`).
pub fn integer_nullspace(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..n {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                normalise(&mut m[i]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        // x_f = L, x_p = -m[row][f] * L / m[row][p]
        let l = pivots.iter().enumerate().fold(1i128, |acc, (i, &p)| {
            let d = m[i][p].abs();
            acc / gcd(acc, d) * d
        });
        let mut v = vec![0i128; n];
        v[f] = l;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][f] * l / m[i][p];
        }
        normalise(&mut v);
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::oracle::free_oracle;
    use crate::word::w;

    fn syms(s: &str) -> Vec<Symbol> {
        s.split_whitespace().map(Symbol::new).collect()
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![vec![5, 4, 4, 5], vec![1, 0, 2, 0]];
        let basis = integer_nullspace(&rows, 4);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in &rows {
                assert_eq!(v.iter().zip(r).map(|(a, b)| a * b).sum::<i128>(), 0);
            }
        }
    }

    #[test]
    fn character_for_a_one_relator_group() {
        let gens = syms("a b c");
        let rel = w("a a b b b c c c c c c c c c c a a b b b a a b b b c c c c c a a b b b");
        let phi = infinite_order_character(&gens, &[rel], &w("a a b b b")).unwrap();
        let value = |x: &Word| x.letters().iter().map(|l| phi[&l.symbol] * l.sign()).sum::<i64>();
        assert_ne!(value(&w("a a b b b")), 0);
    }

    #[test]
    fn cyclic_subgroup_of_a_free_group() {
        let amb: SharedOracle = Arc::new(free_oracle(&syms("a b")));
        let sub = subgroup_oracle(amb, &[], &[w("a b")]).unwrap();
        let wit = sub.contains(&w("b' a' b' a'")).unwrap().unwrap();
        assert_eq!(wit.evaluate(sub.generators()).reduce(), w("b' a' b' a'"));
        assert!(sub.contains(&w("a")).unwrap().is_none());
        let (r1, _) = sub.coset_split(&w("b a b")).unwrap();
        let (r2, _) = sub.coset_split(&w("b a b a b a b")).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn commutator_subgroup_falls_back_to_stallings() {
        let amb: SharedOracle = Arc::new(free_oracle(&syms("a b")));
        let sub = subgroup_oracle(amb, &[], &[w("a b a' b'")]).unwrap();
        assert!(sub.contains(&w("b a b' a'")).unwrap().is_some());
        assert!(sub.coset_split(&w("a")).is_err());
    }
}
