//! Word problem of the maximal E-unitary image, from the group word problem
//! and prefix membership.
//!
//! An element `w` is modelled by the pair `(⋃ σ(p)·P, σ(w))` over prefixes
//! `p` of `w`. Two words are equal when their group images agree and each
//! prefix of one is dominated by a prefix of the other: `q⁻¹p ∈ P`.

use serde::Serialize;
use thiserror::Error;

use crate::assemble::{group_oracle, AssemblyError};
use crate::pmp::{prefix_oracle, PmpError, PrefixOracle};
use crate::presentation::Presentation;
use crate::products::{Decision, Inconclusive, SharedOracle};
use crate::word::Word;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MeuError {
    #[error("{0}")]
    Inconclusive(#[from] Inconclusive),
    #[error("consistency fault: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, Error)]
pub enum ContextError {
    #[error("{0}")]
    Assembly(#[from] AssemblyError),
    #[error("{0}")]
    Pmp(#[from] PmpError),
}

pub struct MeuContext {
    pub presentation: Presentation,
    pub group: SharedOracle,
    pub prefix: PrefixOracle,
}

/// A prefix of one side and the prefix of the other side dominating it.
#[derive(Debug, Clone, Serialize)]
pub struct Domination {
    pub prefix: Word,
    pub by: Option<Word>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeuEquality {
    pub equal: bool,
    pub group_equal: bool,
    pub left_by_right: Vec<Domination>,
    pub right_by_left: Vec<Domination>,
}

impl MeuContext {
    pub fn new(presentation: Presentation, group: SharedOracle, prefix: PrefixOracle) -> Self {
        MeuContext { presentation, group, prefix }
    }

    /// Assembles both oracles from the presentation file.
    pub fn from_presentation(p: &Presentation) -> Result<Self, ContextError> {
        let g = group_oracle(p)?;
        let prefix = prefix_oracle(p, g.clone())?;
        Ok(MeuContext::new(p.clone(), g, prefix))
    }

    pub fn in_prefix_monoid(&self, w: &Word) -> Decision {
        self.prefix.contains(w)
    }

    /// Membership in `R_M·E_M`, which is the preimage of the prefix monoid.
    pub fn in_right_units_times_idempotents(&self, w: &Word) -> Decision {
        self.in_prefix_monoid(w)
    }

    fn dominate(&self, of: &Word, by: &Word) -> Result<(bool, Vec<Domination>), Inconclusive> {
        let candidates = by.prefixes();
        let mut trail = Vec::new();
        let mut all = true;
        for p in of.prefixes() {
            let mut found = None;
            for q in &candidates {
                if self.in_prefix_monoid(&q.inverse().concat(&p).reduce())? {
                    found = Some(q.clone());
                    break;
                }
            }
            all &= found.is_some();
            trail.push(Domination { prefix: p, by: found });
            if !all {
                break;
            }
        }
        Ok((all, trail))
    }

    pub fn meu_equal_explained(&self, u: &Word, v: &Word) -> Result<MeuEquality, Inconclusive> {
        let group_equal = self.group.equal(u, v)?;
        if !group_equal {
            return Ok(MeuEquality { equal: false, group_equal, left_by_right: vec![], right_by_left: vec![] });
        }
        let (l, left_by_right) = self.dominate(u, v)?;
        let (r, right_by_left) = if l { self.dominate(v, u)? } else { (false, vec![]) };
        Ok(MeuEquality { equal: l && r, group_equal, left_by_right, right_by_left })
    }

    pub fn meu_equal(&self, u: &Word, v: &Word) -> Decision {
        Ok(self.meu_equal_explained(u, v)?.equal)
    }

    pub fn is_idempotent(&self, w: &Word) -> Decision {
        self.group.is_identity(w)
    }

    /// Decided as `ww⁻¹ = 1` and, independently, as every prefix of `w`
    /// lying in the prefix monoid; the two must agree.
    pub fn is_right_unit(&self, w: &Word) -> Result<bool, MeuError> {
        let by_equality = self.meu_equal(&w.concat(&w.inverse()), &Word::empty())?;
        let mut by_prefixes = true;
        for p in w.prefixes() {
            if !self.in_prefix_monoid(&p)? {
                by_prefixes = false;
                break;
            }
        }
        if by_equality != by_prefixes {
            return Err(MeuError::Consistency(format!(
                "{w}: ww⁻¹ = 1 is {by_equality} but prefix membership is {by_prefixes}"
            )));
        }
        Ok(by_equality)
    }

    pub fn is_unit(&self, w: &Word) -> Decision {
        let e = Word::empty();
        Ok(self.meu_equal(&w.concat(&w.inverse()), &e)? && self.meu_equal(&w.inverse().concat(w), &e)?)
    }

    /// `x ≤ y` in the natural partial order.
    pub fn nat_leq(&self, x: &Word, y: &Word) -> Decision {
        self.meu_equal(x, &x.concat(&x.inverse()).concat(y))
    }

    pub fn compatible(&self, x: &Word, y: &Word) -> Decision {
        Ok(self.is_idempotent(&x.concat(&y.inverse()))? && self.is_idempotent(&x.inverse().concat(y))?)
    }

    pub fn meet(&self, x: &Word, y: &Word) -> Result<Option<Word>, Inconclusive> {
        Ok(self.compatible(x, y)?.then(|| x.concat(&x.inverse()).concat(y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn ctx(text: &str) -> MeuContext {
        MeuContext::from_presentation(&Presentation::parse(text).unwrap()).unwrap()
    }

    const BICYCLIC: &str = "inverse_monoid\ngenerators: a\nrelator: a a'\n";
    const UML: &str = "inverse_monoid\ngenerators: x y z\nrelator: (z) (x x y) (x x y) (z)\noracle: uml kb\n";

    #[test]
    fn bicyclic_shape() {
        let c = ctx(BICYCLIC);
        let e = Word::empty();
        assert_eq!(c.meu_equal(&w("a a'"), &e), Ok(true));
        assert_eq!(c.meu_equal(&w("a' a"), &e), Ok(false));
        assert_eq!(c.is_idempotent(&w("a")), Ok(false));
        assert_eq!(c.is_right_unit(&w("a'")), Ok(false));
        assert_eq!(c.is_right_unit(&w("a a")), Ok(true));
        assert_eq!(c.is_unit(&w("a")), Ok(false));
        assert_eq!(c.nat_leq(&e, &w("a")), Ok(false));
        assert_eq!(c.compatible(&w("a"), &e), Ok(false));
        assert_eq!(c.meet(&w("a"), &e), Ok(None));
    }

    #[test]
    fn relators_are_trivial() {
        let c = ctx(UML);
        let e = Word::empty();
        for r in &c.presentation.relators {
            assert_eq!(c.meu_equal(r, &e), Ok(true));
            assert_eq!(c.compatible(r, &e), Ok(true));
            assert!(c.meet(r, &e).unwrap().is_some());
        }
        assert_eq!(c.is_unit(&w("z")), Ok(true));
        assert_eq!(c.is_unit(&w("x x y")), Ok(true));
        assert_eq!(c.is_unit(&w("x")), Ok(false));
        assert_eq!(c.is_right_unit(&w("x")), Ok(true));
        assert_eq!(c.nat_leq(&w("x x'"), &e), Ok(true));
    }

    #[test]
    fn audit_trail_pairs_prefixes() {
        let c = ctx(UML);
        let r = &c.presentation.relators[0];
        let ex = c.meu_equal_explained(r, &Word::empty()).unwrap();
        assert!(ex.equal);
        assert_eq!(ex.left_by_right.len(), r.len() + 1);
        assert!(ex.left_by_right.iter().all(|d| d.by == Some(Word::empty())));
    }
}
