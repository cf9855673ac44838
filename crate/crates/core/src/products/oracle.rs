//! Word-problem oracles and the simple leaves: free groups, finite cyclic
//! groups, and oracles transported along a substitution.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::word::{Symbol, Word};

/// An oracle could not settle a query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("inconclusive: {0}")]
pub struct Inconclusive(pub String);

impl Inconclusive {
    pub fn new(msg: impl Into<String>) -> Self {
        Inconclusive(msg.into())
    }
}

/// `Ok(answer)` or an in-band inconclusive result.
pub type Decision = Result<bool, Inconclusive>;

/// Word problem of a group given by generators.
pub trait GroupOracle: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> &[Symbol];

    fn is_identity(&self, w: &Word) -> Decision;

    /// A string that is equal for two words iff they are equal in the group.
    /// Oracles that cannot produce canonical keys answer inconclusive.
    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive>;

    fn describe(&self) -> String;

    fn equal(&self, u: &Word, v: &Word) -> Decision {
        self.is_identity(&u.concat(&v.inverse()))
    }
}

pub type SharedOracle = Arc<dyn GroupOracle>;

fn check_alphabet(alphabet: &[Symbol], w: &Word) -> Result<(), Inconclusive> {
    match w.letters().iter().find(|l| !alphabet.contains(&l.symbol)) {
        Some(l) => Err(Inconclusive(format!("letter `{}` is outside the alphabet", l.symbol))),
        None => Ok(()),
    }
}

/// The free group on an alphabet.
#[derive(Debug, Clone)]
pub struct FreeOracle {
    alphabet: Vec<Symbol>,
}

pub fn free_oracle(alphabet: &[Symbol]) -> FreeOracle {
    FreeOracle { alphabet: alphabet.to_vec() }
}

impl GroupOracle for FreeOracle {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Decision {
        check_alphabet(&self.alphabet, w)?;
        Ok(w.reduce().is_empty())
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        check_alphabet(&self.alphabet, w)?;
        Ok(w.reduce().to_string())
    }

    fn describe(&self) -> String {
        let names: Vec<&str> = self.alphabet.iter().map(|s| s.as_str()).collect();
        format!("free({})", names.join(" "))
    }
}

/// `⟨a | a^m⟩`.
#[derive(Debug, Clone)]
pub struct CyclicOracle {
    alphabet: Vec<Symbol>,
    order: u64,
}

pub fn cyclic_oracle(letter: Symbol, order: u64) -> CyclicOracle {
    assert!(order >= 1, "cyclic order must be positive");
    CyclicOracle { alphabet: vec![letter], order }
}

impl CyclicOracle {
    pub fn order(&self) -> u64 {
        self.order
    }

    fn residue(&self, w: &Word) -> Result<u64, Inconclusive> {
        check_alphabet(&self.alphabet, w)?;
        Ok(w.exponent_sum(&self.alphabet[0]).rem_euclid(self.order as i64) as u64)
    }
}

impl GroupOracle for CyclicOracle {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Decision {
        Ok(self.residue(w)? == 0)
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        Ok(self.residue(w)?.to_string())
    }

    fn describe(&self) -> String {
        format!("cyclic({}, {})", self.alphabet[0], self.order)
    }
}

/// An oracle for a group on `alphabet` obtained by pushing words through a
/// substitution into another oracle. Exact when the substitution induces an
/// injective homomorphism (an isomorphism onto its image).
#[derive(Debug, Clone)]
pub struct MappedOracle {
    alphabet: Vec<Symbol>,
    map: BTreeMap<Symbol, Word>,
    inner: SharedOracle,
    label: String,
}

impl MappedOracle {
    /// Symbols missing from `map` are passed through unchanged.
    pub fn new(alphabet: &[Symbol], map: BTreeMap<Symbol, Word>, inner: SharedOracle, label: &str) -> Self {
        MappedOracle { alphabet: alphabet.to_vec(), map, inner, label: label.to_string() }
    }

    pub fn translate(&self, w: &Word) -> Word {
        w.substitute_partial(&self.map)
    }

    pub fn inner(&self) -> &SharedOracle {
        &self.inner
    }

    pub fn map(&self) -> &BTreeMap<Symbol, Word> {
        &self.map
    }
}

impl GroupOracle for MappedOracle {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    fn is_identity(&self, w: &Word) -> Decision {
        check_alphabet(&self.alphabet, w)?;
        self.inner.is_identity(&self.translate(w))
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        check_alphabet(&self.alphabet, w)?;
        self.inner.canonical_key(&self.translate(w))
    }

    fn describe(&self) -> String {
        format!("{}[{}]", self.label, self.inner.describe())
    }
}

/// Memoises `is_identity` and `canonical_key` of an inner oracle. The
/// tables are dropped wholesale once they reach `capacity` entries.
pub struct CachedOracle {
    inner: SharedOracle,
    identity: Mutex<HashMap<Word, bool>>,
    keys: Mutex<HashMap<Word, String>>,
    capacity: usize,
}

impl fmt::Debug for CachedOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CachedOracle({})", self.inner.describe())
    }
}

impl CachedOracle {
    pub const DEFAULT_CAPACITY: usize = 1 << 16;

    pub fn new(inner: SharedOracle) -> Self {
        CachedOracle {
            inner,
            identity: Mutex::new(HashMap::new()),
            keys: Mutex::new(HashMap::new()),
            capacity: Self::DEFAULT_CAPACITY,
        }
    }

    pub fn inner(&self) -> &SharedOracle {
        &self.inner
    }
}

fn remember<V: Clone>(table: &Mutex<HashMap<Word, V>>, capacity: usize, w: &Word, v: &V) {
    let mut t = table.lock().unwrap();
    if t.len() >= capacity {
        t.clear();
    }
    t.insert(w.clone(), v.clone());
}

impl GroupOracle for CachedOracle {
    fn alphabet(&self) -> &[Symbol] {
        self.inner.alphabet()
    }

    fn is_identity(&self, w: &Word) -> Decision {
        if let Some(b) = self.identity.lock().unwrap().get(w) {
            return Ok(*b);
        }
        let b = self.inner.is_identity(w)?;
        remember(&self.identity, self.capacity, w, &b);
        Ok(b)
    }

    fn canonical_key(&self, w: &Word) -> Result<String, Inconclusive> {
        if let Some(k) = self.keys.lock().unwrap().get(w) {
            return Ok(k.clone());
        }
        let k = self.inner.canonical_key(w)?;
        remember(&self.keys, self.capacity, w, &k);
        Ok(k)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}
