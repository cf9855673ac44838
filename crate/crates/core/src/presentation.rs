//! Presentations, relator factorisations and the text file format.
//!
//! ```text
//! # comment
//! inverse_monoid
//! generators: x y z
//! relator: (z) (x x y) (x x y) (z)
//! oracle: uml kb
//! ```
//!
//! Parenthesised groups declare factor occurrences; a trailing `'` inverts
//! the whole factor. Two groups denote the same factor when their words are
//! literally equal. Letters left outside parentheses in a factorised file
//! form implicit factors, one per maximal run, and print back bare.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::word::{is_ident_char, Letter, Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Group,
    InverseMonoid,
}

/// One occurrence of factor `factor`, inverted when `inverse` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Occurrence {
    pub factor: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorisation {
    pub factors: Vec<Word>,
    /// Per relator, the factor occurrences whose concatenation is the relator.
    pub occurrences: Vec<Vec<Occurrence>>,
    /// Factors that came from bare letter runs; printed without parentheses.
    #[serde(skip)]
    pub implicit: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorisationError {
    #[error("relator {relator}: factor concatenation differs from the relator at letter {position}")]
    Mismatch { relator: usize, position: usize },
    #[error("factorisation lists {got} relators, presentation has {expected}")]
    RelatorCount { expected: usize, got: usize },
    #[error("factor {0} is never used")]
    Unused(usize),
    #[error("occurrence refers to missing factor {0}")]
    MissingFactor(usize),
}

impl Factorisation {
    pub fn new(factors: Vec<Word>, occurrences: Vec<Vec<Occurrence>>) -> Self {
        let implicit = vec![false; factors.len()];
        Factorisation { factors, occurrences, implicit }
    }

    /// Each relator as its own single factor.
    pub fn trivial(relators: &[Word]) -> Self {
        let mut factors: Vec<Word> = Vec::new();
        let mut occurrences = Vec::new();
        for r in relators {
            let idx = match factors.iter().position(|f| f == r) {
                Some(i) => i,
                None => {
                    factors.push(r.clone());
                    factors.len() - 1
                }
            };
            occurrences.push(vec![Occurrence { factor: idx, inverse: false }]);
        }
        Factorisation::new(factors, occurrences)
    }

    pub fn occurrence_word(&self, occ: Occurrence) -> Word {
        let f = &self.factors[occ.factor];
        if occ.inverse {
            f.inverse()
        } else {
            f.clone()
        }
    }

    /// Concatenation of the occurrence list of relator `i`.
    pub fn expand(&self, i: usize) -> Word {
        let mut out = Word::empty();
        for &occ in &self.occurrences[i] {
            out.extend_from(&self.occurrence_word(occ));
        }
        out
    }

    /// The relator pattern of relator `i` over the placeholder symbols.
    pub fn pattern(&self, i: usize, placeholders: &[Symbol]) -> Word {
        self.occurrences[i]
            .iter()
            .map(|occ| Letter { symbol: placeholders[occ.factor].clone(), inverse: occ.inverse })
            .collect()
    }

    /// Checks the concatenation and coverage invariants against `relators`.
    pub fn validate(&self, relators: &[Word]) -> Result<(), FactorisationError> {
        if self.occurrences.len() != relators.len() {
            return Err(FactorisationError::RelatorCount {
                expected: relators.len(),
                got: self.occurrences.len(),
            });
        }
        let mut used = vec![false; self.factors.len()];
        for (i, r) in relators.iter().enumerate() {
            for occ in &self.occurrences[i] {
                if occ.factor >= self.factors.len() {
                    return Err(FactorisationError::MissingFactor(occ.factor));
                }
                used[occ.factor] = true;
            }
            let expanded = self.expand(i);
            if &expanded != r {
                let position = expanded
                    .letters()
                    .iter()
                    .zip(r.letters())
                    .position(|(a, b)| a != b)
                    .unwrap_or(expanded.len().min(r.len()));
                return Err(FactorisationError::Mismatch { relator: i, position });
            }
        }
        match used.iter().position(|u| !u) {
            Some(j) => Err(FactorisationError::Unused(j)),
            None => Ok(()),
        }
    }
}

/// Per-block data for the hidden uniquely-marked rewrite, as written in a
/// `hidden_block:` line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiddenBlock {
    pub x: Symbol,
    pub z: Symbol,
    pub ys: Vec<Symbol>,
    pub words: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub kind: Kind,
    pub generators: Vec<Symbol>,
    pub relators: Vec<Word>,
    pub factorisation: Option<Factorisation>,
    /// Raw oracle descriptor, if the file declares one.
    pub oracle: Option<String>,
    pub hidden_blocks: Vec<HiddenBlock>,
    /// Caller-supplied factor orders (0 = infinite).
    pub orders: Vec<(Word, u64)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Presentation {
    pub fn new(kind: Kind, generators: Vec<Symbol>, relators: Vec<Word>) -> Self {
        Presentation {
            kind,
            generators,
            relators,
            factorisation: None,
            oracle: None,
            hidden_blocks: Vec::new(),
            orders: Vec::new(),
        }
    }

    pub fn with_factorisation(mut self, f: Factorisation) -> Self {
        self.factorisation = Some(f);
        self
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.generators.iter().cloned().collect()
    }

    /// The declared factorisation, or each relator as a single factor.
    pub fn factorisation_or_trivial(&self) -> Factorisation {
        self.factorisation.clone().unwrap_or_else(|| Factorisation::trivial(&self.relators))
    }

    pub fn parse(text: &str) -> Result<Presentation, ParseError> {
        Parser::default().run(text)
    }

    /// Renders relation `i` in display notation, e.g. `(z_1)(x_1^2y_1)^2(z_1)=1`.
    pub fn render_relation(&self, i: usize) -> String {
        let mut out = String::new();
        match &self.factorisation {
            Some(f) => {
                let occs = &f.occurrences[i];
                let mut k = 0;
                while k < occs.len() {
                    let occ = occs[k];
                    let mut run = 1;
                    while k + run < occs.len() && occs[k + run] == occ {
                        run += 1;
                    }
                    let body = render_word(&f.factors[occ.factor]);
                    if f.implicit[occ.factor] && !occ.inverse {
                        for _ in 0..run {
                            out.push_str(&body);
                        }
                    } else {
                        out.push('(');
                        out.push_str(&body);
                        out.push(')');
                        let e = if occ.inverse { -(run as i64) } else { run as i64 };
                        out.push_str(&render_exponent(e));
                    }
                    k += run;
                }
            }
            None => out.push_str(&render_word(&self.relators[i])),
        }
        if out.is_empty() {
            out.push('1');
        }
        out.push_str("=1");
        out
    }
}

fn render_symbol(s: &Symbol) -> String {
    let name = s.as_str();
    let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &name[stem.len()..];
    if stem.is_empty() || digits.is_empty() {
        name.to_string()
    } else if digits.len() == 1 {
        format!("{stem}_{digits}")
    } else {
        format!("{stem}_{{{digits}}}")
    }
}

fn render_exponent(e: i64) -> String {
    match e {
        1 => String::new(),
        2..=9 => format!("^{e}"),
        _ => format!("^{{{e}}}"),
    }
}

fn render_word(w: &Word) -> String {
    let letters = w.letters();
    let mut out = String::new();
    let mut i = 0;
    while i < letters.len() {
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == letters[i] {
            run += 1;
        }
        let e = if letters[i].inverse { -(run as i64) } else { run as i64 };
        out.push_str(&render_symbol(&letters[i].symbol));
        out.push_str(&render_exponent(e));
        i += run;
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}",
            match self.kind {
                Kind::Group => "group",
                Kind::InverseMonoid => "inverse_monoid",
            }
        )?;
        write!(f, "generators:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for (i, r) in self.relators.iter().enumerate() {
            write!(f, "relator: ")?;
            match &self.factorisation {
                Some(fac) => {
                    let parts: Vec<String> = fac.occurrences[i]
                        .iter()
                        .map(|occ| {
                            let body = fac.factors[occ.factor].to_string();
                            if fac.implicit[occ.factor] && !occ.inverse {
                                body
                            } else if occ.inverse {
                                format!("({body})'")
                            } else {
                                format!("({body})")
                            }
                        })
                        .collect();
                    if parts.is_empty() {
                        write!(f, "1")?;
                    } else {
                        write!(f, "{}", parts.join(" "))?;
                    }
                }
                None => write!(f, "{r}")?,
            }
            writeln!(f)?;
        }
        for b in &self.hidden_blocks {
            write!(f, "hidden_block: x={} z={} y=", b.x, b.z)?;
            let ys: Vec<String> = b.ys.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", ys.join(" "))?;
            let ws: Vec<String> = b.words.iter().map(|w| w.to_string()).collect();
            writeln!(f, " w={}", ws.join(" | "))?;
        }
        for (w, m) in &self.orders {
            writeln!(f, "order: {w} = {m}")?;
        }
        if let Some(o) = &self.oracle {
            writeln!(f, "oracle: {o}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Parser {
    kind: Option<Kind>,
    generators: Vec<Symbol>,
    relators: Vec<Word>,
    factors: Vec<Word>,
    implicit: Vec<bool>,
    occurrences: Vec<Vec<Occurrence>>,
    any_parens: bool,
    oracle: Option<String>,
    hidden: Vec<HiddenBlock>,
    orders: Vec<(Word, u64)>,
}

enum Token {
    Open,
    Close { inverse: bool },
    Letter(Letter),
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Presentation, ParseError> {
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let err = |col: usize, msg: String| ParseError { line: line_no, column: col, message: msg };
            if trimmed == "group" || trimmed == "inverse_monoid" {
                if self.kind.is_some() {
                    return Err(err(indent + 1, "duplicate header".into()));
                }
                self.kind = Some(if trimmed == "group" { Kind::Group } else { Kind::InverseMonoid });
                continue;
            }
            let Some(colon) = trimmed.find(':') else {
                return Err(err(indent + 1, format!("unrecognised line `{trimmed}`")));
            };
            let key = trimmed[..colon].trim();
            let body = &trimmed[colon + 1..];
            let body_col = indent + colon + 2;
            if self.kind.is_none() {
                return Err(err(indent + 1, "expected `group` or `inverse_monoid` header first".into()));
            }
            match key {
                "generators" => {
                    for (col, tok) in tokens_with_columns(body) {
                        if !tok.chars().all(is_ident_char) || tok == "1" {
                            return Err(err(body_col + col, format!("bad generator name `{tok}`")));
                        }
                        let s = Symbol::new(tok);
                        if self.generators.contains(&s) {
                            return Err(err(body_col + col, format!("generator `{tok}` declared twice")));
                        }
                        self.generators.push(s);
                    }
                }
                "relator" => self.relator(body, body_col, line_no)?,
                "oracle" => {
                    let d = body.trim();
                    if d.is_empty() {
                        return Err(err(body_col, "empty oracle descriptor".into()));
                    }
                    self.oracle = Some(d.to_string());
                }
                "hidden_block" => {
                    let b = self.hidden_block(body).map_err(|m| err(body_col, m))?;
                    self.hidden.push(b);
                }
                "order" => {
                    let Some((lhs, rhs)) = body.split_once('=') else {
                        return Err(err(body_col, "expected `order: <word> = <m>`".into()));
                    };
                    let w = self.word(lhs).map_err(|m| err(body_col, m))?;
                    let m: u64 = rhs
                        .trim()
                        .parse()
                        .map_err(|_| err(body_col + lhs.len() + 1, format!("bad order `{}`", rhs.trim())))?;
                    self.orders.push((w, m));
                }
                other => return Err(err(indent + 1, format!("unknown key `{other}`"))),
            }
        }
        let kind = self.kind.ok_or(ParseError { line: 1, column: 1, message: "missing header".into() })?;
        let factorisation = if self.any_parens {
            Some(Factorisation { factors: self.factors, occurrences: self.occurrences, implicit: self.implicit })
        } else {
            None
        };
        Ok(Presentation {
            kind,
            generators: self.generators,
            relators: self.relators,
            factorisation,
            oracle: self.oracle,
            hidden_blocks: self.hidden,
            orders: self.orders,
        })
    }

    fn letter(&self, atom: &str) -> Result<Letter, String> {
        let (name, inverse) = match atom.strip_suffix('\'') {
            Some(n) => (n, true),
            None => (atom, false),
        };
        let sym = Symbol::new(name);
        if !self.generators.contains(&sym) {
            return Err(format!("`{name}` is not a declared generator"));
        }
        Ok(Letter { symbol: sym, inverse })
    }

    fn word(&self, text: &str) -> Result<Word, String> {
        let mut out = Word::empty();
        for tok in text.split_whitespace() {
            if tok != "1" {
                out.push(self.letter(tok)?);
            }
        }
        Ok(out)
    }

    fn lex(&self, body: &str, body_col: usize, line: usize) -> Result<Vec<Token>, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = body.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            let col = body_col + body[..pos].chars().count();
            match c {
                c if c.is_whitespace() => i += 1,
                '(' => {
                    toks.push(Token::Open);
                    i += 1;
                }
                ')' => {
                    let inverse = i + 1 < chars.len() && chars[i + 1].1 == '\'';
                    toks.push(Token::Close { inverse });
                    i += if inverse { 2 } else { 1 };
                }
                c if is_ident_char(c) => {
                    let start = pos;
                    let mut j = i;
                    while j < chars.len() && is_ident_char(chars[j].1) {
                        j += 1;
                    }
                    let mut end = if j < chars.len() { chars[j].0 } else { body.len() };
                    if j < chars.len() && chars[j].1 == '\'' {
                        j += 1;
                        end = if j < chars.len() { chars[j].0 } else { body.len() };
                    }
                    let atom = &body[start..end];
                    if atom != "1" {
                        let l = self
                            .letter(atom)
                            .map_err(|m| ParseError { line, column: col, message: m })?;
                        toks.push(Token::Letter(l));
                    }
                    i = j;
                }
                other => {
                    return Err(ParseError { line, column: col, message: format!("unexpected character `{other}`") })
                }
            }
        }
        Ok(toks)
    }

    fn factor_index(&mut self, w: Word, implicit: bool) -> usize {
        if let Some(i) = self.factors.iter().zip(&self.implicit).position(|(f, &imp)| *f == w && imp == implicit) {
            return i;
        }
        self.factors.push(w);
        self.implicit.push(implicit);
        self.factors.len() - 1
    }

    fn relator(&mut self, body: &str, body_col: usize, line: usize) -> Result<(), ParseError> {
        let toks = self.lex(body, body_col, line)?;
        let mut relator = Word::empty();
        let mut occs = Vec::new();
        let mut bare = Word::empty();
        let mut depth = 0usize;
        let mut group = Word::empty();
        // Nested groups are flattened into their outermost group.
        let mut inner_inverts: Vec<(usize, bool)> = Vec::new();
        let mut has_parens = false;
        for tok in toks {
            match tok {
                Token::Open => {
                    has_parens = true;
                    if depth == 0 {
                        if !bare.is_empty() {
                            let w = std::mem::take(&mut bare);
                            occs.push((w, true, false));
                        }
                        group = Word::empty();
                    }
                    inner_inverts.push((group.len(), false));
                    depth += 1;
                }
                Token::Close { inverse } => {
                    if depth == 0 {
                        return Err(ParseError { line, column: body_col, message: "unbalanced `)`".into() });
                    }
                    depth -= 1;
                    let (start, _) = inner_inverts.pop().unwrap();
                    if inverse && depth > 0 {
                        let tail = group.slice(start, group.len()).inverse();
                        let mut g = group.slice(0, start);
                        g.extend_from(&tail);
                        group = g;
                    }
                    if depth == 0 {
                        occs.push((std::mem::take(&mut group), false, inverse));
                    }
                }
                Token::Letter(l) => {
                    if depth == 0 {
                        bare.push(l);
                    } else {
                        group.push(l);
                    }
                }
            }
        }
        if depth != 0 {
            return Err(ParseError { line, column: body_col + body.len(), message: "unbalanced `(`".into() });
        }
        if !bare.is_empty() {
            occs.push((bare, true, false));
        }
        if has_parens {
            self.any_parens = true;
        }
        let mut occurrence_list = Vec::new();
        let mut pending_plain = Vec::new();
        for (w, implicit, inverse) in occs {
            relator.extend_from(&if inverse { w.inverse() } else { w.clone() });
            pending_plain.push((w, implicit, inverse));
        }
        self.relators.push(relator);
        for (w, implicit, inverse) in pending_plain {
            let idx = self.factor_index(w, implicit);
            occurrence_list.push(Occurrence { factor: idx, inverse });
        }
        self.occurrences.push(occurrence_list);
        Ok(())
    }

    fn hidden_block(&self, body: &str) -> Result<HiddenBlock, String> {
        let mut sections: BTreeMap<&str, String> = BTreeMap::new();
        let mut current: Option<&str> = None;
        for tok in body.split_whitespace() {
            if let Some((k, rest)) = tok.split_once('=') {
                if matches!(k, "x" | "z" | "y" | "w") {
                    current = Some(k);
                    let e = sections.entry(k).or_default();
                    e.push(' ');
                    e.push_str(rest);
                    continue;
                }
            }
            match current {
                Some(k) => {
                    let e = sections.entry(k).or_default();
                    e.push(' ');
                    e.push_str(tok);
                }
                None => return Err(format!("unexpected `{tok}` before any key")),
            }
        }
        let single = |k: &str| -> Result<Symbol, String> {
            let v = sections.get(k).ok_or(format!("hidden_block needs `{k}=`"))?;
            let toks: Vec<&str> = v.split_whitespace().collect();
            if toks.len() != 1 {
                return Err(format!("`{k}=` takes exactly one generator"));
            }
            let l = self.letter(toks[0])?;
            if l.inverse {
                return Err(format!("`{k}=` takes a generator, not an inverse"));
            }
            Ok(l.symbol)
        };
        let x = single("x")?;
        let z = single("z")?;
        let ys = sections
            .get("y")
            .map(|v| v.split_whitespace().map(|t| self.letter(t).map(|l| l.symbol)).collect())
            .transpose()?
            .unwrap_or_default();
        let words = sections
            .get("w")
            .ok_or("hidden_block needs `w=`")?
            .split('|')
            .map(|t| self.word(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HiddenBlock { x, z, ys, words })
    }
}

fn tokens_with_columns(body: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    const UML_COPY: &str = "inverse_monoid\ngenerators: x y z\nrelator: (z) (x x y) (x x y) (z)\n";

    #[test]
    fn parses_factorised_relator() {
        let p = Presentation::parse(UML_COPY).unwrap();
        assert_eq!(p.kind, Kind::InverseMonoid);
        assert_eq!(p.relators, vec![w("z x x y x x y z")]);
        let f = p.factorisation.as_ref().unwrap();
        assert_eq!(f.factors, vec![w("z"), w("x x y")]);
        assert_eq!(f.occurrences[0].iter().map(|o| o.factor).collect::<Vec<_>>(), vec![0, 1, 1, 0]);
        f.validate(&p.relators).unwrap();
    }

    #[test]
    fn printer_round_trips() {
        let text = "inverse_monoid\ngenerators: a b x y\nrelator: (a x b) (a y b) (a x b)'\noracle: free\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p);
        assert_eq!(p.relators[0], w("a x b a y b b' x' a'"));
    }

    #[test]
    fn bare_runs_are_implicit_factors() {
        let text = "group\ngenerators: a b c\nrelator: a b (c) a b\n";
        let p = Presentation::parse(text).unwrap();
        let f = p.factorisation.as_ref().unwrap();
        assert_eq!(f.factors, vec![w("a b"), w("c")]);
        assert_eq!(p.to_string(), text);
    }

    #[test]
    fn unfactorised_file_has_no_factorisation() {
        let p = Presentation::parse("group\ngenerators: a b\nrelator: a a b\n").unwrap();
        assert!(p.factorisation.is_none());
        assert_eq!(p.to_string(), "group\ngenerators: a b\nrelator: a a b\n");
    }

    #[test]
    fn errors_carry_positions() {
        let e = Presentation::parse("group\ngenerators: a\nrelator: a q\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 12));
        let e = Presentation::parse("generators: a\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = Presentation::parse("group\ngenerators: a\nrelator: (a\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn hidden_block_and_order_lines() {
        let text = "inverse_monoid\ngenerators: a b c d\nrelator: (a b c d) (a c d) (a d) (a b b c d) (a c d)\nhidden_block: x=a z=d y=b c w=b c | c | 1 | b b c\norder: a b c d = 0\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.hidden_blocks.len(), 1);
        assert_eq!(p.hidden_blocks[0].words, vec![w("b c"), w("c"), Word::empty(), w("b b c")]);
        assert_eq!(p.orders, vec![(w("a b c d"), 0)]);
        assert_eq!(p.to_string(), text);
    }

    #[test]
    fn renders_display_notation() {
        let text = "inverse_monoid\ngenerators: x1 y1 z1 z2\nrelator: (z1) (x1 x1 y1) (x1 x1 y1) (z1)\nrelator: (z1) (z2)'\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.render_relation(0), "(z_1)(x_1^2y_1)^2(z_1)=1");
        assert_eq!(p.render_relation(1), "(z_1)(z_2)^{-1}=1");
    }

    #[test]
    fn validate_reports_problems() {
        let rel = vec![w("a x b a y b b' x' a'")];
        let f = Factorisation::new(
            vec![w("a x b"), w("a y b")],
            vec![vec![
                Occurrence { factor: 0, inverse: false },
                Occurrence { factor: 1, inverse: false },
                Occurrence { factor: 0, inverse: true },
            ]],
        );
        assert!(f.validate(&rel).is_ok());
        let bad = Factorisation::new(vec![w("a x b"), w("a y b")], vec![vec![Occurrence { factor: 1, inverse: false }]]);
        assert!(matches!(bad.validate(&rel), Err(FactorisationError::Mismatch { .. })));
        let unused = Factorisation::new(
            vec![w("a x b a y b b' x' a'"), w("q")],
            vec![vec![Occurrence { factor: 0, inverse: false }]],
        );
        assert_eq!(unused.validate(&rel), Err(FactorisationError::Unused(1)));
    }
}
