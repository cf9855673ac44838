//! Command-line front end: analysis, prefix membership, word problems,
//! amalgamation and brute-force comparison on presentation files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use spim::answer::Answer;
use spim::assemble::group_oracle;
use spim::eunitary::{certify, certify_amalgam};
use spim::factorise::{analyse, ClosureBudget};
use spim::harness::{compare_engines, query_batch, BruteAnswer, BruteForce, EnumerationBudget};
use spim::meu::MeuContext;
use spim::pmp::{prefix_generators, prefix_oracle, verdict};
use spim::presentation::Presentation;
use spim::stephen::{approximant, equal_semidecide, SemiDecision};
use spim::structure::hidden_uml_rewrite;
use spim::word::Word;

pub const DEFAULT_ROUNDS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "spim", version, about = "Prefix membership and word problems for special inverse monoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the verdict as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write a DOT graph (stephen) to this path.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    /// Stephen rounds for wp and stephen; sample count for compare.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Maximum product length for compare.
    #[arg(long = "max-len", global = true)]
    pub max_len: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorisation classes, unit certificates, E-unitarity and oracle plan.
    Analyze { file: PathBuf },
    /// Membership of a word in the prefix monoid.
    Pmp {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Equality of two words.
    Wp {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"], allow_hyphen_values = true)]
        eq: Vec<String>,
    },
    /// Amalgamated product of two presentations over `u=v` pairs.
    Amalgamate {
        left: PathBuf,
        right: PathBuf,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        /// Presentation output path; the certificate goes next to it as `.cert.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stephen approximant of a word.
    Stephen {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Prefix-membership engine against brute-force enumeration.
    Compare { file: PathBuf },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub command: &'static str,
    pub query: Value,
    pub answer: Answer,
    pub engine: String,
    pub trace: Value,
    pub elapsed_ms: f64,
}

impl Verdict {
    pub fn render_text(&self) -> String {
        let trace = serde_json::to_string_pretty(&self.trace).unwrap_or_default();
        format!("{}: {} [{}] ({:.1} ms)\n{trace}\n", self.command, self.answer, self.engine, self.elapsed_ms)
    }
}

pub fn load(path: &Path) -> Result<Presentation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Presentation::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn word(text: &str) -> Result<Word> {
    Word::parse(text).map_err(|e| anyhow!("word `{text}`: {e}"))
}

pub fn run(cli: &Cli) -> Result<Verdict> {
    let started = Instant::now();
    let (command, query, answer, engine, trace) = match &cli.command {
        Command::Analyze { file } => {
            let p = load(file)?;
            let (answer, trace) = analyze(&p);
            ("analyze", json!({ "file": file }), answer, "analysis".to_string(), trace)
        }
        Command::Pmp { file, word: w } => {
            let p = load(file)?;
            let w = word(w)?;
            let (answer, engine, trace) = pmp(&p, &w)?;
            ("pmp", json!({ "file": file, "word": w }), answer, engine, trace)
        }
        Command::Wp { file, eq } => {
            let p = load(file)?;
            let [u, v] = eq.as_slice() else { bail!("--eq needs two words") };
            let (u, v) = (word(u)?, word(v)?);
            let rounds = cli.budget.unwrap_or(DEFAULT_ROUNDS);
            let (answer, engine, trace) = wp(&p, &u, &v, rounds);
            ("wp", json!({ "file": file, "u": u, "v": v, "budget": rounds }), answer, engine, trace)
        }
        Command::Amalgamate { left, right, pairs, out } => {
            let (answer, trace) = amalgamate(left, right, pairs, out.as_deref())?;
            ("amalgamate", json!({ "left": left, "right": right, "pairs": pairs }), answer, "eunitary".to_string(), trace)
        }
        Command::Stephen { file, word: w } => {
            let p = load(file)?;
            let w = word(w)?;
            let rounds = cli.budget.unwrap_or(DEFAULT_ROUNDS);
            let a = approximant(&p.relators, &w, rounds);
            if let Some(path) = &cli.dot {
                fs::write(path, a.to_dot()).with_context(|| format!("writing {}", path.display()))?;
            }
            let trace = json!({ "vertices": a.vertex_count(), "rounds": a.rounds, "status": a.status });
            let answer = if a.status == spim::stephen::ApproximantStatus::Closed { Answer::True } else { Answer::Unknown };
            ("stephen", json!({ "file": file, "word": w, "budget": rounds }), answer, "stephen".to_string(), trace)
        }
        Command::Compare { file } => {
            let p = load(file)?;
            let mut budget = EnumerationBudget::default();
            if let Some(n) = cli.budget {
                budget.samples = n;
            }
            if let Some(n) = cli.max_len {
                budget.max_product_len = n;
            }
            let (answer, engine, trace) = compare(&p, budget)?;
            ("compare", json!({ "file": file, "budget": budget }), answer, engine, trace)
        }
    };
    Ok(Verdict { command, query, answer, engine, trace, elapsed_ms: started.elapsed().as_secs_f64() * 1e3 })
}

fn class(applicable: bool, holds: bool) -> Answer {
    if applicable {
        holds.into()
    } else {
        Answer::NotApplicable
    }
}

pub fn analyze(p: &Presentation) -> (Answer, Value) {
    let has_relators = !p.relators.is_empty();
    let report = analyse(p, ClosureBudget::default());
    let f = p.factorisation_or_trivial();
    let (eunitary, route, eunitary_reason) = match certify(p) {
        Ok(c) => (Answer::True, Some(c.route()), None),
        // A failed certificate attempt says nothing either way.
        Err(e) => (if has_relators { Answer::Unknown } else { Answer::NotApplicable }, None, Some(e.to_string())),
    };
    let group = group_oracle(p);
    let oracle = group.as_ref().ok().map(|g| g.describe());
    let oracle_reason = group.as_ref().err().map(|e| e.to_string());
    let (pipeline, pipeline_reason) = match group.map_err(|e| e.to_string()).and_then(|g| prefix_oracle(p, g).map_err(|e| e.to_string())) {
        Ok(o) => (Some(o.pipeline()), None),
        Err(e) => (None, Some(e)),
    };
    let hidden = (!p.hidden_blocks.is_empty()).then(|| match hidden_uml_rewrite(p, &f, &p.hidden_blocks) {
        Ok(r) => {
            let reduced: Vec<Word> = r.presentation.relators.iter().map(Word::reduce).collect();
            json!({
                "presentation": r.presentation.to_string(),
                "units": r.units,
                "reduces_to_original": reduced == p.relators,
            })
        }
        Err(e) => json!({ "error": e.to_string() }),
    });
    let units: Vec<&Word> = report.units.words();
    let trace = json!({
        "presentation": p.to_string(),
        "factorisation_valid": report.valid.is_ok(),
        "uniquely_marked": class(has_relators, report.uniquely_marked.is_some()),
        "markers": report.uniquely_marked,
        "alphabetically_disjoint": class(has_relators, report.alphabetically_disjoint),
        "unital": class(has_relators, report.unital),
        "units": units,
        "unit_certificates": report.units.certificates,
        "eunitary": eunitary,
        "eunitary_route": route,
        "eunitary_reason": eunitary_reason,
        "oracle": oracle,
        "oracle_reason": oracle_reason,
        "pipeline": pipeline,
        "pipeline_reason": pipeline_reason,
        "hidden_rewrite": hidden,
    });
    (if has_relators { eunitary } else { Answer::NotApplicable }, trace)
}

pub fn pmp(p: &Presentation, w: &Word) -> Result<(Answer, String, Value)> {
    let g = group_oracle(p).map_err(|e| anyhow!("{e}"))?;
    if !w.is_over(&p.alphabet()) {
        bail!("word {w} uses letters outside the generators");
    }
    let oracle = match prefix_oracle(p, g.clone()) {
        Ok(o) => o,
        Err(e) => return Ok((Answer::NotApplicable, "none".into(), json!({ "reason": e.to_string() }))),
    };
    let v = verdict(&oracle, g.as_ref(), w);
    let engine = serde_json::to_value(v.pipeline)?.as_str().unwrap_or("pmp").to_string();
    Ok((v.member, engine, serde_json::to_value(&v)?))
}

fn stephen_wp(p: &Presentation, u: &Word, v: &Word, rounds: usize, why: String) -> (Answer, String, Value) {
    let answer = match equal_semidecide(&p.relators, u, v, rounds) {
        SemiDecision::Equal => Answer::Equal,
        SemiDecision::Unknown => Answer::Unknown,
    };
    (answer, "stephen".into(), json!({ "scope": "M", "fallback_reason": why, "rounds": rounds }))
}

/// Equality via the maximal E-unitary image when its oracles assemble,
/// otherwise by Stephen's procedure. Answers from the image are scoped to
/// `M_EU` unless `M` is certified E-unitary.
pub fn wp(p: &Presentation, u: &Word, v: &Word, rounds: usize) -> (Answer, String, Value) {
    let ctx = match MeuContext::from_presentation(p) {
        Ok(c) => c,
        Err(e) => return stephen_wp(p, u, v, rounds, e.to_string()),
    };
    match ctx.meu_equal_explained(u, v) {
        Ok(ex) => {
            let eunitary = certify(p).is_ok();
            let scope = if eunitary { "M" } else { "M_EU" };
            let answer = if ex.equal { Answer::Equal } else { Answer::False };
            (answer, "meu".into(), json!({ "scope": scope, "eunitary_certified": eunitary, "explanation": ex }))
        }
        Err(e) => {
            let (answer, engine, trace) = stephen_wp(p, u, v, rounds, e.to_string());
            if answer == Answer::Equal {
                (answer, engine, trace)
            } else {
                (Answer::Inconclusive, engine, trace)
            }
        }
    }
}

fn parse_pair(text: &str) -> Result<(Word, Word)> {
    let (u, v) = text.split_once('=').ok_or_else(|| anyhow!("pair `{text}` is not of the form u=v"))?;
    Ok((word(u.trim())?, word(v.trim())?))
}

pub fn amalgamate(left: &Path, right: &Path, pairs: &[String], out: Option<&Path>) -> Result<(Answer, Value)> {
    let (m1, m2) = (load(left)?, load(right)?);
    let pairs: Vec<(Word, Word)> = pairs.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?;
    let c1 = certify(&m1).map_err(|e| anyhow!("{}: {e}", left.display()))?;
    let c2 = certify(&m2).map_err(|e| anyhow!("{}: {e}", right.display()))?;
    let (cert, p) = certify_amalgam(&m1, &c1, &m2, &c2, &pairs).map_err(|e| anyhow!("amalgamation not certified: {e}"))?;
    let cert_json = serde_json::to_string_pretty(&cert)?;
    let mut written = Vec::new();
    if let Some(out) = out {
        fs::write(out, p.to_string()).with_context(|| format!("writing {}", out.display()))?;
        let cert_path = out.with_extension("cert.json");
        fs::write(&cert_path, &cert_json).with_context(|| format!("writing {}", cert_path.display()))?;
        written = vec![out.to_path_buf(), cert_path];
    }
    let relations: Vec<String> = (0..p.relators.len()).map(|i| p.render_relation(i)).collect();
    let trace = json!({
        "relations": relations,
        "presentation": p.to_string(),
        "route": cert.route(),
        "written": written,
    });
    Ok((Answer::True, trace))
}

pub fn compare(p: &Presentation, budget: EnumerationBudget) -> Result<(Answer, String, Value)> {
    let g = group_oracle(p).map_err(|e| anyhow!("{e}"))?;
    let oracle = prefix_oracle(p, g.clone()).map_err(|e| anyhow!("{e}"))?;
    let gens = prefix_generators(p, None).words;
    let brute = BruteForce::new(&gens, g.as_ref(), budget).map_err(|e| anyhow!("{e}"))?;
    let queries = query_batch(&p.generators, &gens, &budget);
    let engine = |w: &Word| {
        let v = verdict(&oracle, g.as_ref(), w);
        (v.member, v.witness_checked)
    };
    let report = compare_engines(&brute, &queries, &engine).map_err(|e| anyhow!("{e}"))?;
    let truncated = report.rows.iter().filter(|r| r.brute == BruteAnswer::NotFound { truncated: true }).count();
    let name = serde_json::to_value(oracle.pipeline())?.as_str().unwrap_or("pmp").to_string();
    let mut trace = serde_json::to_value(&report)?;
    trace["truncated"] = json!(truncated);
    Ok((report.agrees().into(), name, trace))
}
