use std::path::Path;

use spim::answer::Answer;
use spim::assemble::group_oracle;
use spim::eunitary::{certify, replay};
use spim::harness::{compare_engines, query_batch, BruteForce, EnumerationBudget};
use spim::pmp::{prefix_generators, prefix_oracle, verdict, Pipeline};
use spim::presentation::Presentation;
use spim::structure::hidden_uml_rewrite;
use spim::word::{w, Word};

fn load(name: &str) -> Presentation {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presentations").join(name);
    Presentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn small_budget() -> EnumerationBudget {
    EnumerationBudget { max_product_len: 6, samples: 30, forward_states: 20_000, backward_states: 2_000, ..Default::default() }
}

fn agrees_with_brute_force(name: &str, pipeline: Pipeline) {
    let p = load(name);
    let g = group_oracle(&p).unwrap();
    let o = prefix_oracle(&p, g.clone()).unwrap();
    assert_eq!(o.pipeline(), pipeline, "{name}");
    let gens = prefix_generators(&p, None).words;
    let budget = small_budget();
    let brute = BruteForce::new(&gens, g.as_ref(), budget).unwrap();
    let queries = query_batch(&p.generators, &gens, &budget);
    let engine = |q: &Word| {
        let v = verdict(&o, g.as_ref(), q);
        (v.member, v.witness_checked)
    };
    let report = compare_engines(&brute, &queries, &engine).unwrap();
    assert!(report.agrees(), "{name}: {:?}", report.disagreements);
    assert_eq!(report.seed, budget.seed);
}

#[test]
fn uml_component_agrees() {
    agrees_with_brute_force("uml_component.pres", Pipeline::Uml);
}

#[test]
fn da_component_agrees() {
    agrees_with_brute_force("da_component.pres", Pipeline::Da);
}

#[test]
fn ohare_component_agrees() {
    agrees_with_brute_force("ohare_component.pres", Pipeline::HiddenUml);
}

#[test]
fn bicyclic_agrees() {
    agrees_with_brute_force("bicyclic.pres", Pipeline::Free);
}

#[test]
fn aab_word_b_is_not_found_by_enumeration() {
    let p = load("aab.pres");
    let g = group_oracle(&p).unwrap();
    let gens = prefix_generators(&p, None).words;
    let brute = BruteForce::new(&gens, g.as_ref(), EnumerationBudget::default()).unwrap();
    assert!(!brute.query(&w("b")).unwrap().is_member());
    assert!(brute.query(&w("a a b")).unwrap().is_member());
}

#[test]
fn shipped_monoids_are_certified_and_replay() {
    for (name, route) in [
        ("uml_component.pres", "single-cyclically-reduced"),
        ("da_component.pres", "single-cyclically-reduced"),
        ("ohare_component.pres", "single-cyclically-reduced"),
        ("uml.pres", "amalgam-over-units"),
        ("da.pres", "amalgam-over-units"),
        ("ohare.pres", "amalgam-over-units"),
    ] {
        let cert = certify(&load(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cert.route(), route, "{name}");
        replay(&cert).unwrap();
    }
}

#[test]
fn ohare_rewrite_uses_conjugated_units() {
    let p = load("ohare_component.pres");
    let r = hidden_uml_rewrite(&p, &p.factorisation_or_trivial(), &p.hidden_blocks).unwrap();
    let mut units = r.units.clone();
    units.sort();
    let mut want = vec![w("a b a'"), w("a c a'"), w("a d")];
    want.sort();
    assert_eq!(units, want);
    assert_eq!(r.presentation.relators[0].reduce(), p.relators[0]);
}

#[test]
fn pmp_verdicts_carry_checked_witnesses() {
    let p = load("uml.pres");
    let g = group_oracle(&p).unwrap();
    let o = prefix_oracle(&p, g.clone()).unwrap();
    let v = verdict(&o, g.as_ref(), &w("z1 x1 x1"));
    assert_eq!(v.member, Answer::True);
    assert_eq!(v.witness_checked, Some(true));
    let v = verdict(&o, g.as_ref(), &w("z1'"));
    assert_eq!(v.member, Answer::True);
    assert_eq!(verdict(&o, g.as_ref(), &w("y1")).member, Answer::False);
}
