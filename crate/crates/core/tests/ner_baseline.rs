mod common;

use byline_bench::extract::{Extractor, ExtractorConfig};
use byline_bench::ner::{
    ner_extract, select_authors, CandidateEntity, EntityKind, Gazetteer, NerOptions, NerProvider, RuleBasedProvider,
};
use byline_bench::{LanguageCode, Method};
use common::ner_cases;
use proptest::prelude::*;

fn provider_for(case: &common::NerCase) -> RuleBasedProvider {
    let mut g = Gazetteer::new();
    for name in &case.gazetteer {
        g.insert(name, EntityKind::Person);
    }
    RuleBasedProvider::new(g)
}

#[test]
fn byline_name_ranks_first() {
    let mut failures = Vec::new();
    for (i, case) in ner_cases(120, 2024).iter().enumerate() {
        let lang: LanguageCode = case.language.parse().unwrap();
        let got = ner_extract(&case.html, lang, &provider_for(case), NerOptions::default()).unwrap();
        assert!(got.authors.len() <= 3);
        if got.authors.first() != Some(&case.byline) {
            failures.push(format!("case {i} ({}): wanted {} first, got {:?}", case.language, case.byline, got.authors));
        }
        assert!(!got.authors.is_empty() && got.method == Method::NerFallback);
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn subject_is_never_ahead_of_the_byline() {
    for case in ner_cases(30, 99) {
        let lang: LanguageCode = case.language.parse().unwrap();
        let entities = provider_for(&case).annotate(&byline_bench::html::visible_text(&byline_bench::html::parse(&case.html)), lang).unwrap();
        let freq = |name: &str| entities.iter().find(|e| e.surface == name).map(|e| e.frequency);
        assert_eq!(freq(&case.byline), Some(1), "{}", case.html);
        assert!(freq(&case.subject).unwrap() >= 5);
    }
}

#[test]
fn cascade_falls_back_to_ner() {
    let extractor = Extractor::new(ExtractorConfig::default()).unwrap();
    let provider = RuleBasedProvider::default();
    let html = "<p>Officials met Omar Haddad on Monday. Omar Haddad said yes. Critics of Omar Haddad disagree. \
                Lucy Moreno took notes.</p>";
    let without = extractor.extract(html, "en".parse().unwrap(), None).unwrap();
    assert_eq!(without.method, Method::None);
    let with = extractor.extract(html, "en".parse().unwrap(), Some(&provider)).unwrap();
    assert_eq!(with.method, Method::NerFallback);
    assert_eq!(with.authors, ["Lucy Moreno", "Omar Haddad"]);
}

#[test]
fn unsupported_language_is_reported() {
    let provider = RuleBasedProvider::default();
    let err = ner_extract("<p>Ciao Mario Rossi.</p>", "it".parse().unwrap(), &provider, NerOptions::default());
    assert!(err.is_err());
}

fn entity(surface: &str, kind: EntityKind, first_offset: usize, frequency: usize) -> CandidateEntity {
    CandidateEntity { surface: surface.into(), kind, first_offset, frequency }
}

#[test]
fn selection_orders_by_frequency_then_position() {
    let entities = vec![
        entity("Subject", EntityKind::Person, 0, 6),
        entity("Late", EntityKind::Person, 90, 1),
        entity("Early", EntityKind::Person, 10, 1),
        entity("Acme", EntityKind::Organization, 5, 1),
        entity("Paris", EntityKind::Other, 7, 1),
        entity("Twice", EntityKind::Person, 3, 2),
    ];
    assert_eq!(select_authors(&entities, 3), ["Early", "Late", "Twice"]);
    assert_eq!(select_authors(&entities, 1), ["Early"]);
    let with_orgs = NerOptions { k: 2, include_organizations: true };
    assert_eq!(byline_bench::ner::select_authors_with(&entities, with_orgs), ["Acme", "Early"]);
}

fn kind() -> impl Strategy<Value = EntityKind> {
    prop_oneof![Just(EntityKind::Person), Just(EntityKind::Organization), Just(EntityKind::Other)]
}

proptest! {
    #[test]
    fn selection_is_bounded_and_least_frequent(
        raw in prop::collection::vec(("[A-D][a-c]{0,2}", kind(), 0usize..200, 1usize..9), 0..20),
        k in 1usize..6,
    ) {
        let entities: Vec<CandidateEntity> = raw.into_iter().map(|(s, kd, o, f)| entity(&s, kd, o, f)).collect();
        let picked = select_authors(&entities, k);
        prop_assert!(picked.len() <= k);
        let persons: Vec<&CandidateEntity> = entities.iter().filter(|e| e.kind == EntityKind::Person).collect();
        for name in &picked {
            prop_assert!(persons.iter().any(|e| &e.surface == name));
        }
        // Whatever was left out is at least as frequent as everything picked.
        let min_picked = |n: &String| persons.iter().filter(|e| &e.surface == n).map(|e| e.frequency).min().unwrap();
        let worst = picked.iter().map(min_picked).max();
        if let (Some(worst), true) = (worst, picked.len() == k) {
            for e in &persons {
                if !picked.contains(&e.surface) {
                    prop_assert!(e.frequency >= worst);
                }
            }
        }
        let mut dedup = picked.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), picked.len());
    }
}
