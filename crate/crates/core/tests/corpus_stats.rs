mod common;

use std::fs;
use std::process::Command;

use byline_bench::corpus::{
    convert_labelstudio, load_corpus, read_corpus, stats, write_corpus, ConvertOptions, LoadOptions, SkipReason,
};
use common::{cli, labelstudio_export, GOLD_CORPUS_ENV, LABELSTUDIO_COUNTS, RELEASED_COUNTS};

fn counts(s: &byline_bench::corpus::CorpusStats) -> Vec<(String, usize, usize)> {
    s.per_language.iter().map(|(l, v)| (l.to_string(), v.document_count, v.author_count)).collect()
}

fn expected(table: &[(&str, usize, usize)]) -> Vec<(String, usize, usize)> {
    table.iter().map(|&(l, d, a)| (l.to_string(), d, a)).collect()
}

#[test]
fn converted_export_matches_hand_counts() {
    let (corpus, report) = convert_labelstudio(&labelstudio_export(), &ConvertOptions::default()).unwrap();
    assert_eq!((report.tasks, report.converted), (8, 6));
    assert_eq!(report.dropped.get(&SkipReason::Skipped), Some(&1));
    assert_eq!(report.dropped.get(&SkipReason::Flagged), Some(&1));
    assert_eq!(counts(&stats(&corpus)), expected(&LABELSTUDIO_COUNTS));
    assert_eq!(corpus.label("8").unwrap().authors, ["王小明", "李华", "张伟"]);
    assert!(corpus.label("3").unwrap().authors.is_empty());
}

#[test]
fn corpus_round_trips_through_jsonl() {
    let (corpus, _) = convert_labelstudio(&labelstudio_export(), &ConvertOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_corpus(&corpus, &mut buf).unwrap();
    let back = read_corpus(buf.as_slice(), LoadOptions::default()).unwrap();
    assert_eq!(back.documents(), corpus.documents());
    assert_eq!(counts(&stats(&back)), counts(&stats(&corpus)));
}

#[test]
fn cli_convert_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("export.json");
    fs::write(&export, labelstudio_export()).unwrap();
    let gold = dir.path().join("gold.jsonl");
    let out = Command::new(cli()).arg("convert").arg("--labelstudio").arg(&export).arg("--out").arg(&gold).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("6 of 8 tasks converted"));

    let out = Command::new(cli()).args(["stats", "--json", "--corpus"]).arg(&gold).output().unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for (lang, docs, authors) in LABELSTUDIO_COUNTS {
        assert_eq!(json["per_language"][lang]["document_count"], docs);
        assert_eq!(json["per_language"][lang]["author_count"], authors);
    }

    let out = Command::new(cli()).args(["stats", "--corpus"]).arg(&gold).output().unwrap();
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["zh", "1", "3"]), "{table}");
}

#[test]
fn released_dataset_matches_published_counts() {
    let Ok(path) = std::env::var(GOLD_CORPUS_ENV) else {
        eprintln!("{GOLD_CORPUS_ENV} not set; skipping the released-dataset check");
        return;
    };
    let corpus = load_corpus(&path, LoadOptions { lax: true }).unwrap();
    assert_eq!(counts(&stats(&corpus)), expected(&RELEASED_COUNTS));
}

#[test]
fn published_totals_add_up() {
    let docs: usize = RELEASED_COUNTS.iter().map(|r| r.1).sum();
    let authors: usize = RELEASED_COUNTS.iter().map(|r| r.2).sum();
    assert_eq!((docs, authors), (754, 715));
}
