//! Per-language, per-tool aggregate tables and their renderings.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::lang::LanguageCode;
use crate::metrics::ScoreRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "rouge1")]
    Rouge1,
    #[serde(rename = "rougeL")]
    RougeL,
    #[serde(rename = "ned")]
    Ned,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rouge1, Metric::RougeL, Metric::Ned];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Rouge1 => "rouge1",
            Metric::RougeL => "rougeL",
            Metric::Ned => "ned",
        }
    }

    /// ROUGE is a similarity, NED a distance.
    pub fn higher_is_better(self) -> bool {
        !matches!(self, Metric::Ned)
    }

    pub fn value(self, record: &ScoreRecord) -> f64 {
        match self {
            Metric::Rouge1 => record.rouge1,
            Metric::RougeL => record.rouge_l,
            Metric::Ned => record.ned,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub mean: f64,
    pub n_docs: usize,
    pub n_empty: usize,
}

/// One metric over languages (rows) and tools (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub metric: Metric,
    /// Sorted by code.
    pub languages: Vec<LanguageCode>,
    /// In adapter order.
    pub tools: Vec<String>,
    pub cells: BTreeMap<(LanguageCode, String), Cell>,
    /// Tools holding the best mean of each language; all of them on a tie.
    pub best: BTreeMap<LanguageCode, Vec<String>>,
}

impl ReportTable {
    /// Aggregates records. Means are sums in record order divided by the count.
    pub fn build(metric: Metric, records: &[ScoreRecord], tools: &[String]) -> Self {
        let mut sums: BTreeMap<(LanguageCode, String), (f64, usize, usize)> = BTreeMap::new();
        for r in records {
            let lang: LanguageCode = r.language.parse().expect("records carry valid language codes");
            let entry = sums.entry((lang, r.tool.clone())).or_insert((0.0, 0, 0));
            entry.0 += metric.value(r);
            entry.1 += 1;
            entry.2 += usize::from(r.empty_prediction);
        }
        let cells: BTreeMap<(LanguageCode, String), Cell> = sums
            .into_iter()
            .map(|(k, (sum, n, empty))| (k, Cell { mean: sum / n as f64, n_docs: n, n_empty: empty }))
            .collect();
        let mut languages: Vec<LanguageCode> = cells.keys().map(|(l, _)| *l).collect();
        languages.dedup();

        let mut best = BTreeMap::new();
        for &lang in &languages {
            let row: Vec<(&String, f64)> =
                tools.iter().filter_map(|t| cells.get(&(lang, t.clone())).map(|c| (t, c.mean))).collect();
            let pick = if metric.higher_is_better() { f64::max } else { f64::min };
            let Some(target) = row.iter().map(|&(_, m)| m).reduce(pick) else { continue };
            best.insert(lang, row.iter().filter(|&&(_, m)| m == target).map(|(t, _)| (*t).clone()).collect());
        }
        Self { metric, languages, tools: tools.to_vec(), cells, best }
    }

    pub fn cell(&self, language: LanguageCode, tool: &str) -> Option<&Cell> {
        self.cells.get(&(language, tool.to_string()))
    }

    pub fn is_best(&self, language: LanguageCode, tool: &str) -> bool {
        self.best.get(&language).is_some_and(|b| b.iter().any(|t| t == tool))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
    RadarJson,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 4] = [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Markdown, ReportFormat::RadarJson];

    pub fn file_name(self) -> &'static str {
        match self {
            ReportFormat::Csv => "report.csv",
            ReportFormat::Json => "report.json",
            ReportFormat::Markdown => "report.md",
            ReportFormat::RadarJson => "radar.json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown report format {0:?} (expected csv, json, markdown or radar-json)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "radar-json" | "radar" => Ok(ReportFormat::RadarJson),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

pub fn emit_report(tables: &[ReportTable], format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Csv => emit_csv(tables),
        ReportFormat::Json => emit_json(tables),
        ReportFormat::Markdown => emit_markdown(tables).into_bytes(),
        ReportFormat::RadarJson => emit_radar(tables),
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("writing to memory")
}

/// Floats use Rust's shortest round-trip form, so parsing gives the same value back.
fn emit_csv(tables: &[ReportTable]) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(["metric", "language", "tool", "mean", "n_docs", "n_empty"]).expect("in-memory");
    for t in tables {
        for &lang in &t.languages {
            for tool in &t.tools {
                if let Some(c) = t.cell(lang, tool) {
                    let row = [
                        t.metric.to_string(),
                        lang.to_string(),
                        tool.clone(),
                        c.mean.to_string(),
                        c.n_docs.to_string(),
                        c.n_empty.to_string(),
                    ];
                    w.write_record(&row).expect("in-memory");
                }
            }
        }
    }
    finish(w)
}

fn emit_json(tables: &[ReportTable]) -> Vec<u8> {
    let tables: Vec<serde_json::Value> = tables
        .iter()
        .map(|t| {
            let cells: Vec<serde_json::Value> = t
                .languages
                .iter()
                .flat_map(|&lang| t.tools.iter().map(move |tool| (lang, tool)))
                .filter_map(|(lang, tool)| {
                    t.cell(lang, tool).map(|c| {
                        json!({
                            "language": lang,
                            "tool": tool,
                            "mean": c.mean,
                            "n_docs": c.n_docs,
                            "n_empty": c.n_empty,
                            "best": t.is_best(lang, tool),
                        })
                    })
                })
                .collect();
            json!({ "metric": t.metric, "languages": t.languages, "tools": t.tools, "cells": cells })
        })
        .collect();
    let mut out = serde_json::to_vec_pretty(&json!({ "tables": tables })).expect("serializable");
    out.push(b'\n');
    out
}

fn emit_markdown(tables: &[ReportTable]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let direction = if t.metric.higher_is_better() { "higher is better" } else { "lower is better" };
        out.push_str(&format!("## {} ({direction})\n\n", t.metric));
        out.push_str("| language |");
        for tool in &t.tools {
            out.push_str(&format!(" {tool} |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(t.tools.len()));
        out.push('\n');
        for &lang in &t.languages {
            out.push_str(&format!("| {lang} |"));
            for tool in &t.tools {
                let text = match t.cell(lang, tool) {
                    None => String::new(),
                    // No character overlap at all.
                    Some(c) if t.metric.higher_is_better() && c.mean == 0.0 => "-".to_string(),
                    Some(c) if t.is_best(lang, tool) => format!("**{:.2}**", c.mean),
                    Some(c) => format!("{:.2}", c.mean),
                };
                out.push_str(&format!(" {text} |"));
            }
            out.push('\n');
        }
    }
    out
}

/// One chart per metric: an axis per language and a series per tool.
fn emit_radar(tables: &[ReportTable]) -> Vec<u8> {
    let charts: Vec<serde_json::Value> = tables
        .iter()
        .map(|t| {
            let series: Vec<serde_json::Value> = t
                .tools
                .iter()
                .map(|tool| {
                    let values: Vec<Option<f64>> = t.languages.iter().map(|&l| t.cell(l, tool).map(|c| c.mean)).collect();
                    json!({ "name": tool, "values": values })
                })
                .collect();
            json!({ "metric": t.metric, "axes": t.languages, "series": series })
        })
        .collect();
    let mut out = serde_json::to_vec_pretty(&charts).expect("serializable");
    out.push(b'\n');
    out
}

pub const SCORES_HEADER: [&str; 8] = ["doc_id", "tool", "language", "rouge1", "rougeL", "ned", "ned_raw", "empty_prediction"];

/// Per-document scores, one row per record in order.
pub fn write_scores_csv<W: io::Write>(records: &[ScoreRecord], writer: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(SCORES_HEADER)?;
    for r in records {
        w.write_record([
            r.doc_id.clone(),
            r.tool.clone(),
            r.language.clone(),
            r.rouge1.to_string(),
            r.rouge_l.to_string(),
            r.ned.to_string(),
            r.ned_raw.to_string(),
            r.empty_prediction.to_string(),
        ])?;
    }
    w.flush()
}

pub fn read_scores_csv<R: io::Read>(reader: R) -> Result<Vec<ScoreRecord>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}
