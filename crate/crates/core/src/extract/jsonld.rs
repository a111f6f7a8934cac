//! schema.org authors from `<script type="application/ld+json">` blocks.

use std::sync::LazyLock;

use scraper::{Html, Selector};
use serde_json::Value;

static LD_SCRIPT: LazyLock<Selector> = LazyLock::new(|| Selector::parse("script").unwrap());

#[derive(Debug, Default, Clone, PartialEq)]
pub struct JsonLdAuthors {
    pub authors: Vec<String>,
    /// Blocks that failed to parse as JSON.
    pub malformed_blocks: usize,
}

pub(crate) fn from_document(doc: &Html, types: &[String]) -> JsonLdAuthors {
    let mut out = JsonLdAuthors::default();
    for script in doc.select(&LD_SCRIPT) {
        let is_ld = script
            .value()
            .attr("type")
            .is_some_and(|t| t.trim().eq_ignore_ascii_case("application/ld+json"));
        if !is_ld {
            continue;
        }
        let body: String = script.text().collect();
        let body = body.trim().trim_start_matches("<![CDATA[").trim_end_matches("]]>").trim();
        let body = body.strip_suffix(';').unwrap_or(body);
        match serde_json::from_str::<Value>(body) {
            Ok(value) => walk(&value, types, &mut out.authors),
            Err(_) => out.malformed_blocks += 1,
        }
    }
    out
}

fn has_article_type(obj: &serde_json::Map<String, Value>, types: &[String]) -> bool {
    let matches = |t: &str| {
        let t = t.rsplit(['/', ':']).next().unwrap_or(t);
        types.iter().any(|k| k.eq_ignore_ascii_case(t))
    };
    match obj.get("@type") {
        Some(Value::String(t)) => matches(t),
        Some(Value::Array(ts)) => ts.iter().filter_map(Value::as_str).any(matches),
        _ => false,
    }
}

/// Visits every object, collecting `author` of article-typed ones.
fn walk(value: &Value, types: &[String], authors: &mut Vec<String>) {
    match value {
        Value::Array(items) => items.iter().for_each(|v| walk(v, types, authors)),
        Value::Object(obj) => {
            if has_article_type(obj, types) {
                if let Some(author) = obj.get("author") {
                    author_names(author, authors);
                }
            }
            for (key, child) in obj {
                if key != "author" && key != "publisher" {
                    walk(child, types, authors);
                }
            }
        }
        _ => {}
    }
}

fn author_names(author: &Value, out: &mut Vec<String>) {
    match author {
        Value::String(s) => push(s, out),
        Value::Array(items) => items.iter().for_each(|a| author_names(a, out)),
        Value::Object(obj) => match obj.get("name") {
            Some(Value::String(s)) => push(s, out),
            Some(Value::Array(names)) => names.iter().filter_map(Value::as_str).for_each(|s| push(s, out)),
            _ => {}
        },
        _ => {}
    }
}

fn push(s: &str, out: &mut Vec<String>) {
    let s = s.trim();
    // Profile links are not names.
    if s.is_empty() || s.starts_with("http://") || s.starts_with("https://") {
        return;
    }
    if !out.iter().any(|o| o == s) {
        out.push(s.to_string());
    }
}
