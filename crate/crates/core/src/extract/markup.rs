//! Author candidates from HTML markup: `<meta>` tags, `rel="author"` links and
//! byline-ish class/id/itemprop attributes.

use std::sync::LazyLock;

use ego_tree::NodeId;
use scraper::{ElementRef, Html, Selector};

use crate::html::{element_text, is_hidden};
use crate::text::char_len;

static META: LazyLock<Selector> = LazyLock::new(|| Selector::parse("meta").unwrap());

fn push_unique_ci(out: &mut Vec<String>, s: &str) {
    let key = s.to_lowercase();
    if !out.iter().any(|o| o.to_lowercase() == key) {
        out.push(s.to_string());
    }
}

fn looks_like_url(s: &str) -> bool {
    let lower = s.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

pub(crate) fn meta_authors(doc: &Html, names: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for meta in doc.select(&META) {
        let el = meta.value();
        let key = el.attr("name").or_else(|| el.attr("property")).map(|k| k.trim().to_lowercase());
        let Some(key) = key else { continue };
        if !names.iter().any(|n| n.eq_ignore_ascii_case(&key)) {
            continue;
        }
        let Some(content) = el.attr("content").map(str::trim) else { continue };
        if content.is_empty() || looks_like_url(content) {
            continue;
        }
        if key == "twitter:creator" && content.starts_with('@') {
            continue;
        }
        push_unique_ci(&mut out, content);
    }
    out
}

fn in_hidden_subtree(el: ElementRef<'_>) -> bool {
    is_hidden(el.value().name())
        || el.ancestors().filter_map(ElementRef::wrap).any(|a| is_hidden(a.value().name()))
}

fn has_rel_author(el: ElementRef<'_>) -> bool {
    el.value()
        .attr("rel")
        .is_some_and(|rel| rel.split_whitespace().any(|t| t.eq_ignore_ascii_case("author")))
}

pub(crate) fn rel_authors(doc: &Html, cap: usize) -> Vec<String> {
    let mut out = Vec::new();
    for el in doc.root_element().descendent_elements() {
        if !has_rel_author(el) || in_hidden_subtree(el) {
            continue;
        }
        let text = element_text(el);
        if !text.is_empty() && char_len(&text) <= cap {
            push_unique_ci(&mut out, &text);
        }
    }
    out
}

fn is_byline_element(el: ElementRef<'_>, attributes: &[String], tokens: &[String]) -> bool {
    if has_rel_author(el) {
        return true;
    }
    attributes.iter().filter_map(|a| el.value().attr(a)).any(|value| {
        let value = value.to_lowercase();
        tokens.iter().any(|t| value.contains(t.as_str()))
    })
}

/// Text of byline-ish elements. Nested matches are grouped under their
/// outermost match and emitted shortest first; texts longer than `cap`
/// characters are discarded.
pub(crate) fn class_authors(doc: &Html, attributes: &[String], tokens: &[String], cap: usize) -> Vec<String> {
    let tokens: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut clusters: Vec<(NodeId, Vec<String>)> = Vec::new();
    for el in doc.root_element().descendent_elements() {
        if !is_byline_element(el, attributes, &tokens) || in_hidden_subtree(el) {
            continue;
        }
        let text = element_text(el);
        let text = (!text.is_empty() && char_len(&text) <= cap).then_some(text);
        let nested = clusters
            .last()
            .is_some_and(|(root, _)| el.ancestors().any(|a| a.id() == *root));
        match (nested, text) {
            (true, Some(t)) => clusters.last_mut().expect("cluster").1.push(t),
            (true, None) => {}
            (false, t) => clusters.push((el.id(), t.into_iter().collect())),
        }
    }
    let mut out = Vec::new();
    for (_, mut texts) in clusters {
        texts.sort_by_key(|t| char_len(t));
        for t in texts {
            push_unique_ci(&mut out, &t);
        }
    }
    out
}
