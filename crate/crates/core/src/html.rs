//! Lenient HTML parsing and visible-text extraction.

use ego_tree::NodeRef;
use scraper::{ElementRef, Html, Node};

use crate::text::collapse_whitespace;

/// Elements whose content is never rendered as text.
const HIDDEN: &[&str] = &[
    "head", "script", "style", "noscript", "template", "title", "svg", "math", "iframe", "object", "canvas",
];

const BLOCK: &[&str] = &[
    "address", "article", "aside", "blockquote", "br", "caption", "dd", "details", "dialog", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup",
    "hr", "li", "main", "nav", "ol", "p", "pre", "section", "summary", "table", "tbody", "td", "tfoot", "th",
    "thead", "tr", "ul", "body", "html",
];

/// Parses with html5ever's error-recovering tree builder. Never fails.
pub fn parse(html: &str) -> Html {
    Html::parse_document(html)
}

pub(crate) fn is_hidden(name: &str) -> bool {
    HIDDEN.contains(&name)
}

/// Rendered text of the whole page: one line per block, whitespace collapsed
/// inside lines, empty lines dropped.
pub fn visible_text(doc: &Html) -> String {
    let mut raw = String::new();
    collect(*doc.root_element(), &mut raw);
    let mut out = String::with_capacity(raw.len());
    for line in raw.lines() {
        let line = collapse_whitespace(line);
        if !line.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&line);
        }
    }
    out
}

/// Rendered text of one element on a single line.
pub fn element_text(el: ElementRef<'_>) -> String {
    let mut raw = String::new();
    collect(*el, &mut raw);
    collapse_whitespace(&raw)
}

fn collect(node: NodeRef<'_, Node>, out: &mut String) {
    match node.value() {
        Node::Text(t) => out.push_str(t),
        Node::Element(el) => {
            let name = el.name();
            if is_hidden(name) {
                return;
            }
            let block = BLOCK.contains(&name);
            if block {
                out.push('\n');
            }
            for child in node.children() {
                collect(child, out);
            }
            if block {
                out.push('\n');
            }
        }
        Node::Document | Node::Fragment => {
            for child in node.children() {
                collect(child, out);
            }
        }
        _ => {}
    }
}
