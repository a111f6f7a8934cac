use std::io;
use std::path::Path;

use super::EntityKind;
use crate::text::{collapse_whitespace, nfc};

/// Known names used by the rule-based provider.
///
/// Files are UTF-8 with one name per line; `#` starts a comment and blank
/// lines are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    entries: Vec<(String, EntityKind)>,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str, kind: EntityKind) -> Self {
        let mut g = Self::new();
        g.extend_from_str(text, kind);
        g
    }

    pub fn load(path: impl AsRef<Path>, kind: EntityKind) -> io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?, kind))
    }

    pub fn extend_from_str(&mut self, text: &str, kind: EntityKind) {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            self.insert(line, kind);
        }
    }

    pub fn insert(&mut self, name: &str, kind: EntityKind) {
        let name = collapse_whitespace(&nfc(name));
        if !name.is_empty() && !self.entries.iter().any(|(n, _)| *n == name) {
            self.entries.push((name, kind));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn kind_of(&self, name: &str) -> Option<EntityKind> {
        self.entries.iter().find(|(n, _)| n == name).map(|&(_, k)| k)
    }

    /// Entries longest first, so longer names claim text before their parts.
    pub(crate) fn by_length(&self) -> Vec<&(String, EntityKind)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let g = Gazetteer::parse("# staff\nJane Doe\n\n  Li   Wei  # desk\n#x\nJane Doe\n", EntityKind::Person);
        assert_eq!(g.len(), 2);
        assert_eq!(g.kind_of("Li Wei"), Some(EntityKind::Person));
    }

    #[test]
    fn longest_first() {
        let mut g = Gazetteer::parse("Doe\nJane Doe\n", EntityKind::Person);
        g.insert("Reuters", EntityKind::Organization);
        let names: Vec<&str> = g.by_length().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["Jane Doe", "Reuters", "Doe"]);
    }
}
