use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diag::Position;
use crate::tex::DocNode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TocEntry {
    pub title: String,
    pub anchor: String,
    /// 1 for `\section`, 2 for `\subsection`, 3 for `\subsubsection`.
    pub level: usize,
    pub position: Position,
    pub children: Vec<TocEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub term: String,
    /// One anchor per `\index` occurrence, in document order.
    pub anchors: Vec<String>,
}

pub fn section_level(name: &str) -> Option<usize> {
    match name {
        "section" => Some(1),
        "subsection" => Some(2),
        "subsubsection" => Some(3),
        _ => None,
    }
}

/// Lowercase ASCII alphanumerics; every other run becomes one `-`.
pub fn slugify(title: &str) -> String {
    let mut out = String::new();
    let mut dash = false;
    for c in title.chars() {
        if c.is_ascii_alphanumeric() {
            if dash && !out.is_empty() {
                out.push('-');
            }
            dash = false;
            out.push(c.to_ascii_lowercase());
        } else {
            dash = true;
        }
    }
    if out.is_empty() {
        out.push_str("section");
    }
    out
}

pub(crate) fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Sections and subsections in document order, nested by level.
pub fn build_toc(body: &[DocNode]) -> Vec<TocEntry> {
    let mut flat = Vec::new();
    walk_sections(body, &mut flat);
    let mut used = HashSet::new();
    let mut roots: Vec<TocEntry> = Vec::new();
    for (title, level, position) in flat {
        let base = slugify(&title);
        let mut anchor = base.clone();
        let mut n = 2;
        while !used.insert(anchor.clone()) {
            anchor = format!("{base}-{n}");
            n += 1;
        }
        insert(&mut roots, TocEntry { title, anchor, level, position, children: Vec::new() });
    }
    roots
}

fn insert(list: &mut Vec<TocEntry>, entry: TocEntry) {
    match list.last_mut() {
        Some(last) if last.level < entry.level => insert(&mut last.children, entry),
        _ => list.push(entry),
    }
}

fn walk_sections(nodes: &[DocNode], out: &mut Vec<(String, usize, Position)>) {
    for node in nodes {
        match node {
            DocNode::Macro { name, args, position, .. } => {
                if let Some(level) = section_level(name) {
                    let title = collapse_whitespace(&DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice)));
                    out.push((title, level, *position));
                }
            }
            DocNode::Environment { body, .. } | DocNode::Group(body) => walk_sections(body, out),
            _ => {}
        }
    }
}

/// Anchor for every section heading, keyed by the macro position.
pub(crate) fn heading_anchors(toc: &[TocEntry]) -> HashMap<Position, String> {
    fn walk(entries: &[TocEntry], map: &mut HashMap<Position, String>) {
        for e in entries {
            map.insert(e.position, e.anchor.clone());
            walk(&e.children, map);
        }
    }
    let mut map = HashMap::new();
    walk(toc, &mut map);
    map
}

/// Anchor ids for `\index` occurrences: `idx:1`, `idx:2`, ... in document order.
pub(crate) fn index_anchors(body: &[DocNode]) -> Vec<(Position, String, String)> {
    fn walk(nodes: &[DocNode], out: &mut Vec<(Position, String, String)>) {
        for node in nodes {
            match node {
                DocNode::Macro { name, args, position, .. } => {
                    if name == "index" {
                        let term = collapse_whitespace(&DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice)));
                        let anchor = format!("idx:{}", out.len() + 1);
                        out.push((*position, term, anchor));
                    } else {
                        for a in args {
                            walk(a, out);
                        }
                    }
                }
                DocNode::Environment { body, .. } | DocNode::Group(body) => walk(body, out),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    walk(body, &mut out);
    out
}

/// Unique index terms sorted case-insensitively, each with its back-links.
pub fn build_index(body: &[DocNode]) -> Vec<IndexEntry> {
    let mut terms: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for (_, term, anchor) in index_anchors(body) {
        if term.is_empty() {
            continue;
        }
        terms.entry((term.to_lowercase(), term)).or_default().push(anchor);
    }
    terms.into_iter().map(|((_, term), anchors)| IndexEntry { term, anchors }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tex::parse_source;

    fn body(inner: &str) -> Vec<DocNode> {
        parse_source(&format!("\\begin{{document}}{inner}\\end{{document}}")).unwrap().body
    }

    #[test]
    fn slugs() {
        assert_eq!(slugify("User manual"), "user-manual");
        assert_eq!(slugify("  On the writer side! "), "on-the-writer-side");
        assert_eq!(slugify("???"), "section");
    }

    #[test]
    fn toc_nesting() {
        let toc = build_toc(&body(r"\section{Introduction}\section{User manual}\subsection{Installation}"));
        assert_eq!(toc.len(), 2);
        assert_eq!(toc[0].title, "Introduction");
        assert_eq!(toc[1].children[0].anchor, "installation");
    }

    #[test]
    fn toc_collisions_and_empty() {
        let toc = build_toc(&body(r"\section{Setup}\section{Setup}"));
        assert_eq!((toc[0].anchor.as_str(), toc[1].anchor.as_str()), ("setup", "setup-2"));
        assert!(build_toc(&body("none")).is_empty());
    }

    #[test]
    fn index_dedup_and_order() {
        let idx = build_index(&body(r"\index{b}x\index{a}\index{B2}\index{a}"));
        let terms: Vec<_> = idx.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(terms, vec!["a", "b", "B2"]);
        assert_eq!(idx[0].anchors, vec!["idx:2", "idx:4"]);
        assert!(build_index(&body("x")).is_empty());
    }
}
