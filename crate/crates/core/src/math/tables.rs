//! Symbol tables for math mode, loaded from the bundled `data/*.tsv` files.
//!
//! Each non-comment line is `name<TAB>codepoint<TAB>class`, the codepoint in
//! hexadecimal. Lines starting with `#` and blank lines are ignored.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

const GREEK_TSV: &str = include_str!("../../data/greek.tsv");
const OPERATORS_TSV: &str = include_str!("../../data/operators.tsv");

/// Spacing/role class of a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolClass {
    /// Ordinary symbol, rendered as an identifier (`mi`).
    Ord,
    Bin,
    Rel,
    Large,
    Op,
    Open,
    Close,
    Fence,
    Punct,
}

impl SymbolClass {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ord" => SymbolClass::Ord,
            "bin" => SymbolClass::Bin,
            "rel" => SymbolClass::Rel,
            "large" => SymbolClass::Large,
            "op" => SymbolClass::Op,
            "open" => SymbolClass::Open,
            "close" => SymbolClass::Close,
            "fence" => SymbolClass::Fence,
            "punct" => SymbolClass::Punct,
            _ => return None,
        })
    }

    pub fn is_delimiter(self) -> bool {
        matches!(self, SymbolClass::Open | SymbolClass::Close | SymbolClass::Fence)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub name: String,
    pub ch: char,
    pub class: SymbolClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symbol table line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

pub fn parse_table(src: &str) -> Result<Vec<TableEntry>, TableError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |message: String| TableError { line, message };
        let fields: Vec<&str> = raw.split('\t').collect();
        let [name, code, class] = fields[..] else {
            return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(err(format!("invalid name `{name}`")));
        }
        let ch = u32::from_str_radix(code, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| err(format!("invalid codepoint `{code}`")))?;
        let class = SymbolClass::parse(class).ok_or_else(|| err(format!("unknown class `{class}`")))?;
        out.push(TableEntry { name: name.to_string(), ch, class });
    }
    Ok(out)
}

fn index(src: &'static str) -> HashMap<String, TableEntry> {
    parse_table(src)
        .expect("bundled symbol table is valid")
        .into_iter()
        .map(|e| (e.name.clone(), e))
        .collect()
}

pub fn greek(name: &str) -> Option<&'static TableEntry> {
    static TABLE: OnceLock<HashMap<String, TableEntry>> = OnceLock::new();
    TABLE.get_or_init(|| index(GREEK_TSV)).get(name)
}

pub fn operator(name: &str) -> Option<&'static TableEntry> {
    static TABLE: OnceLock<HashMap<String, TableEntry>> = OnceLock::new();
    TABLE.get_or_init(|| index(OPERATORS_TSV)).get(name)
}

/// Control words typeset upright and followed by function application.
pub const FUNCTION_NAMES: &[&str] = &[
    "sin", "cos", "tan", "cot", "sec", "csc", "arcsin", "arccos", "arctan", "sinh", "cosh", "tanh", "coth",
    "log", "ln", "lg", "exp", "lim", "liminf", "limsup", "max", "min", "sup", "inf", "det", "gcd", "deg",
    "dim", "ker", "arg", "hom", "Pr",
];

pub fn is_function_name(name: &str) -> bool {
    FUNCTION_NAMES.contains(&name)
}
