//! The LaTeX subset: lexing, document structure and giac cells.

mod cells;
mod lexer;
mod parser;

use thiserror::Error;

use crate::diag::Position;

pub use cells::{collect_cells, extract_math_spans, scan_cells, CellMode, CellScan, GiacCell, MathSpanRef};
pub use lexer::{detokenize, tokenize, tokenize_lenient, Token, TokenKind};
pub use parser::{parse_document, parse_source, ParsedDocument, PreambleDirectives};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TexError {
    #[error("{position}: unterminated verbatim text")]
    UnterminatedVerb { position: Position },
    #[error("{end_position}: \\end{{{end}}} does not match \\begin{{{begin}}} at {begin_position}")]
    MismatchedEnvironment { begin: String, begin_position: Position, end: String, end_position: Position },
    #[error("{position}: \\end{{{name}}} without a matching \\begin")]
    UnexpectedEnd { name: String, position: Position },
    #[error("no \\begin{{document}} found")]
    MissingDocumentEnvironment,
    #[error("{position}: unterminated math")]
    UnterminatedMath { position: Position },
    #[error("{position}: empty giac command")]
    EmptyCommand { position: Position },
}

impl TexError {
    pub fn position(&self) -> Option<Position> {
        match self {
            TexError::UnterminatedVerb { position }
            | TexError::UnexpectedEnd { position, .. }
            | TexError::UnterminatedMath { position }
            | TexError::EmptyCommand { position } => Some(*position),
            TexError::MismatchedEnvironment { end_position, .. } => Some(*end_position),
            TexError::MissingDocumentEnvironment => None,
        }
    }

    /// Message without the position prefix.
    pub fn message(&self) -> String {
        let full = self.to_string();
        match self.position() {
            Some(p) => full.strip_prefix(&format!("{p}: ")).map(str::to_string).unwrap_or(full),
            None => full,
        }
    }

    /// Structural errors stop compilation; the others are reported and
    /// emission continues.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            TexError::MismatchedEnvironment { .. } | TexError::UnexpectedEnd { .. } | TexError::MissingDocumentEnvironment
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocNode {
    Text(String),
    Macro {
        name: String,
        /// Raw text of a leading `[...]` argument.
        optional: Option<String>,
        args: Vec<Vec<DocNode>>,
        star: bool,
        position: Position,
    },
    Environment { name: String, body: Vec<DocNode>, position: Position },
    MathSpan { tex: String, display: bool, terminated: bool, position: Position },
    Verbatim { content: String, inline: bool, position: Position },
    Comment(String),
    /// A bare `{...}` group.
    Group(Vec<DocNode>),
}

impl DocNode {
    /// Text content with markup dropped, for titles, index terms and slugs.
    pub fn plain_text(nodes: &[DocNode]) -> String {
        let mut out = String::new();
        for n in nodes {
            match n {
                DocNode::Text(t) => out.push_str(t),
                DocNode::Group(g) | DocNode::Environment { body: g, .. } => out.push_str(&DocNode::plain_text(g)),
                DocNode::Macro { name, args, .. } => match name.as_str() {
                    "LaTeX" => out.push_str("LaTeX"),
                    "TeX" => out.push_str("TeX"),
                    "home" => {
                        out.push('~');
                        out.push_str(&DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice)));
                    }
                    "\\" | " " | "," | ";" | ":" | ">" => out.push(' '),
                    "-" | "/" | "!" => {}
                    n if n.chars().count() == 1 && !n.chars().all(char::is_alphanumeric) => out.push_str(n),
                    _ => {
                        for a in args {
                            out.push_str(&DocNode::plain_text(a));
                        }
                    }
                },
                DocNode::MathSpan { tex, .. } => out.push_str(tex),
                DocNode::Verbatim { content, .. } => out.push_str(content),
                DocNode::Comment(_) => {}
            }
        }
        out
    }
}
