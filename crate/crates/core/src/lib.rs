//! Compiles LaTeX documents with giac cells into self-contained HTML5 pages
//! with inline MathML.
//!
//! The stages are usable on their own: [`tex`] parses the document, [`math`]
//! translates math spans, [`cas`] evaluates cell commands and [`html`]
//! assembles the page. [`compile`] runs them in order.

pub mod cas;
pub mod diag;
pub mod html;
pub mod math;
pub mod tex;

use diag::Diagnostic;
use html::EmitOptions;
use tex::{GiacCell, TexError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub html: String,
    pub cells: Vec<GiacCell>,
    /// Number of math spans translated, fallbacks included.
    pub math_spans: usize,
    /// Diagnostics from every stage, ordered by source position.
    pub diagnostics: Vec<Diagnostic>,
}

impl Compiled {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Parses, collects cells and emits. Only structural errors (environment
/// mismatches, a missing `document` environment) are returned as `Err`;
/// everything else is reported in [`Compiled::diagnostics`].
pub fn compile(source: &str, options: &EmitOptions) -> Result<Compiled, TexError> {
    let doc = tex::parse_source(source)?;
    let mut diagnostics = doc.diagnostics;

    let scan = tex::scan_cells(&doc.body);
    for e in &scan.errors {
        diagnostics.push(Diagnostic::error(e.position(), e.message()));
    }
    let cells = if doc.directives.giac_enabled {
        diagnostics.extend(scan.warnings);
        scan.cells
    } else {
        if let Some(first) = scan.cells.first() {
            diagnostics.push(Diagnostic::warning(
                first.position,
                "giac cells need \\input{giac.tex} in the preamble; no cells emitted",
            ));
        }
        Vec::new()
    };

    // unterminated spans were already reported by the parser
    let math_spans = count_math_spans(&doc.body);

    let emitted = html::emit_document(&doc.body, &cells, &doc.directives, options);
    diagnostics.extend(emitted.diagnostics);
    diagnostics.sort_by_key(|d| d.position);
    Ok(Compiled { html: emitted.html, cells, math_spans, diagnostics })
}

fn count_math_spans(nodes: &[tex::DocNode]) -> usize {
    use tex::DocNode;
    nodes
        .iter()
        .map(|n| match n {
            DocNode::MathSpan { .. } => 1,
            DocNode::Macro { args, .. } => args.iter().map(|a| count_math_spans(a)).sum(),
            DocNode::Environment { body, .. } | DocNode::Group(body) => count_math_spans(body),
            _ => 0,
        })
        .sum()
}
