use crate::diag::{Diagnostic, Position};

use super::{DocNode, TexError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellMode {
    /// `\giacinputmath`: results are typeset.
    Math,
    /// `\giacinput`: results are shown as text or graphics.
    Text,
}

impl CellMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CellMode::Math => "math",
            CellMode::Text => "text",
        }
    }

    pub fn from_macro(name: &str) -> Option<CellMode> {
        match name {
            "giacinputmath" => Some(CellMode::Math),
            "giacinput" => Some(CellMode::Text),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiacCell {
    /// `c1`, `c2`, ... in document order.
    pub id: String,
    pub mode: CellMode,
    /// Trimmed command source.
    pub command: String,
    pub inside_giacjshere: bool,
    /// Position of the macro, used to pair cells with body nodes.
    pub position: Position,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellScan {
    pub cells: Vec<GiacCell>,
    /// `EmptyCommand` errors; such macros yield no cell and no id.
    pub errors: Vec<TexError>,
    /// Cells placed outside `giacjshere`.
    pub warnings: Vec<Diagnostic>,
}

/// Collects every giac cell, reporting problems instead of stopping.
pub fn scan_cells(body: &[DocNode]) -> CellScan {
    let mut scan = CellScan::default();
    walk_cells(body, false, &mut scan);
    scan
}

/// Collects the giac cells of `body`; an empty command is an error.
pub fn collect_cells(body: &[DocNode]) -> Result<Vec<GiacCell>, TexError> {
    let scan = scan_cells(body);
    match scan.errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(scan.cells),
    }
}

fn walk_cells(nodes: &[DocNode], inside: bool, scan: &mut CellScan) {
    for node in nodes {
        match node {
            DocNode::Macro { name, args, position, .. } => {
                if let Some(mode) = CellMode::from_macro(name) {
                    let command = args.first().map(|a| DocNode::plain_text(a)).unwrap_or_default();
                    let command = command.trim();
                    if command.is_empty() {
                        scan.errors.push(TexError::EmptyCommand { position: *position });
                        continue;
                    }
                    if !inside {
                        scan.warnings.push(Diagnostic::warning(
                            *position,
                            format!("\\{name} outside a giacjshere environment"),
                        ));
                    }
                    scan.cells.push(GiacCell {
                        id: format!("c{}", scan.cells.len() + 1),
                        mode,
                        command: command.to_string(),
                        inside_giacjshere: inside,
                        position: *position,
                    });
                } else {
                    for a in args {
                        walk_cells(a, inside, scan);
                    }
                }
            }
            DocNode::Environment { name, body, .. } => walk_cells(body, inside || name == "giacjshere", scan),
            DocNode::Group(g) => walk_cells(g, inside, scan),
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MathSpanRef<'a> {
    pub tex: &'a str,
    pub display: bool,
    pub position: Position,
}

/// All math spans in document order, including those inside macro arguments.
pub fn extract_math_spans(body: &[DocNode]) -> Result<Vec<MathSpanRef<'_>>, TexError> {
    let mut out = Vec::new();
    walk_math(body, &mut out)?;
    Ok(out)
}

fn walk_math<'a>(nodes: &'a [DocNode], out: &mut Vec<MathSpanRef<'a>>) -> Result<(), TexError> {
    for node in nodes {
        match node {
            DocNode::MathSpan { tex, display, terminated, position } => {
                if !terminated {
                    return Err(TexError::UnterminatedMath { position: *position });
                }
                out.push(MathSpanRef { tex, display: *display, position: *position });
            }
            DocNode::Macro { args, .. } => {
                for a in args {
                    walk_math(a, out)?;
                }
            }
            DocNode::Environment { body, .. } | DocNode::Group(body) => walk_math(body, out)?,
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tex::parse_source;

    fn body(inner: &str) -> Vec<DocNode> {
        parse_source(&format!("\\begin{{document}}{inner}\\end{{document}}")).unwrap().body
    }

    #[test]
    fn two_canonical_cells() {
        let b = body("\\begin{giacjshere}\\giacinputmath{factor(x^10-1)} then \\giacinput{plot(sin(x))}\\end{giacjshere}");
        let cells = collect_cells(&b).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!((cells[0].id.as_str(), cells[0].mode, cells[0].command.as_str()), ("c1", CellMode::Math, "factor(x^10-1)"));
        assert_eq!((cells[1].id.as_str(), cells[1].mode, cells[1].command.as_str()), ("c2", CellMode::Text, "plot(sin(x))"));
        assert!(cells.iter().all(|c| c.inside_giacjshere));
    }

    #[test]
    fn no_cells() {
        assert!(collect_cells(&body("plain")).unwrap().is_empty());
    }

    #[test]
    fn empty_command() {
        assert!(matches!(collect_cells(&body(r"\giacinput{  }")), Err(TexError::EmptyCommand { .. })));
    }

    #[test]
    fn outside_giacjshere_warns_but_keeps_cell() {
        let scan = scan_cells(&body(r"\giacinput{1+1}"));
        assert_eq!(scan.cells.len(), 1);
        assert!(!scan.cells[0].inside_giacjshere);
        assert_eq!(scan.warnings.len(), 1);
    }

    #[test]
    fn math_span_order() {
        let b = body(r"$x^2$ \section{On $y$} \[ \frac{a}{b} \]");
        let spans = extract_math_spans(&b).unwrap();
        let got: Vec<_> = spans.iter().map(|s| (s.tex, s.display)).collect();
        assert_eq!(got, vec![("x^2", false), ("y", false), (r" \frac{a}{b} ", true)]);
    }

    #[test]
    fn unterminated_math_error() {
        let doc = parse_source("\\begin{document}$x").unwrap();
        assert!(matches!(extract_math_spans(&doc.body), Err(TexError::UnterminatedMath { .. })));
    }
}
