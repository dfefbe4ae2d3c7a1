use super::{parse_math, MathNode};

const APPLY_FUNCTION: &str = "<mo>&#x2061;</mo>";

pub const MATHML_NS: &str = "http://www.w3.org/1998/Math/MathML";

/// Serialized `<math>` element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MathMLFragment {
    pub xml: String,
}

/// Result of [`translate_span`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub fragment: MathMLFragment,
    pub diagnostics: Vec<String>,
    /// True when the span did not parse and the raw source was emitted.
    pub fallback: bool,
}

/// Escapes text for element content and double-quoted attributes.
/// Characters not allowed in XML 1.0 become U+FFFD.
pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' | '\n' | '\r' => out.push(c),
            c if (c as u32) < 0x20 || c == '\u{FFFE}' || c == '\u{FFFF}' => out.push('\u{FFFD}'),
            c => out.push(c),
        }
    }
    out
}

fn open_math(display: bool, extra: &str) -> String {
    let mut s = format!("<math xmlns=\"{MATHML_NS}\"");
    if display {
        s.push_str(" display=\"block\"");
    }
    s.push_str(extra);
    s.push('>');
    s
}

pub fn to_mathml(node: &MathNode, display: bool) -> MathMLFragment {
    let mut xml = open_math(display, "");
    if *node != MathNode::Empty {
        write_node(node, &mut xml);
    }
    xml.push_str("</math>");
    MathMLFragment { xml }
}

/// Parses and serializes `tex`; on a syntax error the raw source is kept as
/// an `mi` inside a `<math>` carrying `data-math-error`.
pub fn translate_span(tex: &str, display: bool) -> Translation {
    match parse_math(tex) {
        Ok(parsed) => Translation {
            fragment: to_mathml(&parsed.node, display),
            diagnostics: parsed.warnings,
            fallback: false,
        },
        Err(err) => {
            let message = err.to_string();
            let mut xml = open_math(display, &format!(" data-math-error=\"{}\"", escape_xml(&message)));
            xml.push_str("<mi>");
            xml.push_str(&escape_xml(tex));
            xml.push_str("</mi></math>");
            Translation { fragment: MathMLFragment { xml }, diagnostics: vec![message], fallback: true }
        }
    }
}

/// Nodes that serialize to more than one sibling element.
fn is_multi(node: &MathNode) -> bool {
    match node {
        MathNode::FunctionName(_) => true,
        MathNode::Sup(b, _) | MathNode::Sub(b, _) | MathNode::SubSup(b, _, _) => {
            matches!(**b, MathNode::FunctionName(_))
        }
        _ => false,
    }
}

fn leaf(tag: &str, text: &str, out: &mut String) {
    out.push('<');
    out.push_str(tag);
    out.push('>');
    out.push_str(&escape_xml(text));
    out.push_str("</");
    out.push_str(tag);
    out.push('>');
}

/// Writes a child of a fixed-arity element as exactly one element.
fn write_arg(node: &MathNode, out: &mut String) {
    if is_multi(node) {
        out.push_str("<mrow>");
        write_node(node, out);
        out.push_str("</mrow>");
    } else {
        write_node(node, out);
    }
}

/// Script bases drop the function-application operator, which follows the
/// whole scripted element instead.
fn write_base(node: &MathNode, out: &mut String) {
    match node {
        MathNode::FunctionName(name) => leaf("mi", name, out),
        other => write_arg(other, out),
    }
}

fn write_scripted(tag: &str, base: &MathNode, scripts: &[&MathNode], out: &mut String) {
    out.push('<');
    out.push_str(tag);
    out.push('>');
    write_base(base, out);
    for s in scripts {
        write_arg(s, out);
    }
    out.push_str("</");
    out.push_str(tag);
    out.push('>');
    if matches!(base, MathNode::FunctionName(_)) {
        out.push_str(APPLY_FUNCTION);
    }
}

fn write_node(node: &MathNode, out: &mut String) {
    match node {
        MathNode::Identifier(s) => leaf("mi", s, out),
        MathNode::Number(s) => leaf("mn", s, out),
        MathNode::Operator(s) => leaf("mo", s, out),
        MathNode::FunctionName(s) => {
            leaf("mi", s, out);
            out.push_str(APPLY_FUNCTION);
        }
        MathNode::Row(children) => {
            out.push_str("<mrow>");
            for c in children {
                write_node(c, out);
            }
            out.push_str("</mrow>");
        }
        MathNode::Empty => out.push_str("<mrow></mrow>"),
        MathNode::Sup(b, p) => write_scripted("msup", b, &[p], out),
        MathNode::Sub(b, s) => write_scripted("msub", b, &[s], out),
        MathNode::SubSup(b, s, p) => write_scripted("msubsup", b, &[s, p], out),
        MathNode::Frac(n, d) => {
            out.push_str("<mfrac>");
            write_arg(n, out);
            write_arg(d, out);
            out.push_str("</mfrac>");
        }
        MathNode::Sqrt(r) => {
            out.push_str("<msqrt>");
            write_node(r, out);
            out.push_str("</msqrt>");
        }
        MathNode::Root(i, r) => {
            out.push_str("<mroot>");
            write_arg(r, out);
            write_arg(i, out);
            out.push_str("</mroot>");
        }
        MathNode::Fenced { open, close, body } => {
            out.push_str("<mrow>");
            if !open.is_empty() {
                leaf("mo", open, out);
            }
            match &**body {
                MathNode::Row(children) => children.iter().for_each(|c| write_node(c, out)),
                MathNode::Empty => {}
                other => write_node(other, out),
            }
            if !close.is_empty() {
                leaf("mo", close, out);
            }
            out.push_str("</mrow>");
        }
        MathNode::Space(w) => {
            out.push_str("<mspace width=\"");
            out.push_str(w.em());
            out.push_str("\"/>");
        }
    }
}
