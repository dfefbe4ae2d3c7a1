use crate::diag::{Diagnostic, Position};

use super::lexer::{tokenize_lenient, Token, TokenKind};
use super::{DocNode, TexError};

/// Preamble settings that affect emission.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PreambleDirectives {
    /// `\input{giac.tex}` was seen.
    pub giac_enabled: bool,
    /// `\giacmathjax` was seen.
    pub mathjax_mode: bool,
    /// `\makeindex` was seen.
    pub make_index: bool,
    pub title: Option<String>,
    pub author: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDocument {
    pub directives: PreambleDirectives,
    /// Contents of the `document` environment.
    pub body: Vec<DocNode>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Tokenizes leniently and parses; lexer warnings come first in the result.
pub fn parse_source(source: &str) -> Result<ParsedDocument, TexError> {
    let (tokens, mut diagnostics) = tokenize_lenient(source);
    let mut doc = parse_document(&tokens)?;
    diagnostics.append(&mut doc.diagnostics);
    doc.diagnostics = diagnostics;
    Ok(doc)
}

/// Splits the preamble from the body and builds the body tree.
///
/// Environments still open at end of input are closed with a warning;
/// an explicit `\end` that does not match the innermost open environment is
/// an error.
pub fn parse_document(tokens: &[Token]) -> Result<ParsedDocument, TexError> {
    let mut p = Parser { tokens, i: 0, off: 0, diagnostics: Vec::new() };
    let (preamble, stop) = p.nodes(Level::Preamble)?;
    let begin = match stop {
        Stop::BeginDocument(pos) => pos,
        Stop::End(name, position) => return Err(TexError::UnexpectedEnd { name, position }),
        _ => return Err(TexError::MissingDocumentEnvironment),
    };
    let body = p.environment_body("document", begin)?;
    let directives = directives(&preamble, &mut p.diagnostics);
    Ok(ParsedDocument { directives, body, diagnostics: p.diagnostics })
}

fn directives(preamble: &[DocNode], diagnostics: &mut Vec<Diagnostic>) -> PreambleDirectives {
    let mut d = PreambleDirectives::default();
    for node in preamble {
        let DocNode::Macro { name, args, position, .. } = node else { continue };
        let arg = || args.first().map(|a| DocNode::plain_text(a).trim().to_string()).unwrap_or_default();
        match name.as_str() {
            "input" => match arg().as_str() {
                "giac.tex" | "giac" => d.giac_enabled = true,
                other => diagnostics.push(Diagnostic::warning(*position, format!("\\input{{{other}}} is not followed"))),
            },
            "giacmathjax" => d.mathjax_mode = true,
            "makeindex" => d.make_index = true,
            "title" => d.title = Some(arg()),
            "author" => d.author = Some(arg()),
            _ => {}
        }
    }
    d
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Level {
    Preamble,
    Environment,
    Group,
}

#[derive(Debug)]
enum Stop {
    Eof,
    /// A `}` closing the current group, consumed.
    EndGroup,
    /// `\end{name}`, consumed.
    End(String, Position),
    /// An `\end` seen inside a group; left for the enclosing environment.
    EndPending,
    BeginDocument(Position),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MathClose {
    Dollar,
    DoubleDollar,
    Bracket,
    Paren,
}

/// Known macros and their number of mandatory arguments.
const ARITY: &[(&str, usize)] = &[
    ("author", 1),
    ("bibliography", 1),
    ("bibliographystyle", 1),
    ("caption", 1),
    ("chapter", 1),
    ("cite", 1),
    ("date", 1),
    ("documentclass", 1),
    ("emph", 1),
    ("eqref", 1),
    ("footahref", 2),
    ("footnote", 1),
    ("giacinput", 1),
    ("giacinputmath", 1),
    ("giacmathjax", 0),
    ("home", 1),
    ("href", 2),
    ("include", 1),
    ("index", 1),
    ("input", 1),
    ("item", 0),
    ("label", 1),
    ("LaTeX", 0),
    ("makeindex", 0),
    ("maketitle", 0),
    ("mbox", 1),
    ("newcommand", 2),
    ("noindent", 0),
    ("par", 0),
    ("printindex", 0),
    ("providecommand", 2),
    ("ref", 1),
    ("renewcommand", 2),
    ("section", 1),
    ("subsection", 1),
    ("subsubsection", 1),
    ("tableofcontents", 0),
    ("TeX", 0),
    ("textbf", 1),
    ("textit", 1),
    ("texttt", 1),
    ("thanks", 1),
    ("title", 1),
    ("underline", 1),
    ("url", 1),
    ("usepackage", 1),
];

/// Macros whose arguments are kept as raw source text.
const RAW_ARGS: &[&str] = &[
    "bibliography",
    "bibliographystyle",
    "cite",
    "documentclass",
    "eqref",
    "giacinput",
    "giacinputmath",
    "include",
    "index",
    "input",
    "label",
    "ref",
    "url",
    "usepackage",
];

const OPTIONAL_ARG: &[&str] = &[
    "documentclass",
    "usepackage",
    "item",
    "section",
    "subsection",
    "subsubsection",
    "chapter",
    "newcommand",
    "renewcommand",
    "providecommand",
    "cite",
];

const DEFINITIONS: &[&str] = &["newcommand", "renewcommand", "providecommand", "def"];

fn arity(name: &str) -> Option<usize> {
    ARITY.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}

struct Parser<'t> {
    tokens: &'t [Token],
    i: usize,
    /// Byte offset into the current token, only ever non-zero for text.
    off: usize,
    diagnostics: Vec<Diagnostic>,
}

impl<'t> Parser<'t> {
    fn cur(&self) -> Option<&'t Token> {
        self.tokens.get(self.i)
    }

    fn kind(&self) -> Option<TokenKind> {
        self.cur().map(|t| t.kind)
    }

    fn text_rest(&self) -> Option<&'t str> {
        self.cur().filter(|t| t.kind == TokenKind::Text).map(|t| &t.lexeme[self.off..])
    }

    fn advance(&mut self) {
        self.i += 1;
        self.off = 0;
    }

    fn consume_text(&mut self, bytes: usize) {
        self.off += bytes;
        if self.cur().is_some_and(|t| self.off >= t.lexeme.len()) {
            self.advance();
        }
    }

    fn pos(&self) -> Position {
        let Some(t) = self.cur() else {
            return self.tokens.last().map_or(Position::new(1, 1), end_of);
        };
        advance_position(t.position, &t.lexeme[..self.off])
    }

    fn is_word(&self, word: &str) -> bool {
        self.cur().is_some_and(|t| t.kind == TokenKind::ControlWord && &t.lexeme[1..] == word)
    }

    fn is_symbol(&self, sym: &str) -> bool {
        self.cur().is_some_and(|t| t.kind == TokenKind::ControlSymbol && &t.lexeme[1..] == sym)
    }

    fn warn(&mut self, position: Position, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::warning(position, message));
    }

    fn environment_body(&mut self, name: &str, begin: Position) -> Result<Vec<DocNode>, TexError> {
        let (body, stop) = self.nodes(Level::Environment)?;
        match stop {
            Stop::End(end, _) if end == name => {}
            Stop::End(end, end_position) => {
                return Err(TexError::MismatchedEnvironment {
                    begin: name.to_string(),
                    begin_position: begin,
                    end,
                    end_position,
                })
            }
            _ => self.warn(begin, format!("environment `{name}` is not closed; closed at end of input")),
        }
        Ok(body)
    }

    fn nodes(&mut self, level: Level) -> Result<(Vec<DocNode>, Stop), TexError> {
        let mut out: Vec<DocNode> = Vec::new();
        let stop = loop {
            let Some(tok) = self.cur() else { break Stop::Eof };
            let position = self.pos();
            match tok.kind {
                TokenKind::Text => {
                    let text = self.text_rest().unwrap_or_default();
                    push_text(&mut out, text);
                    self.advance();
                }
                TokenKind::Comment => {
                    out.push(DocNode::Comment(tok.lexeme.clone()));
                    self.advance();
                }
                TokenKind::VerbatimBlock => {
                    let (content, inline) = tok.verbatim_content().unwrap_or_default();
                    out.push(DocNode::Verbatim { content: content.to_string(), inline, position });
                    self.advance();
                }
                TokenKind::BeginGroup => {
                    self.advance();
                    out.push(DocNode::Group(self.group(position)?));
                }
                TokenKind::EndGroup => {
                    self.advance();
                    if level == Level::Group {
                        break Stop::EndGroup;
                    }
                    self.warn(position, "unmatched `}` ignored");
                }
                TokenKind::MathShift => {
                    self.advance();
                    let close = if self.kind() == Some(TokenKind::MathShift) {
                        self.advance();
                        MathClose::DoubleDollar
                    } else {
                        MathClose::Dollar
                    };
                    out.push(self.math(close, position));
                }
                TokenKind::ControlSymbol if self.is_symbol("[") || self.is_symbol("(") => {
                    let close = if self.is_symbol("[") { MathClose::Bracket } else { MathClose::Paren };
                    self.advance();
                    out.push(self.math(close, position));
                }
                TokenKind::ControlSymbol => {
                    let name = tok.lexeme[1..].to_string();
                    self.advance();
                    out.push(DocNode::Macro { name, optional: None, args: Vec::new(), star: false, position });
                }
                TokenKind::ControlWord if self.is_word("end") => {
                    if level == Level::Group {
                        break Stop::EndPending;
                    }
                    self.advance();
                    let name = self.environment_name(position);
                    break Stop::End(name, position);
                }
                TokenKind::ControlWord if self.is_word("begin") => {
                    self.advance();
                    let name = self.environment_name(position);
                    if level == Level::Preamble && name == "document" {
                        break Stop::BeginDocument(position);
                    }
                    let body = self.environment_body(&name, position)?;
                    out.push(DocNode::Environment { name, body, position });
                }
                TokenKind::ControlWord => {
                    let name = tok.lexeme[1..].to_string();
                    self.advance();
                    let node = self.macro_call(name, position)?;
                    out.push(node);
                }
            }
        };
        Ok((out, stop))
    }

    fn group(&mut self, open: Position) -> Result<Vec<DocNode>, TexError> {
        let (nodes, stop) = self.nodes(Level::Group)?;
        match stop {
            Stop::EndGroup => {}
            Stop::EndPending => self.warn(open, "group not closed before `\\end`"),
            _ => self.warn(open, "group not closed before end of input"),
        }
        Ok(nodes)
    }

    fn environment_name(&mut self, position: Position) -> String {
        self.skip_spaces();
        if self.kind() == Some(TokenKind::BeginGroup) {
            self.raw_group().0.trim().to_string()
        } else {
            self.warn(position, "missing environment name");
            String::new()
        }
    }

    /// Skips blanks after a control word; a following blank line is kept.
    fn skip_spaces(&mut self) {
        let Some(rest) = self.text_rest() else { return };
        let blanks = rest.len() - rest.trim_start_matches([' ', '\t', '\r']).len();
        let after = &rest[blanks..];
        let mut n = blanks;
        if let Some(next_line) = after.strip_prefix('\n') {
            let indent = next_line.len() - next_line.trim_start_matches([' ', '\t', '\r']).len();
            if !next_line[indent..].starts_with('\n') {
                n += 1 + indent;
            }
        }
        if n > 0 {
            self.consume_text(n);
        }
    }

    /// Reads a `{...}` group as source text; the cursor is on the `{`.
    fn raw_group(&mut self) -> (String, bool) {
        let mut depth = 0usize;
        let mut out = String::new();
        while let Some(t) = self.cur() {
            let lexeme = &t.lexeme[self.off..];
            match t.kind {
                TokenKind::BeginGroup => {
                    depth += 1;
                    if depth == 1 {
                        self.advance();
                        continue;
                    }
                }
                TokenKind::EndGroup => {
                    depth -= 1;
                    if depth == 0 {
                        self.advance();
                        return (out, true);
                    }
                }
                _ => {}
            }
            out.push_str(lexeme);
            self.advance();
        }
        (out, false)
    }

    /// Reads `[...]` as source text when the cursor is on `[`.
    fn optional_arg(&mut self) -> Option<String> {
        if !self.text_rest()?.starts_with('[') {
            return None;
        }
        self.consume_text(1);
        let mut depth = 0usize;
        let mut out = String::new();
        while let Some(t) = self.cur() {
            match t.kind {
                TokenKind::BeginGroup => depth += 1,
                TokenKind::EndGroup => depth = depth.saturating_sub(1),
                TokenKind::Text if depth == 0 => {
                    let rest = &t.lexeme[self.off..];
                    if let Some(i) = rest.find(']') {
                        out.push_str(&rest[..i]);
                        self.consume_text(i + 1);
                        return Some(out);
                    }
                }
                _ => {}
            }
            out.push_str(&t.lexeme[self.off..]);
            self.advance();
        }
        Some(out)
    }

    fn argument(&mut self, raw: bool) -> Result<Option<Vec<DocNode>>, TexError> {
        let position = self.pos();
        match self.kind() {
            Some(TokenKind::BeginGroup) if raw => {
                let (text, closed) = self.raw_group();
                if !closed {
                    self.warn(position, "argument not closed before end of input");
                }
                Ok(Some(vec![DocNode::Text(text)]))
            }
            Some(TokenKind::BeginGroup) => {
                self.advance();
                Ok(Some(self.group(position)?))
            }
            Some(TokenKind::Text) => {
                let c = self.text_rest().and_then(|r| r.chars().next()).unwrap_or(' ');
                self.consume_text(c.len_utf8());
                Ok(Some(vec![DocNode::Text(c.to_string())]))
            }
            Some(TokenKind::ControlWord | TokenKind::ControlSymbol) => {
                let t = self.cur().unwrap();
                let name = t.lexeme[1..].to_string();
                self.advance();
                Ok(Some(vec![DocNode::Macro { name, optional: None, args: Vec::new(), star: false, position }]))
            }
            _ => Ok(None),
        }
    }

    fn macro_call(&mut self, name: String, position: Position) -> Result<DocNode, TexError> {
        let mut star = false;
        if self.text_rest().is_some_and(|r| r.starts_with('*')) {
            self.consume_text(1);
            star = true;
        }
        self.skip_spaces();
        let mut optional = None;
        if OPTIONAL_ARG.contains(&name.as_str()) {
            optional = self.optional_arg();
            if optional.is_some() {
                self.skip_spaces();
            }
        }
        if DEFINITIONS.contains(&name.as_str()) {
            self.warn(position, format!("`\\{name}` definitions are not expanded"));
        }
        let raw = RAW_ARGS.contains(&name.as_str());
        let mut args = Vec::new();
        match arity(&name) {
            Some(n) => {
                for k in 0..n {
                    if k > 0 {
                        self.skip_spaces();
                        if DEFINITIONS.contains(&name.as_str()) {
                            while self.optional_arg().is_some() {
                                self.skip_spaces();
                            }
                        }
                    }
                    match self.argument(raw)? {
                        Some(a) => args.push(a),
                        None => {
                            self.warn(position, format!("`\\{name}` is missing an argument"));
                            args.push(Vec::new());
                        }
                    }
                }
            }
            None => {
                while self.kind() == Some(TokenKind::BeginGroup) {
                    if let Some(a) = self.argument(false)? {
                        args.push(a);
                    }
                }
            }
        }
        Ok(DocNode::Macro { name, optional, args, star, position })
    }

    fn math(&mut self, close: MathClose, position: Position) -> DocNode {
        let display = matches!(close, MathClose::DoubleDollar | MathClose::Bracket);
        let mut tex = String::new();
        let mut depth = 0usize;
        let terminated = loop {
            let Some(t) = self.cur() else { break false };
            match t.kind {
                TokenKind::Text => {
                    let rest = &t.lexeme[self.off..];
                    if depth == 0 {
                        if let Some(i) = blank_line(rest) {
                            tex.push_str(&rest[..i]);
                            self.consume_text(i);
                            break false;
                        }
                    }
                }
                TokenKind::MathShift => match close {
                    MathClose::Dollar => {
                        self.advance();
                        break true;
                    }
                    MathClose::DoubleDollar => {
                        self.advance();
                        if self.kind() == Some(TokenKind::MathShift) {
                            self.advance();
                        } else {
                            self.warn(position, "display math opened with `$$` closed by `$`");
                        }
                        break true;
                    }
                    _ => break false,
                },
                TokenKind::ControlSymbol if close == MathClose::Bracket && self.is_symbol("]") => {
                    self.advance();
                    break true;
                }
                TokenKind::ControlSymbol if close == MathClose::Paren && self.is_symbol(")") => {
                    self.advance();
                    break true;
                }
                TokenKind::ControlWord if self.is_word("end") => break false,
                TokenKind::BeginGroup => depth += 1,
                TokenKind::EndGroup => {
                    if depth == 0 {
                        break false;
                    }
                    depth -= 1;
                }
                _ => {}
            }
            tex.push_str(&t.lexeme[self.off..]);
            self.advance();
        };
        if !terminated {
            self.diagnostics.push(Diagnostic::error(position, TexError::UnterminatedMath { position }.message()));
        }
        DocNode::MathSpan { tex, display, terminated, position }
    }
}

fn push_text(out: &mut Vec<DocNode>, text: &str) {
    if let Some(DocNode::Text(prev)) = out.last_mut() {
        prev.push_str(text);
    } else {
        out.push(DocNode::Text(text.to_string()));
    }
}

/// Byte offset of the first blank line (a newline followed by optional
/// blanks and another newline).
fn blank_line(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut i = 0;
    while let Some(j) = s[i..].find('\n') {
        let start = i + j;
        let mut k = start + 1;
        while k < bytes.len() && matches!(bytes[k], b' ' | b'\t' | b'\r') {
            k += 1;
        }
        if k < bytes.len() && bytes[k] == b'\n' {
            return Some(start);
        }
        i = start + 1;
    }
    None
}

fn advance_position(mut p: Position, text: &str) -> Position {
    for c in text.chars() {
        if c == '\n' {
            p.line += 1;
            p.column = 1;
        } else {
            p.column += 1;
        }
    }
    p
}

fn end_of(t: &Token) -> Position {
    advance_position(t.position, &t.lexeme)
}
