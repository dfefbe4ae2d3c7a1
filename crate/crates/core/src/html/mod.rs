//! HTML5 assembly: document structure, inline MathML, giac cell markup,
//! table of contents, index and the cell runtime.

mod outline;

use std::collections::{HashMap, HashSet};

use crate::diag::{Diagnostic, Position};
use crate::math::translate_span;
use crate::tex::{CellMode, DocNode, GiacCell, PreambleDirectives};

pub use outline::{build_index, build_toc, slugify, IndexEntry, TocEntry};

pub const STYLESHEET: &str = include_str!("../../assets/castml.css");
pub const RUNTIME_JS: &str = include_str!("../../assets/runtime.js");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitOptions {
    /// Inline the runtime script instead of referencing `runtime_path`.
    pub standalone: bool,
    pub runtime_path: String,
    pub document_title: String,
    pub language: String,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            standalone: true,
            runtime_path: "castml-runtime.js".to_string(),
            document_title: String::new(),
            language: "en".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitted {
    pub html: String,
    pub diagnostics: Vec<Diagnostic>,
}

/// Escapes `&`, `<`, `>` and `"`.
pub fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// The interactive placeholder for one cell; its classes and data
/// attributes are the contract with the runtime.
pub fn emit_cell(cell: &GiacCell) -> String {
    let size = (cell.command.chars().count() + 4).max(20);
    format!(
        "<div class=\"giac-cell\" data-giac-id=\"{}\" data-giac-mode=\"{}\"><input class=\"giac-in\" value=\"{}\" size=\"{}\"/><button class=\"giac-run\" type=\"button\">ok</button><div class=\"giac-out\" aria-live=\"polite\"></div></div>",
        escape_html(&cell.id),
        cell.mode.as_str(),
        escape_html(&cell.command),
        size
    )
}

pub fn emit_document(
    body: &[DocNode],
    cells: &[GiacCell],
    directives: &PreambleDirectives,
    options: &EmitOptions,
) -> Emitted {
    let toc = build_toc(body);
    let index = build_index(body);
    let mut e = Emitter {
        out: String::new(),
        para: false,
        flow: vec![true],
        headings: outline::heading_anchors(&toc),
        index_ids: outline::index_anchors(body).into_iter().map(|(p, _, a)| (p, a)).collect(),
        cells: cells.iter().map(|c| (c.position, c)).collect(),
        toc,
        index,
        directives,
        notes: Vec::new(),
        warned: HashSet::new(),
        diagnostics: Vec::new(),
    };
    e.nodes(body);
    e.close_para();
    let main = std::mem::take(&mut e.out);
    let notes = e.endnotes();

    let title = if !options.document_title.is_empty() {
        options.document_title.clone()
    } else {
        directives.title.clone().unwrap_or_else(|| "Untitled".to_string())
    };
    let lang = if options.language.is_empty() { "en" } else { &options.language };
    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n");
    html.push_str(&format!("<html lang=\"{}\">\n<head>\n", escape_html(lang)));
    html.push_str("<meta charset=\"utf-8\">\n");
    html.push_str("<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n");
    html.push_str(&format!("<title>{}</title>\n", escape_html(&title)));
    html.push_str("<style>\n");
    html.push_str(STYLESHEET);
    html.push_str("</style>\n</head>\n<body>\n<main>\n");
    html.push_str(&main);
    html.push_str("</main>\n");
    html.push_str(&notes);
    if options.standalone {
        html.push_str("<script>\n");
        html.push_str(&RUNTIME_JS.replace("</script", "<\\/script"));
        html.push_str("</script>\n");
    } else {
        html.push_str(&format!("<script src=\"{}\"></script>\n", escape_html(&options.runtime_path)));
    }
    html.push_str("</body>\n</html>\n");
    Emitted { html, diagnostics: e.diagnostics }
}

/// Declarations such as `{\tt x}` that style the rest of their group.
fn declaration_tag(name: &str) -> Option<(&'static str, &'static str)> {
    Some(match name {
        "tt" | "ttfamily" => ("<code>", "</code>"),
        "bf" | "bfseries" => ("<strong>", "</strong>"),
        "it" | "itshape" | "em" | "sl" => ("<em>", "</em>"),
        "sc" | "scshape" => ("<span class=\"smallcaps\">", "</span>"),
        "rm" | "sf" | "normalfont" | "small" | "large" | "Large" | "footnotesize" | "normalsize" => ("<span>", "</span>"),
        _ => return None,
    })
}

fn inline_tag(name: &str) -> Option<(&'static str, &'static str)> {
    Some(match name {
        "emph" | "textit" => ("<em>", "</em>"),
        "textbf" => ("<strong>", "</strong>"),
        "texttt" => ("<code>", "</code>"),
        "underline" => ("<u>", "</u>"),
        "mbox" | "thanks" => ("<span>", "</span>"),
        _ => return None,
    })
}

/// Macros with no visible output.
const SILENT: &[&str] = &[
    "documentclass",
    "usepackage",
    "input",
    "include",
    "makeindex",
    "giacmathjax",
    "title",
    "author",
    "date",
    "label",
    "noindent",
    "newcommand",
    "renewcommand",
    "providecommand",
    "def",
    "bibliography",
    "bibliographystyle",
    "medskip",
    "bigskip",
    "smallskip",
    "centering",
    "hline",
    "clearpage",
    "newpage",
];

struct Emitter<'a> {
    out: String,
    /// Whether a `<p>` is open.
    para: bool,
    /// Innermost context: true where paragraphs are managed.
    flow: Vec<bool>,
    headings: HashMap<Position, String>,
    index_ids: HashMap<Position, String>,
    cells: HashMap<Position, &'a GiacCell>,
    toc: Vec<TocEntry>,
    index: Vec<IndexEntry>,
    directives: &'a PreambleDirectives,
    notes: Vec<String>,
    warned: HashSet<String>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Emitter<'a> {
    fn in_flow(&self) -> bool {
        *self.flow.last().unwrap_or(&false)
    }

    fn open_para(&mut self) {
        if self.in_flow() && !self.para {
            self.out.push_str("<p>");
            self.para = true;
        }
    }

    fn close_para(&mut self) {
        if self.para {
            self.out.push_str("</p>\n");
            self.para = false;
        }
    }

    /// Starts a block-level element.
    fn block(&mut self) {
        self.close_para();
    }

    fn with_flow<F: FnOnce(&mut Self)>(&mut self, flow: bool, f: F) {
        let saved = self.para;
        self.para = false;
        self.flow.push(flow);
        f(self);
        if flow {
            self.close_para();
        }
        self.flow.pop();
        self.para = saved;
    }

    /// Renders `nodes` into a separate string without paragraph handling.
    fn capture(&mut self, nodes: &[DocNode]) -> String {
        let saved = std::mem::take(&mut self.out);
        self.with_flow(false, |e| e.nodes(nodes));
        std::mem::replace(&mut self.out, saved)
    }

    fn warn_once(&mut self, key: String, position: Position, message: String) {
        if self.warned.insert(key) {
            self.diagnostics.push(Diagnostic::warning(position, message));
        }
    }

    fn nodes(&mut self, nodes: &[DocNode]) {
        for (i, node) in nodes.iter().enumerate() {
            if let DocNode::Macro { name, args, .. } = node {
                if args.is_empty() {
                    if let Some((open, close)) = declaration_tag(name) {
                        self.open_para();
                        let inner = self.capture(&nodes[i + 1..]);
                        self.out.push_str(open);
                        self.out.push_str(&inner);
                        self.out.push_str(close);
                        return;
                    }
                }
            }
            self.node(node);
        }
    }

    fn node(&mut self, node: &DocNode) {
        match node {
            DocNode::Text(t) => self.text(t),
            DocNode::Comment(_) => {}
            DocNode::Group(g) => self.nodes(g),
            DocNode::Verbatim { content, inline: true, .. } => {
                self.open_para();
                self.out.push_str("<code class=\"verb\">");
                self.out.push_str(&escape_html(content));
                self.out.push_str("</code>");
            }
            DocNode::Verbatim { content, inline: false, .. } => {
                self.block();
                let lines = content
                    .strip_prefix("\r\n")
                    .or_else(|| content.strip_prefix('\n'))
                    .unwrap_or(content);
                self.out.push_str("<pre class=\"verbatim\">\n");
                self.out.push_str(&escape_html(lines));
                self.out.push_str("</pre>\n");
            }
            DocNode::MathSpan { tex, display, position, .. } => {
                let tr = translate_span(tex, *display);
                for d in tr.diagnostics {
                    self.diagnostics.push(Diagnostic::warning(*position, format!("math: {d}")));
                }
                if *display && self.in_flow() {
                    self.block();
                    self.out.push_str("<div class=\"display-math\">");
                    self.out.push_str(&tr.fragment.xml);
                    self.out.push_str("</div>\n");
                } else {
                    self.open_para();
                    self.out.push_str(&tr.fragment.xml);
                }
            }
            DocNode::Environment { name, body, position } => self.environment(name, body, *position),
            DocNode::Macro { name, optional, args, position, .. } => self.macro_node(name, optional.as_deref(), args, *position),
        }
    }

    fn text(&mut self, t: &str) {
        let mut rest = t;
        loop {
            let (chunk, tail) = match split_blank_line(rest) {
                Some((a, b)) => (a, Some(b)),
                None => (rest, None),
            };
            if !chunk.trim().is_empty() {
                self.open_para();
                self.out.push_str(&typography(chunk));
            } else if self.para || !self.in_flow() {
                self.out.push_str(chunk);
            }
            match tail {
                Some(tail) => {
                    if self.in_flow() {
                        self.close_para();
                    } else {
                        self.out.push(' ');
                    }
                    rest = tail;
                }
                None => break,
            }
        }
    }

    fn arg(&mut self, args: &[Vec<DocNode>], i: usize) -> String {
        match args.get(i) {
            Some(a) => self.capture(a),
            None => String::new(),
        }
    }

    fn macro_node(&mut self, name: &str, optional: Option<&str>, args: &[Vec<DocNode>], position: Position) {
        if let Some(level) = outline::section_level(name) {
            self.block();
            let anchor = self.headings.get(&position).cloned().unwrap_or_default();
            let title = self.arg(args, 0);
            let tag = level + 1;
            self.out.push_str(&format!("<h{tag} id=\"{}\">{}</h{tag}>\n", escape_html(&anchor), title.trim()));
            return;
        }
        if let Some(mode) = CellMode::from_macro(name) {
            self.giac(mode, name, args, position);
            return;
        }
        if let Some((open, close)) = inline_tag(name) {
            let inner = self.arg(args, 0);
            self.open_para();
            self.out.push_str(open);
            self.out.push_str(&inner);
            self.out.push_str(close);
            return;
        }
        if SILENT.contains(&name) {
            return;
        }
        match name {
            "maketitle" => self.title_block(),
            "tableofcontents" => self.toc_block(),
            "printindex" => self.index_block(),
            "par" => self.close_para(),
            "index" => {
                let id = self.index_ids.get(&position).cloned().unwrap_or_default();
                self.open_para();
                self.out.push_str(&format!("<a id=\"{}\" class=\"index-anchor\"></a>", escape_html(&id)));
            }
            "footahref" | "href" => {
                let url = DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice));
                let text = self.arg(args, 1);
                self.open_para();
                self.out.push_str(&format!("<a href=\"{}\">{}</a>", escape_html(url.trim()), text));
            }
            "url" => {
                let url = DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice));
                self.open_para();
                let url = escape_html(url.trim());
                self.out.push_str(&format!("<a href=\"{url}\">{url}</a>"));
            }
            "footnote" => {
                let content = self.arg(args, 0);
                self.notes.push(content);
                let n = self.notes.len();
                self.open_para();
                self.out.push_str(&format!("<sup class=\"fn-ref\"><a id=\"fnref:{n}\" href=\"#fn:{n}\">{n}</a></sup>"));
            }
            "cite" => {
                let keys = DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice));
                self.open_para();
                self.out.push_str(&format!("<cite>[{}]</cite>", escape_html(keys.trim())));
            }
            "ref" | "eqref" => {
                let key = DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice));
                self.open_para();
                self.out.push_str(&format!("<span class=\"ref\">{}</span>", escape_html(key.trim())));
            }
            "LaTeX" | "TeX" => {
                self.open_para();
                self.out.push_str(name);
            }
            "home" => {
                let inner = self.arg(args, 0);
                self.open_para();
                self.out.push('~');
                self.out.push_str(&inner);
            }
            "item" => {
                self.warn_once("item".into(), position, "\\item outside a list".into());
                self.open_para();
                if let Some(label) = optional {
                    self.out.push_str(&escape_html(label));
                    self.out.push(' ');
                }
            }
            "\\" => {
                if self.para || !self.in_flow() {
                    self.out.push_str("<br>");
                }
            }
            " " | "\n" | "\t" => self.text(" "),
            "," | ">" | ":" | ";" => self.text("\u{2009}"),
            "-" | "/" | "@" | "!" => {}
            sym if sym.chars().count() == 1 && !sym.chars().all(|c| c.is_ascii_alphabetic()) => {
                self.open_para();
                self.out.push_str(&escape_html(sym));
            }
            _ => {
                self.warn_once(format!("macro:{name}"), position, format!("unknown macro `\\{name}` rendered as its arguments"));
                for a in args {
                    let inner = self.capture(a);
                    if !inner.is_empty() {
                        self.open_para();
                        self.out.push_str(&inner);
                    }
                }
            }
        }
    }

    fn giac(&mut self, mode: CellMode, name: &str, args: &[Vec<DocNode>], position: Position) {
        match self.cells.get(&position) {
            Some(cell) => {
                let markup = emit_cell(cell);
                if self.in_flow() {
                    self.block();
                }
                self.out.push_str(&markup);
                if self.in_flow() {
                    self.out.push('\n');
                }
            }
            None => {
                if !self.directives.giac_enabled {
                    self.warn_once(
                        "giac-disabled".into(),
                        position,
                        format!("\\{name} without \\input{{giac.tex}} in the preamble; rendered as code"),
                    );
                }
                let command = DocNode::plain_text(args.first().map_or(&[][..], Vec::as_slice));
                self.open_para();
                self.out.push_str(&format!(
                    "<code class=\"giac-command\" data-giac-mode=\"{}\">{}</code>",
                    mode.as_str(),
                    escape_html(command.trim())
                ));
            }
        }
    }

    fn environment(&mut self, name: &str, body: &[DocNode], position: Position) {
        match name {
            "itemize" | "enumerate" | "description" => self.list(name, body),
            "abstract" => {
                self.block();
                self.out.push_str("<section class=\"abstract\">\n<h2>Abstract</h2>\n");
                self.with_flow(true, |e| e.nodes(body));
                self.out.push_str("</section>\n");
            }
            "giacjshere" | "document" => {
                self.block();
                self.with_flow(true, |e| e.nodes(body));
            }
            other => {
                if !matches!(other, "center" | "quote" | "quotation" | "flushleft" | "flushright") {
                    self.warn_once(format!("env:{other}"), position, format!("unknown environment `{other}` rendered as a block"));
                }
                self.block();
                self.out.push_str(&format!("<div class=\"env-{}\">\n", escape_html(&slugify(other))));
                self.with_flow(true, |e| e.nodes(body));
                self.out.push_str("</div>\n");
            }
        }
    }

    fn list(&mut self, name: &str, body: &[DocNode]) {
        let tag = if name == "enumerate" { "ol" } else { "ul" };
        self.block();
        self.out.push_str(&format!("<{tag}>\n"));
        let mut items: Vec<(Option<&str>, &[DocNode])> = Vec::new();
        let mut start = None;
        let mut label = None;
        for (i, n) in body.iter().enumerate() {
            if let DocNode::Macro { name, optional, .. } = n {
                if name == "item" {
                    if let Some(s) = start {
                        items.push((label, &body[s..i]));
                    }
                    start = Some(i + 1);
                    label = optional.as_deref();
                }
            }
        }
        if let Some(s) = start {
            items.push((label, &body[s..]));
        }
        for (label, content) in items {
            self.out.push_str("<li>");
            if let Some(l) = label {
                self.out.push_str(&format!("<strong>{}</strong> ", escape_html(l)));
            }
            self.with_flow(false, |e| e.nodes(content));
            let trimmed = self.out.trim_end().len();
            self.out.truncate(trimmed);
            self.out.push_str("</li>\n");
        }
        self.out.push_str(&format!("</{tag}>\n"));
    }

    fn title_block(&mut self) {
        let Some(title) = self.directives.title.clone() else { return };
        self.block();
        self.out.push_str(&format!("<header class=\"title\">\n<h1>{}</h1>\n", escape_html(&title)));
        if let Some(author) = &self.directives.author {
            self.out.push_str(&format!("<p class=\"author\">{}</p>\n", escape_html(author)));
        }
        self.out.push_str("</header>\n");
    }

    fn toc_block(&mut self) {
        if self.toc.is_empty() {
            return;
        }
        self.block();
        let mut s = String::from("<nav class=\"toc\">\n<h2>Contents</h2>\n");
        toc_list(&self.toc, &mut s);
        s.push_str("</nav>\n");
        self.out.push_str(&s);
    }

    fn index_block(&mut self) {
        if self.index.is_empty() {
            return;
        }
        self.block();
        let mut s = String::from("<section class=\"index\">\n<h2>Index</h2>\n<ul>\n");
        for entry in &self.index {
            s.push_str(&format!("<li><span class=\"index-term\">{}</span>", escape_html(&entry.term)));
            for (k, a) in entry.anchors.iter().enumerate() {
                s.push_str(if k == 0 { " " } else { ", " });
                s.push_str(&format!("<a href=\"#{}\">{}</a>", escape_html(a), k + 1));
            }
            s.push_str("</li>\n");
        }
        s.push_str("</ul>\n</section>\n");
        self.out.push_str(&s);
    }

    fn endnotes(&self) -> String {
        if self.notes.is_empty() {
            return String::new();
        }
        let mut s = String::from("<section class=\"endnotes\">\n<h2>Notes</h2>\n<ol>\n");
        for (i, note) in self.notes.iter().enumerate() {
            let n = i + 1;
            s.push_str(&format!(
                "<li id=\"fn:{n}\">{} <a href=\"#fnref:{n}\" class=\"fn-back\">\u{21A9}</a></li>\n",
                note.trim()
            ));
        }
        s.push_str("</ol>\n</section>\n");
        s
    }
}

fn toc_list(entries: &[TocEntry], s: &mut String) {
    s.push_str("<ul>\n");
    for e in entries {
        s.push_str(&format!("<li><a href=\"#{}\">{}</a>", escape_html(&e.anchor), escape_html(&e.title)));
        if !e.children.is_empty() {
            s.push('\n');
            toc_list(&e.children, s);
        }
        s.push_str("</li>\n");
    }
    s.push_str("</ul>\n");
}

/// Splits at the first blank line, dropping it.
fn split_blank_line(s: &str) -> Option<(&str, &str)> {
    let bytes = s.as_bytes();
    let mut from = 0;
    while let Some(j) = s[from..].find('\n') {
        let start = from + j;
        let mut k = start + 1;
        while k < bytes.len() && matches!(bytes[k], b' ' | b'\t' | b'\r') {
            k += 1;
        }
        if k < bytes.len() && bytes[k] == b'\n' {
            let mut end = k + 1;
            while end < bytes.len() && matches!(bytes[end], b' ' | b'\t' | b'\r' | b'\n') {
                end += 1;
            }
            return Some((&s[..start], &s[end..]));
        }
        from = start + 1;
    }
    None
}

/// Escapes text and applies TeX ligatures: `~`, `--`, `---`, quotes.
fn typography(s: &str) -> String {
    let escaped = escape_html(s);
    escaped
        .replace("---", "\u{2014}")
        .replace("--", "\u{2013}")
        .replace("``", "\u{201C}")
        .replace("''", "\u{201D}")
        .replace('~', "\u{00A0}")
}
