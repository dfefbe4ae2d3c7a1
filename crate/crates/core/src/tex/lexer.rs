use crate::diag::{Diagnostic, Position};

use super::TexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// `\` followed by one or more ASCII letters.
    ControlWord,
    /// `\` followed by a single non-letter (or nothing, at end of input).
    ControlSymbol,
    BeginGroup,
    EndGroup,
    /// A single `$`; the parser pairs adjacent ones into `$$`.
    MathShift,
    Text,
    /// `%` up to, not including, the end of line.
    Comment,
    /// A whole `\verb` or `verbatim` environment, delimiters included.
    VerbatimBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: Position,
}

const VERBATIM_BEGIN: &str = "\\begin{verbatim}";
const VERBATIM_END: &str = "\\end{verbatim}";

impl Token {
    /// Control-word name without the backslash.
    pub fn name(&self) -> Option<&str> {
        match self.kind {
            TokenKind::ControlWord | TokenKind::ControlSymbol => Some(&self.lexeme[1..]),
            _ => None,
        }
    }

    /// Content of a verbatim token and whether it was inline (`\verb`).
    pub fn verbatim_content(&self) -> Option<(&str, bool)> {
        if self.kind != TokenKind::VerbatimBlock {
            return None;
        }
        if let Some(rest) = self.lexeme.strip_prefix(VERBATIM_BEGIN) {
            return Some((rest.strip_suffix(VERBATIM_END).unwrap_or(rest), false));
        }
        let rest = self.lexeme.strip_prefix("\\verb")?;
        let rest = rest.strip_prefix('*').unwrap_or(rest);
        let mut chars = rest.chars();
        let Some(delim) = chars.next() else {
            return Some(("", true));
        };
        let body = chars.as_str();
        Some((body.strip_suffix(delim).unwrap_or(body), true))
    }
}

/// Concatenates lexemes; the inverse of [`tokenize`].
pub fn detokenize(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.lexeme.as_str()).collect()
}

/// Splits `source` into tokens. A leading byte-order mark is dropped; the
/// rest of the input is reproduced exactly by [`detokenize`].
pub fn tokenize(source: &str) -> Result<Vec<Token>, TexError> {
    let mut lexer = Lexer::new(source, false);
    lexer.run()?;
    Ok(lexer.tokens)
}

/// Like [`tokenize`], but an unterminated `\verb` or `verbatim` block is
/// closed at end of line or end of input with a warning instead of failing.
pub fn tokenize_lenient(source: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lexer = Lexer::new(source, true);
    lexer.run().expect("lenient lexing does not fail");
    (lexer.tokens, lexer.diagnostics)
}

struct Lexer<'a> {
    src: &'a str,
    /// Byte offset into `src`.
    at: usize,
    line: usize,
    column: usize,
    lenient: bool,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str, lenient: bool) -> Self {
        Lexer {
            src: source.strip_prefix('\u{FEFF}').unwrap_or(source),
            at: 0,
            line: 1,
            column: 1,
            lenient,
            tokens: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.at..]
    }

    fn position(&self) -> Position {
        Position::new(self.line, self.column)
    }

    /// Emits the next `len` bytes as one token.
    fn emit(&mut self, kind: TokenKind, len: usize) {
        let position = self.position();
        let lexeme = &self.src[self.at..self.at + len];
        for c in lexeme.chars() {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        self.at += len;
        self.tokens.push(Token { kind, lexeme: lexeme.to_string(), position });
    }

    fn run(&mut self) -> Result<(), TexError> {
        while let Some(c) = self.rest().chars().next() {
            match c {
                '\\' => self.control()?,
                '{' => self.emit(TokenKind::BeginGroup, 1),
                '}' => self.emit(TokenKind::EndGroup, 1),
                '$' => self.emit(TokenKind::MathShift, 1),
                '%' => {
                    let len = self.rest().find('\n').unwrap_or(self.rest().len());
                    self.emit(TokenKind::Comment, len);
                }
                _ => {
                    let len = self.rest().find(['\\', '{', '}', '$', '%']).unwrap_or(self.rest().len());
                    self.emit(TokenKind::Text, len);
                }
            }
        }
        Ok(())
    }

    fn control(&mut self) -> Result<(), TexError> {
        let rest = self.rest();
        let letters = rest[1..].find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len() - 1);
        if letters == 0 {
            let len = 1 + rest[1..].chars().next().map_or(0, char::len_utf8);
            self.emit(TokenKind::ControlSymbol, len);
            return Ok(());
        }
        let word = &rest[1..1 + letters];
        if word == "verb" {
            return self.inline_verbatim();
        }
        if word == "begin" && rest.starts_with(VERBATIM_BEGIN) {
            return self.block_verbatim();
        }
        self.emit(TokenKind::ControlWord, 1 + letters);
        Ok(())
    }

    fn inline_verbatim(&mut self) -> Result<(), TexError> {
        let rest = self.rest();
        let mut head = "\\verb".len();
        if rest[head..].starts_with('*') {
            head += 1;
        }
        let end_of_line = rest.find('\n').unwrap_or(rest.len());
        let close = match rest[head..].chars().next() {
            Some(delim) if delim != '\n' && delim != '\r' => {
                let body = head + delim.len_utf8();
                rest[body..end_of_line].find(delim).map(|i| body + i + delim.len_utf8())
            }
            _ => None,
        };
        match close {
            Some(len) => self.emit(TokenKind::VerbatimBlock, len),
            None => self.unterminated(end_of_line, "\\verb")?,
        }
        Ok(())
    }

    fn block_verbatim(&mut self) -> Result<(), TexError> {
        let rest = self.rest();
        match rest[VERBATIM_BEGIN.len()..].find(VERBATIM_END) {
            Some(i) => self.emit(TokenKind::VerbatimBlock, VERBATIM_BEGIN.len() + i + VERBATIM_END.len()),
            None => self.unterminated(rest.len(), "verbatim environment")?,
        }
        Ok(())
    }

    fn unterminated(&mut self, len: usize, what: &str) -> Result<(), TexError> {
        let position = self.position();
        if !self.lenient {
            return Err(TexError::UnterminatedVerb { position });
        }
        self.diagnostics.push(Diagnostic::warning(position, format!("unterminated {what} closed at end of input")));
        self.emit(TokenKind::VerbatimBlock, len);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src).unwrap().into_iter().map(|t| (t.kind, t.lexeme)).collect()
    }

    #[test]
    fn giac_macro() {
        assert_eq!(
            kinds(r"\giacinput{plot(sin(x))}"),
            vec![
                (ControlWord, r"\giacinput".into()),
                (BeginGroup, "{".into()),
                (Text, "plot(sin(x))".into()),
                (EndGroup, "}".into()),
            ]
        );
    }

    #[test]
    fn empty_and_comment() {
        assert!(tokenize("").unwrap().is_empty());
        assert_eq!(kinds("% note"), vec![(Comment, "% note".into())]);
    }

    #[test]
    fn verbatim_forms() {
        let t = tokenize(r"a \verb|\x{|b").unwrap();
        assert_eq!(t[1].kind, VerbatimBlock);
        assert_eq!(t[1].verbatim_content(), Some((r"\x{", true)));
        assert_eq!(t[2].lexeme, "b");
        let src = "\\begin{verbatim}\n$x\\end{y}\n\\end{verbatim}z";
        let t = tokenize(src).unwrap();
        assert_eq!(t[0].verbatim_content(), Some(("\n$x\\end{y}\n", false)));
        assert_eq!(t[1].lexeme, "z");
    }

    #[test]
    fn unterminated_verbatim() {
        assert!(matches!(tokenize(r"\verb|abc"), Err(TexError::UnterminatedVerb { .. })));
        assert!(matches!(tokenize("\\verb|a\nb|"), Err(TexError::UnterminatedVerb { .. })));
        assert!(matches!(tokenize("\\begin{verbatim}\nx"), Err(TexError::UnterminatedVerb { .. })));
        let (t, d) = tokenize_lenient("\\verb|abc\nnext");
        assert_eq!(t[0].verbatim_content(), Some(("abc", true)));
        assert_eq!(t[1].lexeme, "\nnext");
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn positions() {
        let t = tokenize("ab\n\\c{d}").unwrap();
        assert_eq!(t[1].position, Position::new(2, 1));
        assert_eq!(t[2].position, Position::new(2, 3));
    }

    #[test]
    fn control_symbols_and_bom() {
        assert_eq!(kinds("\u{FEFF}\\ \\\\\\"), vec![
            (ControlSymbol, "\\ ".into()),
            (ControlSymbol, "\\\\".into()),
            (ControlSymbol, "\\".into()),
        ]);
        assert_eq!(kinds("\\é")[0], (ControlSymbol, "\\é".into()));
    }

    #[test]
    fn lossless() {
        let src = "x $a^2$ \\[b\\] % c\n\\verb+q+ {\\bf y}";
        assert_eq!(detokenize(&tokenize(src).unwrap()), src);
    }
}
