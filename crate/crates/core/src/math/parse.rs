use super::tables::{self, SymbolClass};
use super::{MathError, MathNode, SpaceWidth};

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedMath {
    pub node: MathNode,
    /// Non-fatal issues such as unknown control words.
    pub warnings: Vec<String>,
}

/// Parses the interior of a math span.
///
/// `^` and `_` take one following token or braced group; a second script of
/// the same kind without grouping is an error, as in TeX. Unknown control
/// words become identifiers with a warning.
pub fn parse_math(tex: &str) -> Result<ParsedMath, MathError> {
    let mut p = Parser { chars: tex.chars().collect(), pos: 0, depth: 0, warnings: Vec::new() };
    let row = p.row(Stop::End)?;
    Ok(ParsedMath { node: MathNode::from_row(row), warnings: p.warnings })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    End,
    Brace,
    Bracket,
    Right,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    depth: usize,
    warnings: Vec<String>,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, MathError> {
        Err(MathError { offset: self.pos, message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn at_control_word(&self, word: &str) -> bool {
        if self.peek() != Some('\\') {
            return false;
        }
        let rest = &self.chars[self.pos + 1..];
        let n = word.chars().count();
        rest.len() >= n
            && rest[..n].iter().copied().eq(word.chars())
            && !rest.get(n).is_some_and(|c| c.is_ascii_alphabetic())
    }

    fn row(&mut self, stop: Stop) -> Result<Vec<MathNode>, MathError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error("nesting too deep");
        }
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match (self.peek(), stop) {
                (None, Stop::End) => break,
                (None, Stop::Brace) => return self.error("missing `}`"),
                (None, Stop::Bracket) => return self.error("missing `]`"),
                (None, Stop::Right) => return self.error("missing `\\right`"),
                (Some('}'), Stop::Brace) => {
                    self.pos += 1;
                    break;
                }
                (Some('}'), _) => return self.error("unbalanced `}`"),
                (Some(']'), Stop::Bracket) => {
                    self.pos += 1;
                    break;
                }
                _ if stop == Stop::Right && self.at_control_word("right") => break,
                _ => {}
            }
            let base = match self.peek() {
                Some('^' | '_') => MathNode::Empty,
                _ => match self.atom()? {
                    Some(node) => node,
                    None => continue,
                },
            };
            out.push(self.scripts(base)?);
        }
        self.depth -= 1;
        Ok(out)
    }

    fn scripts(&mut self, base: MathNode) -> Result<MathNode, MathError> {
        let mut sup = None;
        let mut sub = None;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('^') => {
                    if sup.is_some() {
                        return self.error("double superscript");
                    }
                    self.pos += 1;
                    sup = Some(self.argument("superscript")?);
                }
                Some('_') => {
                    if sub.is_some() {
                        return self.error("double subscript");
                    }
                    self.pos += 1;
                    sub = Some(self.argument("subscript")?);
                }
                _ => break,
            }
        }
        let b = Box::new(base);
        Ok(match (sub, sup) {
            (None, None) => *b,
            (None, Some(p)) => MathNode::Sup(b, Box::new(p)),
            (Some(s), None) => MathNode::Sub(b, Box::new(s)),
            (Some(s), Some(p)) => MathNode::SubSup(b, Box::new(s), Box::new(p)),
        })
    }

    /// A braced group or a single token, as taken by scripts and `\frac`.
    fn argument(&mut self, what: &str) -> Result<MathNode, MathError> {
        self.skip_ws();
        match self.peek() {
            None => self.error(format!("missing {what}")),
            Some('{') => {
                self.pos += 1;
                Ok(MathNode::from_row(self.row(Stop::Brace)?))
            }
            Some('}' | '^' | '_' | '&' | '#' | '$' | '%') => self.error(format!("missing {what}")),
            Some(c) if c.is_ascii_digit() => {
                self.pos += 1;
                Ok(MathNode::Number(c.to_string()))
            }
            Some(_) => match self.atom()? {
                Some(node) => Ok(node),
                None => self.error(format!("missing {what}")),
            },
        }
    }

    /// Raw text of a braced argument, for `\text`-like commands.
    fn text_argument(&mut self) -> Result<String, MathError> {
        self.skip_ws();
        if self.peek() != Some('{') {
            return self.error("expected `{`");
        }
        self.pos += 1;
        let mut depth = 1;
        let mut out = String::new();
        while let Some(c) = self.peek() {
            self.pos += 1;
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(out);
                    }
                }
                _ => {}
            }
            out.push(c);
        }
        self.error("missing `}`")
    }

    fn atom(&mut self) -> Result<Option<MathNode>, MathError> {
        let Some(c) = self.peek() else {
            return self.error("unexpected end of math");
        };
        self.pos += 1;
        let node = match c {
            '{' => MathNode::from_row(self.row(Stop::Brace)?),
            '\\' => return self.control(),
            '~' => MathNode::Space(SpaceWidth::Word),
            '%' => {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
                return Ok(None);
            }
            '&' => return self.error("alignment `&` is not supported in math"),
            '#' => return self.error("parameter character `#` in math"),
            '$' => return self.error("math shift inside math"),
            '^' | '_' => return self.error("misplaced script"),
            '\'' => MathNode::Operator("\u{2032}".to_string()),
            '-' => MathNode::Operator("\u{2212}".to_string()),
            '*' => MathNode::Operator("\u{2217}".to_string()),
            c if c.is_ascii_digit() || (c == '.' && self.peek().is_some_and(|d| d.is_ascii_digit())) => {
                let mut s = c.to_string();
                let mut seen_dot = c == '.';
                while let Some(d) = self.peek() {
                    let dot_ok = d == '.' && !seen_dot && self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit);
                    if d.is_ascii_digit() || dot_ok {
                        seen_dot |= d == '.';
                        s.push(d);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                MathNode::Number(s)
            }
            c if c.is_alphabetic() => MathNode::Identifier(c.to_string()),
            c if c.is_control() => return self.error(format!("control character U+{:04X}", c as u32)),
            c => MathNode::Operator(c.to_string()),
        };
        Ok(Some(node))
    }

    fn control(&mut self) -> Result<Option<MathNode>, MathError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if self.pos == start {
            let Some(c) = self.peek() else {
                return self.error("dangling backslash");
            };
            self.pos += 1;
            return Ok(Some(match c {
                ',' => MathNode::Space(SpaceWidth::Thin),
                ':' | '>' => MathNode::Space(SpaceWidth::Medium),
                ';' => MathNode::Space(SpaceWidth::Thick),
                '!' => MathNode::Space(SpaceWidth::NegativeThin),
                ' ' | '\n' | '\t' => MathNode::Space(SpaceWidth::Word),
                '|' => MathNode::Operator("\u{2016}".to_string()),
                '{' | '}' | '%' | '#' | '&' | '$' | '_' => MathNode::Operator(c.to_string()),
                '\\' => return self.error("line breaks are not supported in math"),
                other => {
                    self.warnings.push(format!("unknown control symbol `\\{other}`"));
                    MathNode::Operator(other.to_string())
                }
            }));
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        Ok(Some(match name.as_str() {
            "frac" | "dfrac" | "tfrac" => {
                let num = self.argument("numerator")?;
                let den = self.argument("denominator")?;
                MathNode::Frac(Box::new(num), Box::new(den))
            }
            "sqrt" => {
                self.skip_ws();
                if self.peek() == Some('[') {
                    self.pos += 1;
                    let index = MathNode::from_row(self.row(Stop::Bracket)?);
                    let radicand = self.argument("radicand")?;
                    MathNode::Root(Box::new(index), Box::new(radicand))
                } else {
                    MathNode::Sqrt(Box::new(self.argument("radicand")?))
                }
            }
            "left" => {
                let open = self.delimiter()?;
                let body = MathNode::from_row(self.row(Stop::Right)?);
                self.pos += "\\right".len();
                let close = self.delimiter()?;
                MathNode::Fenced { open, close, body: Box::new(body) }
            }
            "right" => return self.error("`\\right` without `\\left`"),
            "mathrm" | "text" | "textrm" | "mbox" | "mathit" => {
                let text = self.text_argument()?;
                MathNode::Identifier(text)
            }
            "operatorname" => MathNode::FunctionName(self.text_argument()?),
            "quad" => MathNode::Space(SpaceWidth::Quad),
            "qquad" => MathNode::Space(SpaceWidth::QQuad),
            "limits" | "nolimits" | "displaystyle" | "textstyle" => return Ok(None),
            n if tables::is_function_name(n) => MathNode::FunctionName(name),
            n => {
                if let Some(g) = tables::greek(n) {
                    MathNode::Identifier(g.ch.to_string())
                } else if let Some(op) = tables::operator(n) {
                    if op.class == SymbolClass::Ord {
                        MathNode::Identifier(op.ch.to_string())
                    } else {
                        MathNode::Operator(op.ch.to_string())
                    }
                } else {
                    self.warnings.push(format!("unknown control word `\\{name}`"));
                    MathNode::Identifier(name)
                }
            }
        }))
    }

    /// The delimiter after `\left` or `\right`; `.` is the empty delimiter.
    fn delimiter(&mut self) -> Result<String, MathError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return self.error("missing delimiter");
        };
        self.pos += 1;
        match c {
            '.' => Ok(String::new()),
            '(' | ')' | '[' | ']' | '|' | '/' | '<' | '>' => Ok(match c {
                '<' => "\u{27E8}".to_string(),
                '>' => "\u{27E9}".to_string(),
                _ => c.to_string(),
            }),
            '\\' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                if self.pos == start {
                    return match self.peek() {
                        Some(s @ ('{' | '}')) => {
                            self.pos += 1;
                            Ok(s.to_string())
                        }
                        Some('|') => {
                            self.pos += 1;
                            Ok("\u{2016}".to_string())
                        }
                        _ => self.error("invalid delimiter"),
                    };
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match tables::operator(&name) {
                    Some(op) if op.class.is_delimiter() => Ok(op.ch.to_string()),
                    _ => self.error(format!("`\\{name}` is not a delimiter")),
                }
            }
            _ => {
                self.pos -= 1;
                self.error(format!("`{c}` is not a delimiter"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(s: &str) -> MathNode {
        MathNode::Identifier(s.into())
    }
    fn mn(s: &str) -> MathNode {
        MathNode::Number(s.into())
    }
    fn mo(s: &str) -> MathNode {
        MathNode::Operator(s.into())
    }
    fn p(s: &str) -> MathNode {
        parse_math(s).unwrap().node
    }

    #[test]
    fn single_identifier() {
        assert_eq!(p("x"), mi("x"));
    }

    #[test]
    fn script_binds_before_infix() {
        assert_eq!(
            p("x^2+1"),
            MathNode::Row(vec![MathNode::Sup(Box::new(mi("x")), Box::new(mn("2"))), mo("+"), mn("1")])
        );
    }

    #[test]
    fn fraction_arguments() {
        assert_eq!(
            p(r"\frac{a+b}{2}"),
            MathNode::Frac(Box::new(MathNode::Row(vec![mi("a"), mo("+"), mi("b")])), Box::new(mn("2")))
        );
        assert_eq!(p(r"\frac12"), MathNode::Frac(Box::new(mn("1")), Box::new(mn("2"))));
    }

    #[test]
    fn script_takes_single_digit() {
        assert_eq!(p("x^23"), MathNode::Row(vec![MathNode::Sup(Box::new(mi("x")), Box::new(mn("2"))), mn("3")]));
        assert_eq!(p("3.14"), mn("3.14"));
    }

    #[test]
    fn sub_and_sup_combine_in_either_order() {
        let expected = MathNode::SubSup(Box::new(mi("x")), Box::new(mi("i")), Box::new(mn("2")));
        assert_eq!(p("x_i^2"), expected);
        assert_eq!(p("x^2_i"), expected);
    }

    #[test]
    fn double_superscript_is_an_error() {
        assert!(parse_math("x^2^3").is_err());
        assert!(parse_math("x_1_2").is_err());
    }

    #[test]
    fn syntax_errors() {
        for bad in ["x^", r"\frac{a}{", "{x", "x}", r"\left( x", r"\right)", "a & b", r"\sqrt[3", r"a \\ b"] {
            assert!(parse_math(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn control_words() {
        assert_eq!(p(r"\alpha"), mi("α"));
        assert_eq!(p(r"\times"), mo("×"));
        assert_eq!(p(r"\infty"), mi("∞"));
        assert_eq!(p(r"\sin"), MathNode::FunctionName("sin".into()));
        assert_eq!(p(r"\sqrt[3]{x}"), MathNode::Root(Box::new(mn("3")), Box::new(mi("x"))));
    }

    #[test]
    fn unknown_word_degrades_with_warning() {
        let r = parse_math(r"\foo x").unwrap();
        assert_eq!(r.node, MathNode::Row(vec![mi("foo"), mi("x")]));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn fences() {
        assert_eq!(
            p(r"\left( x \right."),
            MathNode::Fenced { open: "(".into(), close: String::new(), body: Box::new(mi("x")) }
        );
        assert_eq!(
            p(r"\left\{ x \right\}"),
            MathNode::Fenced { open: "{".into(), close: "}".into(), body: Box::new(mi("x")) }
        );
    }

    #[test]
    fn empty_group_and_leading_script() {
        assert_eq!(p("{}^2"), MathNode::Sup(Box::new(MathNode::Empty), Box::new(mn("2"))));
        assert_eq!(p("^2"), MathNode::Sup(Box::new(MathNode::Empty), Box::new(mn("2"))));
        assert_eq!(p(""), MathNode::Empty);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        assert!(parse_math(&"{".repeat(5000)).is_err());
        assert!(parse_math(&"x^{".repeat(5000)).is_err());
    }
}
