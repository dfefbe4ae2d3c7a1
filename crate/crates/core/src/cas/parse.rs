//! Command-line parser for evaluator cells.
//!
//! Accepts giac-style input (`factor(x^10-1)`, `2*x+1`) and the TeX subset
//! produced by [`expr_to_tex`](super::expr_to_tex) (`\frac`, `\cdot`, braces,
//! `\left(`/`\right)`, `\mathrm{..}`, Greek letters), so results can be fed
//! back in.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use super::{CasError, Expr, Func, Result};
use crate::math::tables;

const MAX_DEPTH: usize = 256;
const COMMANDS: [&str; 5] = ["factor", "expand", "diff", "plot", "simplify"];

/// A parsed cell command.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// A bare expression; evaluated by simplification.
    Eval(Expr),
    Simplify(Expr),
    Expand(Expr),
    Factor(Expr),
    Diff(Expr, String),
    Plot { expr: Expr, range: Option<(Expr, Expr)> },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Cmd(String),
    Op(char),
    End,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    column: usize,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T> {
    Err(CasError::Parse { column, message: message.into() })
}

fn lex(src: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut frac_part = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    frac_part.push(chars[i]);
                    i += 1;
                }
            }
            out.push(Lexed { tok: Tok::Num(decimal(&int_part, &frac_part)), column });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), column });
            continue;
        }
        if c == '\\' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            if i > start {
                out.push(Lexed { tok: Tok::Cmd(chars[start..i].iter().collect()), column });
                continue;
            }
            match chars.get(i) {
                // thin/medium/thick/negative spaces and control space
                Some(',' | ';' | ':' | '!' | ' ') => {
                    i += 1;
                    continue;
                }
                Some(other) => return err(column, format!("unsupported control symbol `\\{other}`")),
                None => return err(column, "dangling backslash"),
            }
        }
        if "+-*/^(),{}[]|".contains(c) {
            out.push(Lexed { tok: Tok::Op(c), column });
            i += 1;
            continue;
        }
        return err(column, format!("unexpected character `{c}`"));
    }
    out.push(Lexed { tok: Tok::End, column: chars.len() + 1 });
    Ok(out)
}

fn decimal(int_part: &str, frac_part: &str) -> BigRational {
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
        .unwrap_or_default();
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    BigRational::new(numer, denom)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn column(&self) -> usize {
        self.toks[self.pos].column
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            Ok(())
        } else {
            err(self.column(), format!("expected `{op}`, found {}", describe(self.peek())))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => err(self.column(), format!("unexpected {}", describe(t))),
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return err(self.column(), "expression nested too deeply");
        }
        Ok(())
    }

    fn command(&mut self) -> Result<Command> {
        if let (Tok::Ident(name), Tok::Op('(')) = (self.peek().clone(), self.peek_at(1)) {
            if COMMANDS.contains(&name.as_str()) {
                let column = self.column();
                self.bump();
                self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Op(',') {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect_op(')')?;
                self.expect_end()?;
                return build_command(&name, args, column);
            }
        }
        let e = self.expr()?;
        self.expect_end()?;
        Ok(Command::Eval(e))
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    terms.push(Expr::negated(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Tok::Cmd(c) if c == "cdot" || c == "times" => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    let d = self.unary()?;
                    factors.push(Expr::pow(d, Expr::int(-1)));
                }
                t if starts_implicit_factor(t) => factors.push(self.power()?),
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let out = match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Expr::negated(self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()?
            }
            _ => self.power()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    /// A braced group, or a single primary as TeX allows for `\frac12`.
    fn argument(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('{') {
            self.bump();
            let e = self.expr()?;
            self.expect_op('}')?;
            Ok(e)
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        self.enter()?;
        let column = self.column();
        let out = match self.bump() {
            Tok::Num(r) => Expr::Rational(r),
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    let func = match Func::from_name(&name) {
                        Some(f) => f,
                        None if COMMANDS.contains(&name.as_str()) => {
                            return err(column, format!("`{name}` must be the whole command"));
                        }
                        None => return Err(CasError::UnknownFunction(name)),
                    };
                    self.bump();
                    let arg = self.expr()?;
                    if *self.peek() == Tok::Op(',') {
                        return err(self.column(), format!("`{name}` takes one argument"));
                    }
                    self.expect_op(')')?;
                    Expr::call(func, arg)
                } else {
                    Expr::Symbol(name)
                }
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                e
            }
            Tok::Op('{') => {
                let e = self.expr()?;
                self.expect_op('}')?;
                e
            }
            Tok::Cmd(name) => self.tex_command(&name, column)?,
            t => return err(column, format!("unexpected {}", describe(&t))),
        };
        self.depth -= 1;
        Ok(out)
    }

    fn tex_command(&mut self, name: &str, column: usize) -> Result<Expr> {
        match name {
            "frac" | "dfrac" | "tfrac" => {
                let n = self.argument()?;
                let d = self.argument()?;
                Ok(Expr::product(vec![n, Expr::pow(d, Expr::int(-1))]))
            }
            "sqrt" => {
                if *self.peek() == Tok::Op('[') {
                    self.bump();
                    let index = self.expr()?;
                    self.expect_op(']')?;
                    let radicand = self.argument()?;
                    return Ok(Expr::pow(radicand, Expr::pow(index, Expr::int(-1))));
                }
                Ok(Expr::call(Func::Sqrt, self.argument()?))
            }
            "left" => {
                let open = self.bump();
                let (close, abs) = match open {
                    Tok::Op('(') => (')', false),
                    Tok::Op('[') => (']', false),
                    Tok::Op('|') => ('|', true),
                    t => return err(column, format!("unsupported delimiter {}", describe(&t))),
                };
                let e = self.expr()?;
                if self.bump() != Tok::Cmd("right".into()) {
                    return err(self.column(), "missing `\\right`");
                }
                if self.bump() != Tok::Op(close) {
                    return err(self.column(), format!("expected `\\right{close}`"));
                }
                Ok(if abs { Expr::call(Func::Abs, e) } else { e })
            }
            "mathrm" | "operatorname" | "text" => {
                self.expect_op('{')?;
                let sym = match self.bump() {
                    Tok::Ident(s) => s,
                    t => return err(column, format!("expected a name, found {}", describe(&t))),
                };
                self.expect_op('}')?;
                Ok(Expr::Symbol(sym))
            }
            _ => {
                if let Some(func) = Func::from_name(name) {
                    let arg = match self.peek() {
                        Tok::Op('(') => {
                            self.bump();
                            let e = self.expr()?;
                            self.expect_op(')')?;
                            e
                        }
                        Tok::Cmd(c) if c == "left" => self.primary()?,
                        _ => self.argument()?,
                    };
                    return Ok(Expr::call(func, arg));
                }
                if tables::greek(name).is_some() {
                    return Ok(Expr::Symbol(name.to_string()));
                }
                err(column, format!("unknown command `\\{name}`"))
            }
        }
    }
}

fn starts_implicit_factor(t: &Tok) -> bool {
    match t {
        Tok::Ident(_) | Tok::Op('(') | Tok::Op('{') => true,
        Tok::Cmd(c) => !matches!(c.as_str(), "cdot" | "times" | "right"),
        _ => false,
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("number `{r}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Cmd(s) => format!("`\\{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

fn build_command(name: &str, mut args: Vec<Expr>, column: usize) -> Result<Command> {
    let arity_error = |expected: &str| err(column, format!("`{name}` expects {expected}"));
    match (name, args.len()) {
        ("factor", 1) => Ok(Command::Factor(args.remove(0))),
        ("expand", 1) => Ok(Command::Expand(args.remove(0))),
        ("simplify", 1) => Ok(Command::Simplify(args.remove(0))),
        ("diff", 1) => Ok(Command::Diff(args.remove(0), "x".to_string())),
        ("diff", 2) => match args.pop() {
            Some(Expr::Symbol(v)) => Ok(Command::Diff(args.remove(0), v)),
            _ => err(column, "second argument of `diff` must be a symbol"),
        },
        ("plot", 1) => Ok(Command::Plot { expr: args.remove(0), range: None }),
        ("plot", 3) => {
            let xmax = args.pop().unwrap();
            let xmin = args.pop().unwrap();
            Ok(Command::Plot { expr: args.remove(0), range: Some((xmin, xmax)) })
        }
        ("diff", _) => arity_error("an expression and optionally a variable"),
        ("plot", _) => arity_error("an expression and optionally xmin, xmax"),
        _ => arity_error("exactly one argument"),
    }
}

/// Parses a cell command: one of `factor(e)`, `expand(e)`, `simplify(e)`,
/// `diff(e[, x])`, `plot(e[, xmin, xmax])`, or a bare expression.
///
/// `^` is right-associative and binds tighter than unary minus. Decimal
/// literals become exact rationals.
pub fn parse_command(src: &str) -> Result<Command> {
    let mut p = Parser::new(src)?;
    p.command()
}

/// Parses a bare expression (no top-level command).
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}
