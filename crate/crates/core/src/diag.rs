//! Positioned diagnostics shared by every pipeline stage.

use std::fmt;

/// 1-based line and column (columns count characters, not bytes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn new(line: usize, column: usize) -> Self {
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub position: Option<Position>,
    pub message: String,
}

impl Diagnostic {
    pub fn warning(position: impl Into<Option<Position>>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, position: position.into(), message: message.into() }
    }

    pub fn error(position: impl Into<Option<Position>>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, position: position.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`, or `file: severity: message`
    /// when the diagnostic has no position.
    pub fn render(&self, file: &str) -> String {
        match self.position {
            Some(p) => format!("{file}:{}:{}: {}: {}", p.line, p.column, self.severity, self.message),
            None => format!("{file}: {}: {}", self.severity, self.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_format() {
        let d = Diagnostic::warning(Position::new(3, 7), "unknown macro");
        assert_eq!(d.render("a.tex"), "a.tex:3:7: warning: unknown macro");
        let d = Diagnostic::error(None, "cannot read");
        assert_eq!(d.render("a.tex"), "a.tex: error: cannot read");
    }
}
