//! Built-in mini computer algebra system.
//!
//! Exact rational arithmetic over a small expression language, enough to run
//! `factor`, `expand`, `diff` and `plot` cells without an external engine.
//! [`evaluate`] is the single entry point used by the wire protocol.

mod diff;
mod expand;
mod expr;
mod factor;
mod numeric;
mod parse;
mod plot;
mod poly;
mod print;
mod protocol;
mod simplify;

use thiserror::Error;

pub use diff::diff;
pub use expand::{expand, EXPAND_BUDGET};
pub use expr::{Expr, Func};
pub use factor::{factor_expr, factor_poly, Factorization};
pub use numeric::eval_numeric;
pub use parse::{parse_command, parse_expr, Command};
pub use plot::{plot_svg, sample, Plot, PLOT_SAMPLES};
pub use poly::Poly;
pub use print::{expr_to_tex, expr_to_text};
pub use protocol::{evaluate, EvalRequest, EvalResponse, Kind, Mode, Status};
pub use simplify::simplify;

/// Upper bound on expression nodes any operation may produce.
pub const MAX_NODES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CasError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression too large (limit {MAX_NODES} nodes)")]
    ExprTooLarge,
    #[error("cannot differentiate {0}")]
    UnsupportedDerivative(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("not a univariate polynomial: {0}")]
    NotPolynomial(String),
    #[error("invalid plot range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, CasError>;

pub(crate) fn check_size(e: &Expr) -> Result<()> {
    if e.size() > MAX_NODES {
        Err(CasError::ExprTooLarge)
    } else {
        Ok(())
    }
}
