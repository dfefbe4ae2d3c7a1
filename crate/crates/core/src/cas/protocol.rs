//! Cell evaluation wire protocol.
//!
//! Requests and responses serialize to JSON objects with exactly the fields
//! `id`, `command`, `mode` and `id`, `status`, `kind`, `payload`,
//! `diagnostics`. The same shapes are used by the in-page runtime and by any
//! external engine adapter.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    diff, eval_numeric, expand, expr_to_tex, expr_to_text, factor_expr, parse_command, plot_svg, simplify,
    CasError, Command, Expr, Result,
};

/// Commands longer than this are rejected before parsing.
pub const MAX_COMMAND_CHARS: usize = 10_000;

const DEFAULT_XMIN: f64 = -5.0;
const DEFAULT_XMAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Math,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Tex,
    Text,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRequest {
    pub id: String,
    pub command: String,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalResponse {
    pub id: String,
    pub status: Status,
    pub kind: Kind,
    pub payload: String,
    pub diagnostics: Vec<String>,
}

impl EvalResponse {
    fn error(id: &str, message: String) -> EvalResponse {
        EvalResponse {
            id: id.to_string(),
            status: Status::Error,
            kind: Kind::Text,
            payload: message.clone(),
            diagnostics: vec![message],
        }
    }
}

enum Outcome {
    Value(Expr),
    Svg(String),
}

/// Runs one cell command. Never panics on user input: every failure is an
/// `error` response with a readable diagnostic.
pub fn evaluate(req: &EvalRequest) -> EvalResponse {
    let command = req.command.trim();
    if command.is_empty() {
        return EvalResponse::error(&req.id, "empty command".to_string());
    }
    if command.chars().count() > MAX_COMMAND_CHARS {
        return EvalResponse::error(&req.id, format!("command longer than {MAX_COMMAND_CHARS} characters"));
    }
    let mut diagnostics = Vec::new();
    match run(command, &mut diagnostics) {
        Ok(Outcome::Svg(svg)) => EvalResponse {
            id: req.id.clone(),
            status: Status::Ok,
            kind: Kind::Svg,
            payload: svg,
            diagnostics,
        },
        Ok(Outcome::Value(e)) => {
            let (kind, payload) = match req.mode {
                Mode::Math => (Kind::Tex, expr_to_tex(&e)),
                Mode::Text => (Kind::Text, expr_to_text(&e)),
            };
            EvalResponse { id: req.id.clone(), status: Status::Ok, kind, payload, diagnostics }
        }
        Err(e) => EvalResponse::error(&req.id, e.to_string()),
    }
}

fn run(command: &str, diagnostics: &mut Vec<String>) -> Result<Outcome> {
    Ok(match parse_command(command)? {
        Command::Eval(e) | Command::Simplify(e) => Outcome::Value(simplify(&e)?),
        Command::Expand(e) => Outcome::Value(expand(&e)?),
        Command::Diff(e, var) => Outcome::Value(diff(&e, &var)?),
        Command::Factor(e) => {
            let (out, diags) = factor_expr(&e)?;
            diagnostics.extend(diags);
            Outcome::Value(out)
        }
        Command::Plot { expr, range } => {
            let expr = simplify(&expr)?;
            let (xmin, xmax) = match range {
                Some((lo, hi)) => (constant(&lo)?, constant(&hi)?),
                None => (DEFAULT_XMIN, DEFAULT_XMAX),
            };
            let symbols = expr.free_symbols();
            if symbols.len() > 1 {
                let names: Vec<_> = symbols.into_iter().collect();
                return Err(CasError::InvalidRange(format!("plot needs one variable, found {}", names.join(", "))));
            }
            let var = symbols.into_iter().next().unwrap_or_else(|| "x".to_string());
            let plot = plot_svg(&expr, &var, xmin, xmax)?;
            diagnostics.extend(plot.diagnostics);
            Outcome::Svg(plot.svg)
        }
    })
}

fn constant(e: &Expr) -> Result<f64> {
    eval_numeric(&simplify(e)?, &HashMap::new())
}
