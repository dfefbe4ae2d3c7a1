//! Floating-point evaluation, used for plotting.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{CasError, Expr, Func, Result};

/// Evaluates `e` in IEEE double precision.
///
/// Domain errors (`ln` of a non-positive number, division by zero, even roots
/// of negatives) produce non-finite values rather than errors; only a symbol
/// missing from `bindings` fails.
pub fn eval_numeric(e: &Expr, bindings: &HashMap<String, f64>) -> Result<f64> {
    Ok(match e {
        Expr::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
        Expr::Symbol(s) => *bindings.get(s).ok_or_else(|| CasError::UnboundSymbol(s.clone()))?,
        Expr::Add(ts) => ts.iter().map(|t| eval_numeric(t, bindings)).sum::<Result<f64>>()?,
        Expr::Mul(fs) => fs.iter().map(|f| eval_numeric(f, bindings)).product::<Result<f64>>()?,
        Expr::Pow(b, x) => {
            let base = eval_numeric(b, bindings)?;
            let folded = match x.as_rational() {
                None if x.free_symbols().is_empty() => super::simplify(x).ok(),
                _ => None,
            };
            match folded.as_ref().unwrap_or(x).as_rational() {
                Some(r) if r.is_integer() => match r.to_integer().to_i32() {
                    Some(n) => base.powi(n),
                    None => base.powf(r.to_f64().unwrap_or(f64::NAN)),
                },
                // odd roots of negative numbers are real
                Some(r) if base < 0.0 && r.denom().is_odd() => {
                    let magnitude = (-base).powf(r.to_f64().unwrap_or(f64::NAN));
                    if r.numer().is_odd() {
                        -magnitude
                    } else {
                        magnitude
                    }
                }
                _ => base.powf(eval_numeric(x, bindings)?),
            }
        }
        Expr::Call(f, a) => {
            let v = eval_numeric(a, bindings)?;
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
                Func::Ln if v < 0.0 => f64::NAN,
                Func::Ln => v.ln(),
                Func::Sqrt => v.sqrt(),
                Func::Abs => v.abs(),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::parse_expr;

    fn at(src: &str, x: f64) -> f64 {
        let bindings = HashMap::from([("x".to_string(), x)]);
        eval_numeric(&parse_expr(src).unwrap(), &bindings).unwrap()
    }

    #[test]
    fn sin_at_zero() {
        assert_eq!(at("sin(x)", 0.0), 0.0);
    }

    #[test]
    fn square_at_three() {
        assert_eq!(at("x^2", 3.0), 9.0);
    }

    #[test]
    fn exp_one_matches_platform() {
        assert!((at("exp(1)", 0.0) - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn domain_errors_are_non_finite() {
        assert!(at("ln(x)", -1.0).is_nan());
        assert!(!at("ln(x)", 0.0).is_finite());
        assert!(!at("1/x", 0.0).is_finite());
        assert!(at("sqrt(x)", -4.0).is_nan());
    }

    #[test]
    fn odd_roots_of_negatives() {
        assert!((at("x^(1/3)", -8.0) + 2.0).abs() < 1e-12);
        assert!((at("x^(2/3)", -8.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn unbound_symbol() {
        let e = parse_expr("y+1").unwrap();
        assert_eq!(eval_numeric(&e, &HashMap::new()), Err(CasError::UnboundSymbol("y".into())));
    }
}
