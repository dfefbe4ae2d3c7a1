//! Symbolic differentiation.

use super::simplify::{add, call, mul, pow, simplify};
use super::{check_size, CasError, Expr, Func, Result};
use super::print::expr_to_text;

/// Derivative of `e` with respect to the symbol `var`, in canonical form.
///
/// Handles sums, products, powers with an exponent or a base free of `var`,
/// and the chain rule through every [`Func`]. A power whose base and exponent
/// both depend on `var` is reported as [`CasError::UnsupportedDerivative`].
pub fn diff(e: &Expr, var: &str) -> Result<Expr> {
    let e = simplify(e)?;
    let out = d(&e, var)?;
    check_size(&out)?;
    Ok(out)
}

fn d(e: &Expr, var: &str) -> Result<Expr> {
    if !e.depends_on(var) {
        return Ok(Expr::zero());
    }
    match e {
        Expr::Rational(_) => Ok(Expr::zero()),
        Expr::Symbol(_) => Ok(Expr::one()),
        Expr::Add(ts) => add(ts.iter().map(|t| d(t, var)).collect::<Result<_>>()?),
        Expr::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if !f.depends_on(var) {
                    continue;
                }
                let mut factors = Vec::with_capacity(fs.len());
                factors.push(d(f, var)?);
                factors.extend(fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()));
                terms.push(mul(factors)?);
            }
            add(terms)
        }
        Expr::Pow(base, exp) => {
            let (b, x) = (base.as_ref(), exp.as_ref());
            if !x.depends_on(var) {
                // x * b^(x-1) * b'
                let lowered = pow(b.clone(), add(vec![x.clone(), Expr::int(-1)])?)?;
                mul(vec![x.clone(), lowered, d(b, var)?])
            } else if !b.depends_on(var) {
                // b^x * ln(b) * x'
                mul(vec![e.clone(), call(Func::Ln, b.clone()), d(x, var)?])
            } else {
                Err(CasError::UnsupportedDerivative(expr_to_text(e)))
            }
        }
        Expr::Call(f, arg) => {
            let u = arg.as_ref();
            let du = d(u, var)?;
            let outer = match f {
                Func::Sin => call(Func::Cos, u.clone()),
                Func::Cos => mul(vec![Expr::int(-1), call(Func::Sin, u.clone())])?,
                Func::Exp => e.clone(),
                Func::Ln => pow(u.clone(), Expr::int(-1))?,
                Func::Sqrt => mul(vec![Expr::ratio(1, 2), pow(e.clone(), Expr::int(-1))?])?,
                Func::Abs => mul(vec![u.clone(), pow(e.clone(), Expr::int(-1))?])?,
            };
            mul(vec![outer, du])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::parse_expr;

    fn dx(src: &str) -> Expr {
        diff(&parse_expr(src).unwrap(), "x").unwrap()
    }

    fn s(src: &str) -> Expr {
        simplify(&parse_expr(src).unwrap()).unwrap()
    }

    #[test]
    fn sin_table_rule() {
        assert_eq!(dx("sin(x)"), s("cos(x)"));
    }

    #[test]
    fn other_symbol_is_constant() {
        assert_eq!(dx("c"), Expr::zero());
        assert_eq!(dx("c*y^2"), Expr::zero());
    }

    #[test]
    fn product_rule() {
        assert_eq!(dx("x*sin(x)"), s("sin(x) + x*cos(x)"));
    }

    #[test]
    fn power_and_chain_rules() {
        assert_eq!(dx("x^3"), s("3*x^2"));
        assert_eq!(dx("(x^2+1)^(1/2)"), s("x*(x^2+1)^(-1/2)"));
        assert_eq!(dx("exp(2*x)"), s("2*exp(2*x)"));
        assert_eq!(dx("ln(x)"), s("1/x"));
        assert_eq!(dx("2^x"), s("2^x*ln(2)"));
        assert_eq!(dx("cos(x^2)"), s("-2*x*sin(x^2)"));
    }

    #[test]
    fn x_to_the_x_is_unsupported() {
        assert!(matches!(diff(&parse_expr("x^x").unwrap(), "x"), Err(CasError::UnsupportedDerivative(_))));
    }
}
