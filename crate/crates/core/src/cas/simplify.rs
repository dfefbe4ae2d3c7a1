//! Canonicalizing constructors and the `simplify` pass.
//!
//! `add`, `mul`, `pow` and `call` take canonical children and return a
//! canonical result. Canonical form:
//! - rationals are folded into a single leading coefficient of a product or a
//!   trailing constant of a sum;
//! - like terms of a sum are collected (`2x + 3x = 5x`);
//! - equal bases of a product are collected by adding exponents;
//! - integer powers distribute over products and fold into nested powers;
//! - sum terms are ordered by descending degree, then by the derived `Ord`.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_size, CasError, Expr, Func, Result};

/// Largest bit length a folded rational power may reach.
const MAX_POWER_BITS: u64 = 1 << 20;

/// Rewrites an expression into canonical form using exact arithmetic.
pub fn simplify(e: &Expr) -> Result<Expr> {
    check_size(e)?;
    let out = simplify_rec(e)?;
    check_size(&out)?;
    Ok(out)
}

fn simplify_rec(e: &Expr) -> Result<Expr> {
    Ok(match e {
        Expr::Rational(_) | Expr::Symbol(_) => e.clone(),
        Expr::Call(f, a) => call(*f, simplify_rec(a)?),
        Expr::Pow(b, x) => pow(simplify_rec(b)?, simplify_rec(x)?)?,
        Expr::Mul(fs) => mul(fs.iter().map(simplify_rec).collect::<Result<_>>()?)?,
        Expr::Add(ts) => add(ts.iter().map(simplify_rec).collect::<Result<_>>()?)?,
    })
}

/// Splits a canonical term into its rational coefficient and the rest.
pub(crate) fn split_coeff(e: Expr) -> (BigRational, Expr) {
    match e {
        Expr::Rational(r) => (r, Expr::one()),
        Expr::Mul(mut fs) if matches!(fs.first(), Some(Expr::Rational(_))) => {
            let c = match fs.remove(0) {
                Expr::Rational(r) => r,
                _ => unreachable!(),
            };
            let rest = if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Mul(fs) };
            (c, rest)
        }
        other => (BigRational::one(), other),
    }
}

fn scale(c: BigRational, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    match rest {
        Expr::Mul(mut fs) => {
            fs.insert(0, Expr::Rational(c));
            Expr::Mul(fs)
        }
        other => Expr::Mul(vec![Expr::Rational(c), other]),
    }
}

/// Degree used for ordering sum terms: symbols count 1, calls count 0.
pub(crate) fn sort_degree(e: &Expr) -> BigRational {
    match e {
        Expr::Rational(_) | Expr::Call(..) => BigRational::zero(),
        Expr::Symbol(_) => BigRational::one(),
        Expr::Pow(b, x) => match x.as_ref() {
            Expr::Rational(r) => sort_degree(b) * r,
            _ => sort_degree(b),
        },
        Expr::Mul(fs) => fs.iter().map(sort_degree).fold(BigRational::zero(), |a, b| a + b),
        Expr::Add(ts) => ts.iter().map(sort_degree).max().unwrap_or_else(BigRational::zero),
    }
}

pub(crate) fn sort_terms(terms: &mut [Expr]) {
    terms.sort_by_cached_key(|t| {
        let (c, rest) = split_coeff(t.clone());
        (Reverse(sort_degree(&rest)), t.as_rational().is_some(), rest, c)
    });
}

pub(crate) fn add(terms: Vec<Expr>) -> Result<Expr> {
    let mut constant = BigRational::zero();
    let mut groups: BTreeMap<Expr, BigRational> = BTreeMap::new();
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t {
            Expr::Add(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    for t in flat {
        match t {
            Expr::Rational(r) => constant += r,
            other => {
                let (c, rest) = split_coeff(other);
                *groups.entry(rest).or_insert_with(BigRational::zero) += c;
            }
        }
    }
    let mut out = Vec::with_capacity(groups.len() + 1);
    let mut renest = false;
    for (rest, c) in groups {
        if c.is_zero() {
            continue;
        }
        let term = scale(c, rest);
        renest |= matches!(term, Expr::Add(_));
        out.push(term);
    }
    if !constant.is_zero() {
        out.push(Expr::Rational(constant));
    }
    if renest {
        return add(out);
    }
    sort_terms(&mut out);
    Ok(match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    })
}

pub(crate) fn mul(factors: Vec<Expr>) -> Result<Expr> {
    let mut coeff = BigRational::one();
    let mut groups: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
    let mut flat = Vec::with_capacity(factors.len());
    for f in factors {
        match f {
            Expr::Mul(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    for f in flat {
        match f {
            Expr::Rational(r) => coeff *= r,
            Expr::Pow(b, x) => groups.entry(*b).or_default().push(*x),
            other => groups.entry(other).or_default().push(Expr::one()),
        }
    }
    let mut out = Vec::with_capacity(groups.len() + 1);
    let mut changed = false;
    for (base, mut exps) in groups {
        let exp = if exps.len() == 1 { exps.pop().unwrap() } else { add(exps)? };
        match pow(base, exp)? {
            Expr::Rational(r) => coeff *= r,
            p @ Expr::Mul(_) => {
                changed = true;
                out.push(p);
            }
            p => out.push(p),
        }
    }
    if coeff.is_zero() {
        return Ok(Expr::zero());
    }
    if changed {
        out.insert(0, Expr::Rational(coeff));
        return mul(out);
    }
    if out.is_empty() {
        return Ok(Expr::Rational(coeff));
    }
    if coeff.is_one() {
        if out.len() == 1 {
            return Ok(out.pop().unwrap());
        }
    } else {
        out.insert(0, Expr::Rational(coeff));
    }
    Ok(Expr::Mul(out))
}

pub(crate) fn pow(base: Expr, exp: Expr) -> Result<Expr> {
    if let Expr::Rational(e) = &exp {
        if e.is_zero() {
            return Ok(Expr::one());
        }
        if e.is_one() {
            return Ok(base);
        }
    }
    match (base, exp) {
        (Expr::Rational(b), Expr::Rational(e)) => rational_pow(b, e),
        (Expr::Pow(b, inner), Expr::Rational(e)) if e.is_integer() => {
            let exp = mul(vec![*inner, Expr::Rational(e)])?;
            pow(*b, exp)
        }
        (Expr::Mul(fs), Expr::Rational(e)) if e.is_integer() => {
            let parts = fs
                .into_iter()
                .map(|f| pow(f, Expr::Rational(e.clone())))
                .collect::<Result<Vec<_>>>()?;
            mul(parts)
        }
        (Expr::Rational(b), _) if b.is_one() => Ok(Expr::one()),
        (b, e) => Ok(Expr::pow(b, e)),
    }
}

fn rational_pow(base: BigRational, exp: BigRational) -> Result<Expr> {
    if base.is_zero() {
        return if exp.is_positive() { Ok(Expr::zero()) } else { Err(CasError::DivisionByZero) };
    }
    if base.is_one() {
        return Ok(Expr::one());
    }
    if !exp.is_integer() {
        return Ok(Expr::pow(Expr::Rational(base), Expr::Rational(exp)));
    }
    let n = exp.to_integer();
    if base == -BigRational::one() {
        return Ok(if n.is_odd() { Expr::int(-1) } else { Expr::one() });
    }
    let magnitude = n.abs().to_u64().ok_or(CasError::ExprTooLarge)?;
    let bits = base.numer().bits().max(base.denom().bits());
    if magnitude.saturating_mul(bits) > MAX_POWER_BITS {
        return Err(CasError::ExprTooLarge);
    }
    let k = magnitude as u32;
    let numer = base.numer().pow(k);
    let denom = base.denom().pow(k);
    let r = if n.is_negative() {
        BigRational::new(denom, numer)
    } else {
        BigRational::new(numer, denom)
    };
    Ok(Expr::Rational(r))
}

pub(crate) fn call(f: Func, arg: Expr) -> Expr {
    match (f, &arg) {
        (Func::Sin, a) if a.is_zero() => Expr::zero(),
        (Func::Cos, a) | (Func::Exp, a) if a.is_zero() => Expr::one(),
        (Func::Ln, a) if a.is_one() => Expr::zero(),
        (Func::Ln, Expr::Call(Func::Exp, inner)) => inner.as_ref().clone(),
        (Func::Abs, Expr::Rational(r)) => Expr::Rational(r.abs()),
        (Func::Abs, Expr::Call(Func::Abs, _)) => arg,
        (Func::Sqrt, Expr::Rational(r)) if !r.is_negative() => match exact_sqrt(r) {
            Some(s) => Expr::Rational(s),
            None => Expr::call(f, arg),
        },
        _ => Expr::call(f, arg),
    }
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::parse_expr;

    fn s(src: &str) -> Expr {
        simplify(&parse_expr(src).unwrap()).unwrap()
    }

    #[test]
    fn exact_fraction_sum() {
        assert_eq!(s("1/3 + 1/6"), Expr::ratio(1, 2));
    }

    #[test]
    fn additive_identity() {
        assert_eq!(s("x + 0"), Expr::symbol("x"));
    }

    #[test]
    fn like_terms_collect() {
        assert_eq!(s("2*x + 3*x - 5*x"), Expr::zero());
        assert_eq!(s("x*x*x"), Expr::pow(Expr::symbol("x"), Expr::int(3)));
        assert_eq!(s("x/x"), Expr::one());
    }

    #[test]
    fn precedence_evaluates() {
        assert_eq!(s("2+3*4"), Expr::int(14));
        assert_eq!(s("-2^2"), Expr::int(-4));
        assert_eq!(s("2^3^2"), Expr::int(512));
        assert_eq!(s("2^-2"), Expr::ratio(1, 4));
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(simplify(&parse_expr("1/0").unwrap()), Err(CasError::DivisionByZero));
        assert_eq!(simplify(&parse_expr("x/(1-1)").unwrap()), Err(CasError::DivisionByZero));
    }

    #[test]
    fn non_integer_exponent_stays_symbolic() {
        let e = s("2^(1/2)");
        assert_eq!(e, Expr::pow(Expr::int(2), Expr::ratio(1, 2)));
        assert_eq!(s("2^(1/2)*2^(1/2)"), Expr::int(2));
        assert_eq!(s("(x^2)^(1/2)"), Expr::pow(Expr::pow(Expr::symbol("x"), Expr::int(2)), Expr::ratio(1, 2)));
    }

    #[test]
    fn integer_power_distributes_over_product() {
        assert_eq!(s("(2*x)^2"), s("4*x^2"));
        assert_eq!(s("(x^3)^2"), s("x^6"));
    }

    #[test]
    fn huge_rational_power_is_guarded() {
        assert_eq!(simplify(&parse_expr("2^(2^64)").unwrap()), Err(CasError::ExprTooLarge));
        assert_eq!(s("(-1)^(2^64+1)"), Expr::int(-1));
    }

    #[test]
    fn function_constants_fold() {
        assert_eq!(s("sin(0)+cos(0)+exp(0)+ln(1)"), Expr::int(2));
        assert_eq!(s("sqrt(9/4)"), Expr::ratio(3, 2));
        assert_eq!(s("abs(-3)"), Expr::int(3));
        assert_eq!(s("sqrt(2)"), Expr::call(Func::Sqrt, Expr::int(2)));
    }

    #[test]
    fn terms_sorted_by_descending_degree() {
        let e = s("1 + x + x^2");
        let Expr::Add(ts) = e else { panic!() };
        assert_eq!(ts[0], Expr::pow(Expr::symbol("x"), Expr::int(2)));
        assert_eq!(ts[2], Expr::one());
    }

    #[test]
    fn collected_coefficient_one_flattens_sum() {
        // 2(x+1) - (x+1) leaves a bare sum that must merge with the outer sum.
        let e = s("2*(x+1) - (x+1) + y");
        assert_eq!(e, s("x + y + 1"));
        assert_eq!(simplify(&e).unwrap(), e);
    }
}
