//! Expression tree for the built-in evaluator.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Functions the evaluator knows how to simplify, differentiate and sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    /// Looks up a function by its command-language name. `log` is accepted as
    /// the natural logarithm.
    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" | "log" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

/// A symbolic expression over exact rationals.
///
/// Variant order matters: the derived `Ord` is the canonical order used to
/// sort factors of a product and to break ties between terms of a sum.
///
/// Subtraction is represented as addition of `Mul[-1, e]` and division as
/// multiplication by `Pow(e, -1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Rational(BigRational),
    Symbol(String),
    Call(Func, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Expr {
        Expr::Rational(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Rational(BigRational::one())
    }

    pub fn ratio(numer: i64, denom: i64) -> Expr {
        Expr::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn symbol(name: impl Into<String>) -> Expr {
        Expr::Symbol(name.into())
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exponent))
    }

    /// Raw sum: nested sums are flattened, nothing else is rewritten.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t {
                Expr::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Add(flat),
        }
    }

    /// Raw product: nested products are flattened, nothing else is rewritten.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                Expr::Mul(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => Expr::Mul(flat),
        }
    }

    /// Raw negation. Rational literals are negated in place.
    pub fn negated(e: Expr) -> Expr {
        match e {
            Expr::Rational(r) => Expr::Rational(-r),
            other => Expr::product(vec![Expr::int(-1), other]),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Expr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_one())
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_negative())
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Rational(_) | Expr::Symbol(_) => 1,
            Expr::Call(_, a) => 1 + a.size(),
            Expr::Pow(b, e) => 1 + b.size() + e.size(),
            Expr::Mul(xs) | Expr::Add(xs) => 1 + xs.iter().map(Expr::size).sum::<usize>(),
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self {
            Expr::Rational(_) => false,
            Expr::Symbol(s) => s == var,
            Expr::Call(_, a) => a.depends_on(var),
            Expr::Pow(b, e) => b.depends_on(var) || e.depends_on(var),
            Expr::Mul(xs) | Expr::Add(xs) => xs.iter().any(|x| x.depends_on(var)),
        }
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Rational(_) => {}
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Call(_, a) => a.collect_symbols(out),
            Expr::Pow(b, e) => {
                b.collect_symbols(out);
                e.collect_symbols(out);
            }
            Expr::Mul(xs) | Expr::Add(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::expr_to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_and_product_flatten() {
        let x = Expr::symbol("x");
        let inner = Expr::sum(vec![x.clone(), Expr::int(1)]);
        let outer = Expr::sum(vec![inner, Expr::int(2)]);
        assert_eq!(outer, Expr::Add(vec![x.clone(), Expr::int(1), Expr::int(2)]));
        assert_eq!(Expr::product(vec![]), Expr::one());
        assert_eq!(Expr::product(vec![x.clone()]), x);
    }

    #[test]
    fn rationals_are_reduced() {
        assert_eq!(Expr::ratio(2, -4), Expr::ratio(-1, 2));
        let r = Expr::ratio(6, 4);
        let q = r.as_rational().unwrap();
        assert_eq!((q.numer().clone(), q.denom().clone()), (BigInt::from(3), BigInt::from(2)));
    }

    #[test]
    fn size_counts_nodes() {
        let e = Expr::sum(vec![Expr::pow(Expr::symbol("x"), Expr::int(2)), Expr::int(1)]);
        assert_eq!(e.size(), 5);
    }
}
