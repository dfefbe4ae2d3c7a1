//! Dense univariate polynomials over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expand::expand;
use super::print::expr_to_text;
use super::simplify::split_coeff;
use super::{CasError, Expr, Result};

/// Largest degree accepted when converting an expression to a dense polynomial.
pub const MAX_DEGREE: usize = 100_000;

/// Coefficients are stored in ascending degree with no trailing zeros; the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    variable: String,
    coefficients: Vec<BigRational>,
}

impl Poly {
    pub fn new(variable: impl Into<String>, mut coefficients: Vec<BigRational>) -> Poly {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Poly { variable: variable.into(), coefficients }
    }

    pub fn from_i64(variable: impl Into<String>, coefficients: &[i64]) -> Poly {
        let cs = coefficients.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Poly::new(variable, cs)
    }

    pub fn from_integers(variable: impl Into<String>, coefficients: &[BigInt]) -> Poly {
        let cs = coefficients.iter().cloned().map(BigRational::from_integer).collect();
        Poly::new(variable, cs)
    }

    pub fn constant(variable: impl Into<String>, c: BigRational) -> Poly {
        Poly::new(variable, vec![c])
    }

    /// `x^n + c`.
    pub fn binomial(variable: impl Into<String>, n: usize, c: i64) -> Poly {
        let mut cs = vec![BigRational::zero(); n + 1];
        cs[0] += BigRational::from_integer(BigInt::from(c));
        cs[n] += BigRational::one();
        Poly::new(variable, cs)
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coefficients.last()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(self.variable.clone(), vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.variable.clone(), out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coefficients.len().max(other.coefficients.len());
        let zero = BigRational::zero();
        let out = (0..n)
            .map(|i| {
                self.coefficients.get(i).unwrap_or(&zero) - other.coefficients.get(i).unwrap_or(&zero)
            })
            .collect();
        Poly::new(self.variable.clone(), out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coefficients.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Poly::new(self.variable.clone(), vec![]), self.clone());
        };
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coefficients.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        (Poly::new(self.variable.clone(), quot), Poly::new(self.variable.clone(), rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Splits off the rational content: `self = content * primitive`, where
    /// the primitive part has coprime integer coefficients and a positive
    /// leading coefficient.
    pub fn primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), vec![]);
        }
        let lcm = self.coefficients.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coefficients.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let content = BigRational::new(g.clone(), lcm);
        (content, ints.into_iter().map(|c| c / &g).collect())
    }

    /// Reads a univariate polynomial out of an expression after expansion.
    pub fn from_expr(e: &Expr) -> Result<Poly> {
        let expanded = expand(e)?;
        let symbols = expanded.free_symbols();
        if symbols.len() > 1 {
            let names: Vec<_> = symbols.into_iter().collect();
            return Err(CasError::NotPolynomial(format!("several variables ({})", names.join(", "))));
        }
        let var = symbols.into_iter().next().unwrap_or_else(|| "x".to_string());
        let terms = match expanded {
            Expr::Add(ts) => ts,
            other => vec![other],
        };
        let mut coefficients: Vec<BigRational> = Vec::new();
        for t in terms {
            let (c, rest) = split_coeff(t);
            let degree = match &rest {
                r if r.is_one() => 0,
                Expr::Symbol(_) => 1,
                Expr::Pow(b, x) if matches!(b.as_ref(), Expr::Symbol(_)) => match x.as_rational() {
                    Some(r) if r.is_integer() && !r.is_negative() => {
                        r.to_integer().to_usize().filter(|&n| n <= MAX_DEGREE).ok_or(CasError::ExprTooLarge)?
                    }
                    _ => return Err(CasError::NotPolynomial(format!("term `{}`", expr_to_text(&rest)))),
                },
                other => return Err(CasError::NotPolynomial(format!("term `{}`", expr_to_text(other)))),
            };
            if coefficients.len() <= degree {
                coefficients.resize(degree + 1, BigRational::zero());
            }
            coefficients[degree] += c;
        }
        Ok(Poly::new(var, coefficients))
    }

    /// Canonical expression, highest degree first.
    pub fn to_expr(&self) -> Expr {
        let x = Expr::Symbol(self.variable.clone());
        let mut terms = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => {
                    terms.push(Expr::Rational(c.clone()));
                    continue;
                }
                1 => x.clone(),
                _ => Expr::pow(x.clone(), Expr::int(k as i64)),
            };
            terms.push(if c.is_one() {
                monomial
            } else {
                Expr::Mul(vec![Expr::Rational(c.clone()), monomial])
            });
        }
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap(),
            _ => Expr::Add(terms),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{parse_expr, simplify};

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::from_i64("x", &[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::from_i64("x", &[0, 0]).degree(), None);
    }

    #[test]
    fn division_with_remainder() {
        let p = Poly::from_i64("x", &[-1, 0, 0, 1]);
        let (q, r) = p.div_rem(&Poly::from_i64("x", &[-1, 1]));
        assert_eq!(q, Poly::from_i64("x", &[1, 1, 1]));
        assert!(r.is_zero());
        let (_, r) = p.div_rem(&Poly::from_i64("x", &[1, 0, 1]));
        assert_eq!(r, Poly::from_i64("x", &[-1, -1]));
    }

    #[test]
    fn primitive_part() {
        let p = Poly::new("x", vec![BigRational::new((-1).into(), 2.into()), BigRational::zero(), BigRational::new((-3).into(), 2.into())]);
        let (content, prim) = p.primitive();
        assert_eq!(content, BigRational::new((-1).into(), 2.into()));
        assert_eq!(prim, vec![BigInt::from(1), BigInt::from(0), BigInt::from(3)]);
    }

    #[test]
    fn expression_round_trip() {
        let e = parse_expr("(x-1)*(x+1)*(2*x+3)").unwrap();
        let p = Poly::from_expr(&e).unwrap();
        assert_eq!(p, Poly::from_i64("x", &[-3, -2, 3, 2]));
        assert_eq!(p.to_expr(), simplify(&p.to_expr()).unwrap());
        assert_eq!(p.to_expr(), crate::cas::expand(&e).unwrap());
    }

    #[test]
    fn non_polynomials_rejected() {
        for src in ["x*y", "sin(x)", "1/x", "x^(1/2)"] {
            assert!(matches!(Poly::from_expr(&parse_expr(src).unwrap()), Err(CasError::NotPolynomial(_))), "{src}");
        }
        assert_eq!(Poly::from_expr(&parse_expr("7").unwrap()).unwrap().degree(), Some(0));
    }
}
