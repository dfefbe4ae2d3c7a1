//! Factorization of univariate polynomials over the rationals.
//!
//! Deliberately partial:
//! - `x^n - 1` and `x^n + 1` (n ≤ 64) split completely into cyclotomic
//!   polynomials, each obtained by exact division of `x^d - 1` by the
//!   cyclotomic factors of the proper divisors of `d`;
//! - rational roots are peeled off as linear factors;
//! - whatever remains is returned as is and flagged incomplete, unless its
//!   degree is at most 3 (no rational root then means irreducible).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::simplify::simplify;
use super::{CasError, Expr, Poly, Result};

const MAX_CYCLOTOMIC_N: usize = 64;
/// Integers with more bits than this are not trial-factored for root search.
const MAX_TRIAL_BITS: u64 = 40;
const MAX_ROOT_CANDIDATES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Factors in display order; an optional constant comes first.
    pub factors: Vec<Poly>,
    /// `false` when a factor of degree ≥ 4 may still be reducible.
    pub complete: bool,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        let var = self.factors.first().map_or("x", |f| f.variable()).to_string();
        self.factors.iter().fold(Poly::from_i64(var, &[1]), |acc, f| acc.mul(f))
    }

    /// The factors as an unsimplified product, repeated factors as powers.
    pub fn to_expr(&self) -> Expr {
        let mut items: Vec<Expr> = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let f = &self.factors[i];
            let mut k = 1;
            while i + k < self.factors.len() && self.factors[i + k] == *f {
                k += 1;
            }
            let e = f.to_expr();
            items.push(if k == 1 { e } else { Expr::pow(e, Expr::int(k as i64)) });
            i += k;
        }
        match items.len() {
            0 => Expr::one(),
            1 => items.pop().unwrap(),
            _ => Expr::Mul(items),
        }
    }
}

/// Factors `p`. The product of the returned factors always equals `p`.
pub fn factor_poly(p: &Poly) -> Factorization {
    let var = p.variable().to_string();
    if p.degree().unwrap_or(0) == 0 {
        return Factorization { factors: vec![p.clone()], complete: true };
    }
    let (content, mut prim) = p.primitive();
    let mut factors = Vec::new();
    if !content.is_one() {
        factors.push(Poly::constant(var.clone(), content));
    }
    let zeros = prim.iter().take_while(|c| c.is_zero()).count();
    factors.extend(std::iter::repeat_n(Poly::from_i64(var.clone(), &[0, 1]), zeros));
    prim.drain(..zeros);

    let mut cache = BTreeMap::new();
    let complete = factor_primitive(&var, Poly::from_integers(var.clone(), &prim), &mut cache, &mut factors);
    let out = Factorization { factors, complete };
    if out.product() != *p {
        // Unreachable if the arithmetic above is right; never return a wrong product.
        return Factorization { factors: vec![p.clone()], complete: false };
    }
    out
}

/// Factors a primitive integer polynomial with non-zero constant term.
fn factor_primitive(var: &str, mut p: Poly, cache: &mut BTreeMap<usize, Poly>, out: &mut Vec<Poly>) -> bool {
    loop {
        let degree = p.degree().unwrap_or(0);
        if degree <= 1 {
            if degree == 1 {
                out.push(p);
            }
            return true;
        }
        if let Some(factors) = cyclotomic_split(var, &p, cache) {
            out.extend(factors);
            return true;
        }
        let ints: Vec<BigInt> = p.coefficients().iter().map(|c| c.to_integer()).collect();
        match rational_root(&ints) {
            RootSearch::Found(num, den) => {
                let linear = Poly::from_integers(var, &[-num, den]);
                p = p.exact_div(&linear).expect("a rational root gives an exact linear factor");
                out.push(linear);
            }
            RootSearch::NoRoot => {
                out.push(p);
                return degree <= 3;
            }
            RootSearch::GaveUp => {
                out.push(p);
                return false;
            }
        }
    }
}

/// Splits `x^n - 1` or `x^n + 1` into cyclotomic factors, ascending in index.
fn cyclotomic_split(var: &str, p: &Poly, cache: &mut BTreeMap<usize, Poly>) -> Option<Vec<Poly>> {
    let cs = p.coefficients();
    let n = cs.len() - 1;
    if n == 0 || n > MAX_CYCLOTOMIC_N || !cs[n].is_one() || !cs[1..n].iter().all(Zero::is_zero) {
        return None;
    }
    let indices: Vec<usize> = if cs[0] == -BigRational::one() {
        divisors(n)
    } else if cs[0].is_one() {
        divisors(2 * n).into_iter().filter(|d| !n.is_multiple_of(*d)).collect()
    } else {
        return None;
    };
    Some(indices.into_iter().map(|d| cyclotomic(var, d, cache)).collect())
}

/// The d-th cyclotomic polynomial, by exact division of `x^d - 1`.
pub(crate) fn cyclotomic(var: &str, d: usize, cache: &mut BTreeMap<usize, Poly>) -> Poly {
    if let Some(p) = cache.get(&d) {
        return p.clone();
    }
    let mut q = Poly::binomial(var, d, -1);
    for e in divisors(d).into_iter().filter(|&e| e < d) {
        let phi = cyclotomic(var, e, cache);
        q = q.exact_div(&phi).expect("cyclotomic factors divide x^d - 1");
    }
    cache.insert(d, q.clone());
    q
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

enum RootSearch {
    Found(BigInt, BigInt),
    NoRoot,
    GaveUp,
}

/// Looks for a root `num/den` of an integer polynomial (ascending
/// coefficients, non-zero constant term), smallest magnitude first.
fn rational_root(cs: &[BigInt]) -> RootSearch {
    let n = cs.len() - 1;
    let (Some(ps), Some(qs)) = (positive_divisors(&cs[0]), positive_divisors(&cs[n])) else {
        return RootSearch::GaveUp;
    };
    if ps.len().saturating_mul(qs.len()) > MAX_ROOT_CANDIDATES {
        return RootSearch::GaveUp;
    }
    let mut candidates: Vec<BigRational> = Vec::with_capacity(2 * ps.len() * qs.len());
    for p in &ps {
        for q in &qs {
            if p.gcd(q).is_one() {
                let r = BigRational::new(p.clone(), q.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
    }
    candidates.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    for r in candidates {
        let (num, den) = (r.numer(), r.denom());
        // q^n f(p/q) = sum a_i p^i q^(n-i), evaluated by Horner's rule
        let mut acc = cs[n].clone();
        let mut qpow = BigInt::one();
        for a in cs[..n].iter().rev() {
            qpow *= den;
            acc = acc * num + a * &qpow;
        }
        if acc.is_zero() {
            return RootSearch::Found(num.clone(), den.clone());
        }
    }
    RootSearch::NoRoot
}

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > MAX_TRIAL_BITS {
        return None;
    }
    let n = n.to_u64()?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Factors an expression that is a univariate polynomial. Anything else is
/// returned simplified, with a diagnostic.
pub fn factor_expr(e: &Expr) -> Result<(Expr, Vec<String>)> {
    let simplified = simplify(e)?;
    match Poly::from_expr(&simplified) {
        Ok(p) => {
            let f = factor_poly(&p);
            let mut diagnostics = Vec::new();
            if !f.complete {
                diagnostics.push("not fully factored: a remaining factor may still be reducible".to_string());
            }
            Ok((f.to_expr(), diagnostics))
        }
        Err(CasError::NotPolynomial(why)) => {
            Ok((simplified, vec![format!("factor: not a univariate polynomial ({why}); returned unchanged")]))
        }
        Err(other) => Err(other),
    }
}
