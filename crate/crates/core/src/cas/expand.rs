//! Distribution of products over sums and of integer powers of sums.

use num_traits::{Signed, ToPrimitive};

use super::simplify::{add, call, mul, pow, simplify};
use super::{check_size, CasError, Expr, Result, MAX_NODES};

/// Maximum number of term-by-term products one expansion may form.
pub const EXPAND_BUDGET: usize = 100_000;

/// Expands products and integer powers of sums.
///
/// The result holds no product with a sum factor and no sum raised to an
/// integer power of two or more. Negative integer powers of sums are expanded
/// inside the reciprocal.
pub fn expand(e: &Expr) -> Result<Expr> {
    let e = simplify(e)?;
    let mut budget = Budget { remaining: EXPAND_BUDGET };
    let out = budget.expand(&e)?;
    check_size(&out)?;
    Ok(out)
}

/// Caps the number of term products formed, bounding time and memory.
struct Budget {
    remaining: usize,
}

impl Budget {
    fn spend(&mut self, n: usize) -> Result<()> {
        self.remaining = self.remaining.checked_sub(n).ok_or(CasError::ExprTooLarge)?;
        Ok(())
    }

    fn expand(&mut self, e: &Expr) -> Result<Expr> {
        match e {
            Expr::Rational(_) | Expr::Symbol(_) => Ok(e.clone()),
            Expr::Call(f, a) => Ok(call(*f, self.expand(a)?)),
            Expr::Add(ts) => add(ts.iter().map(|t| self.expand(t)).collect::<Result<_>>()?),
            Expr::Mul(fs) => {
                let parts = fs.iter().map(|f| self.expand(f)).collect::<Result<Vec<_>>>()?;
                let mut acc = Expr::one();
                for p in &parts {
                    acc = self.multiply(&acc, p)?;
                }
                Ok(acc)
            }
            Expr::Pow(b, x) => {
                let base = self.expand(b)?;
                let exp = self.expand(x)?;
                let n = match (&base, exp.as_rational()) {
                    (Expr::Add(_), Some(r)) if r.is_integer() => r.to_integer(),
                    _ => return pow(base, exp),
                };
                let k = n.abs().to_u64().filter(|k| *k <= MAX_NODES as u64).ok_or(CasError::ExprTooLarge)?;
                if monomial_bound(terms(&base).len() as u64, k) > MAX_NODES as u64 {
                    return Err(CasError::ExprTooLarge);
                }
                let mut acc = base.clone();
                for _ in 1..k {
                    acc = self.multiply(&acc, &base)?;
                }
                if n.is_negative() {
                    pow(acc, Expr::int(-1))
                } else {
                    Ok(acc)
                }
            }
        }
    }

    /// Product of two expanded expressions, distributed term by term.
    fn multiply(&mut self, a: &Expr, b: &Expr) -> Result<Expr> {
        let ta = terms(a);
        let tb = terms(b);
        self.spend(ta.len().saturating_mul(tb.len()))?;
        let mut out = Vec::with_capacity(ta.len() * tb.len());
        for x in ta {
            for y in tb {
                out.push(mul(vec![x.clone(), y.clone()])?);
            }
        }
        add(out)
    }
}

/// Upper bound on the number of terms of an `m`-term sum raised to `k`,
/// `C(k+m-1, m-1)`, saturating.
fn monomial_bound(m: u64, k: u64) -> u64 {
    let r = m.saturating_sub(1).min(k);
    let n = k + m.saturating_sub(1);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

fn terms(e: &Expr) -> &[Expr] {
    match e {
        Expr::Add(ts) => ts,
        other => std::slice::from_ref(other),
    }
}
