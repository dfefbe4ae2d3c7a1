//! Rendering expressions as TeX (for math-mode cells) or plain text.
//!
//! Both forms parse back through [`parse_expr`](super::parse_expr) to an
//! expression that simplifies to the same canonical tree.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Func};
use crate::math::tables;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Tex,
    Text,
}

/// TeX accepted by both the math translator and the command parser.
pub fn expr_to_tex(e: &Expr) -> String {
    Printer { style: Style::Tex }.expr(e)
}

/// Giac-style plain text, e.g. `(x-1)*(x+1)`.
pub fn expr_to_text(e: &Expr) -> String {
    Printer { style: Style::Text }.expr(e)
}

struct Printer {
    style: Style,
}

impl Printer {
    fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::Rational(r) => self.rational(r),
            Expr::Symbol(s) => self.symbol(s),
            Expr::Call(f, a) => self.call(*f, a),
            Expr::Pow(_, x) if x.is_negative_rational() => self.product(std::slice::from_ref(e)),
            Expr::Pow(b, x) => self.power(b, x),
            Expr::Mul(fs) => self.product(fs),
            Expr::Add(ts) => self.sum(ts),
        }
    }

    fn sum(&self, terms: &[Expr]) -> String {
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            let (negative, body) = self.signed(t);
            if negative {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            out.push_str(&body);
        }
        out
    }

    /// Splits a leading minus sign off a term.
    fn signed(&self, t: &Expr) -> (bool, String) {
        match t {
            Expr::Rational(r) if r.is_negative() => (true, self.rational(&-r)),
            Expr::Mul(fs) => match fs.first() {
                Some(Expr::Rational(c)) if c.is_negative() => {
                    let mut flipped = fs.clone();
                    flipped[0] = Expr::Rational(-c);
                    (true, self.product(&flipped))
                }
                _ => (false, self.product(fs)),
            },
            _ => (false, self.expr(t)),
        }
    }

    fn product(&self, factors: &[Expr]) -> String {
        let mut coeff = BigRational::one();
        let mut numer: Vec<String> = Vec::new();
        let mut denom: Vec<String> = Vec::new();
        for f in factors {
            match f {
                Expr::Rational(r) => coeff *= r,
                Expr::Pow(b, x) if x.is_negative_rational() => {
                    let flipped = -x.as_rational().unwrap();
                    if flipped.is_one() {
                        denom.push(self.factor(b));
                    } else {
                        denom.push(self.power(b, &Expr::Rational(flipped)));
                    }
                }
                other => numer.push(self.factor(other)),
            }
        }
        let negative = coeff.is_negative();
        let coeff = coeff.abs();
        if !coeff.numer().is_one() || numer.is_empty() {
            numer.insert(0, coeff.numer().to_string());
        }
        if !coeff.denom().is_one() {
            denom.insert(0, coeff.denom().to_string());
        }
        let sep = match self.style {
            Style::Tex => "\\cdot ",
            Style::Text => "*",
        };
        let numer_s = numer.join(sep);
        let body = if denom.is_empty() {
            numer_s
        } else {
            let denom_s = denom.join(sep);
            match self.style {
                Style::Tex => format!("\\frac{{{numer_s}}}{{{denom_s}}}"),
                Style::Text if denom.len() > 1 => format!("{numer_s}/({denom_s})"),
                Style::Text => format!("{numer_s}/{denom_s}"),
            }
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }

    /// A product factor: sums need parentheses.
    fn factor(&self, e: &Expr) -> String {
        match e {
            Expr::Add(_) => format!("({})", self.expr(e)),
            Expr::Rational(r) if r.is_negative() || !r.is_integer() => format!("({})", self.expr(e)),
            _ => self.expr(e),
        }
    }

    fn power(&self, base: &Expr, exp: &Expr) -> String {
        let base_s = if is_atomic(base) {
            self.expr(base)
        } else {
            format!("({})", self.expr(base))
        };
        match self.style {
            Style::Tex => format!("{base_s}^{{{}}}", self.expr(exp)),
            Style::Text if is_atomic(exp) => format!("{base_s}^{}", self.expr(exp)),
            Style::Text => format!("{base_s}^({})", self.expr(exp)),
        }
    }

    fn call(&self, f: Func, arg: &Expr) -> String {
        let a = self.expr(arg);
        match (self.style, f) {
            (Style::Tex, Func::Sqrt) => format!("\\sqrt{{{a}}}"),
            (Style::Tex, Func::Abs) => format!("\\left|{a}\\right|"),
            (Style::Tex, _) => format!("\\{}({a})", f.name()),
            (Style::Text, _) => format!("{}({a})", f.name()),
        }
    }

    fn rational(&self, r: &BigRational) -> String {
        if r.is_integer() {
            return r.numer().to_string();
        }
        let sign = if r.is_negative() { "-" } else { "" };
        let (n, d) = (r.numer().abs(), r.denom());
        match self.style {
            Style::Tex => format!("{sign}\\frac{{{n}}}{{{d}}}"),
            Style::Text => format!("{sign}{n}/{d}"),
        }
    }

    fn symbol(&self, s: &str) -> String {
        match self.style {
            Style::Text => s.to_string(),
            Style::Tex if s.chars().count() == 1 => s.to_string(),
            Style::Tex if tables::greek(s).is_some() => format!("\\{s}"),
            Style::Tex => format!("\\mathrm{{{s}}}"),
        }
    }
}

fn is_atomic(e: &Expr) -> bool {
    match e {
        Expr::Symbol(_) => true,
        Expr::Rational(r) => r.is_integer() && !r.is_negative(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{parse_expr, simplify};

    fn tex(src: &str) -> String {
        expr_to_tex(&simplify(&parse_expr(src).unwrap()).unwrap())
    }

    #[test]
    fn rational_as_fraction() {
        assert_eq!(expr_to_tex(&Expr::ratio(1, 2)), "\\frac{1}{2}");
        assert_eq!(expr_to_tex(&Expr::ratio(-1, 2)), "-\\frac{1}{2}");
    }

    #[test]
    fn power_braces_exponent() {
        let e = Expr::pow(Expr::symbol("x"), Expr::int(10));
        assert_eq!(expr_to_tex(&e), "x^{10}");
        assert_eq!(expr_to_text(&e), "x^10");
    }

    #[test]
    fn product_of_sums_in_given_order() {
        let x = Expr::symbol("x");
        let e = Expr::Mul(vec![
            Expr::Add(vec![x.clone(), Expr::int(1)]),
            Expr::Add(vec![x, Expr::int(-1)]),
        ]);
        assert_eq!(expr_to_tex(&e), "(x+1)\\cdot (x-1)");
        assert_eq!(expr_to_text(&e), "(x+1)*(x-1)");
    }

    #[test]
    fn polynomial_layout() {
        assert_eq!(tex("(x+1)^2"), "(x+1)^{2}");
        assert_eq!(tex("x^2+2*x+1"), "x^{2}+2\\cdot x+1");
        assert_eq!(tex("x^4-x^3+x^2-x+1"), "x^{4}-x^{3}+x^{2}-x+1");
    }

    #[test]
    fn quotients() {
        assert_eq!(tex("1/x"), "\\frac{1}{x}");
        assert_eq!(tex("-x/2"), "-\\frac{x}{2}");
        assert_eq!(tex("3*x/(2*y^2)"), "\\frac{3\\cdot x}{2\\cdot y^{2}}");
        assert_eq!(expr_to_text(&simplify(&parse_expr("3*x/(2*y^2)").unwrap()).unwrap()), "3*x/(2*y^2)");
    }

    #[test]
    fn functions_and_symbols() {
        assert_eq!(tex("sin(x)+abs(y)"), "\\sin(x)+\\left|y\\right|");
        assert_eq!(tex("sqrt(z)"), "\\sqrt{z}");
        assert_eq!(expr_to_tex(&Expr::symbol("alpha")), "\\alpha");
        assert_eq!(expr_to_tex(&Expr::symbol("ab")), "\\mathrm{ab}");
    }
}
