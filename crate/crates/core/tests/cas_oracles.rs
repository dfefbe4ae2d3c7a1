use std::collections::HashMap;

use castml_core::cas::{
    diff, eval_numeric, evaluate, expand, factor_poly, parse_command, parse_expr, plot_svg, simplify, Command,
    EvalRequest, Expr, Func, Kind, Mode, Poly, Status, PLOT_SAMPLES,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact evaluation at a rational point; `None` when a function or a
/// non-integer power is involved.
fn eval_exact(e: &Expr, x: &BigRational) -> Option<BigRational> {
    Some(match e {
        Expr::Rational(r) => r.clone(),
        Expr::Symbol(_) => x.clone(),
        Expr::Add(ts) => ts.iter().map(|t| eval_exact(t, x)).sum::<Option<BigRational>>()?,
        Expr::Mul(fs) => fs.iter().map(|f| eval_exact(f, x)).product::<Option<BigRational>>()?,
        Expr::Pow(b, n) => {
            let b = eval_exact(b, x)?;
            let n = eval_exact(n, x)?;
            if !n.is_integer() {
                return None;
            }
            let k = n.to_integer().to_i32()?;
            if k < 0 && b.is_zero() {
                return None;
            }
            let mut acc = BigRational::one();
            for _ in 0..k.unsigned_abs() {
                acc *= &b;
            }
            if k < 0 {
                acc.recip()
            } else {
                acc
            }
        }
        Expr::Call(..) => return None,
    })
}

/// Schoolbook product of ascending coefficient lists.
fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn totient(n: usize) -> usize {
    (1..=n).filter(|k| gcd(*k, n) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn s(src: &str) -> Expr {
    simplify(&parse_expr(src).unwrap()).unwrap()
}

#[test]
fn parse_command_examples() {
    match parse_command("factor(x^10-1)").unwrap() {
        Command::Factor(e) => assert_eq!(simplify(&e).unwrap(), s("x^10 - 1")),
        other => panic!("{other:?}"),
    }
    assert_eq!(s("0"), Expr::Rational(q(0)));
    assert_eq!(s("2+3*4"), Expr::Rational(q(14)));
}

#[test]
fn simplify_examples() {
    assert_eq!(s("1/3 + 1/6"), Expr::Rational(BigRational::new(1.into(), 2.into())));
    assert_eq!(s("x + 0"), Expr::Symbol("x".into()));
}

#[test]
fn identity_vanishes_at_random_points_and_after_expansion() {
    let src = "(x+1)^2 - (x^2+2*x+1)";
    let raw = parse_expr(src).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let x = BigRational::new(rng.gen_range(-1000..1000).into(), rng.gen_range(1..100).into());
        assert_eq!(eval_exact(&raw, &x), Some(BigRational::zero()));
    }
    assert_eq!(simplify(&expand(&raw).unwrap()).unwrap(), Expr::Rational(q(0)));
}

#[test]
fn fifth_power_matches_repeated_multiplication() {
    let mut oracle = vec![q(1)];
    for _ in 0..5 {
        oracle = poly_mul(&oracle, &[q(1), q(1)]);
    }
    let p = Poly::from_expr(&expand(&parse_expr("(x+1)^5").unwrap()).unwrap()).unwrap();
    assert_eq!(p.coefficients(), oracle.as_slice());
    let ints: Vec<i64> = oracle.iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
    assert_eq!(ints, vec![1, 5, 10, 10, 5, 1]);
}

#[test]
fn cyclotomic_factorizations_multiply_back() {
    for n in 1..=64usize {
        let mut coeffs = vec![q(0); n + 1];
        coeffs[0] = q(-1);
        coeffs[n] = q(1);
        let p = Poly::new("x", coeffs.clone());
        let f = factor_poly(&p);
        let product = f.factors.iter().fold(vec![q(1)], |acc, g| poly_mul(&acc, g.coefficients()));
        assert_eq!(product, coeffs, "x^{n}-1");
        let mut degrees: Vec<usize> = f.factors.iter().map(|g| g.degree().unwrap()).collect();
        let mut expected: Vec<usize> = (1..=n).filter(|d| n % d == 0).map(totient).collect();
        degrees.sort_unstable();
        expected.sort_unstable();
        assert_eq!(degrees, expected, "x^{n}-1");
        assert!(f.complete);
    }
}

#[test]
fn factor_small_examples() {
    let f = factor_poly(&Poly::from_i64("x", &[-1, 1]));
    assert_eq!(f.factors.len(), 1);
    let f = factor_poly(&Poly::from_i64("x", &[-1, 0, 1]));
    let mut roots: Vec<_> = f.factors.iter().map(|g| g.coefficients()[0].clone()).collect();
    roots.sort();
    assert_eq!(roots, vec![q(-1), q(1)]);
}

#[test]
fn factor_x10_payload_expands_back() {
    let resp = evaluate(&EvalRequest { id: "c1".into(), command: "factor(x^10-1)".into(), mode: Mode::Math });
    assert_eq!(resp.status, Status::Ok);
    assert_eq!(resp.kind, Kind::Tex);
    assert_eq!(
        resp.payload,
        r"(x-1)\cdot (x+1)\cdot (x^{4}+x^{3}+x^{2}+x+1)\cdot (x^{4}-x^{3}+x^{2}-x+1)"
    );
    let reparsed = parse_expr(&resp.payload).unwrap();
    let p = Poly::from_expr(&expand(&reparsed).unwrap()).unwrap();
    let mut target = vec![q(0); 11];
    target[0] = q(-1);
    target[10] = q(1);
    assert_eq!(p.coefficients(), target.as_slice());
}

fn central_difference(e: &Expr, x: f64) -> f64 {
    let h = f64::EPSILON.cbrt() * x.abs().max(1.0);
    let at = |v: f64| eval_numeric(e, &HashMap::from([("x".to_string(), v)])).unwrap();
    (at(x + h) - at(x - h)) / (2.0 * h)
}

#[test]
fn derivative_examples() {
    assert_eq!(diff(&parse_expr("sin(x)").unwrap(), "x").unwrap(), s("cos(x)"));
    assert_eq!(diff(&parse_expr("c").unwrap(), "x").unwrap(), Expr::Rational(q(0)));
    let e = parse_expr("x*sin(x)").unwrap();
    let d = diff(&e, "x").unwrap();
    assert_eq!(d, s("sin(x) + x*cos(x)"));
    let symbolic = eval_numeric(&d, &HashMap::from([("x".to_string(), 0.7)])).unwrap();
    let numeric = central_difference(&e, 0.7);
    assert!(((symbolic - numeric) / symbolic).abs() < 1e-6);
    assert!(diff(&parse_expr("x^x").unwrap(), "x").is_err());
}

#[test]
fn numeric_examples() {
    let none = HashMap::new();
    assert_eq!(eval_numeric(&parse_expr("sin(0)").unwrap(), &none).unwrap(), 0.0);
    let e1 = eval_numeric(&Expr::Call(Func::Exp, Box::new(Expr::Rational(q(1)))), &none).unwrap();
    assert!((e1 - 1f64.exp()).abs() < 1e-12);
    assert!(eval_numeric(&parse_expr("y").unwrap(), &none).is_err());
    let ln = eval_numeric(&parse_expr("ln(0-1)").unwrap(), &none).unwrap();
    assert!(!ln.is_finite());
}

#[test]
fn plot_of_sine_has_all_samples_within_unit_range() {
    let e = parse_expr("sin(x)").unwrap();
    let plot = plot_svg(&e, "x", -5.0, 5.0).unwrap();
    assert_eq!(plot.segments.len(), 1);
    assert_eq!(plot.segments[0].len(), PLOT_SAMPLES);
    for (x, y) in &plot.segments[0] {
        assert!((y - x.sin()).abs() < 1e-12);
    }
    let (lo, hi) = plot.y_range;
    assert!((lo + 1.0).abs() < 1e-3 && (hi - 1.0).abs() < 1e-3);
    let doc = roxmltree::Document::parse(&plot.svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let points = doc.descendants().find(|n| n.has_tag_name("polyline")).unwrap().attribute("points").unwrap();
    assert_eq!(points.split_whitespace().count(), PLOT_SAMPLES);
}

#[test]
fn plot_constant_and_singular() {
    let flat = plot_svg(&parse_expr("1").unwrap(), "x", -5.0, 5.0).unwrap();
    assert!(flat.segments[0].iter().all(|(_, y)| *y == 1.0));
    let split = plot_svg(&parse_expr("1/x").unwrap(), "x", -1.0, 1.0).unwrap();
    assert!(split.segments.len() >= 2);
    let invalid = plot_svg(&parse_expr("ln(0-1-x^2)").unwrap(), "x", -1.0, 1.0).unwrap();
    assert!(invalid.segments.is_empty());
    assert_eq!(invalid.y_range, (-1.0, 1.0));
    assert!(!invalid.diagnostics.is_empty());
}

#[test]
fn protocol_examples() {
    let plot = evaluate(&EvalRequest { id: "c2".into(), command: "plot(sin(x))".into(), mode: Mode::Text });
    assert_eq!((plot.status, plot.kind), (Status::Ok, Kind::Svg));
    assert!(plot.payload.starts_with("<svg"));
    let empty = evaluate(&EvalRequest { id: "c3".into(), command: "".into(), mode: Mode::Text });
    assert_eq!(empty.status, Status::Error);
    assert_eq!(empty.id, "c3");
}

#[test]
fn protocol_json_field_names_are_exact() {
    let req: EvalRequest = serde_json::from_str(r#"{"id":"c1","command":"2+2","mode":"math"}"#).unwrap();
    let resp = evaluate(&req);
    let v: serde_json::Value = serde_json::to_value(&resp).unwrap();
    let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, vec!["diagnostics", "id", "kind", "payload", "status"]);
    assert_eq!(v["payload"], "4");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["kind"], "tex");
    assert!(serde_json::from_str::<EvalRequest>(r#"{"id":"c1","command":"1","mode":"math","x":1}"#).is_err());
    assert!(serde_json::from_str::<EvalRequest>(r#"{"id":"c1","command":"1","mode":"MATH"}"#).is_err());
}

#[test]
fn exact_rational_arithmetic_has_no_rounding() {
    let e = s("1/3 + 1/3 + 1/3 - 1");
    assert_eq!(e, Expr::Rational(q(0)));
    let big = s("2^200 + 1 - 2^200");
    assert_eq!(big, Expr::Rational(q(1)));
    assert!(s("0.1 + 0.2 - 0.3").as_rational().is_some_and(|r| r.is_zero()));
    assert!(!s("1/7").as_rational().unwrap().is_negative());
}
