use castml_core::cas::{evaluate, expr_to_tex, factor_poly, parse_expr, simplify, EvalRequest, Mode, Poly, Status};
use castml_core::html::EmitOptions;
use castml_core::math::translate_span;
use castml_core::tex::{detokenize, parse_source, scan_cells, tokenize_lenient, CellMode};
use castml_core::compile;
use proptest::prelude::*;

fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        (1i64..9, 1i64..9).prop_map(|(a, b)| format!("({a}/{b})")),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}-{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}*{b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp({a})")),
            inner.prop_map(|a| format!("(-{a})")),
        ]
    })
}

fn sup_tex() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        "[a-z]".prop_map(String::from),
        "[0-9]".prop_map(String::from),
        Just(r"\alpha".to_string()),
    ];
    atom.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(b, e)| format!("{{{b}}}^{{{e}}}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}+{b}")),
            (inner.clone(), inner).prop_map(|(a, b)| format!(r"\frac{{{a}}}{{{b}}}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn simplify_is_idempotent(src in expr_source()) {
        let e = parse_expr(&src).unwrap();
        if let Ok(once) = simplify(&e) {
            prop_assert_eq!(simplify(&once).unwrap(), once);
        }
    }

    #[test]
    fn tex_output_reparses_to_the_same_expression(src in expr_source()) {
        let e = parse_expr(&src).unwrap();
        if let Ok(s) = simplify(&e) {
            let tex = expr_to_tex(&s);
            let back = parse_expr(&tex).unwrap_or_else(|err| panic!("{tex}: {err}"));
            prop_assert_eq!(simplify(&back).unwrap(), s, "{}", tex);
        }
    }

    #[test]
    fn factors_multiply_back(coeffs in prop::collection::vec(-9i64..10, 1..8)) {
        let p = Poly::from_i64("x", &coeffs);
        let f = factor_poly(&p);
        prop_assert_eq!(f.product(), p);
    }

    #[test]
    fn lexing_is_lossless(src in r"[ -~\n\t]{0,80}") {
        let (tokens, _) = tokenize_lenient(&src);
        prop_assert_eq!(detokenize(&tokens), src);
    }

    #[test]
    fn lexing_is_lossless_on_tex_like_input(
        parts in prop::collection::vec(
            prop_oneof![
                Just(r"\verb|a|"), Just(r"\verb+"), Just("$"), Just("$$"), Just("{"), Just("}"),
                Just("%c\n"), Just(r"\begin{verbatim}"), Just(r"\end{verbatim}"), Just(r"\\"),
                Just(r"\alpha "), Just("text "), Just("\n\n"), Just("é"),
            ],
            0..20,
        )
    ) {
        let src: String = parts.concat();
        let (tokens, _) = tokenize_lenient(&src);
        prop_assert_eq!(detokenize(&tokens), src);
    }

    #[test]
    fn translation_is_total_and_deterministic(src in ".{0,40}", display: bool) {
        let a = translate_span(&src, display);
        let b = translate_span(&src, display);
        prop_assert_eq!(&a.fragment.xml, &b.fragment.xml);
        let doc = roxmltree::Document::parse(&a.fragment.xml).unwrap();
        prop_assert_eq!(doc.root_element().tag_name().name(), "math");
        prop_assert_eq!(a.fallback, !a.diagnostics.is_empty() && a.fragment.xml.contains("data-math-error"));
    }

    #[test]
    fn one_msup_per_superscript(src in sup_tex()) {
        let t = translate_span(&src, false);
        prop_assert!(!t.fallback, "{}", src);
        prop_assert_eq!(t.fragment.xml.matches("<msup>").count(), src.matches('^').count(), "{}", src);
    }

    #[test]
    fn cells_are_numbered_in_source_order(
        items in prop::collection::vec((any::<bool>(), "[a-z0-9+*()^ ]{1,12}", "[A-Za-z ]{0,20}"), 0..12)
    ) {
        let mut src = String::from("\\input{giac.tex}\n\\begin{document}\n");
        let mut expected = Vec::new();
        for (math, cmd, text) in &items {
            let name = if *math { "giacinputmath" } else { "giacinput" };
            src.push_str(&format!("{text}\\{name}{{{cmd}}}\n"));
            if !cmd.trim().is_empty() {
                expected.push((*math, cmd.trim().to_string()));
            }
        }
        src.push_str("\\end{document}\n");
        let doc = parse_source(&src).unwrap();
        let scan = scan_cells(&doc.body);
        prop_assert_eq!(scan.cells.len(), expected.len());
        for (i, (cell, (math, cmd))) in scan.cells.iter().zip(&expected).enumerate() {
            prop_assert_eq!(&cell.id, &format!("c{}", i + 1));
            prop_assert_eq!(cell.mode, if *math { CellMode::Math } else { CellMode::Text });
            prop_assert_eq!(&cell.command, cmd);
        }
    }

    #[test]
    fn unknown_macro_arguments_survive(name in "[a-z]{3,8}", arg in "[A-Za-z]{1,12}") {
        prop_assume!(!matches!(name.as_str(), "verb" | "input" | "index" | "label" | "cite" | "ref" | "url" | "def" | "newcommand"));
        let src = format!("\\begin{{document}}\nsee \\zz{name}{{{arg}}} here\n\\end{{document}}\n");
        let out = compile(&src, &EmitOptions::default()).unwrap();
        prop_assert!(out.html.contains(&arg));
    }

    #[test]
    fn evaluate_is_total(cmd in ".{0,40}", mode in prop_oneof![Just(Mode::Math), Just(Mode::Text)]) {
        let resp = evaluate(&EvalRequest { id: "p".into(), command: cmd, mode });
        prop_assert_eq!(&resp.id, "p");
        if resp.status == Status::Error {
            prop_assert!(!resp.diagnostics.is_empty());
        }
    }
}
