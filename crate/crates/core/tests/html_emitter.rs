use castml_core::html::{build_index, build_toc, emit_cell, slugify, EmitOptions};
use castml_core::tex::{parse_source, CellMode, GiacCell};
use castml_core::{compile, Compiled};
use scraper::{Html, Selector};

const SAMPLE: &str = include_str!("data/sample.tex");

fn sel(s: &str) -> Selector {
    Selector::parse(s).unwrap()
}

fn sample() -> (Compiled, Html) {
    let out = compile(SAMPLE, &EmitOptions::default()).unwrap();
    let html = Html::parse_document(&out.html);
    (out, html)
}

#[test]
fn output_parses_without_errors() {
    let (out, html) = sample();
    assert!(html.errors.is_empty(), "{:?}", html.errors);
    assert!(!out.has_errors(), "{:?}", out.diagnostics);
    assert!(out.html.starts_with("<!DOCTYPE html>"));
    assert_eq!(html.select(&sel("title")).next().unwrap().text().collect::<String>(), "Sample");
}

#[test]
fn every_cell_becomes_one_placeholder() {
    let (out, html) = sample();
    let cells: Vec<_> = html.select(&sel("div.giac-cell")).collect();
    assert_eq!(cells.len(), out.cells.len());
    assert_eq!(cells.len(), 2);
    let ids: Vec<_> = cells.iter().map(|c| c.value().attr("data-giac-id").unwrap()).collect();
    let modes: Vec<_> = cells.iter().map(|c| c.value().attr("data-giac-mode").unwrap()).collect();
    assert_eq!(ids, ["c1", "c2"]);
    assert_eq!(modes, ["math", "text"]);
    let inputs: Vec<_> = html.select(&sel("div.giac-cell > input.giac-in")).map(|i| i.value().attr("value").unwrap()).collect();
    assert_eq!(inputs, ["factor(x^4-1)", "plot(sin(x))"]);
    assert_eq!(html.select(&sel("div.giac-cell > button.giac-run")).count(), 2);
    assert_eq!(html.select(&sel("div.giac-cell > div.giac-out")).count(), 2);
}

#[test]
fn one_math_element_per_span() {
    let (out, html) = sample();
    assert_eq!(out.math_spans, 3);
    assert_eq!(html.select(&sel("math")).count(), 3);
    assert_eq!(html.select(&sel("div.display-math > math[display=block]")).count(), 1);
}

#[test]
fn verbatim_text_is_preserved() {
    let (_, html) = sample();
    let pre = html.select(&sel("pre.verbatim")).next().unwrap();
    assert_eq!(pre.text().collect::<String>(), "<tag> & \"quotes\"\n  indented \\verb|x|\n");
    let code: Vec<String> = html.select(&sel("code.verb")).map(|c| c.text().collect()).collect();
    assert_eq!(code, ["a<b"]);
}

#[test]
fn toc_links_to_unique_anchors() {
    let (_, html) = sample();
    let links: Vec<_> = html.select(&sel("nav.toc a")).map(|a| a.value().attr("href").unwrap().to_string()).collect();
    assert_eq!(links, ["#first-steps", "#plots-more", "#first-steps-2"]);
    for l in &links {
        assert_eq!(html.select(&sel(&format!("[id=\"{}\"]", &l[1..]))).count(), 1, "{l}");
    }
}

#[test]
fn index_and_footnotes_link_back() {
    let (_, html) = sample();
    let index: Vec<String> = html.select(&sel("section.index li")).map(|li| li.text().collect()).collect();
    assert!(index.iter().any(|t| t.contains("term")));
    let href = html.select(&sel("section.index a")).next().unwrap().value().attr("href").unwrap();
    assert_eq!(html.select(&sel(&format!("[id=\"{}\"]", &href[1..]))).count(), 1);
    assert_eq!(html.select(&sel("[id=\"fn:1\"]")).count(), 1);
    assert_eq!(html.select(&sel("[id=\"fnref:1\"]")).count(), 1);
}

#[test]
fn unknown_macro_keeps_its_argument_and_warns() {
    let (out, html) = sample();
    let body: String = html.select(&sel("main")).next().unwrap().text().collect();
    assert!(body.contains("kept"));
    assert!(out.diagnostics.iter().any(|d| d.message.contains("unknownmacro")));
}

#[test]
fn emission_is_deterministic() {
    let a = compile(SAMPLE, &EmitOptions::default()).unwrap();
    let b = compile(SAMPLE, &EmitOptions::default()).unwrap();
    assert_eq!(a.html, b.html);
}

#[test]
fn runtime_is_linked_when_not_standalone() {
    let opts = EmitOptions { standalone: false, runtime_path: "rt.js".into(), ..EmitOptions::default() };
    let out = compile(SAMPLE, &opts).unwrap();
    let html = Html::parse_document(&out.html);
    assert_eq!(html.select(&sel("script[src=\"rt.js\"]")).count(), 1);
}

#[test]
fn giac_macros_without_the_package_are_inert() {
    let src = "\\begin{document}\n\\giacinputmath{1+1}\n\\end{document}\n";
    let out = compile(src, &EmitOptions::default()).unwrap();
    assert!(out.cells.is_empty());
    assert_eq!(Html::parse_document(&out.html).select(&sel(".giac-cell")).count(), 0);
    assert!(out.diagnostics.iter().any(|d| !d.is_error()));
}

#[test]
fn cell_markup_escapes_the_command() {
    let cell = GiacCell {
        id: "c7".into(),
        mode: CellMode::Text,
        command: "a<\"b\"&".into(),
        inside_giacjshere: true,
        position: Default::default(),
    };
    let html = Html::parse_fragment(&emit_cell(&cell));
    let input = html.select(&sel("input.giac-in")).next().unwrap();
    assert_eq!(input.value().attr("value"), Some("a<\"b\"&"));
}

#[test]
fn outline_helpers() {
    assert_eq!(slugify("Plots & more"), "plots-more");
    assert_eq!(slugify("!!!"), "section");
    let doc = parse_source(SAMPLE).unwrap();
    let toc = build_toc(&doc.body);
    assert_eq!(toc.len(), 2);
    assert_eq!(toc[0].children.len(), 1);
    let index = build_index(&doc.body);
    assert_eq!(index.len(), 1);
    assert_eq!(index[0].term, "term");
}
