//! Function plots as standalone SVG.

use std::collections::HashMap;
use std::fmt::Write;

use super::{eval_numeric, CasError, Expr, Result};

/// Fixed sample count: 2^8 + 1 puts both endpoints on the grid.
pub const PLOT_SAMPLES: usize = 257;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 300.0;
const MARGIN: f64 = 12.0;

#[derive(Clone, Debug)]
pub struct Plot {
    pub svg: String,
    /// Maximal runs of finite samples; each becomes one polyline.
    pub segments: Vec<Vec<(f64, f64)>>,
    /// Vertical range the curve was scaled to.
    pub y_range: (f64, f64),
    pub diagnostics: Vec<String>,
}

/// Samples `e` at [`PLOT_SAMPLES`] uniformly spaced points of `[xmin, xmax]`.
/// Non-finite values are kept so callers can see the gaps.
pub fn sample(e: &Expr, var: &str, xmin: f64, xmax: f64) -> Result<Vec<(f64, f64)>> {
    let step = (xmax - xmin) / (PLOT_SAMPLES - 1) as f64;
    let mut bindings = HashMap::from([(var.to_string(), xmin)]);
    (0..PLOT_SAMPLES)
        .map(|i| {
            let x = if i == PLOT_SAMPLES - 1 { xmax } else { xmin + step * i as f64 };
            bindings.insert(var.to_string(), x);
            Ok((x, eval_numeric(e, &bindings)?))
        })
        .collect()
}

/// Plots `e` as a function of `var` over `[xmin, xmax]`.
///
/// The y axis is scaled to the finite samples (or `[-1, 1]` when there are
/// none); non-finite samples split the curve into separate polylines.
pub fn plot_svg(e: &Expr, var: &str, xmin: f64, xmax: f64) -> Result<Plot> {
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
        return Err(CasError::InvalidRange(format!("need finite xmin < xmax, got [{xmin}, {xmax}]")));
    }
    let samples = sample(e, var, xmin, xmax)?;
    let mut diagnostics = Vec::new();

    let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current = Vec::new();
    for &(x, y) in &samples {
        if y.is_finite() {
            current.push((x, y));
        } else if !current.is_empty() {
            segments.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        segments.push(current);
    }

    let finite = segments.iter().flatten().map(|&(_, y)| y);
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let y_range = if segments.is_empty() {
        diagnostics.push("AllSamplesInvalid: no finite sample in the plot range".to_string());
        (-1.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    };

    let (ylo, yhi) = y_range;
    // halved to keep the span finite for extreme values
    let px = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y / 2.0 - ylo / 2.0) / (yhi / 2.0 - ylo / 2.0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" class=\"giac-plot\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" data-xmin=\"{xmin}\" data-xmax=\"{xmax}\" data-ymin=\"{ylo}\" data-ymax=\"{yhi}\">"
    );
    let _ = write!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\" stroke=\"#ccc\"/>"
    );
    if ylo <= 0.0 && 0.0 <= yhi {
        let y0 = py(0.0);
        let _ = write!(
            svg,
            "<line class=\"axis\" x1=\"{:.2}\" y1=\"{y0:.2}\" x2=\"{:.2}\" y2=\"{y0:.2}\" stroke=\"#888\"/>",
            px(xmin),
            px(xmax)
        );
    }
    if xmin <= 0.0 && 0.0 <= xmax {
        let x0 = px(0.0);
        let _ = write!(
            svg,
            "<line class=\"axis\" x1=\"{x0:.2}\" y1=\"{:.2}\" x2=\"{x0:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>",
            py(ylo),
            py(yhi)
        );
    }
    for seg in &segments {
        let points: Vec<String> = seg.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = write!(
            svg,
            "<polyline class=\"curve\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.join(" ")
        );
    }
    svg.push_str("</svg>");
    Ok(Plot { svg, segments, y_range, diagnostics })
}
