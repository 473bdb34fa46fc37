//! CSV and SVG renderings of a sweep.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::config::Method;
use super::sweep::{CellRecord, PhaseGridResult};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "alpha,beta,method,trials,recovery,mean_cut,cut_leq_truth,runtime_s";

/// Floats are written in shortest round-trip form (`NaN` for cells without
/// trials), so [`parse_csv`] restores the records exactly.
pub fn to_csv(result: &PhaseGridResult) -> String {
    let mut out = String::with_capacity(64 * (result.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.alpha, r.beta, r.method, r.trials, r.recovery, r.mean_cut, r.cut_leq_truth, r.runtime_s
        )
        .expect("writing to a string");
    }
    out
}

pub fn emit_csv(result: &PhaseGridResult, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_csv(result))?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<CellRecord>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse { line: 1, message: format!("expected header {CSV_HEADER:?}") });
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let err = |what: &str| Error::Parse { line: lineno, message: format!("bad {what} in {line:?}") };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(err("field count"));
        }
        let num = |i: usize, what: &str| f[i].parse::<f64>().map_err(|_| err(what));
        records.push(CellRecord {
            alpha: num(0, "alpha")?,
            beta: num(1, "beta")?,
            method: f[2].parse().map_err(|_| err("method"))?,
            trials: f[3].parse().map_err(|_| err("trials"))?,
            recovery: num(4, "recovery")?,
            mean_cut: num(5, "mean_cut")?,
            cut_leq_truth: num(6, "cut_leq_truth")?,
            runtime_s: num(7, "runtime_s")?,
        });
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CellRecord>> {
    parse_csv(&fs::read_to_string(path)?)
}

/// Which per-cell fraction a heatmap shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeatmapMetric {
    Recovery,
    CutLeqTruth,
}

impl HeatmapMetric {
    fn value(self, r: &CellRecord) -> f64 {
        match self {
            HeatmapMetric::Recovery => r.recovery,
            HeatmapMetric::CutLeqTruth => r.cut_leq_truth,
        }
    }

    fn label(self) -> &'static str {
        match self {
            HeatmapMetric::Recovery => "exact recovery fraction",
            HeatmapMetric::CutLeqTruth => "fraction with cut <= truth",
        }
    }
}

const CELL: f64 = 14.0;
const MARGIN: f64 = 48.0;

/// Gray ramp from black (0) to white (1); cells without trials are drawn
/// light blue.
pub fn ramp_color(v: f64) -> String {
    if v.is_nan() {
        return "#cfe3f7".to_string();
    }
    let g = (255.0 * v.clamp(0.0, 1.0)).round() as u8;
    format!("#{g:02x}{g:02x}{g:02x}")
}

/// Heatmap with `β` on the horizontal axis and `α` increasing upward, one
/// `<rect class="cell">` per grid cell, and the curve `√α = 1 + √β` in red.
pub fn heatmap_svg(result: &PhaseGridResult, method: Method, metric: HeatmapMetric) -> String {
    let cells: Vec<&CellRecord> = result.for_method(method).collect();
    let mut alphas: Vec<f64> = cells.iter().map(|r| r.alpha).collect();
    let mut betas: Vec<f64> = cells.iter().map(|r| r.beta).collect();
    for v in [&mut alphas, &mut betas] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let (nb, na) = (betas.len(), alphas.len());
    let (w, h) = (nb as f64 * CELL, na as f64 * CELL);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(svg, r#"<title>{method}: {}</title>"#, metric.label());
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}"/></clipPath></defs>"#
    );
    for r in &cells {
        let bi = betas.iter().position(|&b| b == r.beta).unwrap_or(0);
        let ai = alphas.iter().position(|&a| a == r.alpha).unwrap_or(0);
        let x = MARGIN + bi as f64 * CELL;
        let y = MARGIN + (na - 1 - ai) as f64 * CELL;
        let _ = writeln!(
            svg,
            r#"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" data-alpha="{}" data-beta="{}" data-value="{}"/>"#,
            ramp_color(metric.value(r)),
            r.alpha,
            r.beta,
            metric.value(r)
        );
    }

    if na > 0 && nb > 0 {
        // Cell centers map linearly to axis values.
        let to_x = |b: f64| map(b, betas[0], betas[nb - 1], MARGIN + CELL / 2.0, MARGIN + w - CELL / 2.0);
        let to_y = |a: f64| map(a, alphas[0], alphas[na - 1], MARGIN + h - CELL / 2.0, MARGIN + CELL / 2.0);
        let points: Vec<String> = (0..=200)
            .map(|i| {
                let b = betas[0] + (betas[nb - 1] - betas[0]) * i as f64 / 200.0;
                let a = (1.0 + b.sqrt()).powi(2);
                format!("{:.2},{:.2}", to_x(b), to_y(a))
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="threshold" clip-path="url(#plot)" fill="none" stroke="red" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">beta ({} to {})</text>"#,
            MARGIN + w / 2.0,
            MARGIN + h + 30.0,
            betas[0],
            betas[nb - 1]
        );
        let _ = writeln!(
            svg,
            r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">alpha ({} to {})</text>"#,
            MARGIN + h / 2.0,
            MARGIN + h / 2.0,
            alphas[0],
            alphas[na - 1]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_heatmap_svg(
    result: &PhaseGridResult,
    method: Method,
    metric: HeatmapMetric,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, heatmap_svg(result, method, metric))?;
    Ok(())
}

fn map(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi == lo {
        (out_lo + out_hi) / 2.0
    } else {
        out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
    }
}
