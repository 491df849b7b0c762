//! SVG drawings of Kauffman diagrams in the two-column picture: `v_1..v_s`
//! up the left column, `v_{s+1}..v_{2s}` down the right column.

use std::fmt::Write as _;

use crate::combinatorics::IndexTuple;
use crate::error::Result;
use crate::tl::prematch::{compatible_from_prematch, prematch, ColoredPrematching, VertexColor};
use crate::tl::diagram::Side;
use crate::tl::KauffmanDiagram;

const SPACING: f64 = 40.0;
const MARGIN: f64 = 30.0;
const WIDTH: f64 = 200.0;
const LEFT_X: f64 = 50.0;
const RIGHT_X: f64 = 150.0;
const RADIUS: f64 = 6.0;

fn position(k: &KauffmanDiagram, v: usize) -> (f64, f64) {
    let (side, h) = k.to_rect(v);
    let y = MARGIN + (k.s() - h) as f64 * SPACING;
    match side {
        Side::Left => (LEFT_X, y),
        Side::Right => (RIGHT_X, y),
    }
}

/// Renders `k`; vertex marks follow `colors` when given (open circle for
/// white, filled for black, square for a mandatory-edge endpoint).
pub fn render_svg(k: &KauffmanDiagram, colors: Option<&ColoredPrematching>) -> String {
    let s = k.s();
    let height = 2.0 * MARGIN + (s - 1) as f64 * SPACING;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, "<title>{k}</title>");
    for (a, b) in k.edges() {
        let (xa, ya) = position(k, a);
        let (xb, yb) = position(k, b);
        if xa == xb {
            // same column: bulge toward the middle
            let bulge = (ya - yb).abs() * 0.35 + 10.0;
            let cx = if xa == LEFT_X { xa + bulge } else { xa - bulge };
            let _ = writeln!(
                out,
                r#"<path d="M {xa} {ya} Q {cx} {} {xb} {yb}" fill="none" stroke="black" stroke-width="2"/>"#,
                (ya + yb) / 2.0
            );
        } else {
            let _ = writeln!(
                out,
                r#"<line x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}" stroke="black" stroke-width="2"/>"#
            );
        }
    }
    for v in 1..=2 * s {
        let (x, y) = position(k, v);
        let color = colors.and_then(|c| c.color.get(v - 1).copied());
        match color {
            Some(VertexColor::Edge) => {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="gray" stroke="black"/>"#,
                    x - RADIUS,
                    y - RADIUS,
                    2.0 * RADIUS,
                    2.0 * RADIUS
                );
            }
            Some(VertexColor::White) => {
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{RADIUS}" fill="white" stroke="black"/>"#);
            }
            _ => {
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{RADIUS}" fill="black" stroke="black"/>"#);
            }
        }
        let lx = if x == LEFT_X { x - 28.0 } else { x + 12.0 };
        let _ = writeln!(out, r#"<text x="{lx}" y="{}" font-size="12">{v}</text>"#, y + 4.0);
    }
    out.push_str("</svg>\n");
    out
}

/// File name for a diagram: its edge list, e.g. `K_1-6_2-3_4-5.svg`.
pub fn diagram_file_name(k: &KauffmanDiagram) -> String {
    let parts: Vec<String> = k.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("K_{}.svg", parts.join("_"))
}

/// Every diagram of `Φ(I,J)` drawn with the pair's colouring, in sorted
/// order, paired with its file name.
pub fn render_compatible(i: &IndexTuple, j: &IndexTuple) -> Result<Vec<(String, String)>> {
    let pm = prematch(i, j)?;
    Ok(compatible_from_prematch(&pm)?
        .iter()
        .map(|k| (diagram_file_name(k), render_svg(k, Some(&pm))))
        .collect())
}
