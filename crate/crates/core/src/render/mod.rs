// Copyright 2026 The quadlimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! SVG and text views of a delimitation.
//!
//! The SVG shows population dots, one outline path per constituency (black
//! by default) and, when the scenario had states, state outlines drawn on top
//! (blue by default). Constituency paths carry `id="c<N>"`.

pub mod outline;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::interchange::{DocumentError, ResultDocument};
use crate::popgrid::DotGrid;
use crate::quadtree::DelimitationResult;
use outline::{boundary_edges, trace_loops, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stroke {
    pub color: String,
    pub width_px: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    pub cell_size_px: u32,
    pub constituency_stroke: Stroke,
    pub state_stroke: Stroke,
    pub dot_radius_px: u32,
    pub dot_color: String,
    pub draw_dots: bool,
    pub background: String,
}

impl Default for RenderStyle {
    fn default() -> RenderStyle {
        RenderStyle {
            cell_size_px: 24,
            constituency_stroke: Stroke { color: "black".into(), width_px: 2 },
            state_stroke: Stroke { color: "blue".into(), width_px: 3 },
            dot_radius_px: 3,
            dot_color: "#444444".into(),
            draw_dots: true,
            background: "white".into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("result covers {result_w}x{result_h} cells but the grid is {grid_w}x{grid_h}")]
    DimensionMismatch { result_w: usize, result_h: usize, grid_w: usize, grid_h: usize },
    #[error("invalid style: {0}")]
    Style(&'static str),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

/// Cell ownership extracted from a result, shared by every view.
struct Layout {
    width: usize,
    height: usize,
    owners: Vec<usize>,
    ids: Vec<u32>,
    states: Option<(Vec<usize>, Vec<String>)>,
}

impl Layout {
    fn from_document(doc: &ResultDocument) -> Result<Layout, DocumentError> {
        let (width, height) = doc.dimensions();
        let owners = doc.owner_grid()?;
        let ids = doc.constituencies.iter().map(|c| c.id).collect();
        let states = if doc.constituencies.iter().any(|c| c.state.is_some()) {
            let labels: BTreeMap<&str, usize> =
                doc.constituencies.iter().map(|c| (c.state.as_deref().unwrap_or(""), 0)).collect();
            let names: Vec<String> = labels.keys().map(|s| s.to_string()).collect();
            let index = |l: &str| names.iter().position(|n| n == l).expect("collected above");
            let per_constituency: Vec<usize> =
                doc.constituencies.iter().map(|c| index(c.state.as_deref().unwrap_or(""))).collect();
            Some((owners.iter().map(|&o| per_constituency[o]).collect(), names))
        } else {
            None
        };
        Ok(Layout { width, height, owners, ids, states })
    }
}

fn path_data(loops: &[Vec<Point>], cell: u32) -> String {
    let mut d = String::new();
    for lp in loops {
        for (i, p) in lp.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            if !d.is_empty() {
                d.push(' ');
            }
            let _ = write!(d, "{cmd}{} {}", p.x as u64 * cell as u64, p.y as u64 * cell as u64);
        }
        d.push_str(" Z");
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn render_layout(layout: &Layout, grid: Option<&DotGrid>, style: &RenderStyle) -> Result<String, RenderError> {
    if style.cell_size_px == 0 {
        return Err(RenderError::Style("cell size must be at least 1px"));
    }
    if style.constituency_stroke.width_px == 0 || style.state_stroke.width_px == 0 {
        return Err(RenderError::Style("stroke widths must be at least 1px"));
    }
    if let Some(g) = grid {
        if (g.width(), g.height()) != (layout.width, layout.height) {
            return Err(RenderError::DimensionMismatch {
                result_w: layout.width,
                result_h: layout.height,
                grid_w: g.width(),
                grid_h: g.height(),
            });
        }
    }
    let cell = style.cell_size_px;
    let (w_px, h_px) = (layout.width as u64 * cell as u64, layout.height as u64 * cell as u64);
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w_px}\" height=\"{h_px}\" viewBox=\"0 0 {w_px} {h_px}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{w_px}\" height=\"{h_px}\" fill=\"{}\"/>",
        escape(&style.background)
    );

    if let (true, Some(g)) = (style.draw_dots, grid) {
        let _ = writeln!(svg, "  <g id=\"dots\" fill=\"{}\">", escape(&style.dot_color));
        for y in 0..g.height() {
            for x in 0..g.width() {
                let k = g.count_at(x, y);
                if k == 0 {
                    continue;
                }
                let mut side = k.isqrt();
                if side * side < k {
                    side += 1;
                }
                let pitch = cell as f64 / side as f64;
                for i in 0..k {
                    let cx = x as f64 * cell as f64 + ((i % side) as f64 + 0.5) * pitch;
                    let cy = y as f64 * cell as f64 + ((i / side) as f64 + 0.5) * pitch;
                    let _ = writeln!(svg, "    <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{}\"/>", style.dot_radius_px);
                }
            }
        }
        svg.push_str("  </g>\n");
    }

    let edges = boundary_edges(layout.width, layout.height, &layout.owners, layout.ids.len());
    let _ = writeln!(
        svg,
        "  <g id=\"constituencies\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
        escape(&style.constituency_stroke.color),
        style.constituency_stroke.width_px
    );
    for (i, e) in edges.iter().enumerate() {
        let d = path_data(&trace_loops(e), cell);
        let _ = writeln!(svg, "    <path id=\"c{}\" fill-rule=\"evenodd\" d=\"{d}\"/>", layout.ids[i]);
    }
    svg.push_str("  </g>\n");

    if let Some((cells, names)) = &layout.states {
        let edges = boundary_edges(layout.width, layout.height, cells, names.len());
        let _ = writeln!(
            svg,
            "  <g id=\"states\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
            escape(&style.state_stroke.color),
            style.state_stroke.width_px
        );
        for (name, e) in names.iter().zip(&edges) {
            let d = path_data(&trace_loops(e), cell);
            let _ = writeln!(svg, "    <path id=\"state-{}\" fill-rule=\"evenodd\" d=\"{d}\"/>", escape(name));
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn ascii_layout(layout: &Layout) -> String {
    let digits = layout.ids.iter().max().map_or(1, |m| m.to_string().len());
    let mut out = String::new();
    for y in 0..layout.height {
        for x in 0..layout.width {
            if x > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:>digits$}", layout.ids[layout.owners[y * layout.width + x]]);
        }
        out.push('\n');
    }
    out
}

/// Renders a result over its population grid.
pub fn render_svg(result: &DelimitationResult, grid: &DotGrid, style: &RenderStyle) -> Result<String, RenderError> {
    let layout = Layout::from_document(&ResultDocument::from_result(result))?;
    render_layout(&layout, Some(grid), style)
}

/// Renders a parsed result file; dots are drawn only when `grid` is given.
pub fn render_document_svg(
    doc: &ResultDocument,
    grid: Option<&DotGrid>,
    style: &RenderStyle,
) -> Result<String, RenderError> {
    render_layout(&Layout::from_document(doc)?, grid, style)
}

/// One right-aligned constituency number per cell, rows on separate lines.
///
/// ```
/// use quadlimit::{delimit, render::render_ascii_grid, DotGrid, Scenario};
///
/// let s = Scenario::new(DotGrid::from_rows(&[[3, 3], [9, 9]]).unwrap(), 100, 1000).unwrap();
/// assert_eq!(render_ascii_grid(&delimit(&s)), "1 1\n2 3\n");
/// ```
pub fn render_ascii_grid(result: &DelimitationResult) -> String {
    let layout =
        Layout::from_document(&ResultDocument::from_result(result)).expect("delimitation results tile the grid");
    ascii_layout(&layout)
}

pub fn render_document_ascii(doc: &ResultDocument) -> Result<String, DocumentError> {
    Ok(ascii_layout(&Layout::from_document(doc)?))
}
