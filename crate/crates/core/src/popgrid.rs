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

//! Population rasters, summed-area tables and scenario files.
//!
//! A [`DotGrid`] stores one non-negative dot count per cell together with a
//! summed-area table, so the number of dots inside any axis-aligned
//! rectangle is answered with four lookups. Coordinates follow the image
//! convention: column `x` grows to the right, row `y` grows downward and the
//! origin is the top-left cell.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// An axis-aligned block of cells, `w` columns by `h` rows starting at
/// `(x0, y0)`. Rectangles are never empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    /// Panics if `w` or `h` is zero.
    pub fn new(x0: usize, y0: usize, w: usize, h: usize) -> Rect {
        assert!(w >= 1 && h >= 1, "empty rectangle {w}x{h}");
        Rect { x0, y0, w, h }
    }

    pub fn try_new(x0: usize, y0: usize, w: usize, h: usize) -> Option<Rect> {
        (w >= 1 && h >= 1).then_some(Rect { x0, y0, w, h })
    }

    /// Exclusive right edge.
    pub fn x1(&self) -> usize {
        self.x0 + self.w
    }

    /// Exclusive bottom edge.
    pub fn y1(&self) -> usize {
        self.y0 + self.h
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn is_unit(&self) -> bool {
        self.w == 1 && self.h == 1
    }

    pub fn contains(&self, cx: usize, cy: usize) -> bool {
        cx >= self.x0 && cx < self.x1() && cy >= self.y0 && cy < self.y1()
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.y0 >= self.y0 && other.x1() <= self.x1() && other.y1() <= self.y1()
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 < other.x1() && other.x0 < self.x1() && self.y0 < other.y1() && other.y0 < self.y1()
    }

    /// True when the two rectangles share an edge segment of positive length.
    /// Corner contact does not count.
    pub fn touches(&self, other: &Rect) -> bool {
        let rows_overlap = self.y0 < other.y1() && other.y0 < self.y1();
        let cols_overlap = self.x0 < other.x1() && other.x0 < self.x1();
        (rows_overlap && (self.x1() == other.x0 || other.x1() == self.x0))
            || (cols_overlap && (self.y1() == other.y0 || other.y1() == self.y0))
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.x1() <= width && self.y1() <= height
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y0..self.y1()).flat_map(move |y| (self.x0..self.x1()).map(move |x| (x, y)))
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x0, self.y0, self.w, self.h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    Empty { width: usize, height: usize },
    #[error("expected {expected} cell counts for the grid, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("total dot count does not fit in 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rectangle {rect} lies outside the {width}x{height} grid")]
pub struct OutOfBounds {
    pub rect: Rect,
    pub width: usize,
    pub height: usize,
}

/// Builds the `(height + 1) x (width + 1)` summed-area table of a row-major
/// raster. Entry `[i][j]` (stored at `i * (width + 1) + j`) is the sum of the
/// top-left `i` rows by `j` columns; row 0 and column 0 are zero.
///
/// Sums wrap on overflow; [`DotGrid::new`] rejects rasters whose total does
/// not fit.
pub fn build_sat(width: usize, height: usize, counts: &[u64]) -> Vec<u64> {
    let stride = width + 1;
    let mut sat = vec![0u64; stride * (height + 1)];
    for y in 0..height {
        let mut row_sum = 0u64;
        for x in 0..width {
            row_sum = row_sum.wrapping_add(counts[y * width + x]);
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1].wrapping_add(row_sum);
        }
    }
    sat
}

/// A raster of per-cell dot counts with its summed-area table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotGrid {
    width: usize,
    height: usize,
    counts: Vec<u64>,
    sat: Vec<u64>,
}

impl DotGrid {
    pub fn new(width: usize, height: usize, counts: Vec<u64>) -> Result<DotGrid, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty { width, height });
        }
        if counts.len() != width * height {
            return Err(GridError::SizeMismatch { expected: width * height, found: counts.len() });
        }
        let total: u128 = counts.iter().map(|&c| c as u128).sum();
        if total > u64::MAX as u128 {
            return Err(GridError::Overflow);
        }
        let sat = build_sat(width, height, &counts);
        Ok(DotGrid { width, height, counts, sat })
    }

    /// Builds a grid from equal-length rows.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<DotGrid, GridError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut counts = Vec::with_capacity(width * height);
        for row in rows {
            let row = row.as_ref();
            if row.len() != width {
                return Err(GridError::SizeMismatch { expected: width * height, found: counts.len() + row.len() });
            }
            counts.extend_from_slice(row);
        }
        DotGrid::new(width, height, counts)
    }

    pub fn filled(width: usize, height: usize, value: u64) -> Result<DotGrid, GridError> {
        DotGrid::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    /// Dots in cell `(x, y)`. Panics when out of range.
    pub fn count_at(&self, x: usize, y: usize) -> u64 {
        assert!(x < self.width && y < self.height, "cell ({x}, {y}) outside grid");
        self.counts[y * self.width + x]
    }

    /// Row-major cell counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Summed-area table entry for the top-left `rows x cols` block.
    pub fn sat_at(&self, rows: usize, cols: usize) -> u64 {
        assert!(rows <= self.height && cols <= self.width);
        self.sat[rows * (self.width + 1) + cols]
    }

    pub fn total_dots(&self) -> u64 {
        self.sat_at(self.height, self.width)
    }

    /// Number of dots inside `r`, by inclusion-exclusion on the table.
    pub fn count_dots(&self, r: Rect) -> Result<u64, OutOfBounds> {
        if !r.fits_within(self.width, self.height) {
            return Err(OutOfBounds { rect: r, width: self.width, height: self.height });
        }
        Ok(self.count_in(r))
    }

    pub(crate) fn count_in(&self, r: Rect) -> u64 {
        let stride = self.width + 1;
        let at = |row: usize, col: usize| self.sat[row * stride + col];
        // The zero border means no corner needs special casing. Wrapping is
        // exact here because the true sum never exceeds the grid total.
        at(r.y1(), r.x1()).wrapping_sub(at(r.y0, r.x1())).wrapping_sub(at(r.y1(), r.x0)).wrapping_add(at(r.y0, r.x0))
    }
}

/// Per-cell state membership. Labels are kept in sorted order and cells refer
/// to them by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMap {
    width: usize,
    height: usize,
    labels: Vec<String>,
    cells: Vec<u32>,
}

impl StateMap {
    /// Builds a state map from one label per cell, row-major.
    pub fn new<S: AsRef<str>>(width: usize, height: usize, cell_labels: &[S]) -> Result<StateMap, ScenarioError> {
        if cell_labels.len() != width * height {
            return Err(ScenarioError::DimensionMismatch {
                pos: Pos::default(),
                what: "state labels",
                expected: width * height,
                found: cell_labels.len(),
            });
        }
        let mut index: BTreeMap<&str, u32> = cell_labels.iter().map(|l| (l.as_ref(), 0)).collect();
        for (i, v) in index.values_mut().enumerate() {
            *v = i as u32;
        }
        let labels = index.keys().map(|s| s.to_string()).collect();
        let cells = cell_labels.iter().map(|l| index[l.as_ref()]).collect();
        Ok(StateMap { width, height, labels, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Distinct labels, sorted.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Row-major label indices.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn state_at(&self, x: usize, y: usize) -> &str {
        &self.labels[self.cells[y * self.width + x] as usize]
    }

    /// Smallest rectangle holding every cell of state `index`.
    pub fn bounding_rect(&self, index: u32) -> Option<Rect> {
        let mut bounds: Option<(usize, usize, usize, usize)> = None;
        for (i, &s) in self.cells.iter().enumerate() {
            if s == index {
                let (x, y) = (i % self.width, i / self.width);
                bounds = Some(match bounds {
                    None => (x, y, x, y),
                    Some((a, b, c, d)) => (a.min(x), b.min(y), c.max(x), d.max(y)),
                });
            }
        }
        bounds.map(|(x0, y0, x1, y1)| Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
    }

    /// Returns the first cell (row-major) of a state that is not orthogonally
    /// reachable from the state's first cell, if any.
    pub fn first_disconnected_cell(&self, index: u32) -> Option<(usize, usize)> {
        let start = self.cells.iter().position(|&s| s == index)?;
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % self.width, i / self.width);
            let mut visit = |j: usize| {
                if !seen[j] && self.cells[j] == index {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < self.width {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - self.width);
            }
            if y + 1 < self.height {
                visit(i + self.width);
            }
        }
        (0..self.cells.len()).find(|&i| self.cells[i] == index && !seen[i]).map(|i| (i % self.width, i / self.width))
    }
}

/// A line/column position in a scenario file, both 1-based. The default
/// (line 0) marks errors raised for scenarios built in code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str("scenario")
        } else {
            write!(f, "line {}, column {}", self.line, self.column)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("{pos}: malformed header: {reason}")]
    MalformedHeader { pos: Pos, reason: String },
    #[error("{pos}: `{token}` is not a non-negative integer dot count")]
    NonNumericCell { pos: Pos, token: String },
    #[error("{pos}: expected {expected} {what}, found {found}")]
    DimensionMismatch { pos: Pos, what: &'static str, expected: usize, found: usize },
    #[error("{pos}: {name} must be a positive integer")]
    NonPositive { pos: Pos, name: &'static str },
    #[error("{pos}: cells of state `{label}` are not orthogonally connected")]
    DisconnectedState { pos: Pos, label: String },
    #[error("{pos}: unexpected content `{token}`")]
    UnexpectedContent { pos: Pos, token: String },
    #[error("{pos}: total population (people per dot x dots) does not fit in 64 bits")]
    Overflow { pos: Pos },
}

/// Input bundle for a delimitation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    grid: DotGrid,
    people_per_dot: u64,
    threshold: u64,
    states: Option<StateMap>,
    target_seats: Option<u64>,
}

impl Scenario {
    pub fn new(grid: DotGrid, people_per_dot: u64, threshold: u64) -> Result<Scenario, ScenarioError> {
        let scenario = Scenario { grid, people_per_dot, threshold, states: None, target_seats: None };
        scenario.validate(Pos::default())?;
        Ok(scenario)
    }

    /// Attaches a state map; every state must be a single connected region.
    pub fn with_states(mut self, states: StateMap) -> Result<Scenario, ScenarioError> {
        if states.width != self.grid.width() || states.height != self.grid.height() {
            return Err(ScenarioError::DimensionMismatch {
                pos: Pos::default(),
                what: "state label cells",
                expected: self.grid.width() * self.grid.height(),
                found: states.width * states.height,
            });
        }
        check_states_connected(&states, |_, _| Pos::default())?;
        self.states = Some(states);
        Ok(self)
    }

    pub fn with_target_seats(mut self, seats: Option<u64>) -> Scenario {
        self.target_seats = seats;
        self
    }

    /// Replaces the threshold and/or people-per-dot parameter.
    pub fn with_overrides(
        mut self,
        threshold: Option<u64>,
        people_per_dot: Option<u64>,
    ) -> Result<Scenario, ScenarioError> {
        if let Some(t) = threshold {
            self.threshold = t;
        }
        if let Some(p) = people_per_dot {
            self.people_per_dot = p;
        }
        self.validate(Pos::default())?;
        Ok(self)
    }

    fn validate(&self, pos: Pos) -> Result<(), ScenarioError> {
        if self.people_per_dot == 0 {
            return Err(ScenarioError::NonPositive { pos, name: "people per dot" });
        }
        if self.threshold == 0 {
            return Err(ScenarioError::NonPositive { pos, name: "threshold" });
        }
        if self.grid.total_dots().checked_mul(self.people_per_dot).is_none() {
            return Err(ScenarioError::Overflow { pos });
        }
        Ok(())
    }

    pub fn grid(&self) -> &DotGrid {
        &self.grid
    }

    pub fn people_per_dot(&self) -> u64 {
        self.people_per_dot
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn states(&self) -> Option<&StateMap> {
        self.states.as_ref()
    }

    pub fn target_seats(&self) -> Option<u64> {
        self.target_seats
    }

    /// People represented by the whole grid.
    pub fn total_population(&self) -> u64 {
        self.grid.total_dots() * self.people_per_dot
    }
}

fn check_states_connected(states: &StateMap, pos_of: impl Fn(usize, usize) -> Pos) -> Result<(), ScenarioError> {
    for (i, label) in states.labels.iter().enumerate() {
        if let Some((x, y)) = states.first_disconnected_cell(i as u32) {
            return Err(ScenarioError::DisconnectedState { pos: pos_of(x, y), label: label.clone() });
        }
    }
    Ok(())
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

/// Non-blank, non-comment lines split into positioned tokens.
fn tokenize(text: &str) -> Vec<(usize, Vec<Token<'_>>)> {
    let mut lines = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    let column = line[..s].chars().count() + 1;
                    tokens.push(Token { text: &line[s..i], pos: Pos { line: n + 1, column } });
                    start = None;
                }
                _ => {}
            }
        }
        lines.push((n + 1, tokens));
    }
    lines
}

/// Parses a scenario file.
///
/// ```text
/// # W H X TH
/// 2 2 500 1000
/// 1 0
/// 0 1
/// STATES
/// A B
/// A B
/// ```
///
/// The `STATES` block is optional. Lines starting with `#` are ignored.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let lines = tokenize(text);
    let mut rows = lines.iter();
    let eof = Pos { line: text.lines().count() + 1, column: 1 };

    let (header_line, header) = rows.next().ok_or_else(|| ScenarioError::MalformedHeader {
        pos: Pos { line: 1, column: 1 },
        reason: "missing `W H X TH` header".into(),
    })?;
    if header.len() != 4 {
        return Err(ScenarioError::MalformedHeader {
            pos: Pos { line: *header_line, column: 1 },
            reason: format!("expected 4 fields `W H X TH`, found {}", header.len()),
        });
    }
    let mut fields = [0u64; 4];
    const NAMES: [&str; 4] = ["width", "height", "people per dot", "threshold"];
    for (slot, tok) in fields.iter_mut().zip(header) {
        *slot = tok.text.parse().map_err(|_| ScenarioError::MalformedHeader {
            pos: tok.pos,
            reason: format!("`{}` is not a non-negative integer", tok.text),
        })?;
    }
    for (i, &v) in fields.iter().enumerate() {
        if v == 0 {
            return Err(ScenarioError::NonPositive { pos: header[i].pos, name: NAMES[i] });
        }
    }
    let [width, height, people_per_dot, threshold] = fields;
    let (width, height) = (width as usize, height as usize);

    let mut counts = Vec::with_capacity(width * height);
    for row in 0..height {
        let (line, tokens) = rows.next().ok_or(ScenarioError::DimensionMismatch {
            pos: eof,
            what: "rows of dot counts",
            expected: height,
            found: row,
        })?;
        if tokens.first().is_some_and(|t| t.text == "STATES") {
            return Err(ScenarioError::DimensionMismatch {
                pos: Pos { line: *line, column: 1 },
                what: "rows of dot counts",
                expected: height,
                found: row,
            });
        }
        if tokens.len() != width {
            return Err(ScenarioError::DimensionMismatch {
                pos: Pos { line: *line, column: 1 },
                what: "cells",
                expected: width,
                found: tokens.len(),
            });
        }
        for tok in tokens {
            let v = tok
                .text
                .parse::<u64>()
                .map_err(|_| ScenarioError::NonNumericCell { pos: tok.pos, token: tok.text.to_string() })?;
            counts.push(v);
        }
    }
    let grid = DotGrid::new(width, height, counts).map_err(|_| ScenarioError::Overflow { pos: header[0].pos })?;
    let mut scenario = Scenario { grid, people_per_dot, threshold, states: None, target_seats: None };
    scenario.validate(header[2].pos)?;

    if let Some((_, tokens)) = rows.next() {
        if tokens.len() != 1 || tokens[0].text != "STATES" {
            return Err(ScenarioError::UnexpectedContent { pos: tokens[0].pos, token: tokens[0].text.to_string() });
        }
        let mut labels = Vec::with_capacity(width * height);
        let mut positions = Vec::with_capacity(width * height);
        for row in 0..height {
            let (line, tokens) = rows.next().ok_or(ScenarioError::DimensionMismatch {
                pos: eof,
                what: "rows of state labels",
                expected: height,
                found: row,
            })?;
            if tokens.len() != width {
                return Err(ScenarioError::DimensionMismatch {
                    pos: Pos { line: *line, column: 1 },
                    what: "state labels",
                    expected: width,
                    found: tokens.len(),
                });
            }
            for tok in tokens {
                labels.push(tok.text);
                positions.push(tok.pos);
            }
        }
        let states = StateMap::new(width, height, &labels)?;
        check_states_connected(&states, |x, y| positions[y * width + x])?;
        scenario.states = Some(states);
    }
    if let Some((_, tokens)) = rows.next() {
        return Err(ScenarioError::UnexpectedContent { pos: tokens[0].pos, token: tokens[0].text.to_string() });
    }
    Ok(scenario)
}
