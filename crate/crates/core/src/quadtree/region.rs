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

use std::borrow::Cow;
use std::collections::VecDeque;

use crate::popgrid::{DotGrid, Rect, StateMap};

/// The part of the grid a single tree is built over: either the whole grid,
/// or one state's cells inside that state's bounding rectangle. Cells outside
/// the region hold no dots and belong to no constituency.
pub(crate) struct Region<'a> {
    dots: Cow<'a, DotGrid>,
    bounds: Rect,
    mask: Option<Mask<'a>>,
}

struct Mask<'a> {
    cells: DotGrid,
    labels: &'a [u32],
    index: u32,
    width: usize,
}

impl<'a> Region<'a> {
    pub(crate) fn whole(grid: &'a DotGrid) -> Region<'a> {
        Region { dots: Cow::Borrowed(grid), bounds: grid.bounds(), mask: None }
    }

    /// Region of state `index`, or `None` if the state has no cells.
    pub(crate) fn state(grid: &DotGrid, states: &'a StateMap, index: u32) -> Option<Region<'a>> {
        let bounds = states.bounding_rect(index)?;
        let labels = states.cells();
        let inside = |i: usize| labels[i] == index;
        let dots = grid.counts().iter().enumerate().map(|(i, &c)| if inside(i) { c } else { 0 }).collect();
        let cells = (0..labels.len()).map(|i| inside(i) as u64).collect();
        let (w, h) = (grid.width(), grid.height());
        Some(Region {
            dots: Cow::Owned(DotGrid::new(w, h, dots).expect("masked counts never exceed the grid total")),
            bounds,
            mask: Some(Mask { cells: DotGrid::new(w, h, cells).expect("cell mask fits"), labels, index, width: w }),
        })
    }

    pub(crate) fn bounds(&self) -> Rect {
        self.bounds
    }

    pub(crate) fn dots(&self, r: Rect) -> u64 {
        self.dots.count_in(r)
    }

    /// Region cells inside `r`.
    pub(crate) fn cells(&self, r: Rect) -> u64 {
        match &self.mask {
            None => r.area() as u64,
            Some(m) => m.cells.count_in(r),
        }
    }

    fn inside(&self, x: usize, y: usize) -> bool {
        match &self.mask {
            None => true,
            Some(m) => m.labels[y * m.width + x] == m.index,
        }
    }

    /// Whether the region cells inside `r` (there are `cells` of them) form
    /// one orthogonally connected piece.
    pub(crate) fn is_connected(&self, r: Rect, cells: u64) -> bool {
        if cells == r.area() as u64 {
            return true;
        }
        let Some(start) = r.cells().find(|&(x, y)| self.inside(x, y)) else {
            return true;
        };
        let local = |x: usize, y: usize| (y - r.y0) * r.w + (x - r.x0);
        let mut seen = vec![false; r.area()];
        seen[local(start.0, start.1)] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1u64;
        while let Some((x, y)) = queue.pop_front() {
            let neighbours = [
                (x > r.x0).then(|| (x - 1, y)),
                (x + 1 < r.x1()).then(|| (x + 1, y)),
                (y > r.y0).then(|| (x, y - 1)),
                (y + 1 < r.y1()).then(|| (x, y + 1)),
            ];
            for (nx, ny) in neighbours.into_iter().flatten() {
                let k = local(nx, ny);
                if !seen[k] && self.inside(nx, ny) {
                    seen[k] = true;
                    reached += 1;
                    queue.push_back((nx, ny));
                }
            }
        }
        reached == cells
    }

    /// Region cells inside `r` as disjoint rectangles: horizontal runs,
    /// stacked where consecutive rows repeat the same run. Sorted by
    /// `(y0, x0)`.
    pub(crate) fn shape(&self, r: Rect) -> Vec<Rect> {
        if self.mask.is_none() || self.cells(r) == r.area() as u64 {
            return vec![r];
        }
        let mut done = Vec::new();
        let mut open: Vec<Rect> = Vec::new();
        for y in r.y0..r.y1() {
            let mut runs = Vec::new();
            let mut x = r.x0;
            while x < r.x1() {
                if self.inside(x, y) {
                    let start = x;
                    while x < r.x1() && self.inside(x, y) {
                        x += 1;
                    }
                    runs.push((start, x - start));
                } else {
                    x += 1;
                }
            }
            let mut next = Vec::with_capacity(runs.len());
            for rect in open.drain(..) {
                if let Some(i) = runs.iter().position(|&(x0, w)| x0 == rect.x0 && w == rect.w) {
                    runs.swap_remove(i);
                    next.push(Rect { h: rect.h + 1, ..rect });
                } else {
                    done.push(rect);
                }
            }
            next.extend(runs.into_iter().map(|(x0, w)| Rect::new(x0, y, w, 1)));
            open = next;
        }
        done.extend(open);
        done.sort_by_key(|r| (r.y0, r.x0));
        done
    }
}
