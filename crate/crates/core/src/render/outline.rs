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

//! Boundary tracing for labelled cell grids.
//!
//! Every cell side that separates a region from a different region (or from
//! the outside) becomes a directed unit edge, oriented so the region lies on
//! its right-hand side (clockwise on screen, with y pointing down). Edges
//! shared by two cells of the same region never appear. The remaining edges
//! are chained into closed loops and collinear runs are collapsed.

use std::collections::BTreeMap;

/// A lattice point in cell units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    fn step(self, dir: Dir) -> Point {
        match dir {
            Dir::East => Point { x: self.x + 1, ..self },
            Dir::South => Point { y: self.y + 1, ..self },
            Dir::West => Point { x: self.x - 1, ..self },
            Dir::North => Point { y: self.y - 1, ..self },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dir {
    East,
    South,
    West,
    North,
}

impl Dir {
    fn right(self) -> Dir {
        match self {
            Dir::East => Dir::South,
            Dir::South => Dir::West,
            Dir::West => Dir::North,
            Dir::North => Dir::East,
        }
    }

    fn left(self) -> Dir {
        self.right().right().right()
    }
}

/// A unit boundary edge starting at `from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: (usize, usize),
    pub dir: Dir,
}

/// Boundary edges of every region, indexed by region. `labels` is row-major
/// and holds region indices below `regions`.
pub fn boundary_edges(width: usize, height: usize, labels: &[usize], regions: usize) -> Vec<Vec<Edge>> {
    let mut edges = vec![Vec::new(); regions];
    let at = |x: usize, y: usize| labels[y * width + x];
    for y in 0..height {
        for x in 0..width {
            let me = at(x, y);
            let out = &mut edges[me];
            if y == 0 || at(x, y - 1) != me {
                out.push(Edge { from: (x, y), dir: Dir::East });
            }
            if x + 1 == width || at(x + 1, y) != me {
                out.push(Edge { from: (x + 1, y), dir: Dir::South });
            }
            if y + 1 == height || at(x, y + 1) != me {
                out.push(Edge { from: (x + 1, y + 1), dir: Dir::West });
            }
            if x == 0 || at(x - 1, y) != me {
                out.push(Edge { from: (x, y + 1), dir: Dir::North });
            }
        }
    }
    edges
}

/// Chains one region's edges into closed loops of corner points.
///
/// Loops start at the topmost, then leftmost, unused point. Where two loops
/// touch at a corner the walk turns right first, which keeps each loop
/// hugging its own cells.
pub fn trace_loops(edges: &[Edge]) -> Vec<Vec<Point>> {
    // Keyed by (y, x) so iteration runs top-down.
    let mut outgoing: BTreeMap<(usize, usize), Vec<Dir>> = BTreeMap::new();
    for e in edges {
        outgoing.entry((e.from.1, e.from.0)).or_default().push(e.dir);
    }

    let mut loops = Vec::new();
    while let Some((&(y, x), dirs)) = outgoing.iter().next() {
        let start = Point { x, y };
        let first = *dirs.iter().min().expect("empty entries are removed");
        take(&mut outgoing, start, &[first]);
        let mut walk = vec![(start, first)];
        let mut at = start.step(first);
        let mut heading = first;
        while at != start {
            heading = take(&mut outgoing, at, &[heading.right(), heading, heading.left()])
                .expect("boundary loops are closed");
            walk.push((at, heading));
            at = at.step(heading);
        }
        loops.push(corners(&walk));
    }
    loops
}

fn take(outgoing: &mut BTreeMap<(usize, usize), Vec<Dir>>, p: Point, preferred: &[Dir]) -> Option<Dir> {
    let dirs = outgoing.get_mut(&(p.y, p.x))?;
    let i = preferred.iter().find_map(|d| dirs.iter().position(|x| x == d))?;
    let d = dirs.swap_remove(i);
    if dirs.is_empty() {
        outgoing.remove(&(p.y, p.x));
    }
    Some(d)
}

/// Keeps only points where the walk changes direction.
fn corners(walk: &[(Point, Dir)]) -> Vec<Point> {
    let n = walk.len();
    (0..n).filter(|&i| walk[i].1 != walk[(i + n - 1) % n].1).map(|i| walk[i].0).collect()
}
