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

//! Threshold-driven region quadtree.
//!
//! Starting from one node covering the whole map, any node whose population
//! (people per dot times the dots it covers) exceeds the threshold is split
//! into four quadrants, and the children are processed the same way. Leaves
//! become proto-constituencies and are recorded under their parent so that
//! siblings can later be merged back together (see [`merge_siblings`]).

mod delimit;
mod merge;
mod region;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::popgrid::{DotGrid, Rect};
use region::Region;

pub use delimit::{delimit, Constituency, ConstituencyId, DelimitationResult, District, Flag, LocateError};
pub use merge::{merge_siblings, LeafGroup};

/// Index of a node in its tree's arena. Ids follow depth-first processing
/// order, so the root is 0 and siblings are numbered NW, NE, SW, SE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot subdivide the 1x1 rectangle {0}")]
pub struct Unsplittable(pub Rect);

/// Splits a rectangle into quadrants `[NW, NE, SW, SE]`.
///
/// The north-west quadrant takes the larger half (`ceil(n / 2)`) of each
/// dimension. A one-cell-wide or one-cell-tall strip is halved along its long
/// axis instead, giving two children.
///
/// ```
/// use quadlimit::{quadtree::subdivide, Rect};
///
/// let q = subdivide(Rect::new(0, 0, 5, 3)).unwrap();
/// assert_eq!(q, [Rect::new(0, 0, 3, 2), Rect::new(3, 0, 2, 2), Rect::new(0, 2, 3, 1), Rect::new(3, 2, 2, 1)]);
/// ```
pub fn subdivide(r: Rect) -> Result<Vec<Rect>, Unsplittable> {
    let left = r.w.div_ceil(2);
    let top = r.h.div_ceil(2);
    match (r.w, r.h) {
        (1, 1) => Err(Unsplittable(r)),
        (1, _) => Ok(vec![Rect::new(r.x0, r.y0, 1, top), Rect::new(r.x0, r.y0 + top, 1, r.h - top)]),
        (_, 1) => Ok(vec![Rect::new(r.x0, r.y0, left, 1), Rect::new(r.x0 + left, r.y0, r.w - left, 1)]),
        _ => Ok(vec![
            Rect::new(r.x0, r.y0, left, top),
            Rect::new(r.x0 + left, r.y0, r.w - left, top),
            Rect::new(r.x0, r.y0 + top, left, r.h - top),
            Rect::new(r.x0 + left, r.y0 + top, r.w - left, r.h - top),
        ]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadNode {
    pub id: NodeId,
    pub rect: Rect,
    /// People living in the node's cells.
    pub population: u64,
    /// Empty for leaves; otherwise NW, NE, SW, SE (or two halves of a strip).
    pub children: Vec<NodeId>,
    pub depth: u32,
    pub parent: Option<NodeId>,
    cells: u64,
    over_capacity: bool,
    shape: Vec<Rect>,
}

impl QuadNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of the node's cells that belong to the tree's region. Equal to
    /// the rect area except for trees built over a single state.
    pub fn region_cells(&self) -> u64 {
        self.cells
    }

    /// A leaf that is a single cell still holding more than the threshold.
    pub fn is_over_capacity(&self) -> bool {
        self.over_capacity
    }

    /// The region cells of a leaf as disjoint rectangles; empty for internal
    /// nodes and for leaves lying wholly outside the region.
    pub fn leaf_shape(&self) -> &[Rect] {
        &self.shape
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub max_depth: u32,
}

/// A built delimitation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTree {
    nodes: Vec<QuadNode>,
    leaf_parents: BTreeMap<Option<NodeId>, Vec<NodeId>>,
    people_per_dot: u64,
    threshold: u64,
    max_depth: u32,
    constituencies: usize,
}

impl QuadTree {
    /// Runs the recursive subdivision over the whole grid.
    ///
    /// ```
    /// use quadlimit::{DotGrid, QuadTree};
    ///
    /// let grid = DotGrid::filled(16, 16, 1).unwrap();
    /// let tree = QuadTree::build(&grid, 100, 1600);
    /// assert_eq!(tree.node_count(), 21);
    /// assert_eq!(tree.max_depth(), 2);
    /// ```
    pub fn build(grid: &DotGrid, people_per_dot: u64, threshold: u64) -> QuadTree {
        QuadTree::build_region(&Region::whole(grid), people_per_dot, threshold)
    }

    pub(crate) fn build_region(region: &Region<'_>, people_per_dot: u64, threshold: u64) -> QuadTree {
        let mut tree = QuadTree {
            nodes: Vec::new(),
            leaf_parents: BTreeMap::new(),
            people_per_dot,
            threshold,
            max_depth: 0,
            constituencies: 0,
        };
        tree.process_region(region, None, region.bounds(), 0);
        tree
    }

    fn process_region(&mut self, region: &Region<'_>, prev: Option<NodeId>, rect: Rect, depth: u32) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        let population = region.dots(rect) * self.people_per_dot;
        let cells = region.cells(rect);
        self.max_depth = self.max_depth.max(depth);
        self.nodes.push(QuadNode {
            id,
            rect,
            population,
            children: Vec::new(),
            depth,
            parent: prev,
            cells,
            over_capacity: false,
            shape: Vec::new(),
        });
        if cells == 0 {
            // Outside the region entirely: a leaf, but nobody's constituency.
            return id;
        }
        let fits = population <= self.threshold && region.is_connected(rect, cells);
        if fits || rect.is_unit() {
            let node = &mut self.nodes[id.index()];
            node.over_capacity = !fits;
            node.shape = region.shape(rect);
            self.leaf_parents.entry(prev).or_default().push(id);
            self.constituencies += 1;
            return id;
        }
        for child in subdivide(rect).expect("non-unit rectangles split") {
            let child_id = self.process_region(region, Some(id), child, depth + 1);
            self.nodes[id.index()].children.push(child_id);
        }
        id
    }

    pub fn root(&self) -> &QuadNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &QuadNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    /// Parent id (`None` for a root leaf) to its leaf children holding
    /// region cells, in quadrant order.
    pub fn leaf_parents(&self) -> &BTreeMap<Option<NodeId>, Vec<NodeId>> {
        &self.leaf_parents
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn people_per_dot(&self) -> u64 {
        self.people_per_dot
    }

    /// Leaves registered as constituencies before any merging.
    pub fn constituency_count(&self) -> usize {
        self.constituencies
    }

    pub fn stats(&self) -> TreeStats {
        tree_stats(self)
    }

    /// Walks from the root to the leaf containing cell `(cx, cy)`, returning
    /// the leaf and the number of nodes visited, or `None` if the cell lies
    /// outside the root.
    pub fn descend(&self, cx: usize, cy: usize) -> Option<(NodeId, usize)> {
        let mut node = self.root();
        if !node.rect.contains(cx, cy) {
            return None;
        }
        let mut visits = 1;
        while !node.is_leaf() {
            let next = node
                .children
                .iter()
                .map(|&c| self.node(c))
                .find(|c| c.rect.contains(cx, cy))
                .expect("children cover their parent");
            node = next;
            visits += 1;
        }
        Some((node.id, visits))
    }
}

/// Counts nodes, leaves and depth by walking the tree from the root.
pub fn tree_stats(tree: &QuadTree) -> TreeStats {
    let mut stats = TreeStats::default();
    let mut stack = vec![tree.root().id];
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(node.depth);
        if node.is_leaf() {
            stats.leaves += 1;
        }
        stack.extend(node.children.iter().copied());
    }
    stats
}
