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

//! JSON result files.
//!
//! A delimitation is written as
//!
//! ```json
//! {"count": 1, "threshold": 1000, "peoplePerDot": 500,
//!  "constituencies": [{"id": 1, "population": 500, "flags": [], "rects": [[0, 0, 2, 2]]}],
//!  "stats": {"nodes": 1, "leaves": 1, "maxDepth": 0}}
//! ```
//!
//! with an optional `state` on each constituency. Field order is fixed and
//! every number is an integer. [`LocateIndex`] rebuilds a point-location tree
//! from a parsed file.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::popgrid::Rect;
use crate::quadtree::{subdivide, ConstituencyId, DelimitationResult, Flag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ResultDocument {
    pub count: usize,
    pub threshold: u64,
    pub people_per_dot: u64,
    pub constituencies: Vec<ConstituencyRecord>,
    pub stats: StatsRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConstituencyRecord {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    pub population: u64,
    pub flags: Vec<Flag>,
    /// `[x0, y0, w, h]`
    pub rects: Vec<[usize; 4]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StatsRecord {
    pub nodes: usize,
    pub leaves: usize,
    pub max_depth: u32,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid result JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("count is {count} but {listed} constituencies are listed")]
    CountMismatch { count: usize, listed: usize },
    #[error("constituency at position {position} has id {id}; ids must run 1, 2, 3, ...")]
    BadId { position: usize, id: u32 },
    #[error("constituency {id} has an empty rectangle or no rectangles")]
    EmptyShape { id: u32 },
    #[error("cell ({x}, {y}) is covered by more than one constituency")]
    Overlap { x: usize, y: usize },
    #[error("cell ({x}, {y}) is not covered by any constituency")]
    Gap { x: usize, y: usize },
}

impl ResultDocument {
    pub fn from_result(result: &DelimitationResult) -> ResultDocument {
        let stats = result.stats();
        ResultDocument {
            count: result.count(),
            threshold: result.threshold(),
            people_per_dot: result.people_per_dot(),
            constituencies: result
                .constituencies()
                .iter()
                .map(|c| ConstituencyRecord {
                    id: c.id.0,
                    state: c.state.clone(),
                    population: c.population,
                    flags: c.flags.clone(),
                    rects: c.shape.iter().map(|r| [r.x0, r.y0, r.w, r.h]).collect(),
                })
                .collect(),
            stats: StatsRecord { nodes: stats.nodes, leaves: stats.leaves, max_depth: stats.max_depth },
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result documents always serialize");
        text.push('\n');
        text
    }

    /// Parses and checks a result file: sequential ids, non-empty shapes,
    /// and rectangles that tile the grid exactly once.
    pub fn from_json(text: &str) -> Result<ResultDocument, DocumentError> {
        let doc: ResultDocument = serde_json::from_str(text)?;
        if doc.count != doc.constituencies.len() {
            return Err(DocumentError::CountMismatch { count: doc.count, listed: doc.constituencies.len() });
        }
        for (i, c) in doc.constituencies.iter().enumerate() {
            if c.id as usize != i + 1 {
                return Err(DocumentError::BadId { position: i, id: c.id });
            }
            if c.rects.is_empty() || c.rects.iter().any(|r| r[2] == 0 || r[3] == 0) {
                return Err(DocumentError::EmptyShape { id: c.id });
            }
        }
        doc.owner_grid()?;
        Ok(doc)
    }

    /// Grid size implied by the rectangles, `(width, height)`.
    pub fn dimensions(&self) -> (usize, usize) {
        self.rects().fold((0, 0), |(w, h), (_, _, r)| (w.max(r.x1()), h.max(r.y1())))
    }

    /// `(constituency index, rect index, rect)` for every listed rectangle.
    fn rects(&self) -> impl Iterator<Item = (usize, usize, Rect)> + '_ {
        self.constituencies.iter().enumerate().flat_map(|(ci, c)| {
            c.rects
                .iter()
                .enumerate()
                .filter_map(move |(ri, r)| Rect::try_new(r[0], r[1], r[2], r[3]).map(|rect| (ci, ri, rect)))
        })
    }

    /// Row-major constituency index per cell.
    pub fn owner_grid(&self) -> Result<Vec<usize>, DocumentError> {
        let (w, h) = self.dimensions();
        let mut owners = vec![usize::MAX; w * h];
        for (ci, _, r) in self.rects() {
            for (x, y) in r.cells() {
                let slot = &mut owners[y * w + x];
                if *slot != usize::MAX {
                    return Err(DocumentError::Overlap { x, y });
                }
                *slot = ci;
            }
        }
        if let Some(i) = owners.iter().position(|&o| o == usize::MAX) {
            return Err(DocumentError::Gap { x: i % w, y: i / w });
        }
        Ok(owners)
    }
}

struct IndexNode {
    rect: Rect,
    children: Vec<usize>,
    owner: Option<usize>,
}

/// Point-location tree over the rectangles of a result file.
///
/// Built with the same quadrant split as delimitation, stopping wherever a
/// node lies inside a single listed rectangle. For results without states
/// the listed rectangles are exactly the delimitation leaves, so this
/// reproduces the original tree shape.
pub struct LocateIndex {
    nodes: Vec<IndexNode>,
    ids: Vec<ConstituencyId>,
    width: usize,
    height: usize,
}

impl LocateIndex {
    pub fn new(doc: &ResultDocument) -> Result<LocateIndex, DocumentError> {
        let (width, height) = doc.dimensions();
        let owners = doc.owner_grid()?;
        let rects: Vec<Vec<Rect>> = doc
            .constituencies
            .iter()
            .map(|c| c.rects.iter().map(|r| Rect::new(r[0], r[1], r[2], r[3])).collect())
            .collect();
        let mut index = LocateIndex {
            nodes: Vec::new(),
            ids: doc.constituencies.iter().map(|c| ConstituencyId(c.id)).collect(),
            width,
            height,
        };
        let Some(root) = Rect::try_new(0, 0, width, height) else {
            return Ok(index);
        };
        let mut stack = vec![(root, None::<usize>)];
        while let Some((rect, parent)) = stack.pop() {
            let id = index.nodes.len();
            let ci = owners[rect.y0 * width + rect.x0];
            let whole = rects[ci].iter().any(|r| r.contains_rect(&rect));
            index.nodes.push(IndexNode { rect, children: Vec::new(), owner: whole.then_some(ci) });
            if let Some(p) = parent {
                index.nodes[p].children.push(id);
            }
            if !whole {
                // A node spanning several rectangles always has more than
                // one cell, so it can be split.
                let parts = subdivide(rect).expect("multi-cell node");
                stack.extend(parts.into_iter().rev().map(|r| (r, Some(id))));
            }
        }
        Ok(index)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    /// The constituency at `(cx, cy)` and the number of nodes visited, or
    /// `None` out of bounds.
    pub fn locate_traced(&self, cx: usize, cy: usize) -> Option<(ConstituencyId, usize)> {
        if cx >= self.width || cy >= self.height {
            return None;
        }
        let mut node = &self.nodes[0];
        let mut visits = 1;
        while node.owner.is_none() {
            node = node
                .children
                .iter()
                .map(|&c| &self.nodes[c])
                .find(|n| n.rect.contains(cx, cy))
                .expect("children cover their parent");
            visits += 1;
        }
        node.owner.map(|ci| (self.ids[ci], visits))
    }

    pub fn locate(&self, cx: usize, cy: usize) -> Option<ConstituencyId> {
        self.locate_traced(cx, cy).map(|(id, _)| id)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}
