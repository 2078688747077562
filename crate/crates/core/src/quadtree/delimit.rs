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

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::popgrid::{Rect, Scenario};

use super::region::Region;
use super::{merge_siblings, NodeId, QuadTree, TreeStats};

/// Sequential constituency number, starting at 1. Displays as `c<N>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstituencyId(pub u32);

impl fmt::Display for ConstituencyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Flag {
    /// A single cell whose population alone exceeds the threshold.
    OverCapacity,
    ZeroPopulation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituency {
    pub id: ConstituencyId,
    pub state: Option<String>,
    /// Disjoint rectangles whose union is orthogonally connected.
    pub shape: Vec<Rect>,
    pub population: u64,
    /// Sorted, without duplicates.
    pub flags: Vec<Flag>,
    /// Tree leaves this constituency was assembled from.
    pub source_nodes: Vec<NodeId>,
    /// The common parent of `source_nodes`; `None` when the root itself is
    /// the only leaf.
    pub parent_node: Option<NodeId>,
}

impl Constituency {
    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn contains(&self, cx: usize, cy: usize) -> bool {
        self.shape.iter().any(|r| r.contains(cx, cy))
    }

    pub fn area(&self) -> usize {
        self.shape.iter().map(Rect::area).sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.shape.iter().flat_map(|r| r.cells())
    }
}

/// One tree of a delimitation: the whole map, or a single state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct District {
    label: Option<String>,
    tree: QuadTree,
    owners: Vec<Option<u32>>,
}

impl District {
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn tree(&self) -> &QuadTree {
        &self.tree
    }

    /// The constituency a leaf ended up in.
    pub fn owner_of(&self, leaf: NodeId) -> Option<ConstituencyId> {
        self.owners[leaf.index()].map(|i| ConstituencyId(i + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocateError {
    #[error("cell ({cx}, {cy}) lies outside the {width}x{height} grid")]
    OutOfBounds { cx: usize, cy: usize, width: usize, height: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelimitationResult {
    width: usize,
    height: usize,
    people_per_dot: u64,
    threshold: u64,
    constituencies: Vec<Constituency>,
    districts: Vec<District>,
}

impl DelimitationResult {
    pub fn count(&self) -> usize {
        self.constituencies.len()
    }

    /// Sorted by id.
    pub fn constituencies(&self) -> &[Constituency] {
        &self.constituencies
    }

    pub fn constituency(&self, id: ConstituencyId) -> Option<&Constituency> {
        id.0.checked_sub(1).and_then(|i| self.constituencies.get(i as usize))
    }

    pub fn districts(&self) -> &[District] {
        &self.districts
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn people_per_dot(&self) -> u64 {
        self.people_per_dot
    }

    pub fn total_population(&self) -> u64 {
        self.constituencies.iter().map(|c| c.population).sum()
    }

    /// Node and leaf totals across all trees, and the deepest leaf.
    pub fn stats(&self) -> TreeStats {
        self.districts.iter().map(|d| d.tree.stats()).fold(TreeStats::default(), |acc, s| TreeStats {
            nodes: acc.nodes + s.nodes,
            leaves: acc.leaves + s.leaves,
            max_depth: acc.max_depth.max(s.max_depth),
        })
    }

    /// Constituencies grouped by state label. Empty when the scenario had no
    /// states.
    pub fn per_state(&self) -> BTreeMap<String, Vec<ConstituencyId>> {
        let mut map: BTreeMap<String, Vec<ConstituencyId>> = BTreeMap::new();
        for c in &self.constituencies {
            if let Some(state) = &c.state {
                map.entry(state.clone()).or_default().push(c.id);
            }
        }
        map
    }

    /// The constituency containing cell `(cx, cy)`.
    pub fn locate(&self, cx: usize, cy: usize) -> Result<ConstituencyId, LocateError> {
        self.locate_traced(cx, cy).map(|(id, _)| id)
    }

    /// Like [`locate`](Self::locate), also returning how many tree nodes were
    /// visited on the way down.
    pub fn locate_traced(&self, cx: usize, cy: usize) -> Result<(ConstituencyId, usize), LocateError> {
        if cx >= self.width || cy >= self.height {
            return Err(LocateError::OutOfBounds { cx, cy, width: self.width, height: self.height });
        }
        let mut visits = 0;
        for district in &self.districts {
            if let Some((leaf, steps)) = district.tree.descend(cx, cy) {
                visits += steps;
                // A state's leaf rect can overlap other states' cells.
                let in_shape = district.tree.node(leaf).leaf_shape().iter().any(|r| r.contains(cx, cy));
                if let (true, Some(id)) = (in_shape, district.owner_of(leaf)) {
                    return Ok((id, visits));
                }
            }
        }
        unreachable!("every grid cell belongs to a constituency")
    }
}

/// Delimits a scenario: recursive subdivision followed by the sibling merge,
/// run once over the whole grid or, when the scenario carries states, once
/// per state (in label order) restricted to that state's cells.
///
/// ```
/// use quadlimit::{delimit, DotGrid, Scenario};
///
/// let scenario = Scenario::new(DotGrid::filled(16, 16, 1).unwrap(), 100, 1600).unwrap();
/// let result = delimit(&scenario);
/// assert_eq!(result.count(), 16);
/// assert!(result.constituencies().iter().all(|c| c.population == 1600));
/// ```
pub fn delimit(scenario: &Scenario) -> DelimitationResult {
    let grid = scenario.grid();
    let (ppd, th) = (scenario.people_per_dot(), scenario.threshold());
    let regions: Vec<(Option<String>, Region<'_>)> = match scenario.states() {
        None => vec![(None, Region::whole(grid))],
        Some(states) => states
            .labels()
            .iter()
            .enumerate()
            .filter_map(|(i, label)| Region::state(grid, states, i as u32).map(|r| (Some(label.clone()), r)))
            .collect(),
    };

    let mut constituencies = Vec::new();
    let mut districts = Vec::with_capacity(regions.len());
    for (label, region) in regions {
        let tree = QuadTree::build_region(&region, ppd, th);
        let mut owners = vec![None; tree.node_count()];
        for group in merge_siblings(&tree) {
            let index = constituencies.len() as u32;
            for &leaf in &group.leaves {
                owners[leaf.index()] = Some(index);
            }
            let mut flags = Vec::new();
            if group.leaves.len() == 1 && tree.node(group.leaves[0]).is_over_capacity() {
                flags.push(Flag::OverCapacity);
            }
            if group.population == 0 {
                flags.push(Flag::ZeroPopulation);
            }
            constituencies.push(Constituency {
                id: ConstituencyId(index + 1),
                state: label.clone(),
                shape: group.shape,
                population: group.population,
                flags,
                source_nodes: group.leaves,
                parent_node: group.parent,
            });
        }
        districts.push(District { label, tree, owners });
    }
    DelimitationResult {
        width: grid.width(),
        height: grid.height(),
        people_per_dot: ppd,
        threshold: th,
        constituencies,
        districts,
    }
}
