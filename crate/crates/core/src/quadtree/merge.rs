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

use crate::popgrid::Rect;

use super::{NodeId, QuadTree};

/// Sibling leaves that together form one constituency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafGroup {
    pub parent: Option<NodeId>,
    /// Member leaves in quadrant order.
    pub leaves: Vec<NodeId>,
    pub shape: Vec<Rect>,
    pub population: u64,
}

impl LeafGroup {
    fn can_absorb(&self, other: &LeafGroup, threshold: u64) -> bool {
        let within = self.population.checked_add(other.population).is_some_and(|p| p <= threshold);
        // Both groups are connected, so their union is connected exactly when
        // some pair of member rectangles shares an edge.
        within && self.shape.iter().any(|a| other.shape.iter().any(|b| a.touches(b)))
    }
}

/// Merges leaves of the same parent while their combined population stays
/// within the tree's threshold.
///
/// For each parent the current groups are scanned pairwise in quadrant order
/// (a group ranks by its first quadrant) and the first pair whose union is
/// orthogonally connected and within the threshold is merged; this repeats
/// until no such pair remains. Groups never span parents. The result is
/// sorted by each group's first leaf id.
pub fn merge_siblings(tree: &QuadTree) -> Vec<LeafGroup> {
    let threshold = tree.threshold();
    let mut merged = Vec::new();
    for (&parent, leaves) in tree.leaf_parents() {
        let mut groups: Vec<LeafGroup> = leaves
            .iter()
            .map(|&id| {
                let node = tree.node(id);
                LeafGroup { parent, leaves: vec![id], shape: node.leaf_shape().to_vec(), population: node.population }
            })
            .collect();
        while let Some((i, j)) = first_mergeable(&groups, threshold) {
            let absorbed = groups.remove(j);
            let keep = &mut groups[i];
            keep.population += absorbed.population;
            keep.leaves.extend(absorbed.leaves);
            keep.leaves.sort();
            keep.shape = keep.leaves.iter().flat_map(|&id| tree.node(id).leaf_shape().iter().copied()).collect();
        }
        merged.extend(groups);
    }
    merged.sort_by_key(|g| g.leaves[0]);
    merged
}

fn first_mergeable(groups: &[LeafGroup], threshold: u64) -> Option<(usize, usize)> {
    (0..groups.len())
        .flat_map(|i| (i + 1..groups.len()).map(move |j| (i, j)))
        .find(|&(i, j)| groups[i].can_absorb(&groups[j], threshold))
}
