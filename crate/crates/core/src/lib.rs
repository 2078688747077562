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

//! Electoral districting on population rasters with a threshold-driven
//! region quadtree, plus the four classical apportionment methods used as a
//! baseline.
//!
//! The pipeline:
//!
//! 1. [`popgrid`] loads a [`Scenario`]: a [`DotGrid`] of per-cell dot counts,
//!    the number of people each dot stands for and the maximum population a
//!    constituency may hold.
//! 2. [`quadtree`] splits the map into quadrants until every piece is under
//!    the threshold, then merges neighbouring sibling leaves back together
//!    while they still fit.
//! 3. [`interchange`] writes the result as JSON; [`render`] draws it as SVG.
//! 4. [`apportion`] gives the Hamilton, Jefferson, Webster and
//!    Huntington-Hill seat counts for comparison.
//!
//! ```
//! use quadlimit::{delimit, load_scenario};
//!
//! let scenario = load_scenario("2 2 500 1000\n1 0\n0 1\n").unwrap();
//! let result = delimit(&scenario);
//! assert_eq!(result.count(), 1);
//! assert_eq!(result.total_population(), 1000);
//! ```
//!
//! The `book/` directory next to this crate walks through each stage; its
//! code listings are compiled as doc-tests of this crate.

pub mod apportion;
pub mod cli;
pub mod interchange;
pub mod popgrid;
pub mod quadtree;
pub mod render;

pub use interchange::{LocateIndex, ResultDocument};
pub use popgrid::{load_scenario, DotGrid, Rect, Scenario, StateMap};
pub use quadtree::{delimit, Constituency, ConstituencyId, DelimitationResult, Flag, QuadTree};

// Chapters of the guide, so `cargo test --doc` runs their listings.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/population-grids.md")]
    mod population_grids {}
    #[doc = include_str!("../../../book/src/subdivision.md")]
    mod subdivision {}
    #[doc = include_str!("../../../book/src/merging.md")]
    mod merging {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/point-location.md")]
    mod point_location {}
    #[doc = include_str!("../../../book/src/apportionment.md")]
    mod apportionment {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
