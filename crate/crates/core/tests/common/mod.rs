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

//! Scenario generators and brute-force oracles shared by the integration
//! tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use num_rational::Ratio;
use quadlimit::apportion::StateRecord;
use quadlimit::{ConstituencyId, DelimitationResult, DotGrid, Flag, Rect, Scenario, StateMap};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn four_states() -> Vec<StateRecord> {
    [("A", 2560), ("B", 3315), ("C", 995), ("D", 5012)].iter().map(|&(l, p)| StateRecord::new(l, p)).collect()
}

/// A random grid up to `max_side` on each side. Dots are sparse or dense at
/// random, with occasional hot cells so some 1x1 leaves go over capacity.
pub fn random_grid(rng: &mut ChaCha8Rng, max_side: usize) -> DotGrid {
    let (w, h) = (rng.gen_range(1..=max_side), rng.gen_range(1..=max_side));
    let density: f64 = rng.gen_range(0.05..1.0);
    let peak = rng.gen_range(1..=20u64);
    let counts = (0..w * h)
        .map(|_| {
            if rng.gen_bool(density) {
                let c = rng.gen_range(0..=peak);
                if rng.gen_bool(0.01) {
                    c * 50
                } else {
                    c
                }
            } else {
                0
            }
        })
        .collect();
    DotGrid::new(w, h, counts).unwrap()
}

/// Up to `max_states` connected states grown from random seeds by
/// round-robin breadth-first expansion.
pub fn random_states(rng: &mut ChaCha8Rng, w: usize, h: usize, max_states: usize) -> StateMap {
    let k = rng.gen_range(1..=max_states.min(w * h));
    let mut cells: Vec<usize> = (0..w * h).collect();
    cells.shuffle(rng);
    let mut owner = vec![usize::MAX; w * h];
    let mut queues: Vec<VecDeque<usize>> = Vec::new();
    for (s, &c) in cells.iter().take(k).enumerate() {
        owner[c] = s;
        queues.push(VecDeque::from([c]));
    }
    while queues.iter().any(|q| !q.is_empty()) {
        for (s, queue) in queues.iter_mut().enumerate() {
            // Grow each state by one cell per round.
            while let Some(c) = queue.pop_front() {
                let (x, y) = (c % w, c / w);
                let mut grew = false;
                for (nx, ny) in neighbours(x, y, w, h) {
                    let n = ny * w + nx;
                    if owner[n] == usize::MAX {
                        owner[n] = s;
                        queue.push_back(n);
                        grew = true;
                    }
                }
                if grew {
                    queue.push_front(c);
                    break;
                }
            }
        }
    }
    let labels: Vec<String> = owner.iter().map(|&s| format!("S{s}")).collect();
    StateMap::new(w, h, &labels).unwrap()
}

fn neighbours(x: usize, y: usize, w: usize, h: usize) -> impl Iterator<Item = (usize, usize)> {
    [
        (x > 0).then(|| (x.wrapping_sub(1), y)),
        (x + 1 < w).then_some((x + 1, y)),
        (y > 0).then(|| (x, y.wrapping_sub(1))),
        (y + 1 < h).then_some((x, y + 1)),
    ]
    .into_iter()
    .flatten()
}

/// Random people-per-dot and a threshold giving anywhere from one to a few
/// dozen constituencies.
pub fn random_scenario(rng: &mut ChaCha8Rng, max_side: usize, with_states: bool) -> Scenario {
    let grid = random_grid(rng, max_side);
    let ppd = rng.gen_range(1..=100u64);
    let total = grid.total_dots() * ppd;
    let th = (total / rng.gen_range(1..=40u64)).max(1);
    let mut s = Scenario::new(grid, ppd, th).unwrap();
    if with_states {
        let (w, h) = (s.grid().width(), s.grid().height());
        let states = random_states(rng, w, h, 5);
        s = s.with_states(states).unwrap();
    }
    s
}

pub fn naive_dots(grid: &DotGrid, r: Rect) -> u64 {
    let mut sum = 0;
    for y in r.y0..r.y1() {
        for x in r.x0..r.x1() {
            sum += grid.count_at(x, y);
        }
    }
    sum
}

pub fn brute_locate(result: &DelimitationResult, x: usize, y: usize) -> Vec<ConstituencyId> {
    result.constituencies().iter().filter(|c| c.contains(x, y)).map(|c| c.id).collect()
}

fn connected(cells: &BTreeSet<(usize, usize)>) -> bool {
    let Some(&start) = cells.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        let around = [(x.wrapping_sub(1), y), (x + 1, y), (x, y.wrapping_sub(1)), (x, y + 1)];
        for n in around {
            if cells.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == cells.len()
}

fn touching(a: &BTreeSet<(usize, usize)>, b: &BTreeSet<(usize, usize)>) -> bool {
    a.iter().any(|&(x, y)| {
        [(x.wrapping_sub(1), y), (x + 1, y), (x, y.wrapping_sub(1)), (x, y + 1)].iter().any(|n| b.contains(n))
    })
}

/// Every structural property a delimitation must satisfy, checked against
/// the raw grid. Returns the first violation found.
pub fn check_result(s: &Scenario, r: &DelimitationResult) -> Result<(), String> {
    let grid = s.grid();
    let (w, h) = (grid.width(), grid.height());
    let th = s.threshold();
    let mut owner = vec![None; w * h];
    let mut cell_sets = Vec::new();
    for (i, c) in r.constituencies().iter().enumerate() {
        if c.id.0 as usize != i + 1 {
            return Err(format!("id {} at position {i}", c.id));
        }
        let mut set = BTreeSet::new();
        for rect in &c.shape {
            if !rect.fits_within(w, h) {
                return Err(format!("{} has rect {rect} outside the grid", c.id));
            }
            for cell in rect.cells() {
                if !set.insert(cell) {
                    return Err(format!("{} covers {cell:?} twice", c.id));
                }
                let slot = &mut owner[cell.1 * w + cell.0];
                if let Some(other) = slot {
                    return Err(format!("{cell:?} in both {other} and {}", c.id));
                }
                *slot = Some(c.id);
            }
        }
        // Conservation.
        let dots: u64 = set.iter().map(|&(x, y)| grid.count_at(x, y)).sum();
        if c.population != dots * s.people_per_dot() {
            return Err(format!("{} reports {} people, holds {}", c.id, c.population, dots * s.people_per_dot()));
        }
        // Threshold, excused only on single over-capacity cells.
        let over = c.has_flag(Flag::OverCapacity);
        if c.population > th && !(over && set.len() == 1) {
            return Err(format!("{} holds {} > {th}", c.id, c.population));
        }
        if over && c.population <= th {
            return Err(format!("{} flagged over capacity at {}", c.id, c.population));
        }
        if c.has_flag(Flag::ZeroPopulation) != (c.population == 0) {
            return Err(format!("{} zero-population flag disagrees with {}", c.id, c.population));
        }
        if !connected(&set) {
            return Err(format!("{} is not contiguous", c.id));
        }
        if let Some(states) = s.states() {
            let label = c.state.as_deref().ok_or_else(|| format!("{} has no state", c.id))?;
            if let Some(&(x, y)) = set.iter().find(|&&(x, y)| states.state_at(x, y) != label) {
                return Err(format!("{} labelled {label} covers ({x}, {y}) of {}", c.id, states.state_at(x, y)));
            }
        } else if c.state.is_some() {
            return Err(format!("{} has a state without a state map", c.id));
        }
        cell_sets.push(set);
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(format!("cell ({}, {}) has no constituency", i % w, i / w));
    }
    if r.total_population() != s.total_population() {
        return Err(format!("total {} != {}", r.total_population(), s.total_population()));
    }
    // Fixpoint: no two sibling constituencies could still merge.
    let cs = r.constituencies();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let (a, b) = (&cs[i], &cs[j]);
            if a.state == b.state
                && a.parent_node == b.parent_node
                && a.population + b.population <= th
                && touching(&cell_sets[i], &cell_sets[j])
            {
                return Err(format!("{} and {} could still merge", a.id, b.id));
            }
        }
    }
    Ok(())
}

/// `floor(p / d)` summed, or rounded to nearest with halves up.
pub fn divisor_total(pops: &[u64], d: f64, nearest: bool) -> Vec<u64> {
    pops.iter()
        .map(|&p| {
            let q = p as f64 / d;
            if nearest {
                (q + 0.5).floor() as u64
            } else {
                q.floor() as u64
            }
        })
        .collect()
}

/// Searches for a common divisor giving exactly `house` seats. `None` when
/// a tie makes the house size unreachable.
pub fn divisor_search(pops: &[u64], house: u64, nearest: bool) -> Option<Vec<u64>> {
    let total: u64 = pops.iter().sum();
    let (mut lo, mut hi) = (1e-9, total as f64 * 4.0 + 1.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let seats = divisor_total(pops, mid, nearest);
        let n: u64 = seats.iter().sum();
        match n.cmp(&house) {
            std::cmp::Ordering::Equal => return Some(seats),
            std::cmp::Ordering::Greater => lo = mid,
            std::cmp::Ordering::Less => hi = mid,
        }
    }
    None
}

pub fn random_states_records(rng: &mut ChaCha8Rng, max_states: usize, max_pop: u64) -> Vec<StateRecord> {
    let n = rng.gen_range(1..=max_states);
    (0..n).map(|i| StateRecord::new(format!("S{i:02}"), rng.gen_range(1..=max_pop))).collect()
}

/// Closed polygons from the `d` attribute of each constituency path
/// (`(id, loops)`), read straight from the SVG text.
pub type Loops = Vec<Vec<(f64, f64)>>;

pub fn svg_paths(svg: &str) -> Vec<(u32, Loops)> {
    let group = svg.split("<g id=\"constituencies\"").nth(1).expect("constituency group");
    let group = group.split("</g>").next().unwrap();
    let mut out = Vec::new();
    for tag in group.split("<path ").skip(1) {
        let tag = format!(" {tag}");
        let attr = |name: &str| {
            let start = tag.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
            let end = start + tag[start..].find('"').unwrap();
            tag[start..end].to_string()
        };
        let id: u32 = attr("id").trim_start_matches('c').parse().unwrap();
        assert_eq!(attr("fill-rule"), "evenodd");
        let mut loops = Vec::new();
        let mut current = Vec::new();
        let d = attr("d");
        let mut tokens = d.split_whitespace().peekable();
        while let Some(t) = tokens.next() {
            if t == "Z" {
                loops.push(std::mem::take(&mut current));
                continue;
            }
            let (cmd, x) = t.split_at(1);
            assert!(cmd == "M" || cmd == "L", "unexpected command {cmd}");
            let y = tokens.next().unwrap();
            current.push((x.parse().unwrap(), y.parse().unwrap()));
        }
        assert!(current.is_empty(), "unterminated loop");
        out.push((id, loops));
    }
    out
}

/// Even-odd point-in-polygon by horizontal ray casting.
pub fn inside_evenodd(loops: &[Vec<(f64, f64)>], px: f64, py: f64) -> bool {
    let mut crossings = 0;
    for lp in loops {
        for i in 0..lp.len() {
            let (x0, y0) = lp[i];
            let (x1, y1) = lp[(i + 1) % lp.len()];
            if (y0 > py) != (y1 > py) {
                let x = x0 + (py - y0) / (y1 - y0) * (x1 - x0);
                if x > px {
                    crossings += 1;
                }
            }
        }
    }
    crossings % 2 == 1
}

/// Rasterizes each path at cell centres and compares with the result's
/// cell sets.
pub fn check_svg_round_trip(result: &DelimitationResult, svg: &str, cell_px: f64) -> Result<(), String> {
    let paths = svg_paths(svg);
    if paths.len() != result.count() {
        return Err(format!("{} paths for {} constituencies", paths.len(), result.count()));
    }
    for (id, loops) in &paths {
        let c = result.constituency(ConstituencyId(*id)).ok_or_else(|| format!("path for unknown c{id}"))?;
        for y in 0..result.height() {
            for x in 0..result.width() {
                let filled = inside_evenodd(loops, (x as f64 + 0.5) * cell_px, (y as f64 + 0.5) * cell_px);
                if filled != c.contains(x, y) {
                    return Err(format!("c{id} at ({x}, {y}): outline says {filled}"));
                }
            }
        }
    }
    Ok(())
}

/// Largest remainders computed with exact rationals.
pub fn hamilton_oracle(states: &[StateRecord], house: u64) -> Vec<u64> {
    let total: u64 = states.iter().map(|s| s.population).sum();
    let quotas: Vec<Ratio<u128>> =
        states.iter().map(|s| Ratio::new(s.population as u128 * house as u128, total as u128)).collect();
    let mut seats: Vec<u64> = quotas.iter().map(|q| q.floor().to_integer() as u64).collect();
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by(|&a, &b| {
        quotas[b]
            .fract()
            .cmp(&quotas[a].fract())
            .then(states[b].population.cmp(&states[a].population))
            .then(states[a].label.cmp(&states[b].label))
    });
    let left = house - seats.iter().sum::<u64>();
    for &i in order.iter().take(left as usize) {
        seats[i] += 1;
    }
    seats
}
