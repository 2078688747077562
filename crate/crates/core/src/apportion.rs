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

//! Classical seat apportionment: Hamilton (largest remainders) and the
//! Jefferson, Webster and Huntington-Hill divisor methods.
//!
//! All arithmetic is exact. Quotas are kept as integer fractions and divisor
//! priorities are compared by cross-multiplication, falling back to big
//! integers when a product would overflow 128 bits.
//!
//! Ties between states are broken in favour of the larger population, then
//! the lexicographically smaller label.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateRecord {
    pub label: String,
    pub population: u64,
}

impl StateRecord {
    pub fn new(label: impl Into<String>, population: u64) -> StateRecord {
        StateRecord { label: label.into(), population }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Hamilton,
    Jefferson,
    Webster,
    HuntingtonHill,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Hamilton, Method::Jefferson, Method::Webster, Method::HuntingtonHill];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hamilton => "hamilton",
            Method::Jefferson => "jefferson",
            Method::Webster => "webster",
            Method::HuntingtonHill => "huntington-hill",
        }
    }

    pub fn apportion(self, states: &[StateRecord], house_size: u64) -> Result<ApportionmentResult, ApportionError> {
        match self {
            Method::Hamilton => hamilton(states, house_size),
            Method::Jefferson => jefferson(states, house_size),
            Method::Webster => webster(states, house_size),
            Method::HuntingtonHill => huntington_hill(states, house_size),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown apportionment method `{0}`")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Method, UnknownMethod> {
        match s.to_ascii_lowercase().as_str() {
            "hamilton" | "vinton" | "hamilton-vinton" => Ok(Method::Hamilton),
            "jefferson" => Ok(Method::Jefferson),
            "webster" => Ok(Method::Webster),
            "huntington-hill" | "huntingtonhill" | "hill" => Ok(Method::HuntingtonHill),
            _ => Err(UnknownMethod(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApportionError {
    #[error("no states to apportion among")]
    NoStates,
    #[error("house size must be at least 1")]
    EmptyHouse,
    #[error("state `{0}` has zero population")]
    ZeroPopulation(String),
    #[error("state label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("{method} needs at least one seat per state: {house_size} seats for {states} states")]
    Infeasible { method: Method, house_size: u64, states: usize },
}

/// A state's exact share `population * house / total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quota {
    pub numer: u128,
    pub denom: u128,
}

impl Quota {
    pub fn floor(&self) -> u128 {
        self.numer / self.denom
    }

    pub fn ceil(&self) -> u128 {
        self.numer.div_ceil(self.denom)
    }

    /// Numerator of the fractional part over the same denominator.
    pub fn remainder(&self) -> u128 {
        self.numer % self.denom
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for Quota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}", self.to_f64())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    pub label: String,
    pub population: u64,
    pub seats: u64,
}

/// One step of a divisor method's sequential allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Award {
    /// 1-based position in the house.
    pub seat: u64,
    pub label: String,
    /// The state's seat count after this award.
    pub seats_after: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApportionmentResult {
    pub method: Method,
    pub house_size: u64,
    /// In input order.
    pub allocations: Vec<Allocation>,
    /// Hamilton only, in input order.
    pub quotas: Option<Vec<Quota>>,
    /// Divisor methods only. Seed seats of Huntington-Hill are not listed.
    pub priority_trace: Vec<Award>,
}

impl ApportionmentResult {
    pub fn seats_of(&self, label: &str) -> Option<u64> {
        self.allocations.iter().find(|a| a.label == label).map(|a| a.seats)
    }

    pub fn seat_vector(&self) -> Vec<u64> {
        self.allocations.iter().map(|a| a.seats).collect()
    }

    pub fn total_seats(&self) -> u64 {
        self.allocations.iter().map(|a| a.seats).sum()
    }
}

fn validate(states: &[StateRecord], house_size: u64) -> Result<(), ApportionError> {
    if states.is_empty() {
        return Err(ApportionError::NoStates);
    }
    if house_size == 0 {
        return Err(ApportionError::EmptyHouse);
    }
    let mut seen = BTreeSet::new();
    for s in states {
        if s.population == 0 {
            return Err(ApportionError::ZeroPopulation(s.label.clone()));
        }
        if !seen.insert(s.label.as_str()) {
            return Err(ApportionError::DuplicateLabel(s.label.clone()));
        }
    }
    Ok(())
}

/// Tie-break: larger population first, then smaller label.
fn tie_break(a: &StateRecord, b: &StateRecord) -> Ordering {
    a.population.cmp(&b.population).then_with(|| b.label.cmp(&a.label))
}

/// Largest-remainder apportionment.
///
/// ```
/// use quadlimit::apportion::{hamilton, StateRecord};
///
/// let states = [StateRecord::new("A", 2560), StateRecord::new("B", 3315),
///               StateRecord::new("C", 995), StateRecord::new("D", 5012)];
/// assert_eq!(hamilton(&states, 20).unwrap().seat_vector(), [4, 6, 2, 8]);
/// ```
pub fn hamilton(states: &[StateRecord], house_size: u64) -> Result<ApportionmentResult, ApportionError> {
    validate(states, house_size)?;
    let total: u128 = states.iter().map(|s| s.population as u128).sum();
    let quotas: Vec<Quota> =
        states.iter().map(|s| Quota { numer: s.population as u128 * house_size as u128, denom: total }).collect();
    let mut seats: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let leftover = house_size - seats.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..states.len()).collect();
    // Shared denominator: remainders compare as plain integers.
    order.sort_by(|&a, &b| {
        quotas[b].remainder().cmp(&quotas[a].remainder()).then_with(|| tie_break(&states[b], &states[a]))
    });
    for &i in order.iter().take(leftover as usize) {
        seats[i] += 1;
    }
    Ok(ApportionmentResult {
        method: Method::Hamilton,
        house_size,
        allocations: allocations(states, &seats),
        quotas: Some(quotas),
        priority_trace: Vec::new(),
    })
}

/// Greatest divisors: priority `population / (s + 1)`.
pub fn jefferson(states: &[StateRecord], house_size: u64) -> Result<ApportionmentResult, ApportionError> {
    validate(states, house_size)?;
    Ok(divisor_method(Method::Jefferson, states, house_size, 0))
}

/// Major fractions: priority `population / (s + 1/2)`.
pub fn webster(states: &[StateRecord], house_size: u64) -> Result<ApportionmentResult, ApportionError> {
    validate(states, house_size)?;
    Ok(divisor_method(Method::Webster, states, house_size, 0))
}

/// Equal proportions: one seed seat each, then priority
/// `population / sqrt(s (s + 1))`.
pub fn huntington_hill(states: &[StateRecord], house_size: u64) -> Result<ApportionmentResult, ApportionError> {
    validate(states, house_size)?;
    if house_size < states.len() as u64 {
        return Err(ApportionError::Infeasible { method: Method::HuntingtonHill, house_size, states: states.len() });
    }
    Ok(divisor_method(Method::HuntingtonHill, states, house_size, 1))
}

/// Priority of a state holding `seats` as an exact fraction. Huntington-Hill
/// is squared so it stays rational; squaring preserves the order.
fn priority(method: Method, population: u64, seats: u64) -> (u128, u128) {
    let (p, s) = (population as u128, seats as u128);
    match method {
        Method::Jefferson => (p, s + 1),
        Method::Webster => (2 * p, 2 * s + 1),
        Method::HuntingtonHill => (p * p, s * (s + 1)),
        Method::Hamilton => unreachable!("not a divisor method"),
    }
}

fn cmp_fractions((an, ad): (u128, u128), (bn, bd): (u128, u128)) -> Ordering {
    match (an.checked_mul(bd), bn.checked_mul(ad)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (BigUint::from(an) * BigUint::from(bd)).cmp(&(BigUint::from(bn) * BigUint::from(ad))),
    }
}

fn divisor_method(method: Method, states: &[StateRecord], house_size: u64, seed: u64) -> ApportionmentResult {
    let mut seats = vec![seed; states.len()];
    let mut trace = Vec::new();
    for seat in seed * states.len() as u64 + 1..=house_size {
        let best = (0..states.len())
            .max_by(|&a, &b| {
                cmp_fractions(
                    priority(method, states[a].population, seats[a]),
                    priority(method, states[b].population, seats[b]),
                )
                .then_with(|| tie_break(&states[a], &states[b]))
            })
            .expect("at least one state");
        seats[best] += 1;
        trace.push(Award { seat, label: states[best].label.clone(), seats_after: seats[best] });
    }
    ApportionmentResult {
        method,
        house_size,
        allocations: allocations(states, &seats),
        quotas: None,
        priority_trace: trace,
    }
}

fn allocations(states: &[StateRecord], seats: &[u64]) -> Vec<Allocation> {
    states
        .iter()
        .zip(seats)
        .map(|(s, &n)| Allocation { label: s.label.clone(), population: s.population, seats: n })
        .collect()
}

/// All four methods on the same input, in [`Method::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodComparison {
    pub results: Vec<ApportionmentResult>,
}

impl MethodComparison {
    pub fn get(&self, method: Method) -> &ApportionmentResult {
        self.results.iter().find(|r| r.method == method).expect("all methods present")
    }
}

pub fn compare_methods(states: &[StateRecord], house_size: u64) -> Result<MethodComparison, ApportionError> {
    let results = Method::ALL.iter().map(|m| m.apportion(states, house_size)).collect::<Result<_, _>>()?;
    Ok(MethodComparison { results })
}
