//! Capacities on finite frames.
//!
//! A frame is a finite, ordered list of outcome labels; every subset of it is
//! encoded as a [`SubsetMask`]. Capacities are stored as complete tables over
//! all `2^K` subsets, and totally monotone capacities are produced from their
//! Möbius masses through the subset-sum (zeta) transform.
//!
//! Only the normalization, monotonicity and total-monotonicity axioms carry
//! content on a finite frame. The continuity requirements (downward
//! continuity on closed sets, upward continuity on open sets, and continuity
//! at the whole space) hold vacuously because every monotone sequence of
//! subsets is eventually constant, so nothing here checks them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported frame; subsets are `u32` masks and tables have `2^K` entries.
pub const MAX_FRAME_SIZE: usize = 24;

/// Tolerance for validating user-supplied numbers.
pub const DATA_TOLERANCE: f64 = 1e-9;

/// Tolerance for internal algebraic identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Default number of collections the exhaustive total-monotonicity check may evaluate.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1_000_000;

/// Reports keep at most this many counterexamples.
pub const MAX_COUNTEREXAMPLES: usize = 64;

/// A subset of a frame, one bit per outcome.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn singleton(index: usize) -> Self {
        SubsetMask(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SubsetMask(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    /// Indices of the member outcomes, ascending.
    pub fn indices(self) -> impl DoubleEndedIterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered, finite set of distinct outcome labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame("frame has no outcomes".into()));
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                size: labels.len(),
                limit: MAX_FRAME_SIZE,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidFrame(format!("duplicate label {label:?}")));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of subsets, `2^K`.
    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask(((1u64 << self.len()) - 1) as u32)
    }

    pub fn complement(&self, mask: SubsetMask) -> SubsetMask {
        SubsetMask(self.full().0 & !mask.0)
    }

    pub fn contains_mask(&self, mask: SubsetMask) -> bool {
        mask.is_subset_of(self.full())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetMask> {
        let mut mask = SubsetMask::EMPTY;
        for label in labels {
            let label = label.as_ref();
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            mask = mask.union(SubsetMask::singleton(i));
        }
        Ok(mask)
    }

    pub fn labels_of(&self, mask: SubsetMask) -> Vec<&str> {
        mask.indices().map(|i| self.labels[i].as_str()).collect()
    }

    /// All subsets in mask order, the empty set first.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.subset_count() as u32).map(SubsetMask)
    }
}

/// Product of two frames with the first coordinate varying slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFrame {
    first: Frame,
    second: Frame,
    joint: Frame,
}

impl ProductFrame {
    pub fn new(first: &Frame, second: &Frame) -> Result<Self> {
        let size = first.len() * second.len();
        if size > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                size,
                limit: MAX_FRAME_SIZE,
            });
        }
        let labels = first
            .labels()
            .iter()
            .flat_map(|a| second.labels().iter().map(move |b| format!("({a},{b})")));
        let joint = Frame::new(labels)?;
        Ok(ProductFrame {
            first: first.clone(),
            second: second.clone(),
            joint,
        })
    }

    pub fn first(&self) -> &Frame {
        &self.first
    }

    pub fn second(&self) -> &Frame {
        &self.second
    }

    pub fn joint(&self) -> &Frame {
        &self.joint
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.second.len() + j
    }

    /// Coordinates of a joint outcome index.
    pub fn coordinates(&self, index: usize) -> (usize, usize) {
        (index / self.second.len(), index % self.second.len())
    }

    pub fn rectangle(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        let mut mask = SubsetMask::EMPTY;
        for i in a.indices() {
            for j in b.indices() {
                mask = mask.union(SubsetMask::singleton(self.index(i, j)));
            }
        }
        mask
    }

    pub fn project_first(&self, mask: SubsetMask) -> SubsetMask {
        SubsetMask::from_indices(mask.indices().map(|k| self.coordinates(k).0))
    }

    pub fn project_second(&self, mask: SubsetMask) -> SubsetMask {
        SubsetMask::from_indices(mask.indices().map(|k| self.coordinates(k).1))
    }

    /// Image of a joint mass under the first projection.
    pub fn marginal_first(&self, joint: &MassFunction) -> Result<MassFunction> {
        self.marginal(joint, &self.first, |m| self.project_first(m))
    }

    pub fn marginal_second(&self, joint: &MassFunction) -> Result<MassFunction> {
        self.marginal(joint, &self.second, |m| self.project_second(m))
    }

    fn marginal(
        &self,
        joint: &MassFunction,
        target: &Frame,
        project: impl Fn(SubsetMask) -> SubsetMask,
    ) -> Result<MassFunction> {
        if joint.frame() != &self.joint {
            return Err(Error::FrameMismatch);
        }
        let mut acc: BTreeMap<SubsetMask, f64> = BTreeMap::new();
        for (mask, w) in joint.focal_elements() {
            *acc.entry(project(mask)).or_insert(0.0) += w;
        }
        MassFunction::new(target.clone(), acc)
    }
}

/// Nonnegative Möbius masses summing to one: the canonical encoding of a
/// totally monotone capacity on a finite frame.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    weights: BTreeMap<SubsetMask, f64>,
}

impl MassFunction {
    /// Builds and validates a mass function. Zero weights are dropped;
    /// repeated subsets are rejected. A total within `DATA_TOLERANCE` of 1 is
    /// rescaled to 1.
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        let mut weights = BTreeMap::new();
        let mut total = 0.0;
        for (mask, w) in entries {
            if !frame.contains_mask(mask) {
                return Err(Error::MassInvalid(format!(
                    "subset {mask} is outside a frame of {} outcomes",
                    frame.len()
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::MassInvalid(format!(
                    "weight {w} on subset {mask} is not a nonnegative number"
                )));
            }
            if weights.contains_key(&mask) {
                return Err(Error::MassInvalid(format!("subset {mask} listed twice")));
            }
            if w == 0.0 {
                continue;
            }
            if mask.is_empty() {
                return Err(Error::MassInvalid("the empty set carries mass".into()));
            }
            total += w;
            weights.insert(mask, w);
        }
        if (total - 1.0).abs() > DATA_TOLERANCE {
            return Err(Error::MassInvalid(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        // input noise up to DATA_TOLERANCE would otherwise surface as ν(Ω) ≠ 1
        if total != 1.0 {
            for w in weights.values_mut() {
                *w /= total;
            }
        }
        Ok(MassFunction { frame, weights })
    }

    /// All mass on the whole frame.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        MassFunction {
            frame,
            weights: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// Singleton masses, i.e. an ordinary probability vector.
    pub fn additive(frame: Frame, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != frame.len() {
            return Err(Error::MassInvalid(format!(
                "{} probabilities for {} outcomes",
                probabilities.len(),
                frame.len()
            )));
        }
        let entries = probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| (SubsetMask::singleton(i), p));
        MassFunction::new(frame, entries)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn weight(&self, mask: SubsetMask) -> f64 {
        self.weights.get(&mask).copied().unwrap_or(0.0)
    }

    /// Focal elements and their masses, in mask order.
    pub fn focal_elements(&self) -> impl ExactSizeIterator<Item = (SubsetMask, f64)> + '_ {
        self.weights.iter().map(|(&m, &w)| (m, w))
    }

    pub fn focal_count(&self) -> usize {
        self.weights.len()
    }
}

/// Output of Möbius inversion; weights may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedMass {
    frame: Frame,
    weights: BTreeMap<SubsetMask, f64>,
}

impl SignedMass {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn weight(&self, mask: SubsetMask) -> f64 {
        self.weights.get(&mask).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.weights.iter().map(|(&m, &w)| (m, w))
    }

    /// The most negative weight and its subset, if any weight is negative.
    pub fn most_negative(&self) -> Option<(SubsetMask, f64)> {
        self.entries()
            .filter(|&(_, w)| w < 0.0)
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn is_nonnegative(&self, tolerance: f64) -> bool {
        self.weights.values().all(|&w| w >= -tolerance)
    }

    /// Converts to a mass function, clearing weights within `IDENTITY_TOLERANCE`
    /// of zero. Fails if a weight is clearly negative.
    pub fn to_mass_function(&self) -> Result<MassFunction> {
        if let Some((mask, w)) = self.most_negative() {
            if w < -IDENTITY_TOLERANCE {
                return Err(Error::MassInvalid(format!(
                    "Möbius weight {w} on subset {mask} is negative; the capacity is not totally monotone"
                )));
            }
        }
        let entries = self
            .entries()
            .filter(|&(_, w)| w.abs() > IDENTITY_TOLERANCE);
        MassFunction::new(self.frame.clone(), entries)
    }
}

/// A set function given as a full table over `2^K` subsets.
#[derive(Clone, Debug)]
pub struct Capacity {
    frame: Frame,
    values: Vec<f64>,
    // Table this capacity is the conjugate of, so that conjugating twice
    // returns the original table bit for bit.
    conjugate_of: Option<Arc<Capacity>>,
}

impl PartialEq for Capacity {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.values == other.values
    }
}

impl Capacity {
    /// Wraps a table indexed by subset mask. Axioms are not checked here;
    /// see [`check_axioms`].
    pub fn new(frame: Frame, values: Vec<f64>) -> Result<Self> {
        if values.len() != frame.subset_count() {
            return Err(Error::CapacityInvalid(format!(
                "{} values for {} subsets",
                values.len(),
                frame.subset_count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::CapacityInvalid(format!(
                "value at subset {} is not finite",
                SubsetMask(i as u32)
            )));
        }
        Ok(Capacity {
            frame,
            values,
            conjugate_of: None,
        })
    }

    pub fn from_fn(frame: Frame, f: impl Fn(SubsetMask) -> f64) -> Result<Self> {
        let values = frame.subsets().map(f).collect();
        Capacity::new(frame, values)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn value(&self, mask: SubsetMask) -> f64 {
        self.values[mask.0 as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Which axiom a counterexample violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `ν(∅) = 0` and `ν(Ω) = 1`.
    Normalization,
    /// `A ⊆ B ⇒ ν(A) ≤ ν(B)`.
    Monotonicity,
    /// The inclusion–exclusion inequality over finite collections.
    TotalMonotonicity,
}

/// How a report was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    Direct,
    MobiusFastPath,
    Exhaustive,
    MobiusWitness,
}

/// One violated instance: the sets involved and both sides of the inequality.
///
/// For normalization the sets are `[∅]` or `[Ω]` with `lhs` the table value and
/// `rhs` the required one. For monotonicity the sets are `[A, B]` with
/// `A ⊆ B`, `lhs = ν(A)` and `rhs = ν(B)`. For total monotonicity `lhs` is
/// `ν(⋃ Bᵢ)` and `rhs` the inclusion–exclusion sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub sets: Vec<SubsetMask>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub passed: bool,
    pub method: CheckMethod,
    pub counterexamples: Vec<Counterexample>,
    /// Number of sets or collections examined.
    pub evaluated: u64,
}

impl MonotonicityReport {
    fn from_counterexamples(
        method: CheckMethod,
        counterexamples: Vec<Counterexample>,
        evaluated: u64,
    ) -> Self {
        MonotonicityReport {
            passed: counterexamples.is_empty(),
            method,
            counterexamples,
            evaluated,
        }
    }
}

/// In-place zeta transform: `t[A] ← Σ_{B ⊆ A} t[B]`.
pub(crate) fn subset_sum_transform(table: &mut [f64]) {
    let n = table.len();
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                table[mask] += table[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// In-place Möbius transform, the inverse of [`subset_sum_transform`].
pub(crate) fn mobius_transform(table: &mut [f64]) {
    let n = table.len();
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit != 0 {
                table[mask] -= table[mask ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Table of `A ↦ Σ weight` over listed subsets contained in `A`.
pub(crate) fn containment_table(
    frame: &Frame,
    weights: impl IntoIterator<Item = (SubsetMask, f64)>,
) -> Vec<f64> {
    let mut table = vec![0.0; frame.subset_count()];
    for (mask, w) in weights {
        table[mask.0 as usize] += w;
    }
    subset_sum_transform(&mut table);
    table
}

/// `ν(A) = Σ_{B ⊆ A} m(B)`.
pub fn capacity_from_mass(mass: &MassFunction) -> Capacity {
    let values = containment_table(mass.frame(), mass.focal_elements());
    Capacity {
        frame: mass.frame().clone(),
        values,
        conjugate_of: None,
    }
}

/// `m(A) = Σ_{B ⊆ A} (−1)^{|A∖B|} ν(B)`.
pub fn mobius_from_capacity(capacity: &Capacity) -> SignedMass {
    let mut table = capacity.values.clone();
    mobius_transform(&mut table);
    let weights = table
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, w)| w != 0.0)
        .map(|(i, w)| (SubsetMask(i as u32), w))
        .collect();
    SignedMass {
        frame: capacity.frame.clone(),
        weights,
    }
}

/// Checks normalization exactly (within `IDENTITY_TOLERANCE`) and
/// monotonicity along every covering pair `A ⊂ A ∪ {ω}`, which implies it for
/// every comparable pair.
pub fn check_axioms(capacity: &Capacity) -> MonotonicityReport {
    let frame = &capacity.frame;
    let full = frame.full();
    let mut found = Vec::new();
    let mut evaluated = 0u64;

    let record = |c: Counterexample, found: &mut Vec<Counterexample>| {
        if found.len() < MAX_COUNTEREXAMPLES {
            found.push(c);
        }
    };

    let empty_value = capacity.value(SubsetMask::EMPTY);
    if !(empty_value.abs() <= IDENTITY_TOLERANCE) {
        record(
            Counterexample {
                axiom: Axiom::Normalization,
                sets: vec![SubsetMask::EMPTY],
                lhs: empty_value,
                rhs: 0.0,
            },
            &mut found,
        );
    }
    let full_value = capacity.value(full);
    if !((full_value - 1.0).abs() <= IDENTITY_TOLERANCE) {
        record(
            Counterexample {
                axiom: Axiom::Normalization,
                sets: vec![full],
                lhs: full_value,
                rhs: 1.0,
            },
            &mut found,
        );
    }

    for mask in frame.subsets() {
        for i in frame.complement(mask).indices() {
            let larger = mask.union(SubsetMask::singleton(i));
            evaluated += 1;
            let (small, big) = (capacity.value(mask), capacity.value(larger));
            if !(small <= big + IDENTITY_TOLERANCE) {
                record(
                    Counterexample {
                        axiom: Axiom::Monotonicity,
                        sets: vec![mask, larger],
                        lhs: small,
                        rhs: big,
                    },
                    &mut found,
                );
            }
        }
    }
    MonotonicityReport::from_counterexamples(CheckMethod::Direct, found, evaluated)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of collections of `2..=n_max` distinct nonempty subsets of a `K`-frame.
pub fn collection_count(frame_size: usize, n_max: usize) -> u128 {
    let nonempty = (1u128 << frame_size) - 1;
    (2..=n_max as u128).fold(0u128, |acc, n| acc.saturating_add(binomial(nonempty, n)))
}

/// Both sides of the total-monotonicity inequality for one collection:
/// `(ν(⋃ Bᵢ), Σ_{∅≠J} (−1)^{|J|+1} ν(⋂_{j∈J} Bⱼ))`.
pub fn inclusion_exclusion_sides(capacity: &Capacity, sets: &[SubsetMask]) -> (f64, f64) {
    let union = sets.iter().fold(SubsetMask::EMPTY, |acc, &s| acc.union(s));
    let mut rhs = 0.0;
    for selector in 1u64..(1u64 << sets.len()) {
        let mut inter = capacity.frame.full();
        for (j, &s) in sets.iter().enumerate() {
            if selector & (1 << j) != 0 {
                inter = inter.intersection(s);
            }
        }
        let term = capacity.value(inter);
        if selector.count_ones() % 2 == 1 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    (capacity.value(union), rhs)
}

/// Enumerates every collection of `2..=n_max` distinct nonempty subsets and
/// tests the inclusion–exclusion inequality within `DATA_TOLERANCE`.
pub fn check_total_monotonicity_exhaustive(
    capacity: &Capacity,
    n_max: usize,
    budget: u128,
) -> Result<MonotonicityReport> {
    if n_max < 2 {
        return Err(Error::InvalidConfig(format!(
            "collection size bound must be at least 2, got {n_max}"
        )));
    }
    let k = capacity.frame.len();
    let n_max = n_max.min((1usize << k) - 1);
    let required = collection_count(k, n_max);
    if required > budget {
        return Err(Error::TooLarge { required, budget });
    }

    let candidates: Vec<SubsetMask> = capacity.frame.subsets().skip(1).collect();
    let mut found = Vec::new();
    let mut evaluated = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(n_max);
    let mut sets: Vec<SubsetMask> = Vec::with_capacity(n_max);

    for size in 2..=n_max {
        // Lexicographic walk over index combinations of the given size.
        chosen.clear();
        chosen.extend(0..size);
        loop {
            sets.clear();
            sets.extend(chosen.iter().map(|&i| candidates[i]));
            let (lhs, rhs) = inclusion_exclusion_sides(capacity, &sets);
            evaluated += 1;
            if !(lhs >= rhs - DATA_TOLERANCE) && found.len() < MAX_COUNTEREXAMPLES {
                found.push(Counterexample {
                    axiom: Axiom::TotalMonotonicity,
                    sets: sets.clone(),
                    lhs,
                    rhs,
                });
            }

            let mut pos = size;
            while pos > 0 && chosen[pos - 1] == candidates.len() - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            chosen[pos - 1] += 1;
            for j in pos..size {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
    }
    Ok(MonotonicityReport::from_counterexamples(
        CheckMethod::Exhaustive,
        found,
        evaluated,
    ))
}

/// [`check_total_monotonicity_with_budget`] with the default budget.
pub fn check_total_monotonicity(capacity: &Capacity, n_max: usize) -> Result<MonotonicityReport> {
    check_total_monotonicity_with_budget(capacity, n_max, DEFAULT_ENUMERATION_BUDGET)
}

/// Total monotonicity up to collections of size `n_max`.
///
/// A nonnegative Möbius transform passes without enumeration. Otherwise the
/// collections are enumerated when the budget allows. Past the budget, a
/// negative Möbius weight on a set `A` with `2 ≤ |A| ≤ n_max` yields the witness
/// `{A∖{ω} : ω ∈ A}`, whose inclusion–exclusion gap equals that weight.
pub fn check_total_monotonicity_with_budget(
    capacity: &Capacity,
    n_max: usize,
    budget: u128,
) -> Result<MonotonicityReport> {
    if n_max < 2 {
        return Err(Error::InvalidConfig(format!(
            "collection size bound must be at least 2, got {n_max}"
        )));
    }
    let mobius = mobius_from_capacity(capacity);
    if mobius.is_nonnegative(IDENTITY_TOLERANCE) {
        return Ok(MonotonicityReport::from_counterexamples(
            CheckMethod::MobiusFastPath,
            Vec::new(),
            0,
        ));
    }
    match check_total_monotonicity_exhaustive(capacity, n_max, budget) {
        Err(Error::TooLarge { required, budget }) => {
            let witness = mobius
                .entries()
                .filter(|&(m, w)| w < -DATA_TOLERANCE && (2..=n_max).contains(&m.len()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let Some((set, _)) = witness else {
                return Err(Error::TooLarge { required, budget });
            };
            let sets: Vec<SubsetMask> = set
                .indices()
                .map(|i| set.difference(SubsetMask::singleton(i)))
                .rev()
                .collect();
            let (lhs, rhs) = inclusion_exclusion_sides(capacity, &sets);
            Ok(MonotonicityReport::from_counterexamples(
                CheckMethod::MobiusWitness,
                vec![Counterexample {
                    axiom: Axiom::TotalMonotonicity,
                    sets,
                    lhs,
                    rhs,
                }],
                1,
            ))
        }
        other => other,
    }
}

/// True iff `ν(A ∪ B) = ν(A) + ν(B)` within `DATA_TOLERANCE` for all disjoint
/// nonempty `A`, `B`. Visits `O(3^K)` pairs.
pub fn is_additive(capacity: &Capacity) -> bool {
    for union in capacity.frame.subsets() {
        let u = union.0;
        // proper nonempty submasks of the union
        let mut a = (u.wrapping_sub(1)) & u;
        while a != 0 {
            let b = u ^ a;
            if a < b {
                let lhs = capacity.value(union);
                let rhs = capacity.value(SubsetMask(a)) + capacity.value(SubsetMask(b));
                if !((lhs - rhs).abs() <= DATA_TOLERANCE) {
                    return false;
                }
            }
            a = (a - 1) & u;
        }
    }
    true
}

/// The conjugate capacity `ν̄(A) = 1 − ν(Aᶜ)`.
///
/// Conjugating a conjugate returns the original table unchanged.
pub fn dual_capacity(capacity: &Capacity) -> Capacity {
    if let Some(original) = &capacity.conjugate_of {
        return original.as_ref().clone();
    }
    let frame = &capacity.frame;
    let values = frame
        .subsets()
        .map(|a| 1.0 - capacity.value(frame.complement(a)))
        .collect();
    Capacity {
        frame: frame.clone(),
        values,
        conjugate_of: Some(Arc::new(capacity.clone())),
    }
}

/// Independent product: `A × B` carries `m1(A)·m2(B)`.
pub fn product_mass(first: &MassFunction, second: &MassFunction) -> Result<MassFunction> {
    let frame = ProductFrame::new(first.frame(), second.frame())?;
    product_mass_on(&frame, first, second)
}

/// [`product_mass`] on an already constructed product frame.
pub fn product_mass_on(
    frame: &ProductFrame,
    first: &MassFunction,
    second: &MassFunction,
) -> Result<MassFunction> {
    if first.frame() != frame.first() || second.frame() != frame.second() {
        return Err(Error::FrameMismatch);
    }
    let mut weights = BTreeMap::new();
    let mut total = 0.0;
    for (a, wa) in first.focal_elements() {
        for (b, wb) in second.focal_elements() {
            let w = wa * wb;
            if w > 0.0 {
                total += w;
                weights.insert(frame.rectangle(a, b), w);
            }
        }
    }
    if (total - 1.0).abs() > DATA_TOLERANCE {
        return Err(Error::MassInvalid(format!(
            "product weights sum to {total}"
        )));
    }
    Ok(MassFunction {
        frame: frame.joint().clone(),
        weights,
    })
}
