//! Choquet integration of simple random variables.

use std::collections::BTreeMap;

use crate::capacity::{Capacity, Frame, ProductFrame, SubsetMask, IDENTITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::random_sets::Interval;

/// A real-valued function on the outcomes of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomVariable {
    frame: Frame,
    values: Vec<f64>,
}

impl RandomVariable {
    /// Values in frame order.
    pub fn new(frame: Frame, values: Vec<f64>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::InvalidConfig(format!(
                "{} values for {} outcomes",
                values.len(),
                frame.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "random variable values must be finite".into(),
            ));
        }
        Ok(RandomVariable { frame, values })
    }

    /// Values keyed by label; every label of the frame must be present.
    pub fn from_labels<S: AsRef<str>>(frame: Frame, entries: &[(S, f64)]) -> Result<Self> {
        let mut values = vec![None; frame.len()];
        for (label, value) in entries {
            let label = label.as_ref();
            let i = frame
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            if values[i].replace(*value).is_some() {
                return Err(Error::Parse(format!("value for {label:?} given twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Parse(format!("no value for outcome {:?}", frame.labels()[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RandomVariable::new(frame, values)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn negated(&self) -> Self {
        RandomVariable {
            frame: self.frame.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        RandomVariable::new(
            self.frame.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest value over a nonempty subset.
    pub fn min_on(&self, mask: SubsetMask) -> f64 {
        mask.indices()
            .map(|i| self.values[i])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_on(&self, mask: SubsetMask) -> f64 {
        mask.indices()
            .map(|i| self.values[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distinct values, ascending.
    pub fn range(&self) -> Vec<f64> {
        let mut r = self.values.clone();
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    /// `{ω : X(ω) ∈ G}` for a set of values `G`.
    pub fn preimage(&self, values: &[f64]) -> SubsetMask {
        SubsetMask::from_indices(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, v)| values.contains(v))
                .map(|(i, _)| i),
        )
    }

    /// `{ω : X(ω) > t}`.
    pub fn upper_level_set(&self, t: f64) -> SubsetMask {
        SubsetMask::from_indices(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > t)
                .map(|(i, _)| i),
        )
    }

    /// `(ω₁, ω₂) ↦ X(ω₁)` on a product frame.
    pub fn lift_first(&self, product: &ProductFrame) -> Result<Self> {
        if &self.frame != product.first() {
            return Err(Error::FrameMismatch);
        }
        let values = (0..product.joint().len())
            .map(|k| self.values[product.coordinates(k).0])
            .collect();
        RandomVariable::new(product.joint().clone(), values)
    }

    /// `(ω₁, ω₂) ↦ X(ω₂)` on a product frame.
    pub fn lift_second(&self, product: &ProductFrame) -> Result<Self> {
        if &self.frame != product.second() {
            return Err(Error::FrameMismatch);
        }
        let values = (0..product.joint().len())
            .map(|k| self.values[product.coordinates(k).1])
            .collect();
        RandomVariable::new(product.joint().clone(), values)
    }
}

/// Lower Choquet integral `∫X dν`.
///
/// With distinct values `v₁ > v₂ > … > v_k` and upper level sets
/// `Aᵢ = {X ≥ vᵢ}`, the Riemann definition reduces to
/// `v_k + Σ_{i<k} (vᵢ − vᵢ₊₁)·ν(Aᵢ)`. Tied outcomes share a level set, so the
/// result does not depend on how ties are ordered.
pub fn choquet_integral(x: &RandomVariable, capacity: &Capacity) -> Result<f64> {
    if x.frame() != capacity.frame() {
        return Err(Error::FrameMismatch);
    }
    let mut levels: BTreeMap<OrderedValue, SubsetMask> = BTreeMap::new();
    for (i, &v) in x.values.iter().enumerate() {
        let slot = levels.entry(OrderedValue(v)).or_default();
        *slot = slot.union(SubsetMask::singleton(i));
    }
    let mut upper = SubsetMask::EMPTY;
    let mut total = 0.0;
    let mut descending = levels.into_iter().rev().peekable();
    while let Some((OrderedValue(v), members)) = descending.next() {
        upper = upper.union(members);
        match descending.peek() {
            Some(&(OrderedValue(next), _)) => total += (v - next) * capacity.value(upper),
            None => total += v,
        }
    }
    Ok(total)
}

/// Upper Choquet integral `−∫(−X) dν`.
pub fn upper_choquet_integral(x: &RandomVariable, capacity: &Capacity) -> Result<f64> {
    Ok(-choquet_integral(&x.negated(), capacity)?)
}

/// `[∫X dν, −∫−X dν]`.
pub fn integral_interval(x: &RandomVariable, capacity: &Capacity) -> Result<Interval> {
    let lo = choquet_integral(x, capacity)?;
    let hi = upper_choquet_integral(x, capacity)?;
    if lo > hi + IDENTITY_TOLERANCE {
        return Err(Error::InconsistentInput(format!(
            "lower integral {lo} exceeds upper integral {hi}; is the capacity monotone?"
        )));
    }
    // rounding can leave lo a hair above hi for additive capacities
    Interval::new(lo, hi.max(lo))
}

/// Searches indicators `1_A` for the largest gap between upper and lower
/// integrals, `ν̄(A) − ν(A)`. Returns the subset and gap if it exceeds `threshold`.
pub fn indicator_gap_witness(capacity: &Capacity, threshold: f64) -> Option<(SubsetMask, f64)> {
    let frame = capacity.frame();
    frame
        .subsets()
        .map(|a| {
            let upper = 1.0 - capacity.value(frame.complement(a));
            (a, upper - capacity.value(a))
        })
        .filter(|&(_, gap)| gap > threshold)
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

#[derive(Clone, Copy, Debug)]
struct OrderedValue(f64);

impl PartialEq for OrderedValue {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0).is_eq()
    }
}

impl Eq for OrderedValue {}

impl PartialOrd for OrderedValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
