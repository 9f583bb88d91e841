//! JSON input documents.
//!
//! ```json
//! {
//!   "frame": ["H", "T"],
//!   "mass": [
//!     { "subset": ["H"], "weight": 0.4 },
//!     { "subset": ["H", "T"], "weight": 0.6 }
//!   ],
//!   "rv": { "H": 1.0, "T": 0.0 }
//! }
//! ```
//!
//! Instead of `mass`, a document may carry a raw `capacity` table listing a
//! `value` for every nonempty subset. An optional `joint` section gives a mass
//! function on the product of the frame with itself, with subsets written as
//! lists of `[first, second]` label pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::capacity::{
    mobius_from_capacity, Capacity, Frame, MassFunction, ProductFrame, SubsetMask, DATA_TOLERANCE,
};
use crate::choquet::RandomVariable;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub subset: Vec<String>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub subset: Vec<String>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointEntry {
    pub subset: Vec<(String, String)>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySpecDocument {
    pub frame: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<Vec<MassEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<Vec<TableEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rv: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<Vec<JointEntry>>,
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct CapacitySpec {
    pub frame: Frame,
    pub mass: Option<MassFunction>,
    pub table: Option<Capacity>,
    pub rv: Option<RandomVariable>,
    pub joint: Option<(ProductFrame, MassFunction)>,
}

impl CapacitySpec {
    /// The mass function, taken from the `mass` section or, failing that,
    /// recovered from the `capacity` table by Möbius inversion. A table with a
    /// negative Möbius weight is rejected.
    pub fn mass_function(&self) -> Result<MassFunction> {
        match (&self.mass, &self.table) {
            (Some(m), _) => Ok(m.clone()),
            (None, Some(table)) => mobius_from_capacity(table).to_mass_function(),
            (None, None) => Err(Error::Parse(
                "document has neither mass nor capacity".into(),
            )),
        }
    }

    pub fn require_rv(&self) -> Result<&RandomVariable> {
        self.rv
            .as_ref()
            .ok_or_else(|| Error::Parse("document has no rv section".into()))
    }
}

pub fn parse_document(text: &str) -> Result<CapacitySpecDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_weight(w: f64, what: &str) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::Parse(format!(
            "{what} {w} is not a nonnegative number"
        )));
    }
    Ok(())
}

fn check_sum(weights: impl Iterator<Item = f64>) -> Result<()> {
    let sum: f64 = weights.sum();
    if !((sum - 1.0).abs() <= DATA_TOLERANCE) {
        return Err(Error::Normalization { sum });
    }
    Ok(())
}

fn subset_mask(frame: &Frame, labels: &[String]) -> Result<SubsetMask> {
    if labels.is_empty() {
        return Err(Error::Parse("subsets must be nonempty".into()));
    }
    frame.mask_of(labels)
}

fn no_repeats(masks: &[SubsetMask]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for m in masks {
        if !seen.insert(*m) {
            return Err(Error::Parse(format!("subset {m} listed twice")));
        }
    }
    Ok(())
}

fn frame_of(doc: &CapacitySpecDocument) -> Result<Frame> {
    Frame::new(doc.frame.iter().cloned())
}

fn mass_of(frame: &Frame, entries: &[MassEntry]) -> Result<MassFunction> {
    let masks = entries
        .iter()
        .map(|e| subset_mask(frame, &e.subset))
        .collect::<Result<Vec<_>>>()?;
    no_repeats(&masks)?;
    for e in entries {
        check_weight(e.weight, "weight")?;
    }
    check_sum(entries.iter().map(|e| e.weight))?;
    MassFunction::new(
        frame.clone(),
        masks.into_iter().zip(entries.iter().map(|e| e.weight)),
    )
}

fn table_of(frame: &Frame, entries: &[TableEntry]) -> Result<Capacity> {
    let mut values = vec![None; frame.subset_count()];
    values[0] = Some(0.0);
    for e in entries {
        let mask = subset_mask(frame, &e.subset)?;
        if !e.value.is_finite() {
            return Err(Error::Parse(format!(
                "capacity value {} is not finite",
                e.value
            )));
        }
        if values[mask.0 as usize].replace(e.value).is_some() {
            return Err(Error::Parse(format!("subset {mask} listed twice")));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                let labels = frame.labels_of(SubsetMask(i as u32)).join(",");
                Error::Parse(format!("capacity table has no value for {{{labels}}}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Capacity::new(frame.clone(), values)
}

fn rv_of(frame: &Frame, values: &BTreeMap<String, f64>) -> Result<RandomVariable> {
    let entries: Vec<(&str, f64)> = values.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    if let Some((label, _)) = entries.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Parse(format!(
            "rv value for {label:?} is not finite"
        )));
    }
    RandomVariable::from_labels(frame.clone(), &entries)
}

fn joint_of(frame: &Frame, entries: &[JointEntry]) -> Result<(ProductFrame, MassFunction)> {
    let product = ProductFrame::new(frame, frame)?;
    let masks = entries
        .iter()
        .map(|e| {
            if e.subset.is_empty() {
                return Err(Error::Parse("subsets must be nonempty".into()));
            }
            e.subset.iter().try_fold(SubsetMask::EMPTY, |acc, (a, b)| {
                let i = frame
                    .index_of(a)
                    .ok_or_else(|| Error::UnknownLabel(a.clone()))?;
                let j = frame
                    .index_of(b)
                    .ok_or_else(|| Error::UnknownLabel(b.clone()))?;
                Ok(acc.union(SubsetMask::singleton(product.index(i, j))))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    no_repeats(&masks)?;
    for e in entries {
        check_weight(e.weight, "weight")?;
    }
    check_sum(entries.iter().map(|e| e.weight))?;
    let mass = MassFunction::new(
        product.joint().clone(),
        masks.into_iter().zip(entries.iter().map(|e| e.weight)),
    )?;
    Ok((product, mass))
}

/// Validates every section of a document.
pub fn load_spec(text: &str) -> Result<CapacitySpec> {
    let doc = parse_document(text)?;
    let frame = frame_of(&doc)?;
    let mass = doc
        .mass
        .as_deref()
        .map(|e| mass_of(&frame, e))
        .transpose()?;
    let table = doc
        .capacity
        .as_deref()
        .map(|e| table_of(&frame, e))
        .transpose()?;
    if mass.is_none() && table.is_none() {
        return Err(Error::Parse(
            "document needs a mass or a capacity section".into(),
        ));
    }
    let rv = doc.rv.as_ref().map(|v| rv_of(&frame, v)).transpose()?;
    let joint = doc
        .joint
        .as_deref()
        .map(|e| joint_of(&frame, e))
        .transpose()?;
    Ok(CapacitySpec {
        frame,
        mass,
        table,
        rv,
        joint,
    })
}

/// The mass function and optional random variable of a mass-first document.
pub fn parse_capacity_spec(text: &str) -> Result<(MassFunction, Option<RandomVariable>)> {
    let doc = parse_document(text)?;
    let frame = frame_of(&doc)?;
    let entries = doc
        .mass
        .as_deref()
        .ok_or_else(|| Error::Parse("document has no mass section".into()))?;
    let mass = mass_of(&frame, entries)?;
    let rv = doc.rv.as_ref().map(|v| rv_of(&frame, v)).transpose()?;
    Ok((mass, rv))
}

/// The raw capacity table and optional random variable of a table document.
pub fn parse_capacity_table(text: &str) -> Result<(Capacity, Option<RandomVariable>)> {
    let doc = parse_document(text)?;
    let frame = frame_of(&doc)?;
    let entries = doc
        .capacity
        .as_deref()
        .ok_or_else(|| Error::Parse("document has no capacity section".into()))?;
    let table = table_of(&frame, entries)?;
    let rv = doc.rv.as_ref().map(|v| rv_of(&frame, v)).transpose()?;
    Ok((table, rv))
}
