//! Correspondence representation of totally monotone capacities.
//!
//! The base probability space is never materialized. A correspondence is a
//! step map whose cells are described only by their probability weight and
//! the focal set they map to, which is all that lower distributions and
//! Aumann integrals depend on.

use serde::{Deserialize, Serialize};

use crate::capacity::{
    containment_table, Capacity, Frame, MassFunction, SubsetMask, DATA_TOLERANCE,
};
use crate::choquet::RandomVariable;
use crate::error::{Error, Result};
use crate::random_sets::RealCompactSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameCell {
    pub weight: f64,
    pub focal: SubsetMask,
}

/// A set-valued step map into a finite frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCorrespondence {
    frame: Frame,
    cells: Vec<FrameCell>,
}

impl FrameCorrespondence {
    /// Validates the cells and sorts them by focal mask.
    pub fn new(frame: Frame, mut cells: Vec<FrameCell>) -> Result<Self> {
        let mut total = 0.0;
        for cell in &cells {
            if !(cell.weight.is_finite() && cell.weight > 0.0) {
                return Err(Error::MassInvalid(format!(
                    "cell weight {} is not positive",
                    cell.weight
                )));
            }
            if cell.focal.is_empty() || !frame.contains_mask(cell.focal) {
                return Err(Error::MassInvalid(format!(
                    "cell value {} is not a nonempty subset of the frame",
                    cell.focal
                )));
            }
            total += cell.weight;
        }
        if (total - 1.0).abs() > DATA_TOLERANCE {
            return Err(Error::MassInvalid(format!("cell weights sum to {total}")));
        }
        cells.sort_by_key(|c| c.focal);
        if cells.windows(2).any(|w| w[0].focal == w[1].focal) {
            return Err(Error::MassInvalid("two cells share a focal set".into()));
        }
        Ok(FrameCorrespondence { frame, cells })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn cells(&self) -> &[FrameCell] {
        &self.cells
    }

    /// Total weight of the cells whose value lies inside `set`.
    pub fn lower_inverse_weight(&self, set: SubsetMask) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.focal.is_subset_of(set))
            .map(|c| c.weight)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealCell {
    pub weight: f64,
    pub value: RealCompactSet,
}

/// A step correspondence with finite subsets of the reals as values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealCorrespondence {
    cells: Vec<RealCell>,
}

impl RealCorrespondence {
    pub fn new(cells: Vec<RealCell>) -> Result<Self> {
        if cells
            .iter()
            .any(|c| !(c.weight.is_finite() && c.weight > 0.0))
        {
            return Err(Error::MassInvalid("cell weights must be positive".into()));
        }
        let total: f64 = cells.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > DATA_TOLERANCE {
            return Err(Error::MassInvalid(format!("cell weights sum to {total}")));
        }
        Ok(RealCorrespondence { cells })
    }

    pub fn cells(&self) -> &[RealCell] {
        &self.cells
    }
}

/// One cell per focal element, weighted by its mass.
pub fn correspondence_from_mass(mass: &MassFunction) -> FrameCorrespondence {
    let cells = mass
        .focal_elements()
        .map(|(focal, weight)| FrameCell { weight, focal })
        .collect();
    // focal elements are already unique, nonempty and in mask order
    FrameCorrespondence {
        frame: mass.frame().clone(),
        cells,
    }
}

/// `ν_F(B)`: weight of the cells whose value is contained in `B`.
pub fn lower_distribution(correspondence: &FrameCorrespondence) -> Capacity {
    let values = containment_table(
        &correspondence.frame,
        correspondence.cells.iter().map(|c| (c.focal, c.weight)),
    );
    Capacity::new(correspondence.frame.clone(), values)
        .expect("containment table has one finite entry per subset")
}

/// `s ↦ X(F(s))`.
pub fn compose_rv(
    x: &RandomVariable,
    correspondence: &FrameCorrespondence,
) -> Result<RealCorrespondence> {
    if x.frame() != correspondence.frame() {
        return Err(Error::FrameMismatch);
    }
    let cells = correspondence
        .cells
        .iter()
        .map(|c| {
            let image = c.focal.indices().map(|i| x.value(i)).collect();
            Ok(RealCell {
                weight: c.weight,
                value: RealCompactSet::new(image)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RealCorrespondence { cells })
}
