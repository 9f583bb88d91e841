//! Compact subsets of the real line.
//!
//! Every set that arises from a simple random variable on a finite frame is a
//! finite point set, so [`RealCompactSet`] stores sorted points. Intervals only
//! appear as limits of Minkowski averages and as values of Aumann integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::capacity::DATA_TOLERANCE;
use crate::error::{Error, Result};
use crate::representation::RealCorrespondence;

/// Points closer than this are merged by [`minkowski_sum`].
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Default cap on the number of points (or selections) a set operation may produce.
pub const DEFAULT_SET_BUDGET: usize = 1_000_000;

/// A nonempty, finite, strictly increasing set of reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealCompactSet {
    points: Vec<f64>,
}

impl RealCompactSet {
    /// Sorts the points and drops exact duplicates.
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSet("compact set has no points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidSet("points must be finite".into()));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(RealCompactSet { points })
    }

    pub fn singleton(x: f64) -> Result<Self> {
        RealCompactSet::new(vec![x])
    }

    pub(crate) fn from_sorted(points: Vec<f64>) -> Self {
        debug_assert!(!points.is_empty());
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        RealCompactSet { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn diameter(&self) -> f64 {
        self.max() - self.min()
    }

    /// Distance from `x` to the nearest point.
    pub fn distance_to(&self, x: f64) -> f64 {
        Compact::Points(&self.points).distance_to(x)
    }
}

impl TryFrom<Vec<f64>> for RealCompactSet {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        RealCompactSet::new(points)
    }
}

impl From<RealCompactSet> for Vec<f64> {
    fn from(set: RealCompactSet) -> Self {
        set.points
    }
}

/// A closed, bounded interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidSet(format!(
                "interval [{lo}, {hi}] is not finite"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidSet(format!(
                "interval [{lo}, {hi}] is reversed"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        Interval::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Either kind of compact set, for [`hausdorff_distance`].
#[derive(Clone, Copy, Debug)]
pub enum Compact<'a> {
    Points(&'a [f64]),
    Interval(Interval),
}

impl<'a> From<&'a RealCompactSet> for Compact<'a> {
    fn from(set: &'a RealCompactSet) -> Self {
        Compact::Points(&set.points)
    }
}

impl From<Interval> for Compact<'_> {
    fn from(interval: Interval) -> Self {
        Compact::Interval(interval)
    }
}

impl From<&Interval> for Compact<'_> {
    fn from(interval: &Interval) -> Self {
        Compact::Interval(*interval)
    }
}

impl Compact<'_> {
    pub fn distance_to(&self, x: f64) -> f64 {
        match *self {
            Compact::Interval(i) => (i.lo - x).max(x - i.hi).max(0.0),
            Compact::Points(points) => {
                let k = points.partition_point(|&p| p < x);
                let right = points.get(k).map_or(f64::INFINITY, |&p| p - x);
                let left = if k > 0 {
                    x - points[k - 1]
                } else {
                    f64::INFINITY
                };
                left.min(right)
            }
        }
    }

    /// `sup_{a ∈ self} d(a, other)`, the one-sided excess of `self` over `other`.
    pub fn excess_over(&self, other: &Compact<'_>) -> f64 {
        match (*self, *other) {
            (Compact::Points(points), _) => points
                .iter()
                .map(|&p| other.distance_to(p))
                .fold(0.0, f64::max),
            (Compact::Interval(i), Compact::Interval(_)) => {
                other.distance_to(i.lo).max(other.distance_to(i.hi))
            }
            (Compact::Interval(i), Compact::Points(points)) => {
                // distance to a finite set peaks at the interval ends or at
                // midpoints between consecutive points
                let mut worst = other.distance_to(i.lo).max(other.distance_to(i.hi));
                for w in points.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    if i.contains(mid) {
                        worst = worst.max(other.distance_to(mid));
                    }
                }
                worst
            }
        }
    }
}

/// `max(sup_{a∈A} d(a, B), sup_{b∈B} d(b, A))`.
pub fn hausdorff_distance<'a, 'b>(a: impl Into<Compact<'a>>, b: impl Into<Compact<'b>>) -> f64 {
    let (a, b) = (a.into(), b.into());
    a.excess_over(&b).max(b.excess_over(&a))
}

pub fn hull_interval(set: &RealCompactSet) -> Interval {
    Interval {
        lo: set.min(),
        hi: set.max(),
    }
}

#[derive(Debug)]
struct PendingSum {
    sum: f64,
    i: usize,
    j: usize,
}

impl PartialEq for PendingSum {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for PendingSum {}

impl PartialOrd for PendingSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PendingSum {
    // reversed so BinaryHeap pops the smallest sum
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .sum
            .total_cmp(&self.sum)
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}

/// [`minkowski_sum_with_budget`] with [`DEFAULT_SET_BUDGET`].
pub fn minkowski_sum(a: &RealCompactSet, b: &RealCompactSet) -> Result<RealCompactSet> {
    minkowski_sum_with_budget(a, b, DEFAULT_SET_BUDGET)
}

/// `{a + b}` with sums closer than [`MERGE_TOLERANCE`] merged.
///
/// Sums are generated in increasing order by a k-way merge, so memory stays
/// proportional to the smaller operand plus the output. A merged cluster is
/// represented by its smallest member, except the last cluster, which keeps
/// its largest so that `min` and `max` of the result are exactly
/// `min A + min B` and `max A + max B`.
pub fn minkowski_sum_with_budget(
    a: &RealCompactSet,
    b: &RealCompactSet,
    budget: usize,
) -> Result<RealCompactSet> {
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut heap: BinaryHeap<PendingSum> = outer
        .points
        .iter()
        .enumerate()
        .map(|(i, &x)| PendingSum {
            sum: x + inner.points[0],
            i,
            j: 0,
        })
        .collect();

    let mut out: Vec<f64> = Vec::new();
    let mut cluster_last = f64::NAN;
    while let Some(PendingSum { sum, i, j }) = heap.pop() {
        match out.last() {
            Some(&head) if sum - head <= MERGE_TOLERANCE => cluster_last = sum,
            _ => {
                if out.len() == budget {
                    return Err(Error::SetTooLarge { budget });
                }
                out.push(sum);
                cluster_last = sum;
            }
        }
        if j + 1 < inner.len() {
            heap.push(PendingSum {
                sum: outer.points[i] + inner.points[j + 1],
                i,
                j: j + 1,
            });
        }
    }
    if let Some(last) = out.last_mut() {
        *last = cluster_last;
    }
    Ok(RealCompactSet::from_sorted(out))
}

/// `{c·a : a ∈ A}`.
pub fn scale_set(set: &RealCompactSet, c: f64) -> RealCompactSet {
    let mut points: Vec<f64> = set.points.iter().map(|&p| c * p).collect();
    if c < 0.0 {
        points.reverse();
    }
    // rounding (or c = 0) can collapse neighbours
    points.dedup();
    RealCompactSet::from_sorted(points)
}

/// `[Σ wᵢ·min Kᵢ, Σ wᵢ·max Kᵢ]`.
pub fn aumann_integral(correspondence: &RealCorrespondence) -> Interval {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for cell in correspondence.cells() {
        lo += cell.weight * cell.value.min();
        hi += cell.weight * cell.value.max();
    }
    Interval { lo, hi }
}

/// Integrals `Σ wᵢ·sᵢ` of every step selection `sᵢ ∈ Kᵢ`, sorted and deduplicated.
pub fn step_selection_integrals(
    correspondence: &RealCorrespondence,
    budget: usize,
) -> Result<Vec<f64>> {
    let cells = correspondence.cells();
    let mut count: usize = 1;
    for cell in cells {
        count = count
            .checked_mul(cell.value.len())
            .filter(|&c| c <= budget)
            .ok_or(Error::SetTooLarge { budget })?;
    }
    let mut choice = vec![0usize; cells.len()];
    let mut integrals = Vec::with_capacity(count);
    loop {
        let mut total = 0.0;
        for (cell, &k) in cells.iter().zip(&choice) {
            total += cell.weight * cell.value.points()[k];
        }
        integrals.push(total);

        let mut pos = 0;
        while pos < cells.len() {
            choice[pos] += 1;
            if choice[pos] < cells[pos].value.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == cells.len() {
            break;
        }
    }
    integrals.sort_by(f64::total_cmp);
    integrals.dedup();
    Ok(integrals)
}

/// Hull of all step-selection integrals; brute-force counterpart of
/// [`aumann_integral`].
pub fn selection_integral_oracle(correspondence: &RealCorrespondence) -> Result<Interval> {
    let integrals = step_selection_integrals(correspondence, DEFAULT_SET_BUDGET)?;
    Ok(Interval {
        lo: integrals[0],
        hi: integrals[integrals.len() - 1],
    })
}

/// Tail window and tolerance for [`cluster_bounds_check`].
#[derive(Clone, Copy, Debug)]
pub struct ClusterCheckOptions {
    /// Fraction of the sequence, counted from the end, standing in for the limit.
    pub tail_fraction: f64,
    pub tolerance: f64,
}

impl Default for ClusterCheckOptions {
    fn default() -> Self {
        ClusterCheckOptions {
            tail_fraction: 0.1,
            tolerance: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterBounds {
    pub within: bool,
    pub tail_start: usize,
    pub tail_min: f64,
    pub tail_max: f64,
    /// `d_H(Kₙ, limit)` for every n.
    pub hausdorff: Vec<f64>,
    /// One-sided excess `sup_{t ∈ Kₙ} d(t, limit)` for every n.
    pub excess: Vec<f64>,
}

/// First index of the last `tail_fraction` of a sequence of length `len`.
pub fn tail_start(len: usize, tail_fraction: f64) -> usize {
    let tail = ((len as f64) * tail_fraction).ceil() as usize;
    len - tail.clamp(1, len.max(1))
}

/// Finite-horizon check that a selection `kₙ ∈ Kₙ` of sets approaching
/// `[α, β]` clusters inside `[α, β]`.
///
/// `liminf`/`limsup` are replaced by the minimum and maximum over the tail
/// window. Sets whose excess over the limit stays above the tolerance in the
/// tail do not approach it, and the input is rejected as inconsistent.
pub fn cluster_bounds_check(
    sets: &[RealCompactSet],
    limit: Interval,
    selection: &[f64],
    options: ClusterCheckOptions,
) -> Result<ClusterBounds> {
    if sets.len() != selection.len() {
        return Err(Error::InvalidConfig(format!(
            "{} sets but {} selected points",
            sets.len(),
            selection.len()
        )));
    }
    if sets.is_empty() {
        return Err(Error::InvalidConfig("empty sequence".into()));
    }
    if !(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "tail fraction {} outside (0, 1]",
            options.tail_fraction
        )));
    }
    for (index, (set, &value)) in sets.iter().zip(selection).enumerate() {
        if !(set.distance_to(value) <= DATA_TOLERANCE) {
            return Err(Error::NotASelection { index, value });
        }
    }
    let target = Compact::Interval(limit);
    let hausdorff: Vec<f64> = sets.iter().map(|s| hausdorff_distance(s, limit)).collect();
    let excess: Vec<f64> = sets
        .iter()
        .map(|s| Compact::from(s).excess_over(&target))
        .collect();

    let start = tail_start(sets.len(), options.tail_fraction);
    let worst = excess[start..].iter().copied().fold(0.0, f64::max);
    if worst > options.tolerance {
        return Err(Error::InconsistentInput(format!(
            "sets stay {worst} away from [{}, {}] in the tail window",
            limit.lo, limit.hi
        )));
    }
    let tail = &selection[start..];
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let within =
        tail_min >= limit.lo - options.tolerance && tail_max <= limit.hi + options.tolerance;
    Ok(ClusterBounds {
        within,
        tail_start: start,
        tail_min,
        tail_max,
        hausdorff,
        excess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::RealCell;

    fn set(points: &[f64]) -> RealCompactSet {
        RealCompactSet::new(points.to_vec()).unwrap()
    }

    fn corr(cells: &[(f64, &[f64])]) -> RealCorrespondence {
        RealCorrespondence::new(
            cells
                .iter()
                .map(|&(w, pts)| RealCell {
                    weight: w,
                    value: set(pts),
                })
                .collect(),
        )
        .unwrap()
    }

    // Every pairwise sum, sorted, with exact duplicates removed.
    fn brute_sum(a: &RealCompactSet, b: &RealCompactSet) -> Vec<f64> {
        let mut v: Vec<f64> = a
            .points()
            .iter()
            .flat_map(|x| b.points().iter().map(move |y| x + y))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    #[test]
    fn set_construction() {
        assert!(RealCompactSet::new(vec![]).is_err());
        assert!(RealCompactSet::new(vec![f64::NAN]).is_err());
        assert_eq!(set(&[3.0, 1.0, 3.0]).points(), &[1.0, 3.0]);
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn minkowski_examples() {
        let s = minkowski_sum(&set(&[0.0, 1.0]), &set(&[0.0, 1.0])).unwrap();
        assert_eq!(s.points(), &[0.0, 1.0, 2.0]);
        let a = set(&[-1.5, 0.25, 4.0]);
        assert_eq!(minkowski_sum(&a, &set(&[0.0])).unwrap(), a);
        let s = minkowski_sum(&set(&[1.0, 3.0]), &set(&[10.0])).unwrap();
        assert_eq!(s.points(), &[11.0, 13.0]);
    }

    #[test]
    fn minkowski_matches_brute_force() {
        let a = set(&[0.0, 0.25, 0.75, 2.0]);
        let b = set(&[-1.0, 0.125, 0.5]);
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.points(), brute_sum(&a, &b).as_slice());
    }

    #[test]
    fn minkowski_merges_near_duplicates_keeping_extremes() {
        let a = set(&[0.0, 1.0]);
        let b = set(&[0.0, 1.0 + 1e-13]);
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.min(), 0.0);
        assert_eq!(s.max(), a.max() + b.max());
        // the middle cluster {1, 1 + 1e-13} keeps its smallest member
        assert_eq!(s.points()[1], 1.0);
    }

    #[test]
    fn minkowski_budget() {
        let a = set(&[0.0, 1.0, 2.0]);
        let b = set(&[0.0, 0.1]);
        assert!(matches!(
            minkowski_sum_with_budget(&a, &b, 5),
            Err(Error::SetTooLarge { budget: 5 })
        ));
        assert_eq!(minkowski_sum_with_budget(&a, &b, 6).unwrap().len(), 6);
    }

    #[test]
    fn scaling() {
        assert_eq!(scale_set(&set(&[0.0, 2.0]), 0.5).points(), &[0.0, 1.0]);
        let a = set(&[-2.0, 5.0]);
        assert_eq!(scale_set(&a, 1.0), a);
        assert_eq!(scale_set(&set(&[3.0, 7.0]), 0.0).points(), &[0.0]);
        assert_eq!(scale_set(&set(&[1.0, 2.0]), -1.0).points(), &[-2.0, -1.0]);
    }

    #[test]
    fn hausdorff_examples() {
        let a = set(&[0.0, 1.5, 4.0]);
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
        assert_eq!(hausdorff_distance(&set(&[0.0]), &set(&[3.0])), 3.0);
        assert_eq!(hausdorff_distance(&set(&[0.0, 1.0]), &set(&[0.5])), 0.5);
    }

    #[test]
    fn hausdorff_with_intervals() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(hausdorff_distance(unit, unit), 0.0);
        assert_eq!(
            hausdorff_distance(unit, Interval::new(0.5, 3.0).unwrap()),
            2.0
        );
        // gap in the middle of {0, 1} is covered only up to 0.5
        assert_eq!(hausdorff_distance(&set(&[0.0, 1.0]), unit), 0.5);
        assert_eq!(hausdorff_distance(unit, &set(&[0.0, 1.0])), 0.5);
        assert_eq!(hausdorff_distance(&set(&[-0.25, 1.0]), unit), 0.625);
        assert_eq!(
            hausdorff_distance(&set(&[0.0, 0.25, 0.5, 0.75, 1.0]), unit),
            0.125
        );
        assert_eq!(hausdorff_distance(&set(&[2.0]), unit), 2.0);
    }

    #[test]
    fn hull() {
        assert_eq!(
            hull_interval(&set(&[1.0, 2.0, 3.0])),
            Interval::new(1.0, 3.0).unwrap()
        );
        assert_eq!(hull_interval(&set(&[5.0])), Interval::point(5.0).unwrap());
        assert_eq!(
            hull_interval(&set(&[0.0, 10.0])),
            Interval::new(0.0, 10.0).unwrap()
        );
    }

    #[test]
    fn aumann_examples() {
        let f = corr(&[(0.4, &[1.0]), (0.6, &[0.0, 1.0])]);
        let i = aumann_integral(&f);
        assert!((i.lo() - 0.4).abs() < 1e-15 && (i.hi() - 1.0).abs() < 1e-15);
        assert_eq!(selection_integral_oracle(&f).unwrap(), i);
        let steps = step_selection_integrals(&f, 100).unwrap();
        assert_eq!(steps.len(), 2);

        let g = corr(&[(0.5, &[3.0]), (0.3, &[1.0, 2.0]), (0.2, &[1.0, 2.0, 3.0])]);
        let i = aumann_integral(&g);
        assert!((i.lo() - 2.0).abs() < 1e-12 && (i.hi() - 2.7).abs() < 1e-12);
        assert_eq!(selection_integral_oracle(&g).unwrap(), i);
        let steps = step_selection_integrals(&g, 100).unwrap();
        let expected = [2.0, 2.2, 2.3, 2.4, 2.5, 2.7];
        assert_eq!(steps.len(), expected.len());
        for (s, e) in steps.iter().zip(expected) {
            assert!((s - e).abs() < 1e-12, "{s} vs {e}");
        }

        let h = corr(&[(0.25, &[1.0]), (0.75, &[3.0])]);
        assert_eq!(aumann_integral(&h), Interval::point(2.5).unwrap());
        let c = corr(&[(1.0, &[4.0])]);
        assert_eq!(
            selection_integral_oracle(&c).unwrap(),
            Interval::point(4.0).unwrap()
        );
    }

    #[test]
    fn selection_budget() {
        let wide: Vec<f64> = (0..100).map(f64::from).collect();
        let f = corr(&[(0.5, &wide), (0.5, &wide)]);
        assert!(matches!(
            step_selection_integrals(&f, 9_999),
            Err(Error::SetTooLarge { .. })
        ));
        assert!(step_selection_integrals(&f, 10_000).is_ok());
    }

    #[test]
    fn cluster_bounds_examples() {
        let n = 200;
        let sets: Vec<_> = (1..=n)
            .map(|k| set(&[-1.0 / k as f64, 1.0 + 1.0 / k as f64]))
            .collect();
        let selection: Vec<_> = (1..=n).map(|k| 1.0 + 1.0 / k as f64).collect();
        let unit = Interval::new(0.0, 1.0).unwrap();
        let r =
            cluster_bounds_check(&sets, unit, &selection, ClusterCheckOptions::default()).unwrap();
        assert!(r.within);
        assert_eq!(r.tail_start, 180);
        // the two-point sets never fill the middle of the interval
        assert!((r.hausdorff[n - 1] - (0.5 + 1.0 / n as f64)).abs() < 1e-12);

        let fives = vec![set(&[5.0]); 10];
        let r = cluster_bounds_check(
            &fives,
            Interval::point(5.0).unwrap(),
            &[5.0; 10],
            ClusterCheckOptions::default(),
        )
        .unwrap();
        assert!(r.within);
        assert!(r.hausdorff.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn cluster_bounds_rejects_bad_input() {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let opts = ClusterCheckOptions::default();
        // 1.2 is a member only of the first set
        let mut sets = vec![set(&[0.0, 1.2])];
        sets.extend(std::iter::repeat_n(set(&[0.0, 1.0]), 49));
        let selection = vec![1.2; 50];
        assert!(matches!(
            cluster_bounds_check(&sets, unit, &selection, opts),
            Err(Error::NotASelection { index: 1, .. })
        ));
        // 1.2 always present: the sets cannot approach [0, 1]
        let sets = vec![set(&[0.0, 1.2]); 50];
        assert!(matches!(
            cluster_bounds_check(&sets, unit, &selection, opts),
            Err(Error::InconsistentInput(_))
        ));
    }

    #[test]
    fn tail_windows() {
        assert_eq!(tail_start(100, 0.1), 90);
        assert_eq!(tail_start(5, 0.1), 4);
        assert_eq!(tail_start(5, 1.0), 0);
        assert_eq!(tail_start(1, 0.5), 0);
    }
}
