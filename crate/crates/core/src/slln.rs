//! Monte Carlo harness for the strong law of large numbers under a totally
//! monotone capacity, plus exact verifiers for pairwise independence and
//! identical distribution on product frames.
//!
//! Each replication draws an i.i.d. sequence of focal elements `B₁, B₂, …`
//! from the mass function. The Minkowski average of the images `X(Bⱼ)` has
//! hull `[(1/n)Σ min X(Bⱼ), (1/n)Σ max X(Bⱼ)]`; those two running averages
//! are the extreme selections, and they should settle inside
//! `[∫X dν, −∫−X dν]`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_from_mass, Frame, MassFunction, SubsetMask, IDENTITY_TOLERANCE};
use crate::choquet::{integral_interval, RandomVariable};
use crate::error::{Error, Result};
use crate::random_sets::{
    hausdorff_distance, hull_interval, minkowski_sum, tail_start, Interval, RealCompactSet,
};

/// Largest `n·R` a single experiment may draw.
pub const DEFAULT_STEP_BUDGET: u64 = 2_000_000_000;

/// Smallest tolerance the default rule will produce.
pub const TOLERANCE_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub mass: MassFunction,
    pub rv: RandomVariable,
    pub horizon: usize,
    pub replications: usize,
    pub seed: u64,
    pub tail_fraction: f64,
    pub tolerance: f64,
    /// Maximum number of trace rows kept per replication; the final step is always kept.
    pub trace_points: usize,
    /// Leading steps checked against the exact Minkowski average (0 disables).
    pub exact_n: usize,
}

impl ExperimentConfig {
    /// Defaults: last 10% as the tail window, tolerance from
    /// [`default_tolerance`], 1000 trace rows, 12 exact steps.
    pub fn new(
        mass: MassFunction,
        rv: RandomVariable,
        horizon: usize,
        replications: usize,
        seed: u64,
    ) -> Result<Self> {
        if mass.frame() != rv.frame() {
            return Err(Error::FrameMismatch);
        }
        let tolerance = default_tolerance(&mass, &rv, horizon.max(1));
        let cfg = ExperimentConfig {
            mass,
            rv,
            horizon,
            replications,
            seed,
            tail_fraction: 0.1,
            tolerance,
            trace_points: 1000,
            exact_n: 12,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mass.frame() != self.rv.frame() {
            return Err(Error::FrameMismatch);
        }
        if self.horizon == 0 || self.replications == 0 {
            return Err(Error::InvalidConfig(
                "horizon and replications must be positive".into(),
            ));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tail fraction {} outside (0, 1]",
                self.tail_fraction
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} is not a positive number",
                self.tolerance
            )));
        }
        let steps = (self.horizon as u64).saturating_mul(self.replications as u64);
        if steps > DEFAULT_STEP_BUDGET {
            return Err(Error::Budget(format!(
                "{steps} draws exceed the budget of {DEFAULT_STEP_BUDGET}"
            )));
        }
        Ok(())
    }
}

/// Exact moments of the one-step extreme selections `min X(B)` and `max X(B)`
/// with `B` drawn from the mass function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionMoments {
    pub mean_min: f64,
    pub mean_max: f64,
    pub sd_min: f64,
    pub sd_max: f64,
}

pub fn selection_moments(mass: &MassFunction, rv: &RandomVariable) -> SelectionMoments {
    let (mut mean_min, mut mean_max) = (0.0, 0.0);
    for (b, w) in mass.focal_elements() {
        mean_min += w * rv.min_on(b);
        mean_max += w * rv.max_on(b);
    }
    let (mut var_min, mut var_max) = (0.0, 0.0);
    for (b, w) in mass.focal_elements() {
        var_min += w * (rv.min_on(b) - mean_min).powi(2);
        var_max += w * (rv.max_on(b) - mean_max).powi(2);
    }
    SelectionMoments {
        mean_min,
        mean_max,
        sd_min: var_min.sqrt(),
        sd_max: var_max.sqrt(),
    }
}

/// `4·σ̂/√n` with `σ̂` the larger standard deviation of the two extreme
/// selections, floored at [`TOLERANCE_FLOOR`].
pub fn default_tolerance(mass: &MassFunction, rv: &RandomVariable, horizon: usize) -> f64 {
    let m = selection_moments(mass, rv);
    (4.0 * m.sd_min.max(m.sd_max) / (horizon as f64).sqrt()).max(TOLERANCE_FLOOR)
}

/// The generator for one replication: ChaCha8 seeded by `seed`, on stream
/// `replication`. Streams are independent, so replications can run in any order.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Categorical sampler over the focal elements of a mass function.
#[derive(Clone, Debug)]
pub struct FocalSampler {
    focals: Vec<SubsetMask>,
    index: WeightedIndex<f64>,
}

impl FocalSampler {
    pub fn new(mass: &MassFunction) -> Self {
        let (focals, weights): (Vec<_>, Vec<_>) = mass.focal_elements().unzip();
        let index = WeightedIndex::new(weights).expect("validated masses are positive and finite");
        FocalSampler { focals, index }
    }

    pub fn focals(&self) -> &[SubsetMask] {
        &self.focals
    }

    pub fn draw_index(&self, rng: &mut ChaCha8Rng) -> usize {
        self.index.sample(rng)
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> SubsetMask {
        self.focals[self.draw_index(rng)]
    }
}

/// `n` i.i.d. focal elements; a pure function of `(seed, replication)`.
pub fn sample_focal_sequence(
    mass: &MassFunction,
    n: usize,
    seed: u64,
    replication: u64,
) -> Vec<SubsetMask> {
    let sampler = FocalSampler::new(mass);
    let mut rng = replication_rng(seed, replication);
    (0..n).map(|_| sampler.draw(&mut rng)).collect()
}

/// Running sums of the extreme selections.
#[derive(Clone, Copy, Debug, Default)]
struct RunningAverages {
    steps: u64,
    sum_min: f64,
    sum_max: f64,
}

impl RunningAverages {
    fn push(&mut self, min: f64, max: f64) -> (f64, f64) {
        self.steps += 1;
        self.sum_min += min;
        self.sum_max += max;
        let n = self.steps as f64;
        (self.sum_min / n, self.sum_max / n)
    }
}

fn check_focal(frame: &Frame, focal: SubsetMask) -> Result<()> {
    if focal.is_empty() || !frame.contains_mask(focal) {
        return Err(Error::FrameMismatch);
    }
    Ok(())
}

/// Entry `n−1` is `[(1/n)Σⱼ min X(Bⱼ), (1/n)Σⱼ max X(Bⱼ)]`.
pub fn empirical_average_interval(
    rv: &RandomVariable,
    focals: &[SubsetMask],
) -> Result<Vec<Interval>> {
    let mut acc = RunningAverages::default();
    focals
        .iter()
        .map(|&b| {
            check_focal(rv.frame(), b)?;
            let (lo, hi) = acc.push(rv.min_on(b), rv.max_on(b));
            Interval::new(lo, hi)
        })
        .collect()
}

fn image(rv: &RandomVariable, focal: SubsetMask) -> RealCompactSet {
    RealCompactSet::from_sorted({
        let mut v: Vec<f64> = focal.indices().map(|i| rv.value(i)).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    })
}

// Divides by n rather than multiplying by 1/n so the hull matches the running
// averages bit for bit.
fn average_of_sum(sum: &RealCompactSet, n: usize) -> RealCompactSet {
    let n = n as f64;
    let mut points: Vec<f64> = sum.points().iter().map(|p| p / n).collect();
    points.dedup();
    RealCompactSet::from_sorted(points)
}

/// The Minkowski average `(1/n) ⊕ⱼ X(Bⱼ)`, computed exactly.
pub fn empirical_average_set_exact(
    rv: &RandomVariable,
    focals: &[SubsetMask],
) -> Result<RealCompactSet> {
    let (first, rest) = focals
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("no focal elements".into()))?;
    check_focal(rv.frame(), *first)?;
    let mut sum = image(rv, *first);
    for &b in rest {
        check_focal(rv.frame(), b)?;
        sum = minkowski_sum(&sum, &image(rv, b))?;
    }
    Ok(average_of_sum(&sum, focals.len()))
}

/// One event pair (or single event) where the product identity fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventViolation {
    pub first_event: Vec<f64>,
    pub second_event: Option<Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub passed: bool,
    pub events_checked: u64,
    pub violations: Vec<EventViolation>,
}

// Subsets of a finite range, by bitmask.
fn range_subset(range: &[f64], selector: u32) -> Vec<f64> {
    range
        .iter()
        .enumerate()
        .filter(|(k, _)| selector & (1 << k) != 0)
        .map(|(_, &v)| v)
        .collect()
}

fn check_event_budget(bits: usize) -> Result<()> {
    if bits > crate::capacity::MAX_FRAME_SIZE {
        return Err(Error::TooLarge {
            required: 1u128 << bits,
            budget: 1u128 << crate::capacity::MAX_FRAME_SIZE,
        });
    }
    Ok(())
}

/// Checks `ν(X₁ ∈ G₁, X₂ ∈ G₂) = ν(X₁ ∈ G₁)·ν(X₂ ∈ G₂)` within
/// `IDENTITY_TOLERANCE` for every pair of subsets of the two finite ranges.
/// On a finite range every subset is open, so this covers the full definition.
pub fn verify_pairwise_independence(
    joint: &MassFunction,
    x1: &RandomVariable,
    x2: &RandomVariable,
) -> Result<VerifierReport> {
    if x1.frame() != joint.frame() || x2.frame() != joint.frame() {
        return Err(Error::FrameMismatch);
    }
    let nu = capacity_from_mass(joint);
    let (r1, r2) = (x1.range(), x2.range());
    check_event_budget(r1.len() + r2.len())?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for s1 in 0..(1u32 << r1.len()) {
        let g1 = range_subset(&r1, s1);
        let a = x1.preimage(&g1);
        for s2 in 0..(1u32 << r2.len()) {
            let g2 = range_subset(&r2, s2);
            let b = x2.preimage(&g2);
            let lhs = nu.value(a.intersection(b));
            let rhs = nu.value(a) * nu.value(b);
            checked += 1;
            if !((lhs - rhs).abs() <= IDENTITY_TOLERANCE) {
                violations.push(EventViolation {
                    first_event: g1.clone(),
                    second_event: Some(g2),
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(VerifierReport {
        passed: violations.is_empty(),
        events_checked: checked,
        violations,
    })
}

/// Checks `ν(X₁ ∈ G) = ν(X₂ ∈ G)` within `IDENTITY_TOLERANCE` for every subset
/// `G` of the union of the two ranges.
pub fn verify_identical_distribution(
    joint: &MassFunction,
    x1: &RandomVariable,
    x2: &RandomVariable,
) -> Result<VerifierReport> {
    if x1.frame() != joint.frame() || x2.frame() != joint.frame() {
        return Err(Error::FrameMismatch);
    }
    let nu = capacity_from_mass(joint);
    let mut range = x1.range();
    range.extend(x2.range());
    range.sort_by(f64::total_cmp);
    range.dedup();
    check_event_budget(range.len())?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for s in 0..(1u32 << range.len()) {
        let g = range_subset(&range, s);
        let lhs = nu.value(x1.preimage(&g));
        let rhs = nu.value(x2.preimage(&g));
        checked += 1;
        if !((lhs - rhs).abs() <= IDENTITY_TOLERANCE) {
            violations.push(EventViolation {
                first_event: g,
                second_event: None,
                lhs,
                rhs,
            });
        }
    }
    Ok(VerifierReport {
        passed: violations.is_empty(),
        events_checked: checked,
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: u64,
    pub min_avg: f64,
    pub max_avg: f64,
}

/// Leading-step comparison of the running hull with the exact Minkowski average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactBridge {
    pub steps: usize,
    /// The exact average's hull equals the running interval at every step.
    pub hull_matches: bool,
    /// `d_H(exact, target) ≤ max endpoint deviation + diam/n` at every step.
    pub distance_bound_holds: bool,
    pub max_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationResult {
    pub replication: u64,
    pub final_min_avg: f64,
    pub final_max_avg: f64,
    /// Extremes of each running average over the tail window.
    pub tail_min_of_min_avg: f64,
    pub tail_max_of_min_avg: f64,
    pub tail_min_of_max_avg: f64,
    pub tail_max_of_max_avg: f64,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
    pub exact: Option<ExactBridge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateFailure {
    pub replication: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub passed: bool,
    pub failures: Vec<GateFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SllnReport {
    pub target: Interval,
    pub moments: SelectionMoments,
    pub horizon: usize,
    pub seed: u64,
    pub tail_fraction: f64,
    pub tolerance: f64,
    pub replications: Vec<ReplicationResult>,
    pub gate: GateOutcome,
    pub pass: bool,
}

impl SllnReport {
    /// Whether every exact-bridge comparison held (vacuously true if none ran).
    pub fn exact_bridge_ok(&self) -> bool {
        self.replications
            .iter()
            .filter_map(|r| r.exact)
            .all(|e| e.hull_matches && e.distance_bound_holds)
    }
}

fn run_replication(
    cfg: &ExperimentConfig,
    sampler: &FocalSampler,
    target: Interval,
    replication: u64,
) -> Result<ReplicationResult> {
    let extremes: Vec<(f64, f64)> = sampler
        .focals()
        .iter()
        .map(|&b| (cfg.rv.min_on(b), cfg.rv.max_on(b)))
        .collect();
    let n = cfg.horizon;
    let stride = n.div_ceil(cfg.trace_points.max(1));
    let first_tail_step = tail_start(n, cfg.tail_fraction) + 1;
    let exact_steps = cfg.exact_n.min(n);
    let diameter = cfg.rv.max() - cfg.rv.min();

    let mut rng = replication_rng(cfg.seed, replication);
    let mut acc = RunningAverages::default();
    let mut trace = Vec::with_capacity(n / stride + 1);
    let mut tails = [
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ];
    let mut last = (0.0, 0.0);

    let mut exact_sum: Option<RealCompactSet> = None;
    let mut bridge = ExactBridge {
        steps: exact_steps,
        hull_matches: true,
        distance_bound_holds: true,
        max_distance: 0.0,
    };

    for step in 1..=n {
        let k = sampler.draw_index(&mut rng);
        let (lo, hi) = extremes[k];
        let (min_avg, max_avg) = acc.push(lo, hi);
        last = (min_avg, max_avg);

        if step <= exact_steps {
            let img = image(&cfg.rv, sampler.focals()[k]);
            let sum = match exact_sum.take() {
                None => img,
                Some(s) => minkowski_sum(&s, &img)?,
            };
            let avg = average_of_sum(&sum, step);
            let hull = hull_interval(&avg);
            bridge.hull_matches &= hull.lo() == min_avg && hull.hi() == max_avg;
            let d = hausdorff_distance(&avg, target);
            let bound = (min_avg - target.lo())
                .abs()
                .max((max_avg - target.hi()).abs())
                + diameter / step as f64;
            bridge.distance_bound_holds &= d <= bound + IDENTITY_TOLERANCE;
            bridge.max_distance = bridge.max_distance.max(d);
            exact_sum = Some(sum);
        }

        if step >= first_tail_step {
            tails[0] = tails[0].min(min_avg);
            tails[1] = tails[1].max(min_avg);
            tails[2] = tails[2].min(max_avg);
            tails[3] = tails[3].max(max_avg);
        }
        if step % stride == 0 || step == n {
            trace.push(TracePoint {
                n: step as u64,
                min_avg,
                max_avg,
            });
        }
    }

    Ok(ReplicationResult {
        replication,
        final_min_avg: last.0,
        final_max_avg: last.1,
        tail_min_of_min_avg: tails[0],
        tail_max_of_min_avg: tails[1],
        tail_min_of_max_avg: tails[2],
        tail_max_of_max_avg: tails[3],
        trace,
        exact: (exact_steps > 0).then_some(bridge),
    })
}

/// Runs every replication (in parallel) and applies [`strong_law_gate`] with the
/// configured tolerance.
pub fn run_slln_experiment(cfg: &ExperimentConfig) -> Result<SllnReport> {
    cfg.validate()?;
    let target = integral_interval(&cfg.rv, &capacity_from_mass(&cfg.mass))?;
    let sampler = FocalSampler::new(&cfg.mass);
    let replications = (0..cfg.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(cfg, &sampler, target, r))
        .collect::<Result<Vec<_>>>()?;
    let mut report = SllnReport {
        target,
        moments: selection_moments(&cfg.mass, &cfg.rv),
        horizon: cfg.horizon,
        seed: cfg.seed,
        tail_fraction: cfg.tail_fraction,
        tolerance: cfg.tolerance,
        replications,
        gate: GateOutcome {
            passed: false,
            failures: Vec::new(),
        },
        pass: false,
    };
    report.gate = strong_law_gate(&report, cfg.tolerance);
    report.pass = report.gate.passed;
    Ok(report)
}

/// Finite-horizon surrogate of the almost-sure event: every replication's
/// running extreme selections stay within `tolerance` of the target over the
/// tail window, and both final averages sit within `tolerance` of their endpoints.
pub fn strong_law_gate(report: &SllnReport, tolerance: f64) -> GateOutcome {
    let (lo, hi) = (report.target.lo(), report.target.hi());
    let mut failures = Vec::new();
    for r in &report.replications {
        let mut fail = |reason: String| {
            failures.push(GateFailure {
                replication: r.replication,
                reason,
            })
        };
        if !(r.tail_min_of_min_avg >= lo - tolerance) {
            fail(format!(
                "min-selection average fell to {} below {lo} - {tolerance}",
                r.tail_min_of_min_avg
            ));
        }
        if !(r.tail_max_of_max_avg <= hi + tolerance) {
            fail(format!(
                "max-selection average rose to {} above {hi} + {tolerance}",
                r.tail_max_of_max_avg
            ));
        }
        if !((r.final_min_avg - lo).abs() <= tolerance) {
            fail(format!(
                "final min-selection average {} is not within {tolerance} of {lo}",
                r.final_min_avg
            ));
        }
        if !((r.final_max_avg - hi).abs() <= tolerance) {
            fail(format!(
                "final max-selection average {} is not within {tolerance} of {hi}",
                r.final_max_avg
            ));
        }
    }
    GateOutcome {
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{product_mass, ProductFrame};

    fn coin() -> Frame {
        Frame::new(["H", "T"]).unwrap()
    }

    fn m_star() -> MassFunction {
        MassFunction::new(coin(), [(SubsetMask(1), 0.4), (SubsetMask(3), 0.6)]).unwrap()
    }

    fn indicator() -> RandomVariable {
        RandomVariable::new(coin(), vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_focal_sequence(&m_star(), 500, 7, 3);
        assert_eq!(a, sample_focal_sequence(&m_star(), 500, 7, 3));
        assert_ne!(a, sample_focal_sequence(&m_star(), 500, 7, 4));
        assert_ne!(a, sample_focal_sequence(&m_star(), 500, 8, 3));
        let v = sample_focal_sequence(&MassFunction::vacuous(coin()), 100, 1, 0);
        assert!(v.iter().all(|&b| b == SubsetMask(3)));
    }

    #[test]
    fn sampling_frequency() {
        // binomial(1e5, 0.4): 4σ = 4·sqrt(0.24/1e5) ≈ 0.0062
        let seq = sample_focal_sequence(&m_star(), 100_000, 2024, 0);
        let freq = seq.iter().filter(|&&b| b == SubsetMask(1)).count() as f64 / 1e5;
        assert!((freq - 0.4).abs() <= 0.006, "{freq}");
    }

    #[test]
    fn average_interval_examples() {
        let x = indicator();
        let seq = [SubsetMask(1), SubsetMask(3), SubsetMask(1)];
        let trace = empirical_average_interval(&x, &seq).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace[2].lo(), 2.0 / 3.0);
        assert_eq!(trace[2].hi(), 1.0);

        let trace = empirical_average_interval(&x, &[SubsetMask(1)]).unwrap();
        assert_eq!(trace, vec![Interval::point(1.0).unwrap()]);

        let trace = empirical_average_interval(&x, &[SubsetMask(3); 20]).unwrap();
        assert!(trace.iter().all(|i| i.lo() == 0.0 && i.hi() == 1.0));

        assert!(matches!(
            empirical_average_interval(&x, &[SubsetMask(4)]),
            Err(Error::FrameMismatch)
        ));
    }

    #[test]
    fn exact_average_examples() {
        let x = indicator();
        let s = empirical_average_set_exact(&x, &[SubsetMask(3), SubsetMask(3)]).unwrap();
        assert_eq!(s.points(), &[0.0, 0.5, 1.0]);
        let s = empirical_average_set_exact(&x, &[SubsetMask(3)]).unwrap();
        assert_eq!(s.points(), &[0.0, 1.0]);
        assert!(empirical_average_set_exact(&x, &[]).is_err());
    }

    #[test]
    fn exact_hull_matches_trace() {
        let frame = Frame::new(["a", "b", "c"]).unwrap();
        let m = MassFunction::new(
            frame.clone(),
            [
                (SubsetMask(1), 0.5),
                (SubsetMask(6), 0.3),
                (SubsetMask(7), 0.2),
            ],
        )
        .unwrap();
        let x = RandomVariable::new(frame, vec![0.3, -1.7, 2.9]).unwrap();
        for r in 0..20 {
            let seq = sample_focal_sequence(&m, 12, 99, r);
            let trace = empirical_average_interval(&x, &seq).unwrap();
            for k in 1..=seq.len() {
                let exact = empirical_average_set_exact(&x, &seq[..k]).unwrap();
                assert_eq!(hull_interval(&exact), trace[k - 1]);
            }
        }
    }

    #[test]
    fn independence_of_products() {
        let pf = ProductFrame::new(&coin(), &coin()).unwrap();
        let joint = product_mass(&m_star(), &m_star()).unwrap();
        let x1 = indicator().lift_first(&pf).unwrap();
        let x2 = indicator().lift_second(&pf).unwrap();
        let r = verify_pairwise_independence(&joint, &x1, &x2).unwrap();
        assert!(r.passed);
        assert_eq!(r.events_checked, 16);
        assert!(
            verify_identical_distribution(&joint, &x1, &x2)
                .unwrap()
                .passed
        );
        assert!(
            verify_identical_distribution(&joint, &x2, &x1)
                .unwrap()
                .passed
        );

        let p = MassFunction::additive(coin(), &[0.3, 0.7]).unwrap();
        let joint = product_mass(&p, &p).unwrap();
        assert!(
            verify_pairwise_independence(&joint, &x1, &x2)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn diagonal_joint_is_dependent() {
        let pf = ProductFrame::new(&coin(), &coin()).unwrap();
        let hh = pf.rectangle(SubsetMask(1), SubsetMask(1));
        let tt = pf.rectangle(SubsetMask(2), SubsetMask(2));
        let joint = MassFunction::new(pf.joint().clone(), [(hh, 0.5), (tt, 0.5)]).unwrap();
        let x1 = indicator().lift_first(&pf).unwrap();
        let x2 = indicator().lift_second(&pf).unwrap();
        let r = verify_pairwise_independence(&joint, &x1, &x2).unwrap();
        assert!(!r.passed);
        let v = r
            .violations
            .iter()
            .find(|v| v.first_event == [1.0] && v.second_event.as_deref() == Some(&[1.0][..]))
            .unwrap();
        assert_eq!(v.lhs, 0.5);
        assert_eq!(v.rhs, 0.25);
    }

    #[test]
    fn non_identical_marginals() {
        let pf = ProductFrame::new(&coin(), &coin()).unwrap();
        let joint = product_mass(&m_star(), &MassFunction::vacuous(coin())).unwrap();
        let x1 = indicator().lift_first(&pf).unwrap();
        let x2 = indicator().lift_second(&pf).unwrap();
        let r = verify_identical_distribution(&joint, &x1, &x2).unwrap();
        assert!(!r.passed);
        let v = r
            .violations
            .iter()
            .find(|v| v.first_event == [1.0])
            .unwrap();
        assert_eq!((v.lhs, v.rhs), (0.4, 0.0));
    }

    #[test]
    fn verifier_frame_mismatch() {
        let joint = product_mass(&m_star(), &m_star()).unwrap();
        assert!(matches!(
            verify_pairwise_independence(&joint, &indicator(), &indicator()),
            Err(Error::FrameMismatch)
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(m_star(), indicator(), 0, 1, 0).is_err());
        assert!(ExperimentConfig::new(m_star(), indicator(), 10, 0, 0).is_err());
        let mut cfg = ExperimentConfig::new(m_star(), indicator(), 10, 1, 0).unwrap();
        cfg.tail_fraction = 0.0;
        assert!(cfg.validate().is_err());
        cfg.tail_fraction = 0.1;
        cfg.tolerance = -1.0;
        assert!(cfg.validate().is_err());
        let big = ExperimentConfig::new(m_star(), indicator(), 1_000_000_000, 100, 0);
        assert!(matches!(big, Err(Error::Budget(_))));
        let other = RandomVariable::new(Frame::new(["a", "b"]).unwrap(), vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            ExperimentConfig::new(m_star(), other, 10, 1, 0),
            Err(Error::FrameMismatch)
        ));
    }

    #[test]
    fn default_tolerance_rule() {
        // sd of min selection: sqrt(0.4·0.6); max selection is constant
        let t = default_tolerance(&m_star(), &indicator(), 10_000);
        assert!((t - 4.0 * 0.24f64.sqrt() / 100.0).abs() < 1e-15);
        let vac = MassFunction::vacuous(coin());
        assert_eq!(default_tolerance(&vac, &indicator(), 100), TOLERANCE_FLOOR);
    }

    fn report_with(target: Interval, finals: &[(f64, f64)]) -> SllnReport {
        SllnReport {
            target,
            moments: SelectionMoments {
                mean_min: target.lo(),
                mean_max: target.hi(),
                sd_min: 0.0,
                sd_max: 0.0,
            },
            horizon: 1,
            seed: 0,
            tail_fraction: 1.0,
            tolerance: 0.01,
            replications: finals
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| ReplicationResult {
                    replication: i as u64,
                    final_min_avg: lo,
                    final_max_avg: hi,
                    tail_min_of_min_avg: lo,
                    tail_max_of_min_avg: lo,
                    tail_min_of_max_avg: hi,
                    tail_max_of_max_avg: hi,
                    trace: Vec::new(),
                    exact: None,
                })
                .collect(),
            gate: GateOutcome {
                passed: true,
                failures: vec![],
            },
            pass: true,
        }
    }

    #[test]
    fn gate_examples() {
        let target = Interval::new(0.4, 1.0).unwrap();
        let ok = report_with(target, &[(0.405, 0.999), (0.396, 1.0)]);
        assert!(strong_law_gate(&ok, 0.01).passed);

        let bad = report_with(target, &[(0.4, 1.0), (0.4 - 0.02, 1.0)]);
        let g = strong_law_gate(&bad, 0.01);
        assert!(!g.passed);
        assert!(g.failures.iter().all(|f| f.replication == 1));

        let point = Interval::point(0.4).unwrap();
        let degenerate = report_with(point, &[(0.401, 0.401), (0.398, 0.398)]);
        assert!(strong_law_gate(&degenerate, 0.01).passed);
    }

    #[test]
    fn small_experiment() {
        let mut cfg = ExperimentConfig::new(m_star(), indicator(), 2_000, 4, 11).unwrap();
        cfg.trace_points = 100;
        let report = run_slln_experiment(&cfg).unwrap();
        assert_eq!(report.replications.len(), 4);
        for r in &report.replications {
            assert_eq!(r.trace.len(), 100);
            assert_eq!(r.trace.last().unwrap().n, 2_000);
            assert_eq!(r.final_max_avg, 1.0);
            assert!(r.trace.iter().all(|t| t.min_avg >= 0.0 && t.max_avg <= 1.0));
            let bridge = r.exact.unwrap();
            assert!(bridge.hull_matches && bridge.distance_bound_holds);
        }
        assert_eq!(report, run_slln_experiment(&cfg).unwrap());
    }
}
