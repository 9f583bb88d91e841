use proptest::prelude::*;

use capacity_lln::capacity::{
    capacity_from_mass, check_total_monotonicity, check_total_monotonicity_exhaustive,
    dual_capacity, is_additive, mobius_from_capacity, product_mass, Frame, MassFunction,
    ProductFrame, SubsetMask, DEFAULT_ENUMERATION_BUDGET,
};
use capacity_lln::choquet::{
    choquet_integral, integral_interval, upper_choquet_integral, RandomVariable,
};
use capacity_lln::random_sets::{
    aumann_integral, hausdorff_distance, hull_interval, minkowski_sum, selection_integral_oracle,
    RealCompactSet,
};
use capacity_lln::representation::{compose_rv, correspondence_from_mass, lower_distribution};
use capacity_lln::slln::{
    empirical_average_interval, empirical_average_set_exact, run_slln_experiment,
    sample_focal_sequence, verify_identical_distribution, verify_pairwise_independence,
    ExperimentConfig,
};

fn frame(k: usize) -> Frame {
    Frame::new((0..k).map(|i| format!("w{i}"))).unwrap()
}

/// Mass functions on frames of 1..=max_k points.
fn mass(max_k: usize) -> impl Strategy<Value = MassFunction> {
    (1..=max_k).prop_flat_map(|k| {
        let nonempty = (1u32 << k) - 1;
        prop::collection::btree_map(1..=nonempty, 0.05f64..1.0, 1..=6).prop_map(move |raw| {
            let total: f64 = raw.values().sum();
            MassFunction::new(
                frame(k),
                raw.iter().map(|(&m, &w)| (SubsetMask(m), w / total)),
            )
            .unwrap()
        })
    })
}

fn mass_and_rv(max_k: usize) -> impl Strategy<Value = (MassFunction, RandomVariable)> {
    mass(max_k).prop_flat_map(|m| {
        let k = m.frame().len();
        (Just(m), prop::collection::vec(-10.0f64..10.0, k)).prop_map(|(m, v)| {
            let x = RandomVariable::new(m.frame().clone(), v).unwrap();
            (m, x)
        })
    })
}

fn compact_set() -> impl Strategy<Value = RealCompactSet> {
    prop::collection::vec(-10.0f64..10.0, 1..5).prop_map(|v| RealCompactSet::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mobius_inverts_zeta(m in mass(5)) {
        let back = mobius_from_capacity(&capacity_from_mass(&m));
        for a in m.frame().subsets() {
            prop_assert!((back.weight(a) - m.weight(a)).abs() <= 1e-12);
        }
        let recovered = back.to_mass_function().unwrap();
        prop_assert_eq!(recovered.focal_count(), m.focal_count());
    }

    #[test]
    fn belief_functions_pass_both_checks(m in mass(3)) {
        let nu = capacity_from_mass(&m);
        prop_assert!(check_total_monotonicity(&nu, 3).unwrap().passed);
        if m.frame().len() >= 2 {
            prop_assert!(check_total_monotonicity_exhaustive(&nu, 3, DEFAULT_ENUMERATION_BUDGET).unwrap().passed);
        }
    }

    #[test]
    fn dual_is_an_involution(m in mass(4)) {
        let nu = capacity_from_mass(&m);
        let dual = dual_capacity(&nu);
        for a in nu.frame().subsets() {
            prop_assert!(dual.value(a) >= nu.value(a) - 1e-12);
        }
        prop_assert_eq!(dual_capacity(&dual), nu);
    }

    #[test]
    fn product_marginals_recover_factors(m1 in mass(3), m2 in mass(3)) {
        let joint = product_mass(&m1, &m2).unwrap();
        let pf = ProductFrame::new(m1.frame(), m2.frame()).unwrap();
        let first = pf.marginal_first(&joint).unwrap();
        let second = pf.marginal_second(&joint).unwrap();
        for a in m1.frame().subsets() {
            prop_assert!((first.weight(a) - m1.weight(a)).abs() <= 1e-12);
        }
        for b in m2.frame().subsets() {
            prop_assert!((second.weight(b) - m2.weight(b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn choquet_is_homogeneous_and_translation_invariant(
        (m, x) in mass_and_rv(4), c in 0.0f64..4.0, t in -4.0f64..4.0,
    ) {
        let nu = capacity_from_mass(&m);
        let base = choquet_integral(&x, &nu).unwrap();
        let scaled = choquet_integral(&x.map(|v| c * v).unwrap(), &nu).unwrap();
        let shifted = choquet_integral(&x.map(|v| v + t).unwrap(), &nu).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-12);
        prop_assert!((shifted - base - t).abs() <= 1e-12);
        let upper = upper_choquet_integral(&x, &nu).unwrap();
        prop_assert!(base <= upper + 1e-12);
        prop_assert!(x.min() <= base + 1e-12 && upper <= x.max() + 1e-12);
    }

    #[test]
    fn upper_integral_is_dual_integral((m, x) in mass_and_rv(4)) {
        let nu = capacity_from_mass(&m);
        let upper = upper_choquet_integral(&x, &nu).unwrap();
        let via_dual = choquet_integral(&x, &dual_capacity(&nu)).unwrap();
        prop_assert!((upper - via_dual).abs() <= 1e-12);
    }

    #[test]
    fn additive_capacities_have_no_gap(p in prop::collection::vec(0.05f64..1.0, 1..5), seed in any::<u64>()) {
        let total: f64 = p.iter().sum();
        let p: Vec<f64> = p.iter().map(|w| w / total).collect();
        let m = MassFunction::additive(frame(p.len()), &p).unwrap();
        let nu = capacity_from_mass(&m);
        prop_assert!(is_additive(&nu));
        let values = (0..p.len()).map(|i| ((seed >> (8 * i)) & 0xff) as f64 / 16.0).collect();
        let x = RandomVariable::new(m.frame().clone(), values).unwrap();
        prop_assert!(integral_interval(&x, &nu).unwrap().width() <= 1e-12);
    }

    #[test]
    fn aumann_equals_choquet_interval((m, x) in mass_and_rv(4)) {
        let corr = correspondence_from_mass(&m);
        prop_assert_eq!(lower_distribution(&corr), capacity_from_mass(&m));
        let composed = compose_rv(&x, &corr).unwrap();
        let aumann = aumann_integral(&composed);
        let target = integral_interval(&x, &capacity_from_mass(&m)).unwrap();
        prop_assert!((aumann.lo() - target.lo()).abs() <= 1e-12);
        prop_assert!((aumann.hi() - target.hi()).abs() <= 1e-12);
        prop_assert_eq!(selection_integral_oracle(&composed).unwrap(), aumann);
    }

    #[test]
    fn composed_cells_are_images((m, x) in mass_and_rv(4)) {
        let composed = compose_rv(&x, &correspondence_from_mass(&m)).unwrap();
        for (cell, (focal, w)) in composed.cells().iter().zip(m.focal_elements()) {
            prop_assert_eq!(cell.weight, w);
            prop_assert_eq!(cell.value.min(), x.min_on(focal));
            prop_assert_eq!(cell.value.max(), x.max_on(focal));
            for p in cell.value.points() {
                let pre = x.preimage(&[*p]);
                prop_assert!(!pre.intersection(focal).is_empty());
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric(a in compact_set(), b in compact_set(), c in compact_set()) {
        let ab = hausdorff_distance(&a, &b);
        prop_assert_eq!(hausdorff_distance(&a, &a), 0.0);
        prop_assert_eq!(ab, hausdorff_distance(&b, &a));
        prop_assert!(ab <= hausdorff_distance(&a, &c) + hausdorff_distance(&c, &b) + 1e-12);
    }

    #[test]
    fn minkowski_sum_extremes_and_hull(a in compact_set(), b in compact_set()) {
        let s = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(s.min(), a.min() + b.min());
        prop_assert_eq!(s.max(), a.max() + b.max());
        prop_assert_eq!(minkowski_sum(&b, &a).unwrap(), s.clone());
        // convexifying: the sum is no farther from its hull than either summand
        let gap = |x: &RealCompactSet| hausdorff_distance(x, hull_interval(x));
        prop_assert!(gap(&s) <= gap(&a).max(gap(&b)) + 1e-12);
    }

    #[test]
    fn exact_average_hull_matches_running_interval(
        (m, x) in mass_and_rv(3), n in 1usize..10, seed in any::<u64>(),
    ) {
        let focals = sample_focal_sequence(&m, n, seed, 0);
        let running = empirical_average_interval(&x, &focals).unwrap();
        let exact = empirical_average_set_exact(&x, &focals).unwrap();
        prop_assert_eq!(hull_interval(&exact), running[n - 1]);
    }

    #[test]
    fn product_coordinates_are_independent_and_identical((m, x) in mass_and_rv(3)) {
        let x = x.map(f64::round).unwrap();
        let joint = product_mass(&m, &m).unwrap();
        let pf = ProductFrame::new(m.frame(), m.frame()).unwrap();
        let (x1, x2) = (x.lift_first(&pf).unwrap(), x.lift_second(&pf).unwrap());
        prop_assert!(verify_pairwise_independence(&joint, &x1, &x2).unwrap().passed);
        prop_assert!(verify_identical_distribution(&joint, &x1, &x2).unwrap().passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn experiments_are_deterministic((m, x) in mass_and_rv(3), seed in any::<u64>()) {
        let cfg = ExperimentConfig::new(m, x, 500, 3, seed).unwrap();
        let a = run_slln_experiment(&cfg).unwrap();
        let b = run_slln_experiment(&cfg).unwrap();
        prop_assert_eq!(&a, &b);
        for r in &a.replications {
            prop_assert_eq!(&r.trace, &b.replications[r.replication as usize].trace);
            prop_assert!(r.final_min_avg <= r.final_max_avg);
        }
    }
}
