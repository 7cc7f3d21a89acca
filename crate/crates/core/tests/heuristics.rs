use heilbronn::heuristics::*;

#[test]
fn registry_areas_do_not_increase_with_n() {
    let areas: Vec<f64> = (3..=10).map(|n| known_configuration(n).unwrap().points.min_abs()).collect();
    for w in areas.windows(2) {
        assert!(w[1] <= w[0], "{areas:?}");
    }
}

#[test]
fn upper_bounds_follow_the_previous_optimum() {
    let policy = BoundsPolicy::Custom(CustomBounds {
        samples: 2000,
        ..Default::default()
    });
    assert_eq!(bounds_for(3, &policy).unwrap().upper, 0.5);
    assert_eq!(bounds_for(6, &policy).unwrap().upper, 0.19245);
    assert_eq!(bounds_for(9, &policy).unwrap().upper, 0.0723764);
    assert_eq!(bounds_for(10, &policy).unwrap().upper_provenance, UpperProvenance::Certified);
}

#[test]
fn sampled_bounds_bracket_the_published_areas() {
    let policy = BoundsPolicy::Custom(CustomBounds {
        samples: 20_000,
        ..Default::default()
    });
    for n in 4..=10 {
        let b = bounds_for(n, &policy).unwrap();
        let published = known_configuration(n).unwrap().published_area;
        assert!(b.lower <= published && published <= b.upper + 1e-7, "n={n}: {b:?}");
        assert_eq!(b.lower_witness.min_abs(), b.lower);
    }
}

#[test]
fn default_sampling_stays_below_the_five_point_optimum() {
    let r = sample_lower_bound(5, DEFAULT_SAMPLES, 1).unwrap();
    assert!(r.lower <= 0.19245);
    assert!(r.lower > 0.1, "a million samples should find a decent placement");
    assert_eq!(r.witness.min_abs(), r.lower);
}

#[test]
fn refinement_mostly_reaches_near_optimal_five_point_placements() {
    let target = 0.95 * 0.19245;
    let mut hits = 0;
    for seed in 0..100 {
        let start = sample_lower_bound(5, 200, seed).unwrap().witness;
        let r = local_refine(&start, 100_000, StepSchedule::default(), seed);
        assert!(r.min_abs() >= start.min_abs());
        if r.min_abs() >= target {
            hits += 1;
        }
    }
    assert!(hits >= 90, "only {hits} of 100 seeds reached {target}");
}

#[test]
fn ten_point_search_gets_close_to_the_best_known() {
    let best = (0..4)
        .map(|seed| {
            let start = sample_lower_bound(10, DEFAULT_SAMPLES, seed).unwrap().witness;
            local_refine(&start, 1_000_000, StepSchedule::default(), seed).min_abs()
        })
        .fold(0.0, f64::max);
    assert!(best >= 0.040, "reached {best}");
    assert!(best <= 0.0465369 + 1e-6);
}
