use std::time::Duration;

use heilbronn::certifier::*;
use heilbronn::enhancements::{Decision, EnhancementSet, Groups};
use heilbronn::geometry::{canonicalize, signed_area, Configuration, Point};
use heilbronn::heuristics::{known_configuration, registry_upper, BoundsH, UpperProvenance};
use heilbronn::HeilbronnError;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn registry_bounds(n: usize) -> BoundsH {
    let k = known_configuration(n).unwrap();
    let (upper, prov) = registry_upper(n);
    BoundsH::from_witness(canonicalize(&k.points), upper.max(k.points.min_abs()), prov).unwrap()
}

fn enh_all(n: usize) -> EnhancementSet {
    let mask = if n >= 4 { Groups::ALL } else { Groups::G1_BOUNDS_AND_SYMMETRY };
    EnhancementSet::new(mask, registry_bounds(n)).unwrap()
}

fn canonical(n: usize) -> Configuration {
    canonicalize(&known_configuration(n).unwrap().points)
}

// Coordinates on a 2^-20 grid make the textbook area exact in doubles.
fn grid() -> impl Strategy<Value = f64> {
    (0u32..=(1 << 20)).prop_map(|k| k as f64 / (1u32 << 20) as f64)
}

fn around(v: f64, below: f64, above: f64) -> Interval {
    Interval::new((v - below).max(0.0), (v + above).min(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn box_enclosure_contains_every_selection(
        pts in proptest::collection::vec((grid(), grid()), 3),
        pads in proptest::collection::vec((0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64, 0.0..0.3f64), 3),
    ) {
        let per: Vec<(Interval, Interval)> = pts
            .iter()
            .zip(&pads)
            .map(|(&(x, y), &(a, b, c, d))| (around(x, a, b), around(y, c, d)))
            .collect();
        let b = RegionBox::from_intervals(&per);
        let p: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let exact = 0.5 * (p[0].x * (p[1].y - p[2].y) + p[1].x * (p[2].y - p[0].y) + p[2].x * (p[0].y - p[1].y));
        let e = interval_signed_area(&b, (0, 1, 2));
        prop_assert!(e.contains(exact), "{e:?} misses {exact}");
        prop_assert!(e.contains(signed_area(p[0], p[1], p[2])));
        prop_assert!(e.lo >= -0.5 - 1e-15 && e.hi <= 0.5 + 1e-15);
    }
}

#[test]
fn full_box_encloses_both_orientations() {
    let e = interval_signed_area(&RegionBox::full(3), (0, 1, 2));
    assert!(e.lo <= -0.5 && e.lo >= -0.5 - 1e-15);
    assert!(e.hi >= 0.5 && e.hi <= 0.5 + 1e-15);
}

#[test]
fn degenerate_box_is_a_few_ulps_wide() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let coords: Vec<(f64, f64)> = (0..3).map(|_| (rng.gen(), rng.gen())).collect();
        let c = Configuration::from_coords(&coords).unwrap();
        let p = c.points();
        let s = signed_area(p[0], p[1], p[2]);
        let e = interval_signed_area(&RegionBox::from_configuration(&c), (0, 1, 2));
        let ulp = s.abs().next_up() - s.abs();
        assert!(e.width() <= 4.0 * ulp * 1.0001 + f64::MIN_POSITIVE, "{e:?} around {s}");
        assert!((s - e.mid()).abs() <= 1e-16, "{e:?} around {s}");
    }
}

#[test]
fn node_bound_examples() {
    let none3 = EnhancementSet::none(registry_bounds(3));
    assert_eq!(node_upper_bound(&RegionBox::full(3), &none3), 0.5);

    let corners = Configuration::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]).unwrap();
    let none4 = EnhancementSet::none(registry_bounds(4));
    let ub = node_upper_bound(&RegionBox::from_configuration(&corners), &none4);
    assert!((ub - 0.5).abs() <= 1e-12);

    let six = known_configuration(6).unwrap().points;
    let ub = node_upper_bound(&RegionBox::from_configuration(&six), &enh_all(6));
    assert!((ub - 0.1249999).abs() <= 1e-6, "{ub}");
}

#[test]
fn node_bound_covers_the_placements_inside_random_boxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 5..=8 {
        let c = canonical(n);
        let enh = enh_all(n);
        let area = c.min_abs();
        for _ in 0..200 {
            let per: Vec<(Interval, Interval)> = c
                .points()
                .iter()
                .map(|p| {
                    let w: f64 = rng.gen::<f64>() * 0.05;
                    (around(p.x, w * rng.gen::<f64>(), w * rng.gen::<f64>()), around(p.y, w * rng.gen::<f64>(), w * rng.gen::<f64>()))
                })
                .collect();
            let b = RegionBox::from_intervals(&per);
            assert!(b.contains(&c));
            assert!(node_upper_bound(&b, &enh) >= area, "n={n}");
        }
    }
}

#[test]
fn propagation_never_drops_a_reachable_placement() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 5..=8 {
        let c = canonical(n);
        let enh = enh_all(n);
        let target = c.min_abs() - 1e-9;
        for _ in 0..200 {
            let w: f64 = rng.gen::<f64>() * 0.1;
            let per: Vec<(Interval, Interval)> = c.points().iter().map(|p| (around(p.x, w, w), around(p.y, w, w))).collect();
            let b = RegionBox::from_intervals(&per);
            let out = propagate(&b, &enh, target).unwrap().expect("placement lost");
            assert!(out.contains(&c), "n={n} w={w}");
        }
    }
}

#[test]
fn low_third_point_is_cut_for_seven() {
    let enh = enh_all(7);
    let mut b = RegionBox::full(7);
    b.set_y(2, Interval::new(0.0, 0.1));
    assert!(propagate(&b, &enh, enh.bounds.lower).unwrap().is_none());
}

#[test]
fn point_box_passes_unchanged() {
    let c = canonical(6);
    let b = RegionBox::from_configuration(&c);
    let out = propagate(&b, &enh_all(6), c.min_abs() - 1e-9).unwrap().unwrap();
    assert_eq!(out.intervals(), b.intervals());
}

#[test]
fn nearly_coincident_points_are_cut() {
    let enh = EnhancementSet::none(registry_bounds(4));
    let c = Configuration::from_coords(&[(0.2, 0.0), (0.2005, 0.0005), (1.0, 0.5), (0.0, 1.0)]).unwrap();
    assert!(propagate(&RegionBox::from_configuration(&c), &enh, 0.1).unwrap().is_none());
}

#[test]
fn small_cases_certify_at_one_half() {
    for n in [3, 4] {
        let enh = enh_all(n);
        let r = certify(n, &enh, &canonical(n), 1e-3, &Budget::time(Duration::from_secs(30))).unwrap();
        assert_eq!(r.status, Status::Certified, "n={n}");
        assert!(r.proven_upper - 0.5 <= 1e-3 && r.incumbent_lower >= 0.5 - 1e-3);
    }
}

#[test]
fn five_points_certify_around_the_optimum() {
    let enh = enh_all(5);
    let r = certify(5, &enh, &canonical(5), 5e-3, &Budget::time(Duration::from_secs(60))).unwrap();
    assert_eq!(r.status, Status::Certified);
    assert!(r.incumbent_lower <= 0.19245 + 1e-6 && 0.19245 <= r.proven_upper);
    assert!(r.proven_upper - r.incumbent_lower <= 5e-3 * (1.0 + 1e-9), "{} {}", r.proven_upper, r.incumbent_lower);
    assert_eq!(r.incumbent.min_abs(), r.incumbent_lower);
}

#[test]
fn certificate_sandwiches_the_incumbent() {
    for n in 3..=6 {
        let enh = enh_all(n);
        let r = certify(n, &enh, &canonical(n), 1e-2, &Budget::nodes(20_000)).unwrap();
        assert!(r.incumbent.min_abs() <= r.proven_upper, "n={n}");
        assert!(r.incumbent_lower <= r.proven_upper);
        assert!(r.proven_upper <= AREA_CAP);
    }
}

#[test]
fn certification_is_repeatable() {
    let enh = enh_all(5);
    let a = certify(5, &enh, &canonical(5), 1e-3, &Budget::nodes(5_000)).unwrap();
    let mut single = Budget::nodes(5_000);
    single.threads = Some(1);
    let b = certify(5, &enh, &canonical(5), 1e-3, &single).unwrap();
    assert_eq!((a.proven_upper, a.incumbent_lower, a.nodes_explored), (b.proven_upper, b.incumbent_lower, b.nodes_explored));
}

#[test]
fn three_point_bound_dominates_every_grid() {
    let r = certify(3, &enh_all(3), &canonical(3), 1e-6, &Budget::time(Duration::from_secs(30))).unwrap();
    for k in 2..=12 {
        assert!(r.proven_upper >= brute_force_oracle(3, k).unwrap() - 1e-12, "k={k}");
    }
}

#[test]
fn brute_force_examples() {
    assert_eq!(brute_force_oracle(3, 2).unwrap(), 0.5);
    assert_eq!(brute_force_oracle(3, 3).unwrap(), 0.5);
    assert_eq!(brute_force_oracle(4, 2).unwrap(), 0.5);
    assert!(brute_force_oracle(5, 4).is_err());
    assert!(brute_force_oracle(3, 1).is_err());
    assert!(matches!(brute_force_oracle(4, 13), Err(HeilbronnError::OracleTooLarge(_))));
}

#[test]
fn five_points_cannot_beat_the_optimum() {
    let b = BoundsH::from_witness(canonical(5), 0.5, UpperProvenance::Trivial).unwrap();
    let enh = EnhancementSet::new(Groups::ALL, b).unwrap();
    let r = decide(&enh, 0.1925, &canonical(5), &Budget::time(Duration::from_secs(60))).unwrap();
    assert_eq!(r.decision, Decision::Infeasible);
    let r = decide(&enh, 0.19, &canonical(5), &Budget::time(Duration::from_secs(60))).unwrap();
    assert_eq!(r.decision, Decision::Feasible);
    assert!(r.witness.min_abs() >= 0.19);
}

#[test]
fn bad_parameters_are_rejected() {
    let enh = enh_all(5);
    assert!(certify(5, &enh, &canonical(5), 0.0, &Budget::nodes(10)).is_err());
    assert!(certify(6, &enh, &canonical(5), 1e-3, &Budget::nodes(10)).is_err());
    assert!(decide(&enh, -1.0, &canonical(5), &Budget::nodes(10)).is_err());
}
