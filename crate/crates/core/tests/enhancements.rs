use std::time::Duration;

use heilbronn::certifier::{Budget, CertifierOracle};
use heilbronn::enhancements::*;
use heilbronn::geometry::{canonicalize, Configuration};
use heilbronn::heuristics::{known_configuration, registry_upper, BoundsH};
use heilbronn::model::{Constraint, Var};
use heilbronn::HeilbronnError;

fn registry_bounds(n: usize) -> BoundsH {
    let k = known_configuration(n).unwrap();
    let (upper, prov) = registry_upper(n);
    BoundsH::from_witness(canonicalize(&k.points), upper.max(k.points.min_abs()), prov).unwrap()
}

#[test]
fn stored_placements_pass_every_group() {
    for n in 6..=9 {
        let b = registry_bounds(n);
        let c = b.lower_witness.clone();
        for mask in [1, 2, 4, 7] {
            let enh = EnhancementSet::new(Groups::from_mask(mask).unwrap(), b.clone()).unwrap();
            let r = check_witness(&enh, &c, FIXING_TOLERANCE).unwrap();
            assert!(r.passed, "n={n} mask={mask}: {:?} by {}", r.worst, r.max_violation);
            assert!(r.constraints_checked > 0);
        }
    }
}

#[test]
fn symmetry_block_size() {
    for n in 3..=10 {
        let b = symmetry_breaking_constraints(n).unwrap();
        assert_eq!(b.len(), (n - 1) + n * (n - 1) + 2, "n={n}");
        let (fix, bound, rows) = census(&b);
        assert_eq!((fix, bound), (0, 1));
        assert_eq!(rows, (n - 1) + n * (n - 1) + 1);
    }
}

#[test]
fn edge_occupancy_needs_four_points() {
    assert!(matches!(edge_occupancy_constraints(3), Err(HeilbronnError::NotApplicable(_))));
    let b = edge_occupancy_constraints(5).unwrap();
    let fixes: Vec<_> = b
        .constraints
        .iter()
        .filter_map(|k| match k {
            Constraint::Fix { var, value } => Some((*var, *value)),
            _ => None,
        })
        .collect();
    assert!(fixes.contains(&(Var::Y(1), 0.0)));
    assert!(fixes.contains(&(Var::Y(5), 1.0)));
}

#[test]
fn two_on_edge_only_for_seven_and_eight() {
    assert!(two_on_edge_constraints(6).is_err());
    assert!(two_on_edge_constraints(7).is_ok());
    assert!(two_on_edge_constraints(8).is_ok());
    assert!(two_on_edge_constraints(9).is_err());
}

#[test]
fn three_points_hugging_the_bottom_cannot_reach_the_nine_point_bound() {
    let b = registry_bounds(9);
    let eps = NEAR_BOUNDARY_EPSILON;
    let mut coords: Vec<(f64, f64)> = b.lower_witness.points().iter().map(|p| (p.x, p.y)).collect();
    coords[1].1 = eps / 4.0;
    coords[2].1 = eps / 3.0;
    let c = canonicalize(&Configuration::from_coords(&coords).unwrap());
    // the three low points span a triangle of area at most ε/2
    assert!(c.min_abs() <= eps / 2.0);
    assert!(c.min_abs() < b.lower);
}

#[test]
fn near_boundary_epsilon_is_validated() {
    let b = registry_bounds(9);
    assert!(near_boundary_nine_constraints(0.0, &b).is_err());
    assert!(near_boundary_nine_constraints(0.06, &b).is_err());
    assert!(near_boundary_nine_constraints(NEAR_BOUNDARY_EPSILON, &b).is_ok());
}

#[test]
fn ten_point_conjecture_is_gated_and_marked() {
    let b = registry_bounds(10);
    let mut enh = EnhancementSet::new(Groups::ALL, b).unwrap();
    assert!(enh.is_certifying());
    let plain = enh.constraints().unwrap().len();
    enh.assume_conjecture_n10 = true;
    assert!(!enh.is_certifying());
    assert!(enh.constraints().unwrap().len() > plain);
}

#[test]
fn strip_partition_is_the_smallest_cover() {
    for s in [0.1, 0.25, 0.3, 0.11, 1.0, 2.0] {
        let p = StripPartition::new(s).unwrap();
        let m = p.count() as f64;
        assert!((m - 1.0) * s < 1.0 && 1.0 <= m * s, "s={s}");
        assert_eq!(p.intervals.last().unwrap().1, 1.0);
    }
    assert!(StripPartition::new(0.0).is_err());
}

#[test]
fn grid_size_for_the_nine_point_bound() {
    assert_eq!(grid_size(0.0548756).unwrap(), 18);
    assert!(grid_size(0.0).is_err());
}

#[test]
fn y_table_is_monotone_and_pins_the_ends() {
    for n in 6..=10 {
        let t = y_bound_table_exact(n).unwrap();
        assert_eq!(t.len(), n);
        assert_eq!(t[0].1, Frac::from(0));
        assert_eq!(t[n - 1].0, Frac::from(1));
        for w in t.windows(2) {
            assert!(w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
        }
    }
    assert_eq!(y_bound_table_exact(9).unwrap()[1].1, Frac::new(1, 100));
    assert!(y_bound_table(5).is_err());
}

#[test]
fn stored_placements_respect_the_y_table() {
    for n in 6..=10 {
        let c = canonicalize(&known_configuration(n).unwrap().points);
        for (p, (lo, hi)) in c.points().iter().zip(y_bound_table(n).unwrap()) {
            assert!(lo - 1e-9 <= p.y && p.y <= hi + 1e-9, "n={n}");
        }
    }
}

#[test]
fn certifier_derives_the_six_and_seven_point_rows() {
    for n in [6, 7] {
        let h = known_configuration(n).unwrap().points.min_abs();
        let mut oracle = CertifierOracle::new(Budget::time(Duration::from_secs(120)));
        let d = derive_y_bounds(n, h, &mut oracle).unwrap();
        assert!(!d.inconclusive);
        assert_eq!(d.bounds, y_bound_table_exact(n).unwrap(), "n={n}");
    }
}

#[test]
fn nine_point_half_strip_holds_six() {
    let h = known_configuration(9).unwrap().points.min_abs();
    let mut oracle = CertifierOracle::new(Budget::time(Duration::from_secs(120)));
    let c = strip_capacity(2, h, 8, &mut oracle).unwrap();
    assert_eq!((c.capacity, c.inconclusive), (6, false));
}
