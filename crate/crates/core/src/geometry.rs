//! Geometric kernels on point configurations in the unit square.
//!
//! The signed area is evaluated in a label-invariant way: the three points are
//! ordered by `y` first and the determinant is taken relative to the lowest one.
//! Any relabeling of a configuration therefore produces bit-identical areas, and
//! so does the reflection `x -> 1 - x` whenever `1 - x` is exact.

use serde::{Deserialize, Serialize};

use crate::error::{HeilbronnError, Result};

/// Tolerance used by [`Point::try_new`] before clamping.
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-12;

/// A point of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    /// Builds a point, clamping both coordinates into `[0, 1]`.
    ///
    /// Solver output routinely carries values such as `-3e-17` or `1.0000000001`.
    pub fn new(x: f64, y: f64) -> Self {
        Point {
            x: x.clamp(0.0, 1.0),
            y: y.clamp(0.0, 1.0),
        }
    }

    /// Like [`Point::new`] but rejects coordinates further than
    /// [`CONSTRUCTION_TOLERANCE`] from the unit square.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        for v in [x, y] {
            if !v.is_finite() || v < -CONSTRUCTION_TOLERANCE || v > 1.0 + CONSTRUCTION_TOLERANCE {
                return Err(HeilbronnError::OutOfUnitSquare { value: v });
            }
        }
        Ok(Point::new(x, y))
    }
}

/// An ordered, labeled list of points. Label `i` (1-based in the math) is index `i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Point>,
    canonical: bool,
}

impl Configuration {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(HeilbronnError::DegenerateInstance(points.len()));
        }
        Ok(Configuration {
            points,
            canonical: false,
        })
    }

    /// Convenience constructor from coordinate pairs (clamped).
    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// True when produced by [`canonicalize`]; the `y` coordinates are then non-decreasing.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn min_abs(&self) -> f64 {
        min_triangle_area(self).min_abs
    }
}

/// Iterates over all triples `i < j < k` of `0..n` in lexicographic order.
pub fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> + Clone {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k)))
    })
}

/// Number of triples, `C(n, 3)`.
pub fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Signed area of the triangle `(a, b, c)`, positive for counter-clockwise order.
///
/// Mathematically this is `½[x_a(y_b − y_c) − x_b(y_a − y_c) + x_c(y_a − y_b)]`.
/// The points are first stably sorted by `y` (tracking the permutation parity)
/// and the determinant `(x1−x0)(y2−y0) − (x2−x0)(y1−y0)` is evaluated relative to
/// the lowest point. The result is exactly antisymmetric under any transposition.
pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    let mut p = [a, b, c];
    let mut sign = 1.0;
    // three-element insertion sort on y
    if p[1].y < p[0].y {
        p.swap(0, 1);
        sign = -sign;
    }
    if p[2].y < p[1].y {
        p.swap(1, 2);
        sign = -sign;
        if p[1].y < p[0].y {
            p.swap(0, 1);
            sign = -sign;
        }
    }
    let d = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
    sign * 0.5 * d.clamp(-1.0, 1.0)
}

/// All signed areas of a configuration and their minimum absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleAreas {
    pub n: usize,
    /// Signed areas in the lexicographic order of [`triples`].
    pub signed: Vec<f64>,
    /// Minimum of `|S_ijk|` over all triples.
    pub min_abs: f64,
    /// First triple (0-based, lexicographic) attaining `min_abs`.
    pub argmin: (usize, usize, usize),
}

impl TripleAreas {
    /// Signed area of the triple with 0-based labels `i < j < k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.signed[triple_index(self.n, i, j, k)]
    }
}

/// Position of `(i, j, k)` (0-based, `i < j < k`) in the order of [`triples`].
pub fn triple_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    // triples starting below i, then pairs (j', k') with i < j' < j, then offset in k
    let before_i: usize = (0..i).map(|a| (n - a - 1) * (n - a - 2) / 2).sum();
    let before_j: usize = (i + 1..j).map(|b| n - b - 1).sum();
    before_i + before_j + (k - j - 1)
}

pub fn min_triangle_area(c: &Configuration) -> TripleAreas {
    let pts = c.points();
    let n = pts.len();
    let mut signed = Vec::with_capacity(triple_count(n));
    let mut min_abs = f64::INFINITY;
    let mut argmin = (0, 1, 2);
    for (i, j, k) in triples(n) {
        let s = signed_area(pts[i], pts[j], pts[k]);
        if s.abs() < min_abs {
            min_abs = s.abs();
            argmin = (i, j, k);
        }
        signed.push(s);
    }
    TripleAreas {
        n,
        signed,
        min_abs,
        argmin,
    }
}

/// Minimum triangle area of a raw point slice, without building [`TripleAreas`].
pub fn min_area_of(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = signed_area(pts[i], pts[j], pts[k]).abs();
                if s < best {
                    best = s;
                }
            }
        }
    }
    best
}

/// Maps the bounding box of `c` affinely onto `[0, 1]²`.
///
/// Every area is divided by the box area, so the minimum area never decreases.
pub fn normalize_to_bounding_box(c: &Configuration) -> Result<Configuration> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in c.points() {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !(x1 > x0) || !(y1 > y0) {
        return Err(HeilbronnError::DegenerateBoundingBox);
    }
    if x0 == 0.0 && x1 == 1.0 && y0 == 0.0 && y1 == 1.0 {
        return Ok(c.clone());
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let points = c
        .points()
        .iter()
        .map(|p| {
            // pin the extremes so the box is exactly the unit square
            let x = if p.x == x1 { 1.0 } else { (p.x - x0) / w };
            let y = if p.y == y1 { 1.0 } else { (p.y - y0) / h };
            Point::new(x, y)
        })
        .collect();
    Ok(Configuration {
        points,
        canonical: false,
    })
}

fn sort_labels(points: &mut [(usize, Point)]) {
    points.sort_by(|a, b| {
        a.1.y
            .total_cmp(&b.1.y)
            .then(a.1.x.total_cmp(&b.1.x))
            .then(a.0.cmp(&b.0))
    });
}

/// Puts a configuration into the symmetry-reduced form used by the formulations.
///
/// Labels are sorted by `(y, x, original label)`. If the first point then lies
/// right of `x = ½` the configuration is mirrored and sorted again. The sort key
/// already guarantees `x_1 ≤ x_2` whenever `y_1 = y_2`; when `y_1 < y_2` a label
/// swap would break the `y` order, so none is made.
pub fn canonicalize(c: &Configuration) -> Configuration {
    let mut labeled: Vec<(usize, Point)> = c.points().iter().copied().enumerate().collect();
    sort_labels(&mut labeled);
    if labeled[0].1.x > 0.5 {
        for (_, p) in labeled.iter_mut() {
            p.x = 1.0 - p.x;
        }
        sort_labels(&mut labeled);
    }
    Configuration {
        points: labeled.into_iter().map(|(_, p)| p).collect(),
        canonical: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn signed_area_examples() {
        assert_eq!(signed_area(p(0., 0.), p(1., 0.), p(0., 1.)), 0.5);
        assert_eq!(signed_area(p(1., 0.), p(0., 0.), p(0., 1.)), -0.5);
        assert_eq!(signed_area(p(0., 0.), p(0.5, 0.5), p(1., 1.)), 0.0);
    }

    #[test]
    fn matches_printed_formula() {
        let (a, b, c) = (p(0.1, 0.7), p(0.9, 0.2), p(0.4, 0.95));
        let f = 0.5 * (a.x * (b.y - c.y) - b.x * (a.y - c.y) + c.x * (a.y - b.y));
        assert!((signed_area(a, b, c) - f).abs() < 1e-15);
    }

    #[test]
    fn clamping_and_try_new() {
        assert_eq!(Point::new(-1e-9, 1.5), p(0.0, 1.0));
        assert!(Point::try_new(-1e-13, 0.5).is_ok());
        assert!(Point::try_new(-1e-9, 0.5).is_err());
        assert!(Point::try_new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn degenerate_instance() {
        assert_eq!(
            Configuration::from_coords(&[(0., 0.), (1., 1.)]).unwrap_err(),
            HeilbronnError::DegenerateInstance(2)
        );
    }

    #[test]
    fn triple_index_matches_enumeration() {
        for n in 3..12 {
            for (pos, (i, j, k)) in triples(n).enumerate() {
                assert_eq!(triple_index(n, i, j, k), pos);
            }
            assert_eq!(triples(n).count(), triple_count(n));
        }
    }

    #[test]
    fn corners_have_half() {
        let c = Configuration::from_coords(&[(0., 0.), (1., 0.), (0., 1.), (1., 1.)]).unwrap();
        let t = min_triangle_area(&c);
        assert_eq!(t.min_abs, 0.5);
        assert_eq!(t.signed.len(), 4);
        assert_eq!(t.get(0, 1, 2), 0.5);
    }

    #[test]
    fn normalize_identity_and_scaling() {
        let c = Configuration::from_coords(&[(0., 0.2), (1., 0.), (0.3, 1.), (0.7, 0.6)]).unwrap();
        assert_eq!(normalize_to_bounding_box(&c).unwrap(), c);
        let half = Configuration::from_coords(
            &c.points().iter().map(|q| (q.x * 0.5, q.y * 0.5)).collect::<Vec<_>>(),
        )
        .unwrap();
        let back = normalize_to_bounding_box(&half).unwrap();
        assert!((back.min_abs() - 4.0 * half.min_abs()).abs() < 1e-15);
        let flat = Configuration::from_coords(&[(0., 0.5), (0.5, 0.5), (1., 0.5)]).unwrap();
        assert_eq!(normalize_to_bounding_box(&flat).unwrap_err(), HeilbronnError::DegenerateBoundingBox);
    }

    #[test]
    fn canonicalize_reflects() {
        let c = Configuration::from_coords(&[(0.5, 0.75), (0.875, 0.0), (0.25, 0.375)]).unwrap();
        let k = canonicalize(&c);
        assert!(k.is_canonical());
        assert_eq!(k.points()[0].x, 0.125);
        assert_eq!(k.points()[0].y, 0.0);
        assert_eq!(k.min_abs(), c.min_abs());
        // fixed point
        assert_eq!(canonicalize(&k).points(), k.points());
    }

    #[test]
    fn canonicalize_tie_orders_by_x() {
        let c = Configuration::from_coords(&[(0.4, 0.0), (0.1, 0.0), (0.5, 1.0)]).unwrap();
        let k = canonicalize(&c);
        assert_eq!(k.points()[0], p(0.1, 0.0));
        assert_eq!(k.points()[1], p(0.4, 0.0));
    }
}
