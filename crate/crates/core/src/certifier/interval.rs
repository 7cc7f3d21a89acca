//! Intervals and exact evaluation of signed areas at box vertices.
//!
//! Instead of directed rounding, vertex values are computed exactly as a
//! floating-point expansion, rounded, and then widened by two ulps on each side.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn hull(&self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Non-overlapping expansion, components in increasing magnitude.
struct Expansion {
    c: [f64; 16],
    len: usize,
}

impl Expansion {
    fn new() -> Self {
        Expansion { c: [0.0; 16], len: 0 }
    }

    /// Adds `b` exactly (grow-expansion with zero elimination).
    fn add(&mut self, mut b: f64) {
        let mut out = 0;
        for i in 0..self.len {
            let (s, e) = two_sum(b, self.c[i]);
            b = s;
            if e != 0.0 {
                self.c[out] = e;
                out += 1;
            }
        }
        if b != 0.0 {
            self.c[out] = b;
            out += 1;
        }
        self.len = out;
    }

    fn estimate(&self) -> f64 {
        self.c[..self.len].iter().sum()
    }
}

/// Enclosure of `½ Σ_cyc u_a (v_b − v_c)` at one point, at most four ulps wide.
pub fn exact_cyclic(u: [f64; 3], v: [f64; 3]) -> Interval {
    let mut e = Expansion::new();
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let (p, q) = two_product(u[a], v[b]);
        e.add(p);
        e.add(q);
        let (p, q) = two_product(-u[a], v[c]);
        e.add(p);
        e.add(q);
    }
    let d = 0.5 * e.estimate();
    if d == 0.0 && e.len == 0 {
        return Interval::point(0.0);
    }
    Interval::new(d.next_down().next_down(), d.next_up().next_up())
}

#[inline]
fn plain_cyclic(u: [f64; 3], v: [f64; 3]) -> f64 {
    0.5 * (u[0] * (v[1] - v[2]) + u[1] * (v[2] - v[0]) + u[2] * (v[0] - v[1]))
}

/// Candidates within this distance of the best plain value are re-evaluated exactly.
const SCREEN: f64 = 1e-13;

/// Exact range of `½ Σ_cyc u_a (v_b − v_c)` over the box `u × v`.
///
/// The form is multilinear, so extremes sit at vertices. For each of the eight
/// `v` vertices the optimal `u` ends follow from the signs of `v_b − v_c`, which
/// floating-point subtraction reports exactly.
pub fn cyclic_range(u: [Interval; 3], v: [Interval; 3]) -> Interval {
    let mut hi_pts: [([f64; 3], [f64; 3], f64); 8] = [([0.0; 3], [0.0; 3], 0.0); 8];
    let mut lo_pts = hi_pts;
    let mut best_hi = f64::NEG_INFINITY;
    let mut best_lo = f64::INFINITY;
    for mask in 0..8 {
        let vv = [
            if mask & 1 == 0 { v[0].lo } else { v[0].hi },
            if mask & 2 == 0 { v[1].lo } else { v[1].hi },
            if mask & 4 == 0 { v[2].lo } else { v[2].hi },
        ];
        let mut uh = [0.0; 3];
        let mut ul = [0.0; 3];
        for a in 0..3 {
            let c = vv[(a + 1) % 3] - vv[(a + 2) % 3];
            if c > 0.0 {
                uh[a] = u[a].hi;
                ul[a] = u[a].lo;
            } else {
                uh[a] = u[a].lo;
                ul[a] = u[a].hi;
            }
        }
        let h = plain_cyclic(uh, vv);
        let l = plain_cyclic(ul, vv);
        best_hi = best_hi.max(h);
        best_lo = best_lo.min(l);
        hi_pts[mask] = (uh, vv, h);
        lo_pts[mask] = (ul, vv, l);
    }
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for k in 0..8 {
        if hi_pts[k].2 >= best_hi - SCREEN {
            hi = hi.max(exact_cyclic(hi_pts[k].0, hi_pts[k].1).hi);
        }
        if lo_pts[k].2 <= best_lo + SCREEN {
            lo = lo.min(exact_cyclic(lo_pts[k].0, lo_pts[k].1).lo);
        }
    }
    Interval::new(lo, hi)
}
