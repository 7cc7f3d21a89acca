//! Interval branch-and-bound over coordinate boxes.
//!
//! A node is a box of per-point coordinate intervals. Its bound is the smallest,
//! over all triples, of the largest attainable `|S_ijk|`. Propagation shrinks
//! boxes with the enhancement fixings, the `y` ordering, and the requirement
//! that every triangle reach the current target.

mod interval;
mod oracle;
mod search;

use serde::Serialize;

pub use interval::{cyclic_range, exact_cyclic, Interval};
pub use oracle::{brute_force_oracle, CertifierOracle};
pub use search::{certify, decide, Budget, CertificationResult, DecisionResult, Status};

use crate::enhancements::{EnhancementSet, Groups};
use crate::error::Result;
use crate::geometry::{triples, Configuration, Point};
use crate::model::{Constraint, Var};

/// No triangle in the unit square has area above this.
pub const AREA_CAP: f64 = 0.5;

/// Coordinate box for all points; `x_i` at index `2i`, `y_i` at `2i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionBox {
    iv: Vec<Interval>,
    pub depth: u32,
}

impl RegionBox {
    pub fn full(n: usize) -> Self {
        RegionBox {
            iv: vec![Interval::UNIT; 2 * n],
            depth: 0,
        }
    }

    /// Intervals given as `(x_i, y_i)` pairs.
    pub fn from_intervals(per_point: &[(Interval, Interval)]) -> Self {
        RegionBox {
            iv: per_point.iter().flat_map(|&(x, y)| [x, y]).collect(),
            depth: 0,
        }
    }

    /// The box holding exactly the given configuration.
    pub fn from_configuration(c: &Configuration) -> Self {
        RegionBox {
            iv: c.points().iter().flat_map(|p| [Interval::point(p.x), Interval::point(p.y)]).collect(),
            depth: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.iv.len() / 2
    }

    pub fn x(&self, i: usize) -> Interval {
        self.iv[2 * i]
    }

    pub fn y(&self, i: usize) -> Interval {
        self.iv[2 * i + 1]
    }

    pub fn set_x(&mut self, i: usize, v: Interval) {
        self.iv[2 * i] = v;
    }

    pub fn set_y(&mut self, i: usize, v: Interval) {
        self.iv[2 * i + 1] = v;
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.iv
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        c.n() == self.n()
            && c.points()
                .iter()
                .enumerate()
                .all(|(i, p)| self.x(i).contains(p.x) && self.y(i).contains(p.y))
    }

    pub fn midpoint(&self) -> Configuration {
        let pts = (0..self.n()).map(|i| Point::new(self.x(i).mid(), self.y(i).mid())).collect();
        Configuration::new(pts).expect("box has at least one point")
    }

    fn is_valid(&self) -> bool {
        self.iv.iter().all(|v| v.lo <= v.hi)
    }
}

/// Enclosure of `S_ijk` over the box, with `S_ijk = ½ Σ_cyc x_i (y_j − y_k)`.
pub fn interval_signed_area(b: &RegionBox, (i, j, k): (usize, usize, usize)) -> Interval {
    cyclic_range([b.x(i), b.x(j), b.x(k)], [b.y(i), b.y(j), b.y(k)])
}

/// Smallest over all triples of the largest `|S|` in the box, with the triple attaining it.
pub fn bound_with_triple(b: &RegionBox) -> (f64, (usize, usize, usize)) {
    let mut best = (f64::INFINITY, (0, 1, 2));
    for t in triples(b.n()) {
        let m = interval_signed_area(b, t).mag();
        if m < best.0 {
            best = (m, t);
        }
    }
    (best.0.min(AREA_CAP), best.1)
}

/// Upper bound on the minimum triangle area of any configuration in the box.
///
/// The enhancement set does not enter the bound itself; it acts through
/// [`propagate`].
pub fn node_upper_bound(b: &RegionBox, _enh: &EnhancementSet) -> f64 {
    bound_with_triple(b).0
}

/// Restrictions the search may impose, read once from an enhancement set.
#[derive(Debug, Clone)]
pub(crate) struct Context {
    pub n: usize,
    /// Box after fixings and variable bounds on `x` and `y`.
    pub root: RegionBox,
    /// `y_1 <= ... <= y_n`, with ties ordered by `x`.
    pub order: bool,
    /// Split the root on which points sit on `x = 0` and `x = 1`.
    pub edge_split: bool,
}

impl Context {
    /// `packing` selects whether bounds from packing arguments (the `y` table)
    /// may be used; they only hold for configurations reaching the lower bound.
    pub fn new(enh: &EnhancementSet, packing: bool) -> Result<Self> {
        let n = enh.n;
        let mut root = RegionBox::full(n);
        let mut groups = enh.groups;
        if !packing {
            groups = Groups::from_mask(groups.mask() & !Groups::G3_PACKING.mask())?;
        }
        let restricted = EnhancementSet {
            groups,
            ..enh.clone()
        };
        for k in restricted.constraints()?.constraints {
            let (var, lo, hi) = match k {
                Constraint::Fix { var, value } => (var, value, value),
                Constraint::Bound { var, lower, upper } => (var, lower.unwrap_or(0.0), upper.unwrap_or(1.0)),
                _ => continue,
            };
            let (idx, cur) = match var {
                Var::X(i) => (2 * (i - 1), root.x(i - 1)),
                Var::Y(i) => (2 * (i - 1) + 1, root.y(i - 1)),
                _ => continue,
            };
            root.iv[idx] = Interval {
                lo: cur.lo.max(lo),
                hi: cur.hi.min(hi),
            };
        }
        Ok(Context {
            n,
            root,
            order: enh.groups.contains(Groups::G1_BOUNDS_AND_SYMMETRY),
            edge_split: enh.groups.contains(Groups::G2_BOUNDARY) && n >= 4,
        })
    }

    /// Root boxes. With the boundary group some point lies on `x = 0` and
    /// another on `x = 1`; point 1 cannot be the latter since `x_1 <= ½`.
    pub fn roots(&self) -> Vec<RegionBox> {
        if !self.edge_split {
            return vec![self.root.clone()];
        }
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a == b || (b == 0 && self.order) {
                    continue;
                }
                let mut r = self.root.clone();
                if !(r.x(a).lo <= 0.0 && r.x(b).hi >= 1.0) {
                    continue;
                }
                r.set_x(a, Interval::point(0.0));
                r.set_x(b, Interval::point(1.0));
                out.push(r);
            }
        }
        out
    }
}

/// Outward margin applied to every shaved end.
const SHAVE_MARGIN: f64 = 1e-9;
/// Slopes below this are not divided by.
const MIN_SLOPE: f64 = 1e-6;
/// Stop shaving once no end moves further than this.
const SHAVE_PROGRESS: f64 = 1e-7;
const MAX_PASSES: usize = 4;

/// Tightens `u` so that `σ·½ Σ_cyc u_a (v_b − v_c) >= target` stays possible.
/// Returns `None` when no point of the box satisfies it.
fn shave(u: &mut [Interval; 3], v: &[Interval; 3], sigma: f64, target: f64) -> Option<()> {
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let mut new_lo = f64::INFINITY;
        let mut new_hi = f64::NEG_INFINITY;
        let (lo, hi) = (u[a].lo, u[a].hi);
        for mask in 0..8 {
            let vv = [
                if mask & 1 == 0 { v[0].lo } else { v[0].hi },
                if mask & 2 == 0 { v[1].lo } else { v[1].hi },
                if mask & 4 == 0 { v[2].lo } else { v[2].hi },
            ];
            let slope = sigma * 0.5 * (vv[b] - vv[c]);
            let cb = sigma * 0.5 * (vv[c] - vv[a]);
            let cc = sigma * 0.5 * (vv[a] - vv[b]);
            let pick = |coef: f64, w: Interval| if coef > 0.0 { coef * w.hi } else { coef * w.lo };
            let offset = pick(cb, u[b]) + pick(cc, u[c]);
            if slope.abs() < MIN_SLOPE {
                let best = (slope * lo).max(slope * hi) + offset;
                if best >= target - SHAVE_MARGIN {
                    new_lo = lo;
                    new_hi = hi;
                    break;
                }
                continue;
            }
            let t = (target - offset) / slope;
            if slope > 0.0 {
                // feasible part is [t, hi]
                let start = (t - SHAVE_MARGIN).max(lo);
                if start <= hi {
                    new_lo = new_lo.min(start);
                    new_hi = hi;
                }
            } else {
                // feasible part is [lo, t]
                let end = (t + SHAVE_MARGIN).min(hi);
                if end >= lo {
                    new_lo = lo;
                    new_hi = new_hi.max(end);
                }
            }
        }
        if new_lo > new_hi {
            return None;
        }
        u[a] = Interval {
            lo: new_lo.max(lo),
            hi: new_hi.min(hi),
        };
    }
    Some(())
}

fn order_pass(b: &mut RegionBox) -> bool {
    let n = b.n();
    for i in 1..n {
        let (p, q) = (b.y(i - 1), b.y(i));
        if q.lo < p.lo {
            b.set_y(i, Interval { lo: p.lo, hi: q.hi });
        }
    }
    for i in (0..n - 1).rev() {
        let (p, q) = (b.y(i), b.y(i + 1));
        if p.hi > q.hi {
            b.set_y(i, Interval { lo: p.lo, hi: q.hi });
        }
    }
    // equal y values are ordered by x
    for i in 0..n - 1 {
        let (p, q) = (b.y(i), b.y(i + 1));
        if p.lo == p.hi && q.lo == q.hi && p.lo == q.lo {
            let (xa, xb) = (b.x(i), b.x(i + 1));
            b.set_x(i, Interval { lo: xa.lo, hi: xa.hi.min(xb.hi) });
            b.set_x(i + 1, Interval { lo: xb.lo.max(xa.lo), hi: xb.hi });
        }
    }
    b.is_valid()
}

/// Two points closer than this cannot share a triangle of area `target`:
/// `|S| <= ½ (|Δx| + |Δy|)` for any third point of the unit square.
fn pairs_pass(b: &RegionBox, target: f64) -> bool {
    let n = b.n();
    for i in 0..n {
        for j in i + 1..n {
            let dx = (b.x(j).hi - b.x(i).lo).max(b.x(i).hi - b.x(j).lo);
            let dy = (b.y(j).hi - b.y(i).lo).max(b.y(i).hi - b.y(j).lo);
            if 0.5 * (dx + dy) * (1.0 + 1e-12) < target {
                return false;
            }
        }
    }
    true
}

pub(crate) fn propagate_ctx(mut b: RegionBox, ctx: &Context, target: f64) -> Option<RegionBox> {
    for (v, r) in b.iv.iter_mut().zip(&ctx.root.iv) {
        v.lo = v.lo.max(r.lo);
        v.hi = v.hi.min(r.hi);
    }
    if !b.is_valid() {
        return None;
    }
    if ctx.order && !order_pass(&mut b) {
        return None;
    }
    if !(target > 0.0) {
        return Some(b);
    }
    if !pairs_pass(&b, target) {
        return None;
    }
    for _ in 0..MAX_PASSES {
        let mut moved = false;
        for (i, j, k) in triples(b.n()) {
            let s = interval_signed_area(&b, (i, j, k));
            let x0 = [b.x(i), b.x(j), b.x(k)];
            let y0 = [b.y(i), b.y(j), b.y(k)];
            // shave under each admissible sign and keep the hull
            let mut hull: Option<([Interval; 3], [Interval; 3])> = None;
            for (sigma, possible) in [(1.0, s.hi >= target), (-1.0, s.lo <= -target)] {
                if !possible {
                    continue;
                }
                let (mut x, mut y) = (x0, y0);
                if shave(&mut x, &y, sigma, target).is_none() || shave(&mut y, &x, -sigma, target).is_none() {
                    continue;
                }
                hull = Some(match hull {
                    None => (x, y),
                    Some((hx, hy)) => (
                        std::array::from_fn(|a| hx[a].hull(x[a])),
                        std::array::from_fn(|a| hy[a].hull(y[a])),
                    ),
                });
            }
            let (x, y) = hull?;
            for (slot, p) in [i, j, k].into_iter().enumerate() {
                moved |= x[slot].width() < x0[slot].width() - SHAVE_PROGRESS
                    || y[slot].width() < y0[slot].width() - SHAVE_PROGRESS;
                b.set_x(p, x[slot]);
                b.set_y(p, y[slot]);
            }
        }
        if ctx.order && !order_pass(&mut b) {
            return None;
        }
        if !moved {
            break;
        }
    }
    Some(b)
}

/// Shrinks the box to the part that can still hold a configuration whose
/// smallest triangle reaches `incumbent`, or `None` when nothing remains.
pub fn propagate(b: &RegionBox, enh: &EnhancementSet, incumbent: f64) -> Result<Option<RegionBox>> {
    let ctx = Context::new(enh, true)?;
    Ok(propagate_ctx(b.clone(), &ctx, incumbent))
}
