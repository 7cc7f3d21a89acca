//! Valid inequalities that cut symmetric or provably suboptimal placements.
//!
//! * G1: `y` ordering, the induced ordering of `w`, and `x_1 <= min(x_2, ½)`.
//! * G2: points on the boundary (one per edge for `n >= 4`, two on the bottom
//!   for `n = 7, 8`, two near every edge for `n = 9`).
//! * G3: packing arguments. A horizontal strip of height `s < 2H̲` holds at most
//!   two points and a square cell of side below `H̲` holds at most one. The
//!   compiled `y` bounds also belong here.
//!
//! Fixings such as `y_1 = 0` are emitted as [`Constraint::Fix`] rather than rows.

mod capacity;
mod table2;
mod witness;

pub use capacity::{derive_y_bounds, strip_capacity, DerivedYBounds, Decision, StripCapacity, StripOracle};
pub use table2::{to_f64, y_bound_table, y_bound_table_exact, Frac};
pub use witness::{check_witness, witness_values, WitnessReport};

use crate::error::{HeilbronnError, Result};
use crate::heuristics::BoundsH;
use crate::model::{Constraint, ConstraintBlock, Sense, Var, VarDecl};

/// Default width of the near-boundary band for `n = 9`.
pub const NEAR_BOUNDARY_EPSILON: f64 = 1e-2;
/// Safety margin subtracted in the strip height and grid size instantiations.
pub const PACKING_MARGIN: f64 = 1e-6;
/// Tolerance at which published coordinates are accepted as satisfying a fixing.
pub const FIXING_TOLERANCE: f64 = 1e-4;

/// A subset of the enhancement groups, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Groups(u8);

impl Groups {
    pub const NONE: Groups = Groups(0);
    pub const G1_BOUNDS_AND_SYMMETRY: Groups = Groups(1);
    pub const G2_BOUNDARY: Groups = Groups(2);
    pub const G3_PACKING: Groups = Groups(4);
    pub const ALL: Groups = Groups(7);

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask > 7 {
            return Err(HeilbronnError::InvalidParameter(format!("enhancement mask {mask} exceeds 7")));
        }
        Ok(Groups(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, other: Groups) -> bool {
        self.0 & other.0 == other.0
    }
}

impl std::ops::BitOr for Groups {
    type Output = Groups;
    fn bitor(self, rhs: Groups) -> Groups {
        Groups(self.0 | rhs.0)
    }
}

/// Equal-height partition of `[0, 1]` used by the two-per-strip encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct StripPartition {
    pub height: f64,
    pub intervals: Vec<(f64, f64)>,
}

impl StripPartition {
    /// Strips `[(p−1)s, min(1, ps)]` for the smallest `m` with `(m−1)s < 1 <= ms`.
    pub fn new(height: f64) -> Result<Self> {
        if !(height > 0.0) {
            return Err(HeilbronnError::InvalidParameter(format!("strip height {height} must be positive")));
        }
        let mut m = (1.0 / height).ceil().max(1.0) as usize;
        while (m as f64) * height < 1.0 {
            m += 1;
        }
        while m > 1 && ((m - 1) as f64) * height >= 1.0 {
            m -= 1;
        }
        let intervals = (1..=m)
            .map(|p| (((p - 1) as f64) * height, (p as f64 * height).min(1.0)))
            .collect();
        Ok(StripPartition { height, intervals })
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }
}

/// Generator settings for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementSet {
    pub groups: Groups,
    pub n: usize,
    pub bounds: BoundsH,
    pub epsilon_near_boundary: f64,
    pub strip_height_s: f64,
    pub grid_m: usize,
    /// Bounds on the sorted `y` values, `[0, 1]` where nothing is known.
    pub y_bounds: Vec<(f64, f64)>,
    /// Adds the unproven ten-point structure (two points per edge, `y_5 <= ½`).
    pub assume_conjecture_n10: bool,
}

impl EnhancementSet {
    pub fn new(groups: Groups, bounds: BoundsH) -> Result<Self> {
        let n = bounds.n;
        let strip_height_s = 2.0 * bounds.lower - PACKING_MARGIN;
        let grid_m = if bounds.lower > PACKING_MARGIN {
            (1.0 / (bounds.lower - PACKING_MARGIN)).floor() as usize
        } else {
            0
        };
        let y_bounds = y_bound_table(n).unwrap_or_else(|_| vec![(0.0, 1.0); n]);
        Ok(EnhancementSet {
            groups,
            n,
            bounds,
            epsilon_near_boundary: NEAR_BOUNDARY_EPSILON,
            strip_height_s,
            grid_m,
            y_bounds,
            assume_conjecture_n10: false,
        })
    }

    /// No enhancement groups at all.
    pub fn none(bounds: BoundsH) -> Self {
        Self::new(Groups::NONE, bounds).expect("no groups cannot fail")
    }

    /// False when unproven assumptions are active.
    pub fn is_certifying(&self) -> bool {
        !(self.assume_conjecture_n10 && self.n == 10 && self.groups.contains(Groups::G2_BOUNDARY))
    }

    /// All constraints of the selected groups that apply to this `n`.
    pub fn constraints(&self) -> Result<ConstraintBlock> {
        let n = self.n;
        let mut block = ConstraintBlock::default();
        if self.groups.contains(Groups::G1_BOUNDS_AND_SYMMETRY) {
            block.extend(symmetry_breaking_constraints(n)?);
        }
        if self.groups.contains(Groups::G2_BOUNDARY) && n >= 4 {
            if n == 9 {
                block.extend(edge_fixings(n));
                block.extend(near_boundary_nine_constraints(self.epsilon_near_boundary, &self.bounds)?);
            } else {
                block.extend(edge_occupancy_constraints(n)?);
            }
            if n == 7 || n == 8 {
                block.extend(two_on_edge_constraints(n)?);
            }
            if n == 10 && self.assume_conjecture_n10 {
                block.extend(conjecture_ten_constraints());
            }
        }
        if self.groups.contains(Groups::G3_PACKING) {
            if (6..=10).contains(&n) {
                let mut b = ConstraintBlock::default();
                for (i, &(lo, hi)) in self.y_bounds.iter().enumerate() {
                    b.bound(Var::Y(i + 1), Some(lo), Some(hi));
                }
                block.extend(b);
            }
            block.extend(strip_two_point_constraints(&self.bounds)?.1);
            block.extend(grid_one_point_constraints(&self.bounds)?);
        }
        Ok(block)
    }
}

/// `y_i <= y_{i+1}`, `w_{i,j} <= w_{i,j+1}`, `x_1 <= x_2` and `x_1 <= ½`.
pub fn symmetry_breaking_constraints(n: usize) -> Result<ConstraintBlock> {
    if n < 3 {
        return Err(HeilbronnError::DegenerateInstance(n));
    }
    let mut b = ConstraintBlock::default();
    for i in 1..n {
        b.row(format!("sym_y_{i}"), vec![(1.0, Var::Y(i)), (-1.0, Var::Y(i + 1))], Sense::Le, 0.0);
    }
    for i in 1..=n {
        for j in 1..n {
            b.row(
                format!("sym_w_{i}_{j}"),
                vec![(1.0, Var::W(i, j)), (-1.0, Var::W(i, j + 1))],
                Sense::Le,
                0.0,
            );
        }
    }
    b.row("sym_x_1_2", vec![(1.0, Var::X(2)), (-1.0, Var::X(1))], Sense::Ge, 0.0);
    b.bound(Var::X(1), None, Some(0.5));
    Ok(b)
}

fn edge_fixings(n: usize) -> ConstraintBlock {
    let mut b = ConstraintBlock::default();
    b.fix(Var::Y(1), 0.0);
    b.fix(Var::Y(n), 1.0);
    for i in 1..=n {
        b.fix(Var::W(i, 1), 0.0);
    }
    for i in 1..=n {
        b.row(format!("edge_wn_{i}"), vec![(1.0, Var::W(i, n)), (-1.0, Var::X(i))], Sense::Eq, 0.0);
    }
    b
}

fn edge_binaries(b: &mut ConstraintBlock, n: usize) {
    for i in 1..=n {
        b.variables.push(VarDecl::binary(Var::C1(i)));
    }
    for i in 1..=n {
        b.variables.push(VarDecl::binary(Var::C2(i)));
    }
}

fn sum_of(n: usize, f: impl Fn(usize) -> Var) -> Vec<(f64, Var)> {
    (1..=n).map(|i| (1.0, f(i))).collect()
}

/// At least one and at most two points on each vertical edge; `y_1 = 0`, `y_n = 1`.
pub fn edge_occupancy_constraints(n: usize) -> Result<ConstraintBlock> {
    if n < 4 {
        return Err(HeilbronnError::NotApplicable(format!(
            "edge occupancy needs at least four points, got {n}"
        )));
    }
    let mut b = edge_fixings(n);
    edge_binaries(&mut b, n);
    b.row("edge_c1_min", sum_of(n, Var::C1), Sense::Ge, 1.0);
    b.row("edge_c1_max", sum_of(n, Var::C1), Sense::Le, 2.0);
    for i in 1..=n {
        b.row(format!("edge_left_{i}"), vec![(1.0, Var::X(i)), (1.0, Var::C1(i))], Sense::Le, 1.0);
    }
    b.row("edge_c2_min", sum_of(n, Var::C2), Sense::Ge, 1.0);
    b.row("edge_c2_max", sum_of(n, Var::C2), Sense::Le, 2.0);
    for i in 1..=n {
        b.row(format!("edge_right_{i}"), vec![(1.0, Var::X(i)), (-1.0, Var::C2(i))], Sense::Ge, 0.0);
    }
    Ok(b)
}

/// For seven and eight points the two lowest points lie on `y = 0`.
pub fn two_on_edge_constraints(n: usize) -> Result<ConstraintBlock> {
    if n != 7 && n != 8 {
        return Err(HeilbronnError::NotApplicable(format!("two-on-edge holds for n = 7, 8 only, got {n}")));
    }
    let mut b = ConstraintBlock::default();
    b.fix(Var::Y(1), 0.0);
    b.fix(Var::Y(2), 0.0);
    for i in 1..=n {
        b.fix(Var::W(i, 1), 0.0);
    }
    for i in 1..=n {
        b.fix(Var::W(i, 2), 0.0);
    }
    Ok(b)
}

/// Nine points: exactly two points within `epsilon` of every edge.
pub fn near_boundary_nine_constraints(epsilon: f64, bounds: &BoundsH) -> Result<ConstraintBlock> {
    if !(epsilon > 0.0) {
        return Err(HeilbronnError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if epsilon >= bounds.lower {
        return Err(HeilbronnError::InvalidParameter(format!(
            "epsilon {epsilon} must stay below the lower bound {}",
            bounds.lower
        )));
    }
    let n = 9;
    let mut b = ConstraintBlock::default();
    b.fix(Var::Y(1), 0.0);
    b.bound(Var::Y(2), None, Some(epsilon));
    b.bound(Var::Y(8), Some(1.0 - epsilon), None);
    b.fix(Var::Y(9), 1.0);
    edge_binaries(&mut b, n);
    b.row("near_c1", sum_of(n, Var::C1), Sense::Eq, 2.0);
    for i in 1..=n {
        b.row(format!("near_left_{i}"), vec![(1.0, Var::X(i)), (1.0, Var::C1(i))], Sense::Le, 1.0 + epsilon);
    }
    b.row("near_c2", sum_of(n, Var::C2), Sense::Eq, 2.0);
    for i in 1..=n {
        b.row(format!("near_right_{i}"), vec![(1.0, Var::X(i)), (-1.0, Var::C2(i))], Sense::Ge, -epsilon);
    }
    Ok(b)
}

/// Unproven ten-point structure; only emitted behind an explicit flag.
fn conjecture_ten_constraints() -> ConstraintBlock {
    let n = 10;
    let mut b = ConstraintBlock::default();
    b.fix(Var::Y(2), 0.0);
    b.fix(Var::Y(9), 1.0);
    b.row("conj_c1", sum_of(n, Var::C1), Sense::Eq, 2.0);
    b.row("conj_c2", sum_of(n, Var::C2), Sense::Eq, 2.0);
    b.bound(Var::Y(5), None, Some(0.5));
    b
}

/// At most two points per horizontal strip of height `s = 2H̲ − 10⁻⁶`.
pub fn strip_two_point_constraints(bounds: &BoundsH) -> Result<(StripPartition, ConstraintBlock)> {
    let s = 2.0 * bounds.lower - PACKING_MARGIN;
    if !(s > 0.0) {
        return Err(HeilbronnError::InvalidParameter(format!(
            "strip height 2*{} - 1e-6 is not positive",
            bounds.lower
        )));
    }
    let part = StripPartition::new(s)?;
    let (n, m) = (bounds.n, part.count());
    let mut b = ConstraintBlock::default();
    for p in 1..=m {
        for i in 1..=n {
            b.variables.push(VarDecl::binary(Var::R(p, i)));
        }
    }
    for p in 1..=m {
        b.row(format!("strip_cap_{p}"), sum_of(n, |i| Var::R(p, i)), Sense::Le, 2.0);
    }
    for i in 1..=n {
        b.row(format!("strip_one_{i}"), sum_of(m, |p| Var::R(p, i)), Sense::Eq, 1.0);
    }
    for (p, &(lo, hi)) in (1..=m).zip(&part.intervals) {
        for i in 1..=n {
            b.row(
                format!("strip_lo_{p}_{i}"),
                vec![(1.0, Var::Y(i)), (-1.0, Var::R(p, i))],
                Sense::Ge,
                lo - 1.0,
            );
            b.row(
                format!("strip_hi_{p}_{i}"),
                vec![(1.0, Var::Y(i)), (1.0, Var::R(p, i))],
                Sense::Le,
                hi + 1.0,
            );
        }
    }
    Ok((part, b))
}

/// Grid size `⌊1/(H̲ − 10⁻⁶)⌋` of the one-per-cell encoding.
pub fn grid_size(lower: f64) -> Result<usize> {
    if !(lower > PACKING_MARGIN) {
        return Err(HeilbronnError::InvalidParameter(format!("lower bound {lower} too small for a grid")));
    }
    let m = (1.0 / (lower - PACKING_MARGIN)).floor() as usize;
    if m < 1 {
        return Err(HeilbronnError::InvalidParameter(format!("grid size {m} < 1")));
    }
    Ok(m)
}

/// At most one point per cell of an `m x m` grid. Column `p` bounds `x`, row `q` bounds `y`.
pub fn grid_one_point_constraints(bounds: &BoundsH) -> Result<ConstraintBlock> {
    let m = grid_size(bounds.lower)?;
    let n = bounds.n;
    let edge = |p: usize| ((p - 1) as f64 / m as f64, p as f64 / m as f64);
    let mut b = ConstraintBlock::default();
    for p in 1..=m {
        for q in 1..=m {
            for i in 1..=n {
                b.variables.push(VarDecl::binary(Var::Cell(p, q, i)));
            }
        }
    }
    for p in 1..=m {
        for q in 1..=m {
            b.row(format!("grid_cap_{p}_{q}"), sum_of(n, |i| Var::Cell(p, q, i)), Sense::Le, 1.0);
        }
    }
    for i in 1..=n {
        let terms = (1..=m)
            .flat_map(|p| (1..=m).map(move |q| (1.0, Var::Cell(p, q, i))))
            .collect();
        b.row(format!("grid_one_{i}"), terms, Sense::Eq, 1.0);
    }
    for p in 1..=m {
        for q in 1..=m {
            let ((xl, xu), (yl, yu)) = (edge(p), edge(q));
            for i in 1..=n {
                let u = Var::Cell(p, q, i);
                b.row(format!("grid_xlo_{p}_{q}_{i}"), vec![(1.0, Var::X(i)), (-1.0, u)], Sense::Ge, xl - 1.0);
                b.row(format!("grid_xhi_{p}_{q}_{i}"), vec![(1.0, Var::X(i)), (1.0, u)], Sense::Le, xu + 1.0);
                b.row(format!("grid_ylo_{p}_{q}_{i}"), vec![(1.0, Var::Y(i)), (-1.0, u)], Sense::Ge, yl - 1.0);
                b.row(format!("grid_yhi_{p}_{q}_{i}"), vec![(1.0, Var::Y(i)), (1.0, u)], Sense::Le, yu + 1.0);
            }
        }
    }
    Ok(b)
}

/// Counts fixings, bounds and rows separately: `(fix, bound, linear)`.
pub fn census(block: &ConstraintBlock) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for k in &block.constraints {
        match k {
            Constraint::Fix { .. } => c.0 += 1,
            Constraint::Bound { .. } => c.1 += 1,
            _ => c.2 += 1,
        }
    }
    c
}
