//! Checks a concrete configuration against emitted enhancement constraints.
//!
//! Binaries are chosen from the geometry: edge indicators mark the points
//! closest to the edge, strip and cell indicators come from a capacitated
//! bipartite matching between points and the regions containing them.

use std::collections::HashMap;

use super::{grid_size, EnhancementSet, Groups, StripPartition, PACKING_MARGIN};
use crate::geometry::Configuration;
use crate::model::{Constraint, Var};

/// Outcome of [`check_witness`].
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub max_violation: f64,
    /// Description of the most violated constraint, if any is violated.
    pub worst: Option<String>,
    pub constraints_checked: usize,
    pub passed: bool,
}

/// Assigns each item to one slot among its candidates, each slot holding at most
/// `capacity` items. Returns `None` when no complete assignment exists.
fn capacitated_matching(candidates: &[Vec<usize>], slots: usize, capacity: usize) -> Option<Vec<usize>> {
    // expand each slot into `capacity` copies and run Kuhn's augmenting paths
    let copies = slots * capacity;
    let mut owner: Vec<Option<usize>> = vec![None; copies];
    fn augment(
        item: usize,
        candidates: &[Vec<usize>],
        capacity: usize,
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &s in &candidates[item] {
            for c in s * capacity..(s + 1) * capacity {
                if seen[c] {
                    continue;
                }
                seen[c] = true;
                if owner[c].is_none() || augment(owner[c].unwrap(), candidates, capacity, owner, seen) {
                    owner[c] = Some(item);
                    return true;
                }
            }
        }
        false
    }
    for item in 0..candidates.len() {
        let mut seen = vec![false; copies];
        if !augment(item, candidates, capacity, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut out = vec![0; candidates.len()];
    for (c, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            out[*i] = c / capacity;
        }
    }
    Some(out)
}

fn nearest(intervals: &[(f64, f64)], v: f64) -> usize {
    let dist = |&(lo, hi): &(f64, f64)| (lo - v).max(v - hi).max(0.0);
    (0..intervals.len())
        .min_by(|&a, &b| dist(&intervals[a]).total_cmp(&dist(&intervals[b])))
        .unwrap_or(0)
}

fn mark_edge(values: &mut HashMap<Var, f64>, keys: &[f64], limit: f64, var: fn(usize) -> Var) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    for (rank, &i) in order.iter().enumerate() {
        let on = rank < 2 && keys[i] <= limit;
        values.insert(var(i + 1), if on { 1.0 } else { 0.0 });
    }
}

/// Values for `x`, `y`, `w` and every enhancement binary of `enh` at configuration `c`.
pub fn witness_values(enh: &EnhancementSet, c: &Configuration, tol: f64) -> HashMap<Var, f64> {
    let n = c.n();
    let pts = c.points();
    let mut v = HashMap::new();
    for i in 1..=n {
        v.insert(Var::X(i), pts[i - 1].x);
        v.insert(Var::Y(i), pts[i - 1].y);
        for j in 1..=n {
            v.insert(Var::W(i, j), pts[i - 1].x * pts[j - 1].y);
        }
    }
    if enh.groups.contains(Groups::G2_BOUNDARY) && n >= 4 {
        let band = if n == 9 { enh.epsilon_near_boundary + tol } else { tol };
        let left: Vec<f64> = pts.iter().map(|p| p.x).collect();
        let right: Vec<f64> = pts.iter().map(|p| 1.0 - p.x).collect();
        mark_edge(&mut v, &left, band, Var::C1);
        mark_edge(&mut v, &right, band, Var::C2);
    }
    if enh.groups.contains(Groups::G3_PACKING) {
        let s = 2.0 * enh.bounds.lower - PACKING_MARGIN;
        if let Ok(part) = StripPartition::new(s) {
            let m = part.count();
            let cand: Vec<Vec<usize>> = pts
                .iter()
                .map(|p| {
                    (0..m)
                        .filter(|&k| p.y >= part.intervals[k].0 - tol && p.y <= part.intervals[k].1 + tol)
                        .collect()
                })
                .collect();
            let assign = capacitated_matching(&cand, m, 2)
                .unwrap_or_else(|| pts.iter().map(|p| nearest(&part.intervals, p.y)).collect());
            for i in 0..n {
                for p in 0..m {
                    v.insert(Var::R(p + 1, i + 1), if assign[i] == p { 1.0 } else { 0.0 });
                }
            }
        }
        if let Ok(m) = grid_size(enh.bounds.lower) {
            let cells: Vec<(f64, f64)> = (0..m).map(|p| (p as f64 / m as f64, (p + 1) as f64 / m as f64)).collect();
            let inside = |k: usize, t: f64| t >= cells[k].0 - tol && t <= cells[k].1 + tol;
            let cand: Vec<Vec<usize>> = pts
                .iter()
                .map(|pt| {
                    (0..m * m)
                        .filter(|&s| inside(s / m, pt.x) && inside(s % m, pt.y))
                        .collect()
                })
                .collect();
            let assign = capacitated_matching(&cand, m * m, 1).unwrap_or_else(|| {
                pts.iter()
                    .map(|pt| nearest(&cells, pt.x) * m + nearest(&cells, pt.y))
                    .collect()
            });
            for i in 0..n {
                for p in 0..m {
                    for q in 0..m {
                        let on = assign[i] == p * m + q;
                        v.insert(Var::Cell(p + 1, q + 1, i + 1), if on { 1.0 } else { 0.0 });
                    }
                }
            }
        }
    }
    v
}

/// Substitutes `c` (with binaries from [`witness_values`]) into every constraint of `enh`.
pub fn check_witness(enh: &EnhancementSet, c: &Configuration, tol: f64) -> crate::error::Result<WitnessReport> {
    let block = enh.constraints()?;
    let values = witness_values(enh, c, tol);
    let mut worst = (0.0f64, None);
    for k in &block.constraints {
        let viol = k.violation(&values);
        if viol > worst.0 {
            worst = (viol, Some(describe(k)));
        }
    }
    Ok(WitnessReport {
        max_violation: worst.0,
        worst: if worst.0 > tol { worst.1 } else { None },
        constraints_checked: block.len(),
        passed: worst.0 <= tol,
    })
}

fn describe(k: &Constraint) -> String {
    match k {
        Constraint::Linear(r) => r.name.clone(),
        Constraint::Quadratic(r) => r.name.clone(),
        Constraint::Fix { var, value } => format!("{var} = {value}"),
        Constraint::Bound { var, lower, upper } => format!("{var} in [{lower:?}, {upper:?}]"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_respects_capacity() {
        let cand = vec![vec![0], vec![0], vec![0, 1]];
        let a = capacitated_matching(&cand, 2, 2).unwrap();
        assert_eq!(a[0], 0);
        assert_eq!(a[1], 0);
        assert_eq!(a[2], 1);
        assert!(capacitated_matching(&[vec![0], vec![0], vec![0]], 1, 2).is_none());
    }
}
