//! Exhaustive lattice search for tiny instances, and the certifier as a strip oracle.

use super::search::{decide, Budget};
use crate::enhancements::{Decision, EnhancementSet, Groups, StripOracle};
use crate::error::{HeilbronnError, Result};
use crate::geometry::{min_area_of, Point};
use crate::heuristics::{known_configuration, BoundsH, UpperProvenance};

/// Largest enumeration [`brute_force_oracle`] accepts.
const ORACLE_LIMIT: u128 = 50_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Best minimum triangle area over all `n`-subsets of the `k x k` lattice
/// `{0, 1/(k−1), ..., 1}²`.
pub fn brute_force_oracle(n: usize, grid_k: usize) -> Result<f64> {
    if !(3..=4).contains(&n) {
        return Err(HeilbronnError::InvalidParameter(format!("oracle handles 3 or 4 points, got {n}")));
    }
    if grid_k < 2 {
        return Err(HeilbronnError::InvalidParameter(format!("grid needs k >= 2, got {grid_k}")));
    }
    let cells = (grid_k * grid_k) as u128;
    let count = binomial(cells, n as u128);
    if grid_k > 12 || count > ORACLE_LIMIT {
        return Err(HeilbronnError::OracleTooLarge(count));
    }
    let step = 1.0 / (grid_k - 1) as f64;
    let pts: Vec<Point> = (0..grid_k * grid_k)
        .map(|c| Point::new((c % grid_k) as f64 * step, (c / grid_k) as f64 * step))
        .collect();
    let m = pts.len();
    let mut best = 0.0f64;
    let mut chosen = vec![Point::new(0.0, 0.0); n];
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            chosen[slot] = pts[i];
        }
        best = best.max(min_area_of(&chosen));
        // next combination in lexicographic order
        let mut p = n;
        while p > 0 && idx[p - 1] == m - n + p - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..n {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Ok(best)
}

/// Answers strip questions with the in-tree search, using stored
/// configurations first when they already settle the question.
#[derive(Debug, Clone)]
pub struct CertifierOracle {
    pub groups: Groups,
    /// Budget for each single decision.
    pub budget: Budget,
    /// `(m, threshold, decision, nodes)` for every question asked.
    pub log: Vec<(usize, f64, Decision, u64)>,
}

impl CertifierOracle {
    pub fn new(budget: Budget) -> Self {
        CertifierOracle {
            groups: Groups::ALL,
            budget,
            log: Vec::new(),
        }
    }

    fn run(&mut self, m: usize, threshold: f64) -> Result<(Decision, u64)> {
        if m <= 2 {
            return Ok((Decision::Feasible, 0));
        }
        let known = known_configuration(m)?;
        if known.points.min_abs() >= threshold {
            return Ok((Decision::Feasible, 0));
        }
        let bounds = BoundsH::from_witness(known.points.clone(), 0.5, UpperProvenance::Trivial)?;
        let enh = EnhancementSet::new(self.groups, bounds)?;
        let r = decide(&enh, threshold, &known.points, &self.budget)?;
        Ok((r.decision, r.nodes_explored))
    }
}

impl StripOracle for CertifierOracle {
    fn decide(&mut self, m: usize, threshold: f64) -> Decision {
        let (d, nodes) = self.run(m, threshold).unwrap_or((Decision::Inconclusive, 0));
        self.log.push((m, threshold, d, nodes));
        d
    }
}
