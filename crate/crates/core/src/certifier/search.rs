//! Best-first search driving both certification and threshold decisions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{bound_with_triple, propagate_ctx, Context, RegionBox, AREA_CAP};
use crate::enhancements::{Decision, EnhancementSet};
use crate::error::{HeilbronnError, Result};
use crate::geometry::Configuration;
use crate::heuristics::{local_refine, StepSchedule};

/// Nodes expanded per synchronous round; fixed so results do not depend on the thread count.
const BATCH: usize = 32;
/// Boxes narrower than this in every critical coordinate are not split further.
const MIN_WIDTH: f64 = 1e-12;
/// Critical coordinates narrower than this share of the widest one are not split.
const CRITICAL_SHARE: f64 = 0.25;
const REFINE_ITERATIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// Gap closed to within the tolerance.
    Certified,
    /// Budget ran out first; the bracket is still valid.
    Bounded,
    /// The restrictions leave no configuration at all.
    Infeasible,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Certified => "Certified",
            Status::Bounded => "Bounded",
            Status::Infeasible => "Infeasible",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Budget {
    pub fn nodes(n: u64) -> Self {
        Budget {
            max_nodes: Some(n),
            ..Default::default()
        }
    }

    pub fn time(d: Duration) -> Self {
        Budget {
            max_time: Some(d),
            ..Default::default()
        }
    }

    fn exhausted(&self, nodes: u64, start: Instant) -> bool {
        self.max_nodes.is_some_and(|m| nodes >= m) || self.max_time.is_some_and(|t| start.elapsed() >= t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationResult {
    pub n: usize,
    pub proven_upper: f64,
    pub incumbent_lower: f64,
    pub incumbent: Configuration,
    pub status: Status,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionResult {
    pub decision: Decision,
    /// Best configuration seen; its value reaches the threshold when feasible.
    pub witness: Configuration,
    pub best_value: f64,
    /// Proven upper bound on the optimum over the restricted region.
    pub proven_upper: f64,
    pub nodes_explored: u64,
}

struct Node {
    ub: f64,
    seq: u64,
    b: RegionBox,
    crit: (usize, usize, usize),
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        // largest bound first, then oldest
        self.ub.total_cmp(&o.ub).then(o.seq.cmp(&self.seq))
    }
}

enum Eval {
    /// Removed region; its configurations all stay below the target.
    Pruned,
    Live {
        b: RegionBox,
        ub: f64,
        crit: (usize, usize, usize),
        shaved: bool,
        mid: Configuration,
        mid_value: f64,
    },
}

fn evaluate(b: RegionBox, ctx: &Context, target: f64) -> Eval {
    let before = b.clone();
    let Some(p) = propagate_ctx(b, ctx, target) else {
        return Eval::Pruned;
    };
    let (ub, crit) = bound_with_triple(&p);
    if ub < target {
        return Eval::Pruned;
    }
    let mid = p.midpoint();
    let mid_value = mid.min_abs();
    Eval::Live {
        shaved: p.intervals() != before.intervals(),
        b: p,
        ub,
        crit,
        mid,
        mid_value,
    }
}

/// Bisects the widest of the six coordinates of the critical triple.
/// Ties go to the lowest point index, `x` before `y`. When those are much
/// narrower than the box the widest coordinate of the whole box is used instead.
fn split(b: &RegionBox, (i, j, k): (usize, usize, usize)) -> Option<(RegionBox, RegionBox)> {
    let widest = |idx: &mut dyn Iterator<Item = usize>| {
        let mut best: Option<(usize, f64)> = None;
        for idx in idx {
            let w = b.intervals()[idx].width();
            if best.map_or(true, |(_, bw)| w > bw) {
                best = Some((idx, w));
            }
        }
        best.filter(|&(_, w)| w >= MIN_WIDTH)
    };
    let mut crit = [i, j, k].into_iter().flat_map(|p| [2 * p, 2 * p + 1]);
    let mut all = 0..b.intervals().len();
    let (idx, _) = match (widest(&mut crit), widest(&mut all)) {
        (Some(c), Some(g)) if c.1 >= CRITICAL_SHARE * g.1 => c,
        (_, g) => g?,
    };
    let v = b.intervals()[idx];
    let m = v.mid();
    let mut lo = b.clone();
    let mut hi = b.clone();
    let p = idx / 2;
    let (l, h) = (super::Interval { lo: v.lo, hi: m }, super::Interval { lo: m, hi: v.hi });
    if idx % 2 == 0 {
        lo.set_x(p, l);
        hi.set_x(p, h);
    } else {
        lo.set_y(p, l);
        hi.set_y(p, h);
    }
    lo.depth += 1;
    hi.depth += 1;
    Some((lo, hi))
}

enum Mode {
    /// Target follows the incumbent: `lower + tol`.
    Certify { tol: f64 },
    Decide { threshold: f64 },
}

struct Search {
    ctx: Context,
    mode: Mode,
    heap: BinaryHeap<Node>,
    seq: u64,
    nodes: u64,
    lower: f64,
    best: Configuration,
    /// Largest value any removed region could still hold.
    pruned_max: f64,
    /// Boxes too thin to split, kept only for their bound.
    stuck_max: f64,
    refines: u64,
}

impl Search {
    fn target(&self) -> f64 {
        match self.mode {
            Mode::Certify { tol } => self.lower + tol,
            Mode::Decide { threshold } => threshold,
        }
    }

    fn absorb(&mut self, parent_ub: f64, e: Eval) {
        let t = self.target();
        match e {
            Eval::Pruned => self.pruned_max = self.pruned_max.max(t.min(parent_ub)),
            Eval::Live {
                b,
                ub,
                crit,
                shaved,
                mid,
                mid_value,
            } => {
                if shaved {
                    self.pruned_max = self.pruned_max.max(t.min(parent_ub));
                }
                if mid_value > self.lower {
                    self.improve(mid, mid_value);
                }
                let ub = ub.min(parent_ub);
                if ub < self.target() {
                    self.pruned_max = self.pruned_max.max(self.target().min(ub));
                    return;
                }
                self.seq += 1;
                self.heap.push(Node {
                    ub,
                    seq: self.seq,
                    b,
                    crit,
                });
            }
        }
    }

    fn improve(&mut self, c: Configuration, v: f64) {
        self.refines += 1;
        let refined = local_refine(
            &c,
            REFINE_ITERATIONS,
            StepSchedule { start: 1e-2, end: 1e-7 },
            self.refines,
        );
        let rv = refined.min_abs();
        if rv > v {
            self.lower = rv;
            self.best = refined;
        } else {
            self.lower = v;
            self.best = c;
        }
    }

    fn upper(&self) -> f64 {
        let top = self.heap.peek().map_or(0.0, |n| n.ub);
        top.max(self.pruned_max).max(self.stuck_max).max(self.lower).min(AREA_CAP)
    }

    /// Runs until `done` holds or the budget ends; true when `done` was reached.
    fn run(&mut self, budget: &Budget, done: impl Fn(&Search) -> bool) -> bool {
        let start = Instant::now();
        let pool = budget
            .threads
            .and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build().ok());
        loop {
            if done(self) {
                return true;
            }
            if self.heap.is_empty() || budget.exhausted(self.nodes, start) {
                return false;
            }
            let t = self.target();
            let mut batch = Vec::with_capacity(BATCH);
            while batch.len() < BATCH {
                match self.heap.pop() {
                    Some(n) if n.ub >= t => batch.push(n),
                    Some(n) => self.pruned_max = self.pruned_max.max(t.min(n.ub)),
                    None => break,
                }
            }
            self.nodes += batch.len() as u64;
            let ctx = &self.ctx;
            let work = |n: &Node| -> (f64, Option<[Eval; 2]>) {
                match split(&n.b, n.crit) {
                    Some((a, b)) => (n.ub, Some([evaluate(a, ctx, t), evaluate(b, ctx, t)])),
                    None => (n.ub, None),
                }
            };
            let results: Vec<_> = match &pool {
                Some(p) => p.install(|| batch.par_iter().map(work).collect()),
                None => batch.par_iter().map(work).collect(),
            };
            for (ub, r) in results {
                match r {
                    Some(children) => {
                        for e in children {
                            self.absorb(ub, e);
                        }
                    }
                    None => self.stuck_max = self.stuck_max.max(ub),
                }
            }
        }
    }
}

fn start(
    enh: &EnhancementSet,
    incumbent: &Configuration,
    mode: Mode,
    packing: bool,
) -> Result<Search> {
    if incumbent.n() != enh.n {
        return Err(HeilbronnError::NotApplicable(format!(
            "incumbent has {} points, enhancements are for {}",
            incumbent.n(),
            enh.n
        )));
    }
    if enh.n < 3 {
        return Err(HeilbronnError::DegenerateInstance(enh.n));
    }
    let ctx = Context::new(enh, packing)?;
    let mut s = Search {
        ctx,
        mode,
        heap: BinaryHeap::new(),
        seq: 0,
        nodes: 0,
        lower: incumbent.min_abs(),
        best: incumbent.clone(),
        pruned_max: 0.0,
        stuck_max: 0.0,
        refines: 0,
    };
    let t = s.target();
    for r in s.ctx.roots() {
        let e = evaluate(r, &s.ctx, t);
        s.absorb(AREA_CAP, e);
    }
    Ok(s)
}

/// Proves an upper bound on the optimum and returns it with the best configuration found.
pub fn certify(
    n: usize,
    enh: &EnhancementSet,
    incumbent0: &Configuration,
    tol: f64,
    budget: &Budget,
) -> Result<CertificationResult> {
    if !(tol > 0.0) {
        return Err(HeilbronnError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if n != enh.n {
        return Err(HeilbronnError::NotApplicable(format!(
            "enhancements are for {} points, asked for {n}",
            enh.n
        )));
    }
    let clock = Instant::now();
    // every configuration reaching the incumbent meets the packing bounds
    let mut s = start(enh, incumbent0, Mode::Certify { tol }, true)?;
    let empty_at_start = s
        .ctx
        .roots()
        .into_iter()
        .all(|r| propagate_ctx(r, &s.ctx, 0.0).is_none());
    let closed = s.run(budget, |s| s.heap.peek().map_or(true, |top| top.ub - s.lower <= tol) && s.stuck_max - s.lower <= tol);
    let proven_upper = s.upper();
    let status = if empty_at_start {
        Status::Infeasible
    } else if closed {
        Status::Certified
    } else {
        Status::Bounded
    };
    Ok(CertificationResult {
        n,
        proven_upper,
        incumbent_lower: s.lower,
        incumbent: s.best,
        status,
        nodes_explored: s.nodes,
        wall_time: clock.elapsed(),
    })
}

/// Decides whether some configuration has every triangle of area at least `threshold`.
pub fn decide(
    enh: &EnhancementSet,
    threshold: f64,
    start_config: &Configuration,
    budget: &Budget,
) -> Result<DecisionResult> {
    if !(threshold > 0.0) {
        return Err(HeilbronnError::InvalidParameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    // the packing bounds assume the lower bound is reached, which only helps
    // when the threshold is at least that high
    let packing = threshold >= enh.bounds.lower;
    let mut s = start(enh, start_config, Mode::Decide { threshold }, packing)?;
    let reached = s.run(budget, |s| s.lower >= threshold);
    let decision = if reached {
        Decision::Feasible
    } else if s.heap.is_empty() && s.stuck_max < threshold {
        Decision::Infeasible
    } else {
        Decision::Inconclusive
    };
    Ok(DecisionResult {
        decision,
        proven_upper: s.upper(),
        best_value: s.lower,
        witness: s.best,
        nodes_explored: s.nodes,
    })
}
