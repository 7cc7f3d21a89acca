//! Lower bounds from random sampling and hill climbing, plus upper bounds from
//! the monotonicity `H_n* <= H_{n-1}*`.

mod registry;

pub use registry::{known_configuration, proven_optimum, KnownConfiguration, KnownStatus};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{HeilbronnError, Result};
use crate::geometry::{min_area_of, normalize_to_bounding_box, Configuration, Point};

/// Samples per RNG stream. Stream `s` covers sample indices `s*CHUNK .. (s+1)*CHUNK`.
const CHUNK: usize = 4096;

/// Seed used by [`BoundsPolicy::Standard`].
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Sample count used by [`BoundsPolicy::Standard`].
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// Where the upper bound of a [`BoundsH`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum UpperProvenance {
    /// Best known optimum for `n - 1` points.
    PreviousOptimum,
    /// The largest triangle in the unit square.
    Trivial,
    /// The previous size is certified but not proven in the literature.
    Certified,
    UserSupplied,
}

/// An interval `[lower, upper]` known to contain `H_n*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsH {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Configuration,
    pub upper_provenance: UpperProvenance,
}

impl BoundsH {
    /// Builds bounds whose lower end is the minimum area of `witness`.
    pub fn from_witness(witness: Configuration, upper: f64, provenance: UpperProvenance) -> Result<Self> {
        let lower = witness.min_abs();
        if !(lower > 0.0 && lower <= upper && upper <= 0.5) {
            return Err(HeilbronnError::InvalidParameter(format!(
                "bounds must satisfy 0 < lower <= upper <= 0.5, got [{lower}, {upper}]"
            )));
        }
        Ok(BoundsH {
            n: witness.n(),
            lower,
            upper,
            lower_witness: witness,
            upper_provenance: provenance,
        })
    }
}

/// Best of the sampled configurations, with its value.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub lower: f64,
    pub witness: Configuration,
    /// Index of the winning sample.
    pub index: usize,
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Draws `samples` i.i.d. uniform configurations and keeps the best.
///
/// Bit-reproducible for a given `(n, samples, seed)` regardless of thread count:
/// every chunk of indices has its own stream and ties go to the lowest index.
pub fn sample_lower_bound(n: usize, samples: usize, seed: u64) -> Result<SampleResult> {
    if n < 3 {
        return Err(HeilbronnError::DegenerateInstance(n));
    }
    if samples == 0 {
        return Err(HeilbronnError::InvalidParameter("samples must be at least 1".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let (lower, index, pts) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let end = ((c + 1) * CHUNK).min(samples);
            let mut cur = vec![Point::new(0.0, 0.0); n];
            let mut best = (f64::NEG_INFINITY, usize::MAX, cur.clone());
            for idx in c * CHUNK..end {
                for p in cur.iter_mut() {
                    *p = Point::new(rng.gen::<f64>(), rng.gen::<f64>());
                }
                let v = min_area_of(&cur);
                if v > best.0 {
                    best = (v, idx, cur.clone());
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, Vec::new()),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(SampleResult {
        lower,
        witness: Configuration::new(pts)?,
        index,
    })
}

/// Step sizes for [`local_refine`], decaying geometrically from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub start: f64,
    pub end: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { start: 0.1, end: 1e-5 }
    }
}

impl StepSchedule {
    fn step(&self, t: usize, total: usize) -> f64 {
        if total <= 1 {
            return self.start;
        }
        let frac = t as f64 / (total - 1) as f64;
        self.start * (self.end / self.start).powf(frac)
    }
}

/// Metropolis temperature at the start and end of [`local_refine`], relative to
/// the best value so far.
const ANNEAL_START: f64 = 0.1;
const ANNEAL_END: f64 = 1e-9;

/// Index of the first triple attaining the minimum, as three point labels.
fn critical_triple(pts: &[Point]) -> [usize; 3] {
    let n = pts.len();
    let mut best = (f64::INFINITY, [0, 1, 2]);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = crate::geometry::signed_area(pts[i], pts[j], pts[k]).abs();
                if s < best.0 {
                    best = (s, [i, j, k]);
                }
            }
        }
    }
    best.1
}

/// Perturbation hill climbing on the minimum triangle area.
///
/// Each iteration moves either one point (half the time one of the current
/// critical triple) or, occasionally, every point by a uniform offset of the
/// current step size, clamping into the square. Improving moves are always
/// kept; worsening ones pass with a Metropolis probability whose temperature
/// falls to nothing, which lets the walk leave poor local maxima early on. The
/// best placement visited is returned, so the result is never worse than the input.
pub fn local_refine(c: &Configuration, iterations: usize, schedule: StepSchedule, seed: u64) -> Configuration {
    if iterations == 0 {
        return c.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.n();
    let mut cur: Vec<Point> = c.points().to_vec();
    let mut val = min_area_of(&cur);
    let mut best = (val, cur.clone());
    let mut crit = critical_triple(&cur);
    let mut trial = cur.clone();
    for t in 0..iterations {
        let step = schedule.step(t, iterations);
        let temp = best.0.max(1e-6) * ANNEAL_START * (ANNEAL_END / ANNEAL_START).powf(t as f64 / iterations as f64);
        trial.copy_from_slice(&cur);
        let r: f64 = rng.gen();
        if r < 0.02 {
            // relocate one point of the critical triple anywhere
            trial[crit[rng.gen_range(0..3)]] = Point::new(rng.gen(), rng.gen());
        } else if r < 0.1 {
            for p in trial.iter_mut() {
                *p = Point::new(p.x + step * rng.gen_range(-1.0..1.0), p.y + step * rng.gen_range(-1.0..1.0));
            }
        } else {
            let i = if r < 0.55 { crit[rng.gen_range(0..3)] } else { rng.gen_range(0..n) };
            let p = trial[i];
            trial[i] = Point::new(p.x + step * rng.gen_range(-1.0..1.0), p.y + step * rng.gen_range(-1.0..1.0));
        }
        let v = min_area_of(&trial);
        let u: f64 = rng.gen();
        if v >= val || u < ((v - val) / temp).exp() {
            if v != val {
                crit = critical_triple(&trial);
            }
            val = v;
            std::mem::swap(&mut cur, &mut trial);
            if val > best.0 {
                best = (val, cur.clone());
            }
        }
    }
    let cur = best.1;
    let out = Configuration::new(cur).expect("size preserved");
    match normalize_to_bounding_box(&out) {
        Ok(norm) if norm.min_abs() >= out.min_abs() => norm,
        _ => out,
    }
}

/// How [`bounds_for`] computes its interval.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundsPolicy {
    /// `10^6` samples with [`DEFAULT_SEED`], no refinement, no registry.
    Standard,
    Custom(CustomBounds),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CustomBounds {
    pub samples: usize,
    pub seed: u64,
    pub refine_iterations: usize,
    /// Replace the sampled witness by the stored configuration when that is better.
    pub use_registry: bool,
    pub upper: Option<f64>,
}

impl Default for CustomBounds {
    fn default() -> Self {
        CustomBounds {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            refine_iterations: 0,
            use_registry: false,
            upper: None,
        }
    }
}

/// Upper bound `H_{n-1}*` with its provenance; `0.5` for `n <= 4`.
pub fn registry_upper(n: usize) -> (f64, UpperProvenance) {
    if n <= 3 {
        return (0.5, UpperProvenance::Trivial);
    }
    match n - 1 {
        9 => (proven_optimum(9).unwrap(), UpperProvenance::Certified),
        m => match proven_optimum(m) {
            Some(v) => (v, UpperProvenance::PreviousOptimum),
            // beyond the registry the smallest stored value is still valid
            None => (proven_optimum(9).unwrap(), UpperProvenance::Certified),
        },
    }
}

pub fn bounds_for(n: usize, policy: &BoundsPolicy) -> Result<BoundsH> {
    let custom = match policy {
        BoundsPolicy::Standard => CustomBounds::default(),
        BoundsPolicy::Custom(c) => c.clone(),
    };
    let sampled = sample_lower_bound(n, custom.samples, custom.seed)?;
    let mut witness = sampled.witness;
    if custom.refine_iterations > 0 {
        witness = local_refine(&witness, custom.refine_iterations, StepSchedule::default(), custom.seed);
    }
    if custom.use_registry {
        if let Ok(k) = known_configuration(n) {
            if k.points.min_abs() > witness.min_abs() {
                witness = k.points;
            }
        }
    }
    let (upper, prov) = match custom.upper {
        Some(u) => (u, UpperProvenance::UserSupplied),
        None => registry_upper(n),
    };
    BoundsH::from_witness(witness, upper, prov)
}
