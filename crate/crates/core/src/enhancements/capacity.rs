//! Strip capacities and the `y` bounds they imply.
//!
//! `m` points in a `1 x 1/κ` strip with every triangle of area at least `h`
//! correspond, after stretching the strip vertically by `κ`, to `m` points in the
//! unit square with every triangle of area at least `κh`. The capacity is the
//! largest such `m`, and `ℓ` stacked strips hold at most `ℓ m_κ` points, giving
//! `y_{ℓ m_κ + 1} >= ℓ/κ` and `y_{n − ℓ m_κ} <= 1 − ℓ/κ`.

use super::table2::Frac;
use crate::error::{HeilbronnError, Result};

/// Answer to "is `H_m* >= threshold`?".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Feasible,
    Infeasible,
    Inconclusive,
}

/// Anything that can decide the unit-square question for `m` points.
pub trait StripOracle {
    fn decide(&mut self, m: usize, threshold: f64) -> Decision;
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripCapacity {
    pub kappa: usize,
    /// Largest `m` proven feasible.
    pub capacity: usize,
    /// Set when the oracle could not settle `capacity + 1`.
    pub inconclusive: bool,
}

/// Largest number of points (at most `max_points`) a strip of height `1/kappa`
/// can hold with all triangle areas at least `h_lower`.
pub fn strip_capacity(
    kappa: usize,
    h_lower: f64,
    max_points: usize,
    oracle: &mut dyn StripOracle,
) -> Result<StripCapacity> {
    if kappa < 2 {
        return Err(HeilbronnError::InvalidParameter(format!("kappa must be at least 2, got {kappa}")));
    }
    if !(h_lower > 0.0) {
        return Err(HeilbronnError::InvalidParameter(format!("h_lower must be positive, got {h_lower}")));
    }
    let threshold = kappa as f64 * h_lower;
    // any two points are fine: they form no triangle
    let mut capacity = 2;
    for m in 3..=max_points {
        match oracle.decide(m, threshold) {
            Decision::Feasible => capacity = m,
            Decision::Infeasible => break,
            Decision::Inconclusive => {
                return Ok(StripCapacity {
                    kappa,
                    capacity,
                    inconclusive: true,
                })
            }
        }
    }
    Ok(StripCapacity {
        kappa,
        capacity,
        inconclusive: false,
    })
}

/// Bounds on the sorted `y` coordinates derived from strip capacities.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedYBounds {
    pub n: usize,
    pub bounds: Vec<(Frac, Frac)>,
    pub capacities: Vec<StripCapacity>,
    /// True when some capacity could not be settled; bounds are then valid but possibly weak.
    pub inconclusive: bool,
}

/// Runs `κ = 2, 3, ...` until a strip holds only two points, then combines the
/// capacity bounds with the boundary facts (`y_1 = 0`, `y_n = 1`, and for nine
/// points `y_2 <= 1/100`, `y_8 >= 99/100`) and the ordering `y_i <= y_{i+1}`.
pub fn derive_y_bounds(n: usize, h_lower: f64, oracle: &mut dyn StripOracle) -> Result<DerivedYBounds> {
    if n < 4 {
        return Err(HeilbronnError::NotApplicable(format!("y bounds need at least four points, got {n}")));
    }
    let zero = Frac::from(0);
    let one = Frac::from(1);
    let mut lo = vec![zero; n];
    let mut hi = vec![one; n];
    hi[0] = zero;
    lo[n - 1] = one;
    if n == 9 {
        hi[1] = Frac::new(1, 100);
        lo[7] = Frac::new(99, 100);
    }
    let mut capacities = Vec::new();
    let mut inconclusive = false;
    for kappa in 2.. {
        // past this point even two points per strip cannot constrain anything
        if kappa > 4 * n + 4 {
            break;
        }
        let cap = strip_capacity(kappa, h_lower, n - 1, oracle)?;
        let m = cap.capacity;
        inconclusive |= cap.inconclusive;
        capacities.push(cap.clone());
        for l in 1..kappa {
            let frac = Frac::new(l as i64, kappa as i64);
            let idx = l * m + 1;
            if idx <= n {
                lo[idx - 1] = lo[idx - 1].max(frac);
            }
            if l * m < n {
                let j = n - l * m;
                hi[j - 1] = hi[j - 1].min(one - frac);
            }
        }
        if m <= 2 || cap.inconclusive {
            break;
        }
    }
    for i in 1..n {
        lo[i] = lo[i].max(lo[i - 1]);
    }
    for i in (0..n - 1).rev() {
        hi[i] = hi[i].min(hi[i + 1]);
    }
    Ok(DerivedYBounds {
        n,
        bounds: lo.into_iter().zip(hi).collect(),
        capacities,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Answers from a table of optimal values; exact decisions.
    struct Table(Vec<f64>);

    impl StripOracle for Table {
        fn decide(&mut self, m: usize, t: f64) -> Decision {
            if self.0[m] >= t {
                Decision::Feasible
            } else {
                Decision::Infeasible
            }
        }
    }

    fn optima() -> Table {
        Table(vec![1.0, 1.0, 1.0, 0.5, 0.5, 0.19245, 0.125, 0.0838591, 0.0723764, 0.0548767])
    }

    #[test]
    fn tiny_strips_hold_two() {
        let c = strip_capacity(100, 0.4, 9, &mut optima()).unwrap();
        assert_eq!(c.capacity, 2);
        let c = strip_capacity(5, 0.1249995, 5, &mut optima()).unwrap();
        assert_eq!(c.capacity, 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(strip_capacity(1, 0.1, 5, &mut optima()).is_err());
        assert!(strip_capacity(3, 0.0, 5, &mut optima()).is_err());
    }

    #[test]
    fn inconclusive_is_flagged() {
        struct Unsure;
        impl StripOracle for Unsure {
            fn decide(&mut self, m: usize, _: f64) -> Decision {
                if m == 3 {
                    Decision::Feasible
                } else {
                    Decision::Inconclusive
                }
            }
        }
        let c = strip_capacity(2, 0.1, 6, &mut Unsure).unwrap();
        assert_eq!((c.capacity, c.inconclusive), (3, true));
    }
}
