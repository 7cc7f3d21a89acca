//! Compiled bounds on the sorted `y` coordinates for `6 <= n <= 10`.

use num_rational::Ratio;

use crate::error::{HeilbronnError, Result};

pub type Frac = Ratio<i64>;

const fn f(n: i64, d: i64) -> (i64, i64) {
    (n, d)
}

type Row = &'static [((i64, i64), (i64, i64))];

const N6: Row = &[
    (f(0, 1), f(0, 1)),
    (f(0, 1), f(1, 2)),
    (f(1, 5), f(4, 5)),
    (f(1, 5), f(4, 5)),
    (f(1, 2), f(1, 1)),
    (f(1, 1), f(1, 1)),
];

const N7: Row = &[
    (f(0, 1), f(0, 1)),
    (f(0, 1), f(1, 2)),
    (f(1, 6), f(2, 3)),
    (f(1, 6), f(5, 6)),
    (f(1, 3), f(5, 6)),
    (f(1, 2), f(1, 1)),
    (f(1, 1), f(1, 1)),
];

const N8: Row = &[
    (f(0, 1), f(0, 1)),
    (f(0, 1), f(1, 2)),
    (f(1, 7), f(1, 2)),
    (f(1, 7), f(2, 3)),
    (f(1, 3), f(6, 7)),
    (f(1, 2), f(6, 7)),
    (f(1, 2), f(1, 1)),
    (f(1, 1), f(1, 1)),
];

const N9: Row = &[
    (f(0, 1), f(0, 1)),
    (f(0, 1), f(1, 100)),
    (f(1, 10), f(1, 2)),
    (f(1, 10), f(2, 3)),
    (f(1, 4), f(3, 4)),
    (f(1, 3), f(9, 10)),
    (f(1, 2), f(9, 10)),
    (f(99, 100), f(1, 1)),
    (f(1, 1), f(1, 1)),
];

const N10: Row = &[
    (f(0, 1), f(0, 1)),
    (f(0, 1), f(1, 2)),
    (f(1, 11), f(1, 2)),
    (f(1, 11), f(1, 2)),
    (f(1, 5), f(2, 3)),
    (f(1, 3), f(4, 5)),
    (f(1, 2), f(10, 11)),
    (f(1, 2), f(10, 11)),
    (f(1, 2), f(1, 1)),
    (f(1, 1), f(1, 1)),
];

/// Exact interval `[y̲_i, ȳ_i]` for each sorted index `i = 1..n`.
pub fn y_bound_table_exact(n: usize) -> Result<Vec<(Frac, Frac)>> {
    let row = match n {
        6 => N6,
        7 => N7,
        8 => N8,
        9 => N9,
        10 => N10,
        _ => return Err(HeilbronnError::NotApplicable(format!("no compiled y bounds for n = {n}"))),
    };
    Ok(row
        .iter()
        .map(|&((a, b), (c, d))| (Frac::new(a, b), Frac::new(c, d)))
        .collect())
}

/// [`y_bound_table_exact`] converted to doubles.
pub fn y_bound_table(n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(y_bound_table_exact(n)?
        .into_iter()
        .map(|(l, u)| (to_f64(l), to_f64(u)))
        .collect())
}

pub fn to_f64(r: Frac) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_entries() {
        assert_eq!(y_bound_table_exact(7).unwrap()[2], (Frac::new(1, 6), Frac::new(2, 3)));
        assert_eq!(y_bound_table(9).unwrap()[1], (0.0, 0.01));
        assert_eq!(y_bound_table(6).unwrap()[0], (0.0, 0.0));
        assert!(y_bound_table(5).is_err());
        assert!(y_bound_table(11).is_err());
    }

    #[test]
    fn rows_are_monotone_intervals() {
        for n in 6..=10 {
            let t = y_bound_table_exact(n).unwrap();
            assert_eq!(t.len(), n);
            for w in t.windows(2) {
                assert!(w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
            }
            for (l, u) in &t {
                assert!(l <= u && *l >= Frac::from(0) && *u <= Frac::from(1));
            }
        }
    }
}
