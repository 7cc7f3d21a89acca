use super::constraint::{LinearRow, Sense};
use super::var::Var;
use crate::error::{HeilbronnError, Result};

/// The four McCormick inequalities for `w = x y` over `[x̲, x̄] × [y̲, ȳ]`.
///
/// Row `r` reads `w + cx x + cy y (sense) rhs`:
///
/// ```text
/// w >= x̲ y + y̲ x − x̲ y̲
/// w >= x̄ y + ȳ x − x̄ ȳ
/// w <= x̄ y + y̲ x − x̄ y̲
/// w <= x̲ y + ȳ x − x̲ ȳ
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCormickEnvelope {
    pub x_bounds: (f64, f64),
    pub y_bounds: (f64, f64),
    pub rows: [(f64, f64, Sense, f64); 4],
}

pub fn mccormick(x_bounds: (f64, f64), y_bounds: (f64, f64)) -> Result<McCormickEnvelope> {
    let ((xl, xu), (yl, yu)) = (x_bounds, y_bounds);
    if !(xl <= xu) || !(yl <= yu) {
        return Err(HeilbronnError::InvalidParameter(format!(
            "inverted McCormick box [{xl}, {xu}] x [{yl}, {yu}]"
        )));
    }
    Ok(McCormickEnvelope {
        x_bounds,
        y_bounds,
        rows: [
            (-yl, -xl, Sense::Ge, -xl * yl),
            (-yu, -xu, Sense::Ge, -xu * yu),
            (-yl, -xu, Sense::Le, -xu * yl),
            (-yu, -xl, Sense::Le, -xl * yu),
        ],
    })
}

impl McCormickEnvelope {
    /// Interval of `w` the envelope allows at `(x, y)`.
    pub fn w_range(&self, x: f64, y: f64) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for &(cx, cy, sense, rhs) in &self.rows {
            let bound = rhs - cx * x - cy * y;
            match sense {
                Sense::Ge => lo = lo.max(bound),
                Sense::Le => hi = hi.min(bound),
                Sense::Eq => {
                    lo = lo.max(bound);
                    hi = hi.min(bound);
                }
            }
        }
        (lo, hi)
    }

    /// True when `(x, y, w)` satisfies all four rows up to `tol`.
    pub fn contains(&self, x: f64, y: f64, w: f64, tol: f64) -> bool {
        let (lo, hi) = self.w_range(x, y);
        w >= lo - tol && w <= hi + tol
    }

    /// The envelope as model rows over concrete variables, named `{prefix}_a` .. `_d`.
    pub fn rows(&self, x: Var, y: Var, w: Var, prefix: &str) -> Vec<LinearRow> {
        self.rows
            .iter()
            .zip(['a', 'b', 'c', 'd'])
            .map(|(&(cx, cy, sense, rhs), tag)| {
                LinearRow::new(format!("{prefix}_{tag}"), vec![(1.0, w), (cx, x), (cy, y)], sense, rhs)
            })
            .collect()
    }
}
