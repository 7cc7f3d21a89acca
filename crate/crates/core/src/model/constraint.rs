use std::collections::HashMap;
use std::fmt;

use super::var::{Var, VarDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// `Σ coef * var  (sense)  rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub name: String,
    pub terms: Vec<(f64, Var)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearRow {
    /// Builds a row, dropping zero coefficients.
    pub fn new(name: impl Into<String>, terms: Vec<(f64, Var)>, sense: Sense, rhs: f64) -> Self {
        LinearRow {
            name: name.into(),
            terms: terms.into_iter().filter(|t| t.0 != 0.0).collect(),
            sense,
            rhs,
        }
    }

    pub fn lhs(&self, values: &HashMap<Var, f64>) -> f64 {
        self.terms.iter().map(|&(c, v)| c * value_of(values, v)).sum()
    }

    /// Amount by which `values` violates the row (0 when satisfied).
    pub fn violation(&self, values: &HashMap<Var, f64>) -> f64 {
        violation(self.lhs(values), self.sense, self.rhs)
    }
}

/// Linear part plus bilinear terms `Σ coef * a * b`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRow {
    pub name: String,
    pub linear: Vec<(f64, Var)>,
    pub quadratic: Vec<(f64, Var, Var)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl QuadraticRow {
    pub fn violation(&self, values: &HashMap<Var, f64>) -> f64 {
        let lin: f64 = self.linear.iter().map(|&(c, v)| c * value_of(values, v)).sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .map(|&(c, a, b)| c * value_of(values, a) * value_of(values, b))
            .sum();
        violation(lin + quad, self.sense, self.rhs)
    }
}

fn value_of(values: &HashMap<Var, f64>, v: Var) -> f64 {
    *values.get(&v).unwrap_or_else(|| panic!("no value for {v}"))
}

fn violation(lhs: f64, sense: Sense, rhs: f64) -> f64 {
    match sense {
        Sense::Le => (lhs - rhs).max(0.0),
        Sense::Ge => (rhs - lhs).max(0.0),
        Sense::Eq => (lhs - rhs).abs(),
    }
}

/// One emitted constraint. Fixings and bounds are kept apart from rows so that
/// exporters can write them as variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Linear(LinearRow),
    Quadratic(QuadraticRow),
    Fix { var: Var, value: f64 },
    Bound { var: Var, lower: Option<f64>, upper: Option<f64> },
}

impl Constraint {
    pub fn violation(&self, values: &HashMap<Var, f64>) -> f64 {
        match self {
            Constraint::Linear(r) => r.violation(values),
            Constraint::Quadratic(r) => r.violation(values),
            Constraint::Fix { var, value } => (value_of(values, *var) - value).abs(),
            Constraint::Bound { var, lower, upper } => {
                let v = value_of(values, *var);
                let lo = lower.map_or(0.0, |l| (l - v).max(0.0));
                let hi = upper.map_or(0.0, |u| (v - u).max(0.0));
                lo.max(hi)
            }
        }
    }

    /// Variables referenced by the constraint.
    pub fn vars(&self) -> Vec<Var> {
        match self {
            Constraint::Linear(r) => r.terms.iter().map(|t| t.1).collect(),
            Constraint::Quadratic(r) => r
                .linear
                .iter()
                .map(|t| t.1)
                .chain(r.quadratic.iter().flat_map(|t| [t.1, t.2]))
                .collect(),
            Constraint::Fix { var, .. } | Constraint::Bound { var, .. } => vec![*var],
        }
    }
}

/// Constraints together with the variables they introduce.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintBlock {
    pub variables: Vec<VarDecl>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintBlock {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn extend(&mut self, other: ConstraintBlock) {
        for d in other.variables {
            if !self.variables.iter().any(|e| e.var == d.var) {
                self.variables.push(d);
            }
        }
        self.constraints.extend(other.constraints);
    }

    pub(crate) fn row(&mut self, name: impl Into<String>, terms: Vec<(f64, Var)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint::Linear(LinearRow::new(name, terms, sense, rhs)));
    }

    pub(crate) fn fix(&mut self, var: Var, value: f64) {
        self.constraints.push(Constraint::Fix { var, value });
    }

    pub(crate) fn bound(&mut self, var: Var, lower: Option<f64>, upper: Option<f64>) {
        self.constraints.push(Constraint::Bound { var, lower, upper });
    }
}
