//! Algebraic formulations of the problem and their export to LP text.
//!
//! Three formulations share the coordinates `x, y`, the objective `H`, the signed
//! areas `S` and the products `w_ij = x_i y_j`:
//!
//! * approach 1 linearizes `|S| >= H` with one binary per triple and a big-M of `H̄ + ½`;
//! * approach 2 uses `U >= H` with `S² = U²` and no binaries;
//! * approach 3 replaces `w = x y` by a `P`-bit expansion of `x` with McCormick
//!   envelopes on the bit products. In relaxed mode the remainder products are
//!   enveloped too and the model becomes a MILP whose optimum bounds `H_n*` from above.

mod constraint;
mod lp;
mod mccormick;
mod var;

use std::collections::{BTreeMap, HashMap};

pub use constraint::{Constraint, ConstraintBlock, LinearRow, QuadraticRow, Sense};
pub use lp::{export, file_name, read_lp, write_lp};
pub use mccormick::{mccormick, McCormickEnvelope};
pub use var::{Var, VarDecl, VarKind};

use crate::enhancements::EnhancementSet;
use crate::error::{HeilbronnError, Result};
use crate::geometry::{triples, Configuration};
use crate::heuristics::BoundsH;

/// Which formulation a model encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    BinaryLinearization,
    Quadratic,
    Discretized { bits: usize, relaxed: bool },
}

impl Approach {
    pub fn number(&self) -> u8 {
        match self {
            Approach::BinaryLinearization => 1,
            Approach::Quadratic => 2,
            Approach::Discretized { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub n: usize,
    pub approach: Approach,
    /// Bit mask of enhancement groups (1, 2, 4).
    pub enhancement_mask: u8,
    /// False when unproven assumptions were added.
    pub certifying: bool,
}

/// Options that alter the base rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    /// Omit the strengthening pair `−½ <= S − (½ + H̲) b <= −H̲`.
    pub drop_strengthening: bool,
}

/// Variables, rows and objective (`max H`) of one formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulationModel {
    pub meta: ModelMeta,
    variables: BTreeMap<String, VarDecl>,
    pub linear: Vec<LinearRow>,
    pub quadratic: Vec<QuadraticRow>,
    pub objective: Var,
}

impl FormulationModel {
    fn new(meta: ModelMeta) -> Self {
        FormulationModel {
            meta,
            variables: BTreeMap::new(),
            linear: Vec::new(),
            quadratic: Vec::new(),
            objective: Var::H,
        }
    }

    /// Rebuilds a model from its parts; used by the LP reader.
    pub fn from_parts(
        meta: ModelMeta,
        variables: Vec<VarDecl>,
        linear: Vec<LinearRow>,
        quadratic: Vec<QuadraticRow>,
    ) -> Result<Self> {
        let mut m = FormulationModel::new(meta);
        for d in variables {
            m.declare(d);
        }
        m.linear = linear;
        m.quadratic = quadratic;
        m.validate()?;
        Ok(m)
    }

    fn declare(&mut self, d: VarDecl) {
        self.variables.entry(d.var.to_string()).or_insert(d);
    }

    /// Variables in lexicographic order of their names.
    pub fn variables(&self) -> impl Iterator<Item = &VarDecl> {
        self.variables.values()
    }

    pub fn variable(&self, v: Var) -> Option<&VarDecl> {
        self.variables.get(&v.to_string())
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.variables.values().filter(|d| d.kind == VarKind::Binary).count()
    }

    fn tighten(&mut self, v: Var, lower: Option<f64>, upper: Option<f64>) -> Result<()> {
        let d = self
            .variables
            .get_mut(&v.to_string())
            .ok_or_else(|| HeilbronnError::InvalidParameter(format!("bound on undeclared variable {v}")))?;
        if let Some(l) = lower {
            d.lower = d.lower.max(l);
        }
        if let Some(u) = upper {
            d.upper = d.upper.min(u);
        }
        if d.lower > d.upper {
            return Err(HeilbronnError::InvalidParameter(format!(
                "empty domain for {v}: [{}, {}]",
                d.lower, d.upper
            )));
        }
        Ok(())
    }

    /// Adds a block of constraints; fixings and bounds become variable bounds.
    pub fn attach(&mut self, block: ConstraintBlock) -> Result<()> {
        for d in block.variables {
            self.declare(d);
        }
        for c in block.constraints {
            match c {
                Constraint::Linear(r) => self.linear.push(r),
                Constraint::Quadratic(r) => self.quadratic.push(r),
                Constraint::Fix { var, value } => self.tighten(var, Some(value), Some(value))?,
                Constraint::Bound { var, lower, upper } => self.tighten(var, lower, upper)?,
            }
        }
        self.validate()
    }

    /// Checks that every referenced variable is declared and row names are unique.
    pub fn validate(&self) -> Result<()> {
        let mut names = std::collections::HashSet::new();
        let refs = self
            .linear
            .iter()
            .map(|r| (r.name.as_str(), r.terms.iter().map(|t| t.1).collect::<Vec<_>>()))
            .chain(self.quadratic.iter().map(|r| {
                let vs = r
                    .linear
                    .iter()
                    .map(|t| t.1)
                    .chain(r.quadratic.iter().flat_map(|t| [t.1, t.2]))
                    .collect::<Vec<_>>();
                (r.name.as_str(), vs)
            }));
        for (name, vars) in refs {
            if !names.insert(name) {
                return Err(HeilbronnError::InvalidParameter(format!("duplicate row name {name}")));
            }
            for v in vars {
                if !self.variables.contains_key(&v.to_string()) {
                    return Err(HeilbronnError::InvalidParameter(format!("row {name} uses undeclared {v}")));
                }
            }
        }
        Ok(())
    }

    /// Largest violation of any bound, integrality requirement or row.
    pub fn max_violation(&self, values: &HashMap<Var, f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for d in self.variables.values() {
            let v = *values.get(&d.var).unwrap_or_else(|| panic!("no value for {}", d.var));
            worst = worst.max(d.lower - v).max(v - d.upper);
            if d.kind == VarKind::Binary {
                worst = worst.max((v - v.round()).abs());
            }
        }
        for r in &self.linear {
            worst = worst.max(r.violation(values));
        }
        for r in &self.quadratic {
            worst = worst.max(r.violation(values));
        }
        worst
    }
}

fn base_model(n: usize, bounds: &BoundsH, enh: &EnhancementSet, approach: Approach) -> Result<FormulationModel> {
    if n < 3 {
        return Err(HeilbronnError::DegenerateInstance(n));
    }
    let mut m = FormulationModel::new(ModelMeta {
        n,
        approach,
        enhancement_mask: enh.groups.mask(),
        certifying: enh.is_certifying(),
    });
    for i in 1..=n {
        m.declare(VarDecl::continuous(Var::X(i), 0.0, 1.0));
        m.declare(VarDecl::continuous(Var::Y(i), 0.0, 1.0));
        for j in 1..=n {
            m.declare(VarDecl::continuous(Var::W(i, j), 0.0, 1.0));
        }
    }
    m.declare(VarDecl::continuous(Var::H, bounds.lower, bounds.upper));
    for (i, j, k) in one_based_triples(n) {
        m.declare(VarDecl::continuous(Var::S(i, j, k), -0.5, 0.5));
    }
    Ok(m)
}

fn one_based_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    triples(n).map(|(i, j, k)| (i + 1, j + 1, k + 1))
}

fn area_rows(m: &mut FormulationModel, n: usize) {
    use Var::W;
    for (i, j, k) in one_based_triples(n) {
        m.linear.push(LinearRow::new(
            format!("area_{i}_{j}_{k}"),
            vec![
                (1.0, Var::S(i, j, k)),
                (-0.5, W(i, j)),
                (0.5, W(i, k)),
                (0.5, W(j, i)),
                (-0.5, W(j, k)),
                (-0.5, W(k, i)),
                (0.5, W(k, j)),
            ],
            Sense::Eq,
            0.0,
        ));
    }
}

fn product_rows(m: &mut FormulationModel, n: usize) {
    for i in 1..=n {
        for j in 1..=n {
            m.quadratic.push(QuadraticRow {
                name: format!("wdef_{i}_{j}"),
                linear: vec![(1.0, Var::W(i, j))],
                quadratic: vec![(-1.0, Var::X(i), Var::Y(j))],
                sense: Sense::Eq,
                rhs: 0.0,
            });
        }
    }
}

fn big_m_rows(m: &mut FormulationModel, n: usize, bounds: &BoundsH, opts: BuildOptions) {
    let big = bounds.upper + 0.5;
    let lo = bounds.lower;
    for (i, j, k) in one_based_triples(n) {
        let (s, b, h) = (Var::S(i, j, k), Var::B(i, j, k), Var::H);
        m.declare(VarDecl::binary(b));
        m.linear.push(LinearRow::new(
            format!("bm_pos_{i}_{j}_{k}"),
            vec![(1.0, s), (-big, b), (-1.0, h)],
            Sense::Ge,
            -big,
        ));
        m.linear.push(LinearRow::new(
            format!("bm_neg_{i}_{j}_{k}"),
            vec![(big, b), (-1.0, s), (-1.0, h)],
            Sense::Ge,
            0.0,
        ));
        if !opts.drop_strengthening {
            m.linear.push(LinearRow::new(
                format!("st_lo_{i}_{j}_{k}"),
                vec![(1.0, s), (-(0.5 + lo), b)],
                Sense::Ge,
                -0.5,
            ));
            m.linear.push(LinearRow::new(
                format!("st_hi_{i}_{j}_{k}"),
                vec![(1.0, s), (-(0.5 + lo), b)],
                Sense::Le,
                -lo,
            ));
        }
    }
}

/// Binary linearization of `|S_ijk| >= H` with explicit products `w = x y`.
pub fn build_approach1(n: usize, bounds: &BoundsH, enh: &EnhancementSet) -> Result<FormulationModel> {
    build_approach1_with(n, bounds, enh, BuildOptions::default())
}

pub fn build_approach1_with(
    n: usize,
    bounds: &BoundsH,
    enh: &EnhancementSet,
    opts: BuildOptions,
) -> Result<FormulationModel> {
    let mut m = base_model(n, bounds, enh, Approach::BinaryLinearization)?;
    big_m_rows(&mut m, n, bounds, opts);
    area_rows(&mut m, n);
    product_rows(&mut m, n);
    m.attach(enh.constraints()?)?;
    Ok(m)
}

/// Continuous formulation with `U_ijk >= H` and `S_ijk² = U_ijk²`.
pub fn build_approach2(n: usize, bounds: &BoundsH, enh: &EnhancementSet) -> Result<FormulationModel> {
    let mut m = base_model(n, bounds, enh, Approach::Quadratic)?;
    for (i, j, k) in one_based_triples(n) {
        m.declare(VarDecl::continuous(Var::U(i, j, k), bounds.lower, 0.5));
        m.linear.push(LinearRow::new(
            format!("uge_{i}_{j}_{k}"),
            vec![(1.0, Var::U(i, j, k)), (-1.0, Var::H)],
            Sense::Ge,
            0.0,
        ));
    }
    area_rows(&mut m, n);
    product_rows(&mut m, n);
    for (i, j, k) in one_based_triples(n) {
        m.quadratic.push(QuadraticRow {
            name: format!("sq_{i}_{j}_{k}"),
            linear: Vec::new(),
            quadratic: vec![(1.0, Var::S(i, j, k), Var::S(i, j, k)), (-1.0, Var::U(i, j, k), Var::U(i, j, k))],
            sense: Sense::Eq,
            rhs: 0.0,
        });
    }
    m.attach(enh.constraints()?)?;
    Ok(m)
}

/// Approach 1 with `w = x y` replaced by a `bits`-bit dyadic expansion of `x`.
pub fn build_approach3(
    n: usize,
    bounds: &BoundsH,
    bits: usize,
    relaxed: bool,
    enh: &EnhancementSet,
) -> Result<FormulationModel> {
    build_approach3_with(n, bounds, bits, relaxed, enh, BuildOptions::default())
}

pub fn build_approach3_with(
    n: usize,
    bounds: &BoundsH,
    bits: usize,
    relaxed: bool,
    enh: &EnhancementSet,
    opts: BuildOptions,
) -> Result<FormulationModel> {
    if bits == 0 {
        return Err(HeilbronnError::InvalidParameter("discretization needs at least one bit".into()));
    }
    let mut m = base_model(n, bounds, enh, Approach::Discretized { bits, relaxed })?;
    big_m_rows(&mut m, n, bounds, opts);
    area_rows(&mut m, n);
    let tail = 0.5f64.powi(bits as i32);
    let unit = mccormick((0.0, 1.0), (0.0, 1.0))?;
    let rem = mccormick((0.0, tail), (0.0, 1.0))?;
    for i in 1..=n {
        m.declare(VarDecl::continuous(Var::Eps(i), 0.0, tail));
        let mut terms = vec![(1.0, Var::X(i))];
        for p in 1..=bits {
            m.declare(VarDecl::binary(Var::Xi(i, p)));
            terms.push((-(0.5f64.powi(p as i32)), Var::Xi(i, p)));
        }
        terms.push((-1.0, Var::Eps(i)));
        m.linear.push(LinearRow::new(format!("xdef_{i}"), terms, Sense::Eq, 0.0));
    }
    for i in 1..=n {
        for j in 1..=n {
            m.declare(VarDecl::continuous(Var::Omega(i, j), 0.0, tail));
            let mut terms = vec![(1.0, Var::W(i, j))];
            for p in 1..=bits {
                m.declare(VarDecl::continuous(Var::Phi(i, p, j), 0.0, 1.0));
                terms.push((-(0.5f64.powi(p as i32)), Var::Phi(i, p, j)));
            }
            terms.push((-1.0, Var::Omega(i, j)));
            m.linear.push(LinearRow::new(format!("wdisc_{i}_{j}"), terms, Sense::Eq, 0.0));
        }
    }
    for i in 1..=n {
        for p in 1..=bits {
            for j in 1..=n {
                m.linear.extend(unit.rows(
                    Var::Xi(i, p),
                    Var::Y(j),
                    Var::Phi(i, p, j),
                    &format!("mcphi_{i}_{p}_{j}"),
                ));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if relaxed {
                m.linear
                    .extend(rem.rows(Var::Eps(i), Var::Y(j), Var::Omega(i, j), &format!("mcom_{i}_{j}")));
            } else {
                m.quadratic.push(QuadraticRow {
                    name: format!("omdef_{i}_{j}"),
                    linear: vec![(1.0, Var::Omega(i, j))],
                    quadratic: vec![(-1.0, Var::Eps(i), Var::Y(j))],
                    sense: Sense::Eq,
                    rhs: 0.0,
                });
            }
        }
    }
    m.attach(enh.constraints()?)?;
    Ok(m)
}

/// Splits `x` into `bits` binary digits and a remainder in `[0, 2^-bits]`.
pub fn dyadic_digits(x: f64, bits: usize) -> (Vec<u8>, f64) {
    let scale = 2f64.powi(bits as i32);
    let top = (1u64 << bits) - 1;
    let k = ((x * scale).floor() as u64).min(top);
    let digits = (1..=bits).map(|p| ((k >> (bits - p)) & 1) as u8).collect();
    let eps = (x - k as f64 / scale).clamp(0.0, 1.0 / scale);
    (digits, eps)
}

/// Values of the formulation variables (everything except enhancement binaries)
/// induced by a configuration.
pub fn structural_values(meta: &ModelMeta, c: &Configuration) -> HashMap<Var, f64> {
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
    let w = |i: usize, j: usize| pts[i - 1].x * pts[j - 1].y;
    let mut h = f64::INFINITY;
    for (i, j, k) in one_based_triples(n) {
        let s = 0.5 * (w(i, j) - w(i, k) - w(j, i) + w(j, k) + w(k, i) - w(k, j));
        h = h.min(s.abs());
        v.insert(Var::S(i, j, k), s);
        v.insert(Var::B(i, j, k), if s >= 0.0 { 1.0 } else { 0.0 });
        v.insert(Var::U(i, j, k), s.abs());
    }
    v.insert(Var::H, h);
    if let Approach::Discretized { bits, .. } = meta.approach {
        for i in 1..=n {
            let (digits, eps) = dyadic_digits(pts[i - 1].x, bits);
            v.insert(Var::Eps(i), eps);
            for (p, &d) in digits.iter().enumerate() {
                v.insert(Var::Xi(i, p + 1), d as f64);
                for j in 1..=n {
                    v.insert(Var::Phi(i, p + 1, j), d as f64 * pts[j - 1].y);
                }
            }
            for j in 1..=n {
                v.insert(Var::Omega(i, j), eps * pts[j - 1].y);
            }
        }
    }
    v
}
