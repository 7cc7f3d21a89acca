use std::fmt;
use std::str::FromStr;

use crate::error::HeilbronnError;

/// A decision variable. Indices are 1-based, matching the printed name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y(usize),
    H,
    /// Signed area of triple `(i, j, k)`.
    S(usize, usize, usize),
    /// Orientation binary of triple `(i, j, k)`.
    B(usize, usize, usize),
    /// Product `x_i * y_j`.
    W(usize, usize),
    /// Absolute area of triple `(i, j, k)`.
    U(usize, usize, usize),
    /// Bit `p` of `x_i`.
    Xi(usize, usize),
    /// Remainder of `x_i` after `P` bits.
    Eps(usize),
    /// Product `xi_ip * y_j`.
    Phi(usize, usize, usize),
    /// Product `eps_i * y_j`.
    Omega(usize, usize),
    /// Point `i` lies on the left edge.
    C1(usize),
    /// Point `i` lies on the right edge.
    C2(usize),
    /// Point `i` is assigned to strip `p`.
    R(usize, usize),
    /// Point `i` is assigned to grid cell `(p, q)`.
    Cell(usize, usize, usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X(i) => write!(f, "x_{i}"),
            Var::Y(i) => write!(f, "y_{i}"),
            Var::H => write!(f, "H"),
            Var::S(i, j, k) => write!(f, "S_{i}_{j}_{k}"),
            Var::B(i, j, k) => write!(f, "b_{i}_{j}_{k}"),
            Var::W(i, j) => write!(f, "w_{i}_{j}"),
            Var::U(i, j, k) => write!(f, "U_{i}_{j}_{k}"),
            Var::Xi(i, p) => write!(f, "xi_{i}_{p}"),
            Var::Eps(i) => write!(f, "eps_{i}"),
            Var::Phi(i, p, j) => write!(f, "phi_{i}_{p}_{j}"),
            Var::Omega(i, j) => write!(f, "omega_{i}_{j}"),
            Var::C1(i) => write!(f, "c1_{i}"),
            Var::C2(i) => write!(f, "c2_{i}"),
            Var::R(p, i) => write!(f, "r_{p}_{i}"),
            Var::Cell(p, q, i) => write!(f, "u_{p}_{q}_{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = HeilbronnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HeilbronnError::LpParse {
            line: 0,
            message: format!("unknown variable name `{s}`"),
        };
        if s == "H" {
            return Ok(Var::H);
        }
        let mut parts = s.split('_');
        let head = parts.next().ok_or_else(bad)?;
        let idx: Vec<usize> = parts
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let v = match (head, idx.as_slice()) {
            ("x", &[i]) => Var::X(i),
            ("y", &[i]) => Var::Y(i),
            ("S", &[i, j, k]) => Var::S(i, j, k),
            ("b", &[i, j, k]) => Var::B(i, j, k),
            ("w", &[i, j]) => Var::W(i, j),
            ("U", &[i, j, k]) => Var::U(i, j, k),
            ("xi", &[i, p]) => Var::Xi(i, p),
            ("eps", &[i]) => Var::Eps(i),
            ("phi", &[i, p, j]) => Var::Phi(i, p, j),
            ("omega", &[i, j]) => Var::Omega(i, j),
            ("c1", &[i]) => Var::C1(i),
            ("c2", &[i]) => Var::C2(i),
            ("r", &[p, i]) => Var::R(p, i),
            ("u", &[p, q, i]) => Var::Cell(p, q, i),
            _ => return Err(bad()),
        };
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

/// A declared variable with its bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub var: Var,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

impl VarDecl {
    pub fn continuous(var: Var, lower: f64, upper: f64) -> Self {
        VarDecl {
            var,
            kind: VarKind::Continuous,
            lower,
            upper,
        }
    }

    pub fn binary(var: Var) -> Self {
        VarDecl {
            var,
            kind: VarKind::Binary,
            lower: 0.0,
            upper: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let all = [
            Var::X(1),
            Var::Y(10),
            Var::H,
            Var::S(1, 2, 3),
            Var::B(2, 5, 9),
            Var::W(3, 3),
            Var::U(1, 4, 6),
            Var::Xi(2, 10),
            Var::Eps(4),
            Var::Phi(1, 3, 2),
            Var::Omega(5, 1),
            Var::C1(7),
            Var::C2(8),
            Var::R(4, 2),
            Var::Cell(18, 3, 9),
        ];
        for v in all {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        assert_eq!(Var::Cell(1, 2, 3).to_string(), "u_1_2_3");
        assert!("z_1".parse::<Var>().is_err());
        assert!("x_1_2".parse::<Var>().is_err());
    }
}
