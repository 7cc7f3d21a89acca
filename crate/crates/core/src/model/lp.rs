//! CPLEX-style LP text output and a strict reader for exactly that output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::constraint::{LinearRow, QuadraticRow, Sense};
use super::var::{Var, VarDecl, VarKind};
use super::{Approach, FormulationModel, ModelMeta};
use crate::error::{HeilbronnError, Result};

/// Terms per output line; keeps lines well under the 510-character limit of LP readers.
const TERMS_PER_LINE: usize = 6;

fn num(v: f64) -> String {
    // `+ 0.0` folds negative zero
    format!("{:.16e}", v + 0.0)
}

fn push_term(out: &mut String, count: &mut usize, term: &str) {
    if *count > 0 && *count % TERMS_PER_LINE == 0 {
        out.push_str("\n   ");
    }
    out.push(' ');
    out.push_str(term);
    *count += 1;
}

fn linear_term(c: f64, v: Var) -> String {
    let sign = if c < 0.0 { '-' } else { '+' };
    if c.abs() == 1.0 {
        format!("{sign} {v}")
    } else {
        format!("{sign} {} {v}", num(c.abs()))
    }
}

fn quad_term(c: f64, a: Var, b: Var) -> String {
    let sign = if c < 0.0 { '-' } else { '+' };
    if a == b {
        format!("{sign} {} {a} ^ 2", num(c.abs()))
    } else {
        format!("{sign} {} {a} * {b}", num(c.abs()))
    }
}

fn header(meta: &ModelMeta) -> String {
    let (bits, relaxed) = match meta.approach {
        Approach::Discretized { bits, relaxed } => (bits, relaxed as u8),
        _ => (0, 0),
    };
    format!(
        "\\ heilbronn n={} approach={} bits={} relaxed={} mask={} certifying={}\n",
        meta.n,
        meta.approach.number(),
        bits,
        relaxed,
        meta.enhancement_mask,
        meta.certifying as u8
    )
}

/// Renders the model. Output is a pure function of the model.
pub fn write_lp(model: &FormulationModel) -> String {
    let mut out = header(&model.meta);
    let _ = writeln!(out, "Maximize\n obj: {}", model.objective);
    out.push_str("Subject To\n");
    for r in &model.linear {
        let _ = write!(out, " {}:", r.name);
        let mut count = 0;
        for &(c, v) in &r.terms {
            push_term(&mut out, &mut count, &linear_term(c, v));
        }
        let _ = writeln!(out, " {} {}", r.sense, num(r.rhs));
    }
    for r in &model.quadratic {
        let _ = write!(out, " {}:", r.name);
        let mut count = 0;
        for &(c, v) in &r.linear {
            push_term(&mut out, &mut count, &linear_term(c, v));
        }
        out.push_str(" + [");
        for &(c, a, b) in &r.quadratic {
            push_term(&mut out, &mut count, &quad_term(c, a, b));
        }
        let _ = writeln!(out, " ] {} {}", r.sense, num(r.rhs));
    }
    out.push_str("Bounds\n");
    for d in model.variables() {
        if d.kind == VarKind::Binary && d.lower == 0.0 && d.upper == 1.0 {
            continue;
        }
        if d.lower == d.upper {
            let _ = writeln!(out, " {} = {}", d.var, num(d.lower));
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", num(d.lower), d.var, num(d.upper));
        }
    }
    out.push_str("Binaries\n");
    for d in model.variables().filter(|d| d.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", d.var);
    }
    out.push_str("End\n");
    out
}

/// `heilbronn_n{n}_a{approach}[_enh{mask}].lp`
pub fn file_name(meta: &ModelMeta) -> String {
    if meta.enhancement_mask == 0 {
        format!("heilbronn_n{}_a{}.lp", meta.n, meta.approach.number())
    } else {
        format!("heilbronn_n{}_a{}_enh{}.lp", meta.n, meta.approach.number(), meta.enhancement_mask)
    }
}

/// Writes the model into `dir` under [`file_name`] and returns the path.
pub fn export(model: &FormulationModel, dir: &Path) -> std::io::Result<PathBuf> {
    let path = dir.join(file_name(&model.meta));
    std::fs::write(&path, write_lp(model))?;
    Ok(path)
}

struct Reader<'a> {
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

fn err(line: usize, message: impl Into<String>) -> HeilbronnError {
    HeilbronnError::LpParse {
        line,
        message: message.into(),
    }
}

impl<'a> Reader<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn line(&self) -> usize {
        self.tokens.get(self.pos).or(self.tokens.last()).map_or(0, |t| t.0)
    }

    fn next(&mut self) -> Result<&'a str> {
        let t = self.peek().ok_or_else(|| err(self.line(), "unexpected end of file"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        let line = self.line();
        let got = self.next()?;
        if got != want {
            return Err(err(line, format!("expected `{want}`, found `{got}`")));
        }
        Ok(())
    }

    fn number(&mut self) -> Result<f64> {
        let line = self.line();
        let t = self.next()?;
        t.parse().map_err(|_| err(line, format!("bad number `{t}`")))
    }

    fn var(&mut self) -> Result<Var> {
        let line = self.line();
        let t = self.next()?;
        t.parse().map_err(|_| err(line, format!("bad variable `{t}`")))
    }

    fn sense(&mut self) -> Result<Sense> {
        let line = self.line();
        match self.next()? {
            "<=" => Ok(Sense::Le),
            ">=" => Ok(Sense::Ge),
            "=" => Ok(Sense::Eq),
            t => Err(err(line, format!("bad sense `{t}`"))),
        }
    }

    /// Reads `sign [coef] var`, the coefficient defaulting to one.
    fn linear_term(&mut self) -> Result<(f64, Var)> {
        let line = self.line();
        let sign = match self.next()? {
            "+" => 1.0,
            "-" => -1.0,
            t => return Err(err(line, format!("expected sign, found `{t}`"))),
        };
        let t = self.peek().ok_or_else(|| err(line, "truncated term"))?;
        if t.parse::<f64>().is_ok() {
            let c = self.number()?;
            Ok((sign * c, self.var()?))
        } else {
            Ok((sign, self.var()?))
        }
    }

    fn quad_term(&mut self) -> Result<(f64, Var, Var)> {
        let line = self.line();
        let sign = match self.next()? {
            "+" => 1.0,
            "-" => -1.0,
            t => return Err(err(line, format!("expected sign, found `{t}`"))),
        };
        let c = sign * self.number()?;
        let a = self.var()?;
        match self.next()? {
            "^" => {
                self.expect("2")?;
                Ok((c, a, a))
            }
            "*" => Ok((c, a, self.var()?)),
            t => Err(err(line, format!("expected `*` or `^`, found `{t}`"))),
        }
    }
}

fn parse_header(line: &str) -> Result<ModelMeta> {
    let field = |key: &str| -> Result<usize> {
        line.split_whitespace()
            .find_map(|t| t.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err(1, format!("header misses `{key}`")))
    };
    let n = field("n")?;
    let approach = match field("approach")? {
        1 => Approach::BinaryLinearization,
        2 => Approach::Quadratic,
        3 => Approach::Discretized {
            bits: field("bits")?,
            relaxed: field("relaxed")? == 1,
        },
        a => return Err(err(1, format!("unknown approach {a}"))),
    };
    Ok(ModelMeta {
        n,
        approach,
        enhancement_mask: field("mask")? as u8,
        certifying: field("certifying")? == 1,
    })
}

/// Parses text produced by [`write_lp`]. Anything else is rejected.
pub fn read_lp(text: &str) -> Result<FormulationModel> {
    let first = text.lines().next().unwrap_or("");
    if !first.starts_with("\\ heilbronn") {
        return Err(err(1, "missing model header"));
    }
    let meta = parse_header(first)?;
    let tokens = text
        .lines()
        .enumerate()
        .skip(1)
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
        .collect();
    let mut rd = Reader { tokens, pos: 0 };
    rd.expect("Maximize")?;
    rd.expect("obj:")?;
    if rd.var()? != Var::H {
        return Err(err(rd.line(), "objective must be H"));
    }
    rd.expect("Subject")?;
    rd.expect("To")?;
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    while rd.peek() != Some("Bounds") {
        let line = rd.line();
        let name = rd
            .next()?
            .strip_suffix(':')
            .ok_or_else(|| err(line, "row name must end in `:`"))?
            .to_string();
        let mut terms = Vec::new();
        let mut quad = None;
        loop {
            match rd.peek() {
                Some("<=") | Some(">=") | Some("=") => break,
                Some("+") if rd.tokens.get(rd.pos + 1).map(|t| t.1) == Some("[") => {
                    rd.pos += 2;
                    let mut q = Vec::new();
                    while rd.peek() != Some("]") {
                        q.push(rd.quad_term()?);
                    }
                    rd.pos += 1;
                    quad = Some(q);
                }
                _ => terms.push(rd.linear_term()?),
            }
        }
        let sense = rd.sense()?;
        let rhs = rd.number()?;
        match quad {
            Some(q) => quadratic.push(QuadraticRow {
                name,
                linear: terms,
                quadratic: q,
                sense,
                rhs,
            }),
            None => linear.push(LinearRow {
                name,
                terms,
                sense,
                rhs,
            }),
        }
    }
    rd.expect("Bounds")?;
    let mut bounded = Vec::new();
    while rd.peek() != Some("Binaries") {
        let line = rd.line();
        let t = rd.peek().ok_or_else(|| err(line, "truncated bounds"))?;
        if t.parse::<f64>().is_ok() {
            let lo = rd.number()?;
            rd.expect("<=")?;
            let v = rd.var()?;
            rd.expect("<=")?;
            let hi = rd.number()?;
            bounded.push((v, lo, hi));
        } else {
            let v = rd.var()?;
            rd.expect("=")?;
            let x = rd.number()?;
            bounded.push((v, x, x));
        }
    }
    rd.expect("Binaries")?;
    let mut binaries = Vec::new();
    while rd.peek() != Some("End") {
        binaries.push(rd.var()?);
    }
    rd.expect("End")?;
    if rd.peek().is_some() {
        return Err(err(rd.line(), "content after End"));
    }
    let mut decls: Vec<VarDecl> = Vec::new();
    for &(v, lo, hi) in &bounded {
        let kind = if binaries.contains(&v) {
            VarKind::Binary
        } else {
            VarKind::Continuous
        };
        decls.push(VarDecl {
            var: v,
            kind,
            lower: lo,
            upper: hi,
        });
    }
    for &b in &binaries {
        if !bounded.iter().any(|t| t.0 == b) {
            decls.push(VarDecl::binary(b));
        }
    }
    FormulationModel::from_parts(meta, decls, linear, quadratic)
}
