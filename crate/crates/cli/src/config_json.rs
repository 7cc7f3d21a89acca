//! Configuration files: `{"n": int, "points": [{"x", "y"}], "meta": {...}}`.

use std::path::Path;

use heilbronn::geometry::{Configuration, Point};
use serde_json::Value;

/// Formats `v` with 17 significant digits in positional notation.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{:.16e}", v);
    let exp: i32 = sci.split('e').nth(1).unwrap().parse().unwrap();
    let decimals = (16 - exp).max(1) as usize;
    format!("{:.*}", decimals, v)
}

pub fn to_json(c: &Configuration, meta: &Value) -> String {
    let mut s = format!("{{\n  \"n\": {},\n  \"points\": [\n", c.n());
    let pts = c.points();
    for (i, p) in pts.iter().enumerate() {
        let sep = if i + 1 < pts.len() { "," } else { "" };
        s.push_str(&format!("    {{\"x\": {}, \"y\": {}}}{sep}\n", fmt17(p.x), fmt17(p.y)));
    }
    s.push_str(&format!("  ],\n  \"meta\": {}\n}}\n", serde_json::to_string(meta).unwrap()));
    s
}

pub fn write(path: &Path, c: &Configuration, meta: &Value) -> Result<(), String> {
    std::fs::write(path, to_json(c, meta)).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<(Configuration, Value), String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let pts = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or("missing \"points\" array")?;
    let mut points = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let coord = |k: &str| {
            p.get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| format!("point {} lacks a numeric \"{k}\"", i + 1))
        };
        points.push(Point::try_new(coord("x")?, coord("y")?).map_err(|e| format!("point {}: {e}", i + 1))?);
    }
    if let Some(n) = v.get("n") {
        let n = n.as_u64().ok_or("\"n\" must be a non-negative integer")?;
        if n as usize != points.len() {
            return Err(format!("\"n\" is {n} but {} points are given", points.len()));
        }
    }
    let c = Configuration::new(points).map_err(|e| e.to_string())?;
    Ok((c, v.get("meta").cloned().unwrap_or(Value::Null)))
}

pub fn read(path: &Path) -> Result<(Configuration, Value), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1.0, 0.000009489865608419215, 0.5, 1e-300] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt17(0.125), "0.12500000000000000");
        assert_eq!(fmt17(1.0), "1.0000000000000000");
    }

    #[test]
    fn n_must_match() {
        assert!(parse(r#"{"n": 4, "points": [{"x":0,"y":0},{"x":1,"y":0},{"x":0,"y":1}]}"#).is_err());
        assert!(parse(r#"{"points": [{"x":0,"y":0},{"x":1,"y":0},{"x":0,"y":1}]}"#).is_ok());
        assert!(parse(r#"{"n": 0, "points": []}"#).is_err());
    }
}
