//! SVG rendering of a configuration with its smallest triangle filled.

use heilbronn::geometry::{min_triangle_area, triples, Configuration, Point};

const SIZE: f64 = 500.0;
const MARGIN: f64 = 20.0;

fn px(p: Point) -> (f64, f64) {
    (MARGIN + p.x * SIZE, MARGIN + (1.0 - p.y) * SIZE)
}

fn poly(a: Point, b: Point, c: Point) -> String {
    [a, b, c]
        .iter()
        .map(|&p| {
            let (x, y) = px(p);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Returns the document and the highlighted triple (0-based).
pub fn render(c: &Configuration) -> (String, (usize, usize, usize)) {
    let p = c.points();
    let (i, j, k) = min_triangle_area(c).argmin;
    let side = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n"
    ));
    s.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
    ));
    s.push_str("<g fill=\"none\" stroke=\"#b0b0b0\" stroke-width=\"0.5\">\n");
    for (a, b, d) in triples(c.n()) {
        s.push_str(&format!("<polygon points=\"{}\"/>\n", poly(p[a], p[b], p[d])));
    }
    s.push_str("</g>\n");
    s.push_str(&format!(
        "<polygon class=\"smallest\" data-triple=\"{} {} {}\" points=\"{}\" fill=\"#e4572e\" fill-opacity=\"0.6\" stroke=\"#a02c10\" stroke-width=\"1\"/>\n",
        i + 1,
        j + 1,
        k + 1,
        poly(p[i], p[j], p[k])
    ));
    for (idx, &q) in p.iter().enumerate() {
        let (x, y) = px(q);
        s.push_str(&format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"black\"><title>{}</title></circle>\n", idx + 1));
    }
    s.push_str("</svg>\n");
    (s, (i, j, k))
}
