//! Static SVG overlay of a polygon, its rotation and its polar. Coordinates
//! are rounded only for drawing; exact vertices ride along in `data-` attributes.

use num_traits::ToPrimitive;
use proxflat::plane::{polar2, rot_polygon, PlaneError, Polygon2};
use proxflat::rational::{format_rational, Rational};
use std::fmt::Write;

const SIZE: f64 = 480.0;

fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

fn exact(p: &Polygon2) -> String {
    p.vertices()
        .iter()
        .map(|v| format!("{} {}", format_rational(&v.x), format_rational(&v.y)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn render(p: &Polygon2) -> Result<String, PlaneError> {
    let polar = polar2(p)?;
    let rot = rot_polygon(p);
    let layers = [
        ("P", p, "#1f77b4"),
        ("rot P", &rot, "#2ca02c"),
        ("polar", &polar, "#d62728"),
    ];
    let extent = layers
        .iter()
        .flat_map(|(_, q, _)| q.vertices())
        .map(|v| approx(&v.x).abs().max(approx(&v.y).abs()))
        .fold(1e-9, f64::max);
    let scale = 0.45 * SIZE / extent;
    let half = SIZE / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r##"  <line x1="0" y1="{half}" x2="{SIZE}" y2="{half}" stroke="#ccc"/><line x1="{half}" y1="0" x2="{half}" y2="{SIZE}" stroke="#ccc"/>"##
    );
    for (name, q, colour) in layers {
        let points = q
            .vertices()
            .iter()
            .map(|v| format!("{:.3},{:.3}", half + scale * approx(&v.x), half - scale * approx(&v.y)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            r#"  <polygon data-name="{name}" data-vertices="{}" points="{points}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            exact(q)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proxflat::plane::hexagon;

    #[test]
    fn hexagon_layers_carry_exact_vertices() {
        let svg = render(&hexagon()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert!(svg.contains(r#"data-vertices="-1 -1;0 -1;1 0;1 1;0 1;-1 0""#));
    }
}
